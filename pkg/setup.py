#!/usr/bin/env python3
"""
Grundy Toolkit setup script
"""

from setuptools import setup

if __name__ == "__main__":
    setup()
