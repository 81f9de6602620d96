"""
Grundy Toolkit - 森の毛虫分割と強積のGrundy支配数を扱うツールキット
"""

__version__ = "0.1.0"
