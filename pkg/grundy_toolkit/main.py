#!/usr/bin/env python3
"""
Grundy Toolkit - メインスクリプト
"""

import sys
from typing import Optional, Sequence

from grundy_toolkit.cli.cli import run


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    メインエントリーポイント
    """
    return run(argv)


if __name__ == "__main__":
    # Pythonバージョンチェック
    if sys.version_info < (3, 9):
        print("Error: Python 3.9 or higher is required")
        sys.exit(1)

    sys.exit(main())
