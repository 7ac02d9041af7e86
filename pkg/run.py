#!/usr/bin/env python3
"""
historylab HTTP 서버 진입점. `historylab serve` 와 같다.
"""
import sys

from app.cli import main

if __name__ == "__main__":
    sys.exit(main(["serve", *sys.argv[1:]]))
