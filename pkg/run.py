#!/usr/bin/env python3
"""
NLPC - Command Runner
"""
import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
