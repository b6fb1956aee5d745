#!/usr/bin/env python3
"""
SectOR simulator entry point.

Usage:
    python -m src <link|route|topo-gen|sweep> [options]
    python -m src sweep --help
"""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
