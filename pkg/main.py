#!/usr/bin/env python3
"""
tateforge entry point.

Usage:
    python main.py margolis --space y2 --q 1 --max-degree 32
    python main.py tate-e3 --n 1 --cols -6..6 --max-degree 24 --format tsv
    python main.py tower --side tp --n 2 --q 1 --i-range 0..5
"""
import sys

from dotenv import load_dotenv

load_dotenv()

from tateforge.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
