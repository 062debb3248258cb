#!/usr/bin/env python3
"""Launcher: `python main.py verify --suite all`."""
import sys

from app.main import main

if __name__ == "__main__":
    sys.exit(main())
