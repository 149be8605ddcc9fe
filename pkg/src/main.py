#!/usr/bin/env python3
"""
Main entry point
"""
import sys

from .cli import run


def main():
    """Run the command line tool"""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
