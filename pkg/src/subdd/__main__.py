#!/usr/bin/env python3

"""Entry point for subdd package when run as module."""

from .cli import main

if __name__ == "__main__":
    main()
