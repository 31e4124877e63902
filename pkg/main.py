"""Command-line entry point."""
import sys

from macrocause.cli import main

if __name__ == "__main__":
    sys.exit(main())
