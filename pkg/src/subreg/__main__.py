"""Entry point for `python -m subreg`."""

from subreg.cli import main

if __name__ == "__main__":
    main()
