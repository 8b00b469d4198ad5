"""Allow running the package directly with `python -m qcompletion`."""

import sys

from qcompletion.app import main

if __name__ == "__main__":
    sys.exit(main())
