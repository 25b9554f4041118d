import sys

from texo.cli import main

sys.exit(main())
