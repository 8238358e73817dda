import sys

from arborloose.cli import main

sys.exit(main())
