import sys

from polycell.pipeline.cli import main

sys.exit(main())
