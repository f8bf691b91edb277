import sys

from szego.cli import main

sys.exit(main())
