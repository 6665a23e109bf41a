import sys

from abclll.cli import main

sys.exit(main())
