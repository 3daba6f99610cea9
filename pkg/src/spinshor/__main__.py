import sys

from spinshor.cli import main

sys.exit(main())
