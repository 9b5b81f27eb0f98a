import sys

from hoopkit.cli import main

sys.exit(main())
