import sys

from concbounds.cli import main

sys.exit(main())
