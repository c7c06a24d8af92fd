import sys

from charflow.cli import main

sys.exit(main())
