import sys

from qwgo.experiments.cli import main

sys.exit(main())
