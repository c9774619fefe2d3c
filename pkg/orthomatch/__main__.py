"""Run the command line interface with ``python -m orthomatch``."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

import sys

from orthomatch.cli import main

sys.exit(main())
