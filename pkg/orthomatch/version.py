"""Package version, recorded in corpus manifests and reports."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

__version__ = '0.1.0'
