"""
Mutual nearest neighbour matching, correspondence ensemble and RANSAC.
"""

from orthomatch.matching import match_set, mnn, combination, ransac
from .match_set import *
from .mnn import *
from .combination import *
from .ransac import *

__all__ = list(match_set.__all__)
__all__ += mnn.__all__
__all__ += combination.__all__
__all__ += ransac.__all__
