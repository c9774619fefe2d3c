"""
Keypoint detection, descriptor heads and the descriptor exchange format.
"""

from orthomatch.features import (
    keypoint, harris, orientation, descriptors, exchange
)
from .keypoint import *
from .harris import *
from .orientation import *
from .descriptors import *
from .exchange import *

__all__ = list(keypoint.__all__)
__all__ += harris.__all__
__all__ += orientation.__all__
__all__ += descriptors.__all__
__all__ += exchange.__all__
