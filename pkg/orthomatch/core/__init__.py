"""
Exact 3x3 geometry: intrinsics, rotations, planes, poses and homographies.
"""

from orthomatch.core import rotation, camera, homography, dlt, serialization
from .rotation import *
from .camera import *
from .homography import *
from .dlt import *
from .serialization import *

__all__ = list(rotation.__all__)
__all__ += camera.__all__
__all__ += homography.__all__
__all__ += dlt.__all__
__all__ += serialization.__all__
