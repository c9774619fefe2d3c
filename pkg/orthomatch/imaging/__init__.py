"""
Raster images, depth maps, warping and PNG files.
"""

from orthomatch.imaging import image, depth, warping, io
from .image import *
from .depth import *
from .warping import *
from .io import *

__all__ = list(image.__all__)
__all__ += depth.__all__
__all__ += warping.__all__
__all__ += io.__all__
