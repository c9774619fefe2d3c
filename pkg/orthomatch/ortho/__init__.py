"""
Orthographic view generation from depth and plane fits, or from IPM
annotations.
"""

from orthomatch.ortho import roi, plane_fit, ortho_view
from .roi import *
from .plane_fit import *
from .ortho_view import *

__all__ = list(roi.__all__)
__all__ += plane_fit.__all__
__all__ += ortho_view.__all__
