"""
orthomatch package
==================

Rotation-robust local feature matching with orthographic view generation,
synthetic benchmark data and evaluation protocols.
"""

from .version import __version__
from .errors import *
from .core import *
from .imaging import *
from .features import *
from .matching import *
from .ortho import *
from .synth import *
from .evaluation import *
from .config import *
from .pipeline import *

from . import (
    errors, core, imaging, features, matching, ortho, synth, evaluation,
    config, pipeline
)

__all__ = ['__version__']
__all__ += errors.__all__
__all__ += core.__all__
__all__ += imaging.__all__
__all__ += features.__all__
__all__ += matching.__all__
__all__ += ortho.__all__
__all__ += synth.__all__
__all__ += evaluation.__all__
__all__ += config.__all__
__all__ += pipeline.__all__
