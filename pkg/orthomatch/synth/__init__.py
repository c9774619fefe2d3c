"""
Synthetic data: rotated image pairs with exact homographies, textured
plane and road scenes, and the corpora built from them.
"""

from orthomatch.synth import textures, pairs, scenes, corpus, rigs
from .textures import *
from .pairs import *
from .scenes import *
from .corpus import *
from .rigs import *

__all__ = list(textures.__all__)
__all__ += pairs.__all__
__all__ += scenes.__all__
__all__ += corpus.__all__
__all__ += rigs.__all__
