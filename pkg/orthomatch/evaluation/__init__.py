"""Matching accuracy, relative pose and place recognition evaluation."""

from orthomatch.evaluation import metrics, report, protocols
from .metrics import *
from .report import *
from .protocols import *

__all__ = list(metrics.__all__)
__all__ += report.__all__
__all__ += protocols.__all__
