"""Pipeline configuration and dataset manifest schemas."""

from orthomatch.config import pipeline_config, manifest
from .pipeline_config import *
from .manifest import *

__all__ = list(pipeline_config.__all__)
__all__ += manifest.__all__
