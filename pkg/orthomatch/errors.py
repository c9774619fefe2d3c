"""Exceptions raised by orthomatch.

Every error derives from UserWarning so that scripts can report any failure
with a single ``except UserWarning`` clause and a readable message.
"""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

__all__ = [
    'OrthomatchError', 'GeometryError', 'DegenerateHomography',
    'DegenerateConfiguration', 'InsufficientPoints', 'PointAtInfinity',
    'AntiparallelSingularity', 'InvariantError', 'ImagingError', 'EmptyROI',
    'PatchOutOfBounds', 'ImageFormatError', 'FormatError', 'MatchingError',
    'DimensionMismatch', 'InsufficientMatches', 'NoModelFound',
    'DegenerateSample', 'DegeneratePoints', 'ConfigOutOfRange',
    'EmptyInputDir', 'ManifestError', 'ReportError', 'ConfigurationError',
    'PipelineError'
]


class OrthomatchError(UserWarning):
    """Base class of all orthomatch errors."""


class GeometryError(OrthomatchError):
    """Invalid projective or euclidean geometry."""


class DegenerateHomography(GeometryError):
    """Homography is singular."""


class DegenerateConfiguration(GeometryError):
    """Point configuration does not determine a homography."""


class InsufficientPoints(GeometryError):
    """Fewer points than the estimator needs."""


class PointAtInfinity(GeometryError):
    """Projective division by (almost) zero."""


class AntiparallelSingularity(GeometryError):
    """Vectors are antiparallel; the alignment axis is undefined."""


class InvariantError(OrthomatchError):
    """A value violates the invariants of its type."""


class ImagingError(OrthomatchError):
    """Raster related failure."""


class EmptyROI(ImagingError):
    """Region of interest holds no valid pixel."""


class PatchOutOfBounds(ImagingError):
    """Sampling window leaves the image."""


class ImageFormatError(ImagingError):
    """Image file cannot be read or has unexpected layout."""


class FormatError(OrthomatchError):
    """Serialized data does not follow its format."""


class MatchingError(OrthomatchError):
    """Matching or robust estimation failure."""


class DimensionMismatch(MatchingError):
    """Descriptor sets have different dimensions."""


class InsufficientMatches(MatchingError):
    """Fewer matches than the minimal sample."""


class NoModelFound(MatchingError):
    """RANSAC found no model with enough support."""


class DegenerateSample(MatchingError):
    """Minimal sample does not determine a model."""


class DegeneratePoints(OrthomatchError):
    """Point cloud does not determine a plane."""


class ConfigOutOfRange(OrthomatchError):
    """Synthetic data parameter outside its safe range."""


class EmptyInputDir(OrthomatchError):
    """Input directory holds no readable image."""


class ManifestError(OrthomatchError):
    """
    Manifest violates its schema.

    Attributes
    ----------
    violations : list of str
        Every violation found, one message each.

    """

    def __init__(self, message, violations=None):
        self.violations = list(violations or [])
        if self.violations:
            message = '{}\n  {}'.format(message, '\n  '.join(self.violations))
        super(ManifestError, self).__init__(message)


class ReportError(OrthomatchError):
    """Evaluation report is not self-consistent."""


class ConfigurationError(OrthomatchError):
    """Configuration is invalid or does not fit the input."""


class PipelineError(OrthomatchError):
    """
    Runtime failure of a pipeline stage.

    Attributes
    ----------
    stage : str
        Name of the failing stage.
    entry : str or None
        Identifier of the processed entry.

    """

    def __init__(self, stage, entry, cause):
        self.stage = stage
        self.entry = entry
        self.cause = cause
        super(PipelineError, self).__init__(
            'entry {}: stage {} failed: {}'.format(entry, stage, cause)
        )
