"""
Built-in patch descriptors.

Both heads sample a 16x16 patch at unit scale around each keypoint from
the Gaussian-smoothed image, normalize bias and gain, average 2x2 blocks
to 64 values, zero-pad to the descriptor dimension and L2-normalize. The
vanilla head samples an axis-aligned grid and is therefore rotation
sensitive. The robust head samples the grid rotated by the keypoint's
dominant orientation.
"""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import logging
import numpy
from scipy import ndimage

# local imports
from orthomatch.errors import InvariantError, PatchOutOfBounds
from orthomatch.features.keypoint import (
    DescriptorSet, Keypoint, check_bounds
)
from orthomatch.features.orientation import orientation_from_gradients
from orthomatch.imaging.image import array_gradients
from orthomatch.imaging.warping import sample_bilinear

__all__ = ['describe_vanilla', 'describe_robust', 'describe', 'smooth',
           'PATCH_SIZE', 'DEFAULT_DIMENSION']

logger = logging.getLogger(__name__)

PATCH_SIZE = 16
POOLED_SIZE = 8
DEFAULT_DIMENSION = 128
STD_FLOOR = 1e-6

# patch sample offsets -7.5 .. 7.5 around the keypoint
_OFFSETS = numpy.arange(PATCH_SIZE) - (PATCH_SIZE - 1) / 2.0
_GRID_U, _GRID_V = numpy.meshgrid(_OFFSETS, _OFFSETS)


def smooth(image, sigma=1.0):
    """Gaussian-smoothed copy of a 1-channel image as a float array."""
    if image.channels != 1:
        raise InvariantError('Descriptors need a 1-channel image.')
    if sigma <= 0:
        return numpy.array(image.data)
    return ndimage.gaussian_filter(image.data, sigma)


def _patch(array, keypoint, angle):
    c, s = numpy.cos(angle), numpy.sin(angle)
    xs = keypoint.x + c * _GRID_U - s * _GRID_V
    ys = keypoint.y + s * _GRID_U + c * _GRID_V
    values, valid = sample_bilinear(array, xs, ys)
    if not valid.all():
        return None
    return values


def _vector(patch, dimension):
    centred = patch - patch.mean()
    normalized = centred / max(centred.std(), STD_FLOOR)
    pooled = normalized.reshape(POOLED_SIZE, 2, POOLED_SIZE, 2).mean(axis=(1, 3))
    vector = numpy.zeros(dimension)
    vector[:pooled.size] = pooled.ravel()
    norm = numpy.linalg.norm(vector)
    if norm < 1e-12:
        return None
    return vector / norm


def _describe(smoothed, keypoints, head, dimension, angles, name):
    kept, vectors = [], []
    for keypoint, angle in zip(keypoints, angles):
        if angle is None:
            continue
        patch = _patch(smoothed, keypoint, angle)
        if patch is None:
            continue
        vector = _vector(patch, dimension)
        if vector is None:
            continue
        kept.append(Keypoint(keypoint.x, keypoint.y, keypoint.score, angle))
        vectors.append(vector)
    dropped = len(keypoints) - len(kept)
    if dropped:
        logger.debug('%s head dropped %d of %d keypoints (border or flat '
                     'patch).', head, dropped, len(keypoints))
    return DescriptorSet(kept, vectors, head, name, dimension)


def describe_vanilla(image, keypoints, dimension=DEFAULT_DIMENSION,
                     sigma=1.0, name=''):
    """
    Rotation-sensitive descriptors on an axis-aligned grid.

    Parameters
    ----------
    image : orthomatch.imaging.Image
        1-channel image.
    keypoints : list of Keypoint
        Keypoints to describe.
    dimension : int
        Descriptor length (>= 64).
    sigma : float
        Gaussian smoothing applied before sampling.
    name : str
        Image identifier stored in the set.

    Returns
    -------
    DescriptorSet
        Vanilla descriptors; keypoints whose patch leaves the image or is
        flat are dropped. Orientations are set to 0.

    Raises
    ------
    InvariantError
        When a keypoint lies outside the image.

    """
    _check_dimension(dimension)
    check_bounds(keypoints, image.width, image.height, name)
    smoothed = smooth(image, sigma)
    return _describe(smoothed, keypoints, 'vanilla', dimension,
                     [0.0] * len(keypoints), name)


def describe_robust(image, keypoints, dimension=DEFAULT_DIMENSION,
                    sigma=1.0, radius=8, name=''):
    """
    Orientation-normalized descriptors.

    Same as :func:`describe_vanilla` except that each patch grid is
    rotated by the dominant gradient orientation estimated with a disk of
    the given radius on the smoothed image. Keypoints too close to the
    border for the orientation disk are dropped.

    """
    _check_dimension(dimension)
    check_bounds(keypoints, image.width, image.height, name)
    smoothed = smooth(image, sigma)
    gx, gy = array_gradients(smoothed)
    angles = []
    for keypoint in keypoints:
        try:
            angles.append(orientation_from_gradients(gx, gy, keypoint.x,
                                                     keypoint.y, radius))
        except PatchOutOfBounds:
            angles.append(None)
    return _describe(smoothed, keypoints, 'robust', dimension, angles, name)


def describe(image, keypoints, head, dimension=DEFAULT_DIMENSION, sigma=1.0,
             radius=8, name=''):
    """Dispatch to the descriptor head named by head."""
    if head == 'vanilla':
        return describe_vanilla(image, keypoints, dimension, sigma, name)
    if head == 'robust':
        return describe_robust(image, keypoints, dimension, sigma, radius,
                               name)
    raise InvariantError('Unknown built-in head {}.'.format(head))


def _check_dimension(dimension):
    if dimension < POOLED_SIZE ** 2:
        raise InvariantError('Descriptor dimension must be >= {}.'
                             .format(POOLED_SIZE ** 2))
