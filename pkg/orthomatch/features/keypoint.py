"""Module defining Keypoint and DescriptorSet."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
from collections import namedtuple
import numpy

# local imports
from orthomatch.errors import InvariantError

__all__ = ['Keypoint', 'DescriptorSet', 'check_bounds', 'HEADS',
           'NORM_TOLERANCE']

HEADS = ('vanilla', 'robust', 'external')
NORM_TOLERANCE = 1e-6
TWO_PI = 2.0 * numpy.pi


class Keypoint(namedtuple('Keypoint', 'x y score orientation')):
    """
    Detected image location.

    Attributes
    ----------
    x, y : float
        Subpixel coordinates (x right, y down).
    score : float
        Detection strength, >= 0.
    orientation : float
        Radians in [0, 2 pi); 0 for unoriented keypoints.

    """

    __slots__ = ()

    def __new__(cls, x, y, score=0.0, orientation=0.0):
        values = [float(x), float(y), float(score), float(orientation)]
        if not all(numpy.isfinite(values)):
            raise InvariantError('Keypoint has non-finite values: {}.'
                                 .format(values))
        if values[0] < 0 or values[1] < 0:
            raise InvariantError('Keypoint ({}, {}) lies outside the image.'
                                 .format(values[0], values[1]))
        if values[2] < 0:
            raise InvariantError('Keypoint score must be >= 0.')
        if not 0 <= values[3] < TWO_PI:
            raise InvariantError('Orientation {} not in [0, 2 pi).'
                                 .format(values[3]))
        return super(Keypoint, cls).__new__(cls, *values)

    def inside(self, width, height):
        return self.x <= width - 1 and self.y <= height - 1


def check_bounds(keypoints, width, height, source=''):
    """
    Require every keypoint to lie in [0, width-1] x [0, height-1].

    Keypoint itself only knows the lower bound; the upper bound needs the
    image size and is enforced here by the detector, the descriptor heads
    and the exchange loader when an image size is given.

    Raises
    ------
    InvariantError
        Naming the first keypoint outside the image.

    """
    for index, keypoint in enumerate(keypoints):
        if not keypoint.inside(width, height):
            raise InvariantError(
                '{}keypoint {} ({:.2f}, {:.2f}) lies outside the {}x{} '
                'image.'.format(source + ': ' if source else '', index,
                                keypoint.x, keypoint.y, width, height))


class DescriptorSet(object):
    """
    Keypoints with one unit-norm descriptor each.

    Attributes
    ----------
    keypoints : tuple of Keypoint
        Keypoints, aligned with the rows of vectors.
    vectors : numpy.ndarray
        (N, D) read-only descriptors.
    head : str
        One of 'vanilla', 'robust' or 'external'.
    name : str
        Identifier of the described image, used by match sets.
    points : numpy.ndarray
        (N, 2) keypoint coordinates.
    max_norm_deviation : float
        Largest |norm - 1| met before renormalization (0 for built-in
        heads).

    """

    def __init__(self, keypoints, vectors, head, name='', dimension=None,
                 max_norm_deviation=0.0):
        """
        Constructor.

        Parameters
        ----------
        keypoints : iterable of Keypoint
            Keypoints.
        vectors : array-like
            (N, D) descriptors, L2-normalized within 1e-6.
        head : str
            Descriptor head tag.
        name : str, optional
            Image identifier.
        dimension : int, optional
            Descriptor dimension, required when the set is empty.

        Raises
        ------
        InvariantError
            On count mismatch, unknown head or non-normalized vectors.

        """
        if head not in HEADS:
            raise InvariantError('Unknown descriptor head {}.'.format(head))
        self.keypoints = tuple(keypoints)
        vectors = numpy.array(vectors, dtype=float)
        if vectors.size == 0:
            vectors = numpy.zeros((0, dimension or 0))
        if vectors.ndim != 2 or vectors.shape[0] != len(self.keypoints):
            raise InvariantError('{} keypoints but descriptor array of shape '
                                 '{}.'.format(len(self.keypoints),
                                              vectors.shape))
        if dimension is not None and vectors.shape[1] != dimension:
            raise InvariantError('Expected dimension {}, got {}.'
                                 .format(dimension, vectors.shape[1]))
        norms = numpy.linalg.norm(vectors, axis=1)
        if (not numpy.all(numpy.isfinite(vectors))
                or numpy.any(numpy.abs(norms - 1.0) > NORM_TOLERANCE)):
            raise InvariantError('Descriptors must be L2-normalized.')
        vectors.setflags(write=False)
        self.vectors = vectors
        self.head = head
        self.name = name
        self.max_norm_deviation = float(max_norm_deviation)
        self.points = numpy.array([[k.x, k.y] for k in self.keypoints],
                                  dtype=float).reshape(-1, 2)
        self.points.setflags(write=False)

    def __len__(self):
        return len(self.keypoints)

    def __repr__(self):
        return 'DescriptorSet({!r}, head={}, n={}, dim={})'.format(
            self.name, self.head, len(self), self.dimension)

    @property
    def dimension(self):
        return self.vectors.shape[1]
