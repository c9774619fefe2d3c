"""Module defining camera, plane and pose value types."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
from collections import namedtuple
import numpy

# local imports
from orthomatch.errors import InvariantError
from orthomatch.core.rotation import check_rotation

__all__ = ['Intrinsics', 'Plane', 'Pose', 'unit_vector']


def unit_vector(vector, tolerance=None):
    """
    Return vector as a unit 3-vector.

    Parameters
    ----------
    vector : array-like
        Vector with 3 components.
    tolerance : float, optional
        If given, the input must already have unit norm within this
        tolerance. Otherwise the vector is normalized.

    Returns
    -------
    numpy.ndarray
        Read-only unit vector.

    Raises
    ------
    InvariantError
        When the vector is not 3D, is (almost) zero, or is not unit
        within tolerance.

    """
    result = numpy.array(vector, dtype=float).reshape(-1)
    if result.shape != (3,) or not numpy.all(numpy.isfinite(result)):
        raise InvariantError('Expected a finite 3-vector, got {}.'
                             .format(vector))
    norm = numpy.linalg.norm(result)
    if tolerance is not None:
        if abs(norm - 1.0) > tolerance:
            raise InvariantError('Vector {} is not unit (norm {}).'
                                 .format(vector, norm))
    elif norm < 1e-12:
        raise InvariantError('Cannot normalize zero vector.')
    result = result / norm
    result.setflags(write=False)
    return result


class Intrinsics(namedtuple('Intrinsics', 'fx fy cx cy')):
    """
    Pinhole intrinsics, all values in pixels.

    Attributes
    ----------
    fx, fy : float
        Focal lengths (> 0).
    cx, cy : float
        Principal point.

    """

    __slots__ = ()

    def __new__(cls, fx, fy, cx, cy):
        fx, fy, cx, cy = float(fx), float(fy), float(cx), float(cy)
        if not (fx > 0 and fy > 0):
            raise InvariantError('Focal lengths must be positive, got '
                                 '({}, {}).'.format(fx, fy))
        if not (numpy.isfinite(cx) and numpy.isfinite(cy)):
            raise InvariantError('Principal point must be finite.')
        return super(Intrinsics, cls).__new__(cls, fx, fy, cx, cy)

    @classmethod
    def from_matrix(cls, matrix):
        """Build intrinsics from an upper-triangular 3x3 K (zero skew)."""
        k = numpy.array(matrix, dtype=float).reshape(3, 3)
        if abs(k[2, 2] - 1.0) > 1e-12 or numpy.any(
                numpy.abs(k[numpy.tril_indices(3, -1)]) > 1e-12):
            raise InvariantError('K must be upper-triangular with K[2][2] = 1.')
        if abs(k[0, 1]) > 1e-12:
            raise InvariantError('Skewed intrinsics are not supported.')
        return cls(k[0, 0], k[1, 1], k[0, 2], k[1, 2])

    def matrix(self):
        """Return the 3x3 matrix K."""
        return numpy.array([[self.fx, 0.0, self.cx],
                            [0.0, self.fy, self.cy],
                            [0.0, 0.0, 1.0]])

    def inverse_matrix(self):
        """Return K^-1 in closed form."""
        return numpy.array([[1.0 / self.fx, 0.0, -self.cx / self.fx],
                            [0.0, 1.0 / self.fy, -self.cy / self.fy],
                            [0.0, 0.0, 1.0]])


class Plane(namedtuple('Plane', 'normal d')):
    """
    Scene plane in camera coordinates.

    Points X on the plane satisfy normal . X = -d: the normal points
    towards the camera center and d is the distance from the center.

    Attributes
    ----------
    normal : numpy.ndarray
        Unit normal.
    d : float
        Distance from the camera center in meters (> 0).

    """

    __slots__ = ()

    def __new__(cls, normal, d):
        d = float(d)
        if not d > 0:
            raise InvariantError('Plane distance must be positive, got {}.'
                                 .format(d))
        return super(Plane, cls).__new__(cls, unit_vector(normal), d)


class Pose(namedtuple('Pose', 'rotation translation')):
    """
    Rigid transform mapping frame A into frame B: X_B = R X_A + t.

    Attributes
    ----------
    rotation : numpy.ndarray
        3x3 rotation matrix.
    translation : numpy.ndarray
        3-vector in meters.

    """

    __slots__ = ()

    def __new__(cls, rotation, translation):
        rotation = check_rotation(rotation)
        translation = numpy.array(translation, dtype=float).reshape(3)
        translation.setflags(write=False)
        return super(Pose, cls).__new__(cls, rotation, translation)

    @classmethod
    def identity(cls):
        return cls(numpy.eye(3), numpy.zeros(3))

    def apply(self, points):
        """Map (N, 3) points from frame A to frame B."""
        points = numpy.asarray(points, dtype=float)
        return points.dot(self.rotation.T) + self.translation

    def inverse(self):
        rotation_t = self.rotation.T
        return Pose(rotation_t, -rotation_t.dot(self.translation))

    def compose(self, other):
        """Return the pose applying other first, then self."""
        return Pose(self.rotation.dot(other.rotation),
                    self.rotation.dot(other.translation) + self.translation)
