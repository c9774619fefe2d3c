"""Rotation construction and validation."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import logging
import numpy

# local imports
from orthomatch.errors import InvariantError, AntiparallelSingularity

__all__ = ['skew', 'check_rotation', 'align_rotation',
           'axis_angle_rotation', 'rotation_angle']

logger = logging.getLogger(__name__)

ROTATION_TOLERANCE = 1e-9


def skew(vector):
    """Return the cross-product matrix [v]_x."""
    x, y, z = vector
    return numpy.array([[0.0, -z, y],
                        [z, 0.0, -x],
                        [-y, x, 0.0]])


def check_rotation(matrix, tolerance=ROTATION_TOLERANCE):
    """
    Validate a rotation matrix.

    Parameters
    ----------
    matrix : array-like
        3x3 matrix, row-major.
    tolerance : float, optional
        Accepted deviation of R^T R from identity and of det from +1.

    Returns
    -------
    numpy.ndarray
        Read-only copy of the matrix.

    Raises
    ------
    InvariantError
        When the matrix is not a proper rotation.

    """
    result = numpy.array(matrix, dtype=float).reshape(3, 3)
    if not numpy.all(numpy.isfinite(result)):
        raise InvariantError('Rotation has non-finite entries.')
    if numpy.max(numpy.abs(result.T.dot(result) - numpy.eye(3))) > tolerance:
        raise InvariantError('Matrix is not orthonormal:\n{}'.format(result))
    if abs(numpy.linalg.det(result) - 1.0) > tolerance:
        raise InvariantError('Rotation must have determinant +1.')
    result.setflags(write=False)
    return result


def axis_angle_rotation(axis, angle):
    """
    Rotation of angle radians about a unit axis (Rodrigues formula).
    """
    axis = numpy.asarray(axis, dtype=float)
    k = skew(axis)
    return (numpy.eye(3) + numpy.sin(angle) * k
            + (1.0 - numpy.cos(angle)) * k.dot(k))


def _perpendicular_axis(o):
    """Unit axis perpendicular to o built from its two largest components."""
    order = numpy.argsort(-numpy.abs(o), kind='stable')
    i, j = order[0], order[1]
    axis = numpy.zeros(3)
    axis[j] = o[i]
    axis[i] = -o[j]
    return axis / numpy.linalg.norm(axis)


def _half_turn(o):
    axis = _perpendicular_axis(o)
    return 2.0 * numpy.outer(axis, axis) - numpy.eye(3)


def align_rotation(o, n):
    """
    Return the rotation R taking unit vector o onto unit vector n.

    R = I + [v]_x + [v]_x^2 (1 - o.n) / |o x n|^2 with v = o x n. The
    factor is evaluated as 1 / (1 + o.n), which is the same quantity and
    stays accurate when o and n are almost parallel.

    Parameters
    ----------
    o, n : array-like
        Unit 3-vectors (for instance the optical axis and a normal).

    Returns
    -------
    numpy.ndarray
        Read-only rotation matrix with R o = n.

    """
    o = numpy.asarray(o, dtype=float)
    n = numpy.asarray(n, dtype=float)
    v = numpy.cross(o, n)
    c = float(o.dot(n))
    try:
        if v.dot(v) < 1e-12 and c < 0:
            raise AntiparallelSingularity(
                'Vectors {} and {} are antiparallel.'.format(o, n))
        vx = skew(v)
        result = numpy.eye(3) + vx + vx.dot(vx) / (1.0 + c)
    except AntiparallelSingularity as error:
        logger.debug('%s Using a half turn.', error)
        result = _half_turn(o)
    result.setflags(write=False)
    return result


def rotation_angle(rotation):
    """Rotation angle in radians, from the trace, clamped to [0, pi]."""
    cosine = (numpy.trace(rotation) - 1.0) / 2.0
    return float(numpy.arccos(numpy.clip(cosine, -1.0, 1.0)))
