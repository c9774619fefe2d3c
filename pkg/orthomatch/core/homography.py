"""Module defining the Homography class and projective operations."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import numpy

# local imports
from orthomatch.errors import DegenerateHomography, PointAtInfinity

__all__ = ['Homography', 'apply_homography', 'transform_points',
           'transform_point_stack', 'normalize_matrices', 'compose',
           'invert', 'rotation_homography', 'translation_homography',
           'scaling_homography', 'rectifying_homography']

DETERMINANT_TOLERANCE = 1e-12
SCALE_TOLERANCE = 1e-9
INFINITY_TOLERANCE = 1e-12


def normalize_matrix(matrix):
    """Scale so that h33 = 1 if |h33| > 1e-9, else to unit Frobenius norm."""
    matrix = numpy.array(matrix, dtype=float).reshape(3, 3)
    if abs(matrix[2, 2]) > SCALE_TOLERANCE:
        return matrix / matrix[2, 2]
    return matrix / numpy.linalg.norm(matrix)


def normalize_matrices(matrices):
    """
    Apply :func:`normalize_matrix` to a (B, 3, 3) stack.

    Returns
    -------
    normalized : numpy.ndarray
        (B, 3, 3) normalized matrices.
    valid : numpy.ndarray
        (B,) flags, False for non-finite, zero or singular matrices.

    """
    matrices = numpy.array(matrices, dtype=float).reshape(-1, 3, 3)
    h33 = matrices[:, 2, 2]
    scale = numpy.where(numpy.abs(h33) > SCALE_TOLERANCE, h33,
                        numpy.linalg.norm(matrices, axis=(1, 2)))
    with numpy.errstate(divide='ignore', invalid='ignore'):
        normalized = matrices / scale[:, None, None]
    valid = numpy.isfinite(normalized).all(axis=(1, 2))
    normalized[~valid] = numpy.eye(3)
    valid &= numpy.abs(numpy.linalg.det(normalized)) > DETERMINANT_TOLERANCE
    return normalized, valid


class Homography(object):
    """
    Invertible 3x3 projective transform of pixel coordinates.

    The matrix is stored normalized and read-only, so two homographies
    describing the same transform compare equal entry-wise.

    Attributes
    ----------
    matrix : numpy.ndarray
        Normalized 3x3 matrix, row-major.

    """

    __slots__ = ('matrix',)

    def __init__(self, matrix):
        """
        Constructor.

        Parameters
        ----------
        matrix : array-like
            Any non-zero multiple of the transform.

        Raises
        ------
        DegenerateHomography
            When the matrix is singular or not finite.

        """
        raw = numpy.array(matrix, dtype=float).reshape(3, 3)
        if (not numpy.all(numpy.isfinite(raw))
                or numpy.linalg.norm(raw) == 0):
            raise DegenerateHomography('Invalid homography:\n{}'.format(raw))
        normalized = normalize_matrix(raw)
        if abs(numpy.linalg.det(normalized)) <= DETERMINANT_TOLERANCE:
            raise DegenerateHomography('Singular homography:\n{}'
                                       .format(normalized))
        normalized.setflags(write=False)
        self.matrix = normalized

    @classmethod
    def identity(cls):
        return cls(numpy.eye(3))

    def __repr__(self):
        return 'Homography({})'.format(self.matrix.tolist())

    def __eq__(self, other):
        return (isinstance(other, Homography)
                and numpy.array_equal(self.matrix, other.matrix))

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def __matmul__(self, other):
        return compose(self, other)

    def inverse(self):
        return invert(self)

    def allclose(self, other, atol=1e-9):
        """Entry-wise comparison after normalization."""
        return numpy.allclose(self.matrix, other.matrix, rtol=0, atol=atol)


def transform_points(homography, points):
    """
    Map points and report which ones stay finite.

    Parameters
    ----------
    homography : Homography
        Transform to apply.
    points : array-like
        (N, 2) pixel coordinates.

    Returns
    -------
    mapped : numpy.ndarray
        (N, 2) mapped coordinates, NaN where the point goes to infinity.
    finite : numpy.ndarray
        (N,) boolean mask of finite results.

    """
    points = numpy.asarray(points, dtype=float).reshape(-1, 2)
    h = homography.matrix
    x = h[0, 0] * points[:, 0] + h[0, 1] * points[:, 1] + h[0, 2]
    y = h[1, 0] * points[:, 0] + h[1, 1] * points[:, 1] + h[1, 2]
    w = h[2, 0] * points[:, 0] + h[2, 1] * points[:, 1] + h[2, 2]
    finite = numpy.abs(w) >= INFINITY_TOLERANCE
    safe_w = numpy.where(finite, w, 1.0)
    mapped = numpy.stack([x / safe_w, y / safe_w], axis=1)
    mapped[~finite] = numpy.nan
    return mapped, finite


def transform_point_stack(matrices, points):
    """
    Map one point set through every matrix of a (B, 3, 3) stack.

    Returns
    -------
    mapped : numpy.ndarray
        (B, N, 2) coordinates, NaN where a point goes to infinity.
    finite : numpy.ndarray
        (B, N) boolean mask of finite results.

    """
    points = numpy.asarray(points, dtype=float).reshape(-1, 2)
    homogeneous = numpy.hstack([points, numpy.ones((len(points), 1))])
    projected = numpy.einsum('bij,nj->bni', matrices, homogeneous)
    w = projected[..., 2]
    finite = numpy.abs(w) >= INFINITY_TOLERANCE
    safe_w = numpy.where(finite, w, 1.0)
    mapped = projected[..., :2] / safe_w[..., None]
    mapped[~finite] = numpy.nan
    return mapped, finite


def apply_homography(homography, point):
    """
    Map a single pixel coordinate (x, y).

    Raises
    ------
    PointAtInfinity
        When the projective coordinate w vanishes.

    """
    mapped, finite = transform_points(homography, [point])
    if not finite[0]:
        raise PointAtInfinity('Point {} maps to infinity.'.format(point))
    return mapped[0]


def compose(first, second):
    """Return H = first o second (second is applied first)."""
    return Homography(first.matrix.dot(second.matrix))


def invert(homography):
    try:
        inverse = numpy.linalg.inv(homography.matrix)
    except numpy.linalg.LinAlgError:
        raise DegenerateHomography('Cannot invert {}.'.format(homography))
    return Homography(inverse)


def translation_homography(tx, ty):
    return Homography([[1.0, 0.0, tx], [0.0, 1.0, ty], [0.0, 0.0, 1.0]])


def scaling_homography(scale, center=(0.0, 0.0)):
    """Isotropic scaling about center."""
    cx, cy = center
    return Homography([[scale, 0.0, cx - scale * cx],
                       [0.0, scale, cy - scale * cy],
                       [0.0, 0.0, 1.0]])


def rotation_homography(theta, center):
    """
    In-plane rotation by theta degrees about center.

    Pixel axes point right (x) and down (y); a positive angle is
    counter-clockwise in math orientation, which looks clockwise on
    screen: with center (200, 200) and theta = 90, (300, 200) maps to
    (200, 300).

    """
    angle = numpy.deg2rad(theta)
    c, s = numpy.cos(angle), numpy.sin(angle)
    cx, cy = center
    return Homography([[c, -s, cx - c * cx + s * cy],
                       [s, c, cy - s * cx - c * cy],
                       [0.0, 0.0, 1.0]])


def rectifying_homography(intrinsics, rotation, translation, plane):
    """
    Plane-induced homography H = K (R - t n^T / d) K^-1.

    Parameters
    ----------
    intrinsics : orthomatch.core.Intrinsics
        Camera intrinsics K (shared by both views).
    rotation : array-like
        Rotation R of the pose mapping source to target camera frame.
    translation : array-like
        Translation t of that pose, meters.
    plane : orthomatch.core.Plane
        Plane in source camera coordinates (normal facing the camera).

    Returns
    -------
    Homography
        Map from source pixels to target pixels for points on the plane.

    Raises
    ------
    DegenerateHomography
        When the plane and pose combination gives a singular matrix.

    """
    t = numpy.asarray(translation, dtype=float).reshape(3)
    inner = (numpy.asarray(rotation, dtype=float)
             - numpy.outer(t, plane.normal) / plane.d)
    return Homography(
        intrinsics.matrix().dot(inner).dot(intrinsics.inverse_matrix())
    )
