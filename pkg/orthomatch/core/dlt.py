"""Direct linear transform estimation of homographies."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import itertools
import numpy

# local imports
from orthomatch.errors import (
    DegenerateConfiguration, DegenerateHomography, InsufficientPoints
)
from orthomatch.core.homography import Homography, normalize_matrices

__all__ = ['homography_from_point_pairs', 'hartley_normalization',
           'minimal_homographies']

COLLINEARITY_TOLERANCE = 1e-9
_TRIPLES = numpy.array(list(itertools.combinations(range(4), 3)))


def hartley_normalization(points):
    """
    Similarity moving the centroid to the origin and the mean distance to
    sqrt(2).

    Parameters
    ----------
    points : numpy.ndarray
        (N, 2) coordinates.

    Returns
    -------
    numpy.ndarray
        3x3 normalizing transform T.

    Raises
    ------
    DegenerateConfiguration
        When all points coincide.

    """
    centroid = points.mean(axis=0)
    mean_distance = numpy.sqrt(((points - centroid) ** 2).sum(axis=1)).mean()
    if mean_distance < 1e-12:
        raise DegenerateConfiguration('All points coincide.')
    s = numpy.sqrt(2.0) / mean_distance
    return numpy.array([[s, 0.0, -s * centroid[0]],
                        [0.0, s, -s * centroid[1]],
                        [0.0, 0.0, 1.0]])


def _apply(transform, points):
    return points.dot(transform[:2, :2].T) + transform[:2, 2]


def _check_minimal(points, label):
    for a, b, c in itertools.combinations(points, 3):
        area = 0.5 * abs((b[0] - a[0]) * (c[1] - a[1])
                         - (b[1] - a[1]) * (c[0] - a[0]))
        if area < COLLINEARITY_TOLERANCE:
            raise DegenerateConfiguration(
                'Three {} points are collinear or coincident.'.format(label))


def _design_matrix(source, target):
    """DLT rows for (..., N, 2) point arrays, shape (..., 2N, 9)."""
    n = source.shape[-2]
    x, y = source[..., 0], source[..., 1]
    u, v = target[..., 0], target[..., 1]
    ones, zeros = numpy.ones(x.shape), numpy.zeros(x.shape)
    rows_u = numpy.stack([-x, -y, -ones, zeros, zeros, zeros,
                          u * x, u * y, u], axis=-1)
    rows_v = numpy.stack([zeros, zeros, zeros, -x, -y, -ones,
                          v * x, v * y, v], axis=-1)
    design = numpy.empty(source.shape[:-2] + (2 * n, 9))
    design[..., 0::2, :] = rows_u
    design[..., 1::2, :] = rows_v
    return design


def homography_from_point_pairs(source, target):
    """
    Least-squares homography mapping source points onto target points.

    Both point sets are Hartley-normalized before the SVD solve. With
    exactly four pairs, the result interpolates them.

    Parameters
    ----------
    source : array-like
        (N, 2) source pixel coordinates, N >= 4.
    target : array-like
        (N, 2) target pixel coordinates.

    Returns
    -------
    Homography
        Estimated transform.

    Raises
    ------
    InsufficientPoints
        With fewer than 4 pairs.
    DegenerateConfiguration
        When the points are collinear or coincident.

    """
    source = numpy.asarray(source, dtype=float).reshape(-1, 2)
    target = numpy.asarray(target, dtype=float).reshape(-1, 2)
    if len(source) != len(target):
        raise DegenerateConfiguration('Point lists differ in length.')
    if len(source) < 4:
        raise InsufficientPoints('A homography needs 4 pairs, got {}.'
                                 .format(len(source)))
    t_source = hartley_normalization(source)
    t_target = hartley_normalization(target)
    source_n = _apply(t_source, source)
    target_n = _apply(t_target, target)
    if len(source) == 4:
        _check_minimal(source_n, 'source')
        _check_minimal(target_n, 'target')
    _, singular_values, vt = numpy.linalg.svd(
        _design_matrix(source_n, target_n))
    if (len(source) > 4 and singular_values[7]
            < COLLINEARITY_TOLERANCE * singular_values[0]):
        raise DegenerateConfiguration('Point configuration is degenerate.')
    h_normalized = vt[-1].reshape(3, 3)
    matrix = numpy.linalg.inv(t_target).dot(h_normalized).dot(t_source)
    try:
        return Homography(matrix)
    except DegenerateHomography:
        raise DegenerateConfiguration('Points only support a singular '
                                      'homography.')


def _normalize_stack(points):
    """Hartley transforms of a (B, N, 2) stack; coincident sets are flagged."""
    centroid = points.mean(axis=1)
    centred = points - centroid[:, None, :]
    mean_distance = numpy.sqrt((centred ** 2).sum(axis=2)).mean(axis=1)
    valid = mean_distance >= 1e-12
    scale = numpy.sqrt(2.0) / numpy.where(valid, mean_distance, 1.0)
    transforms = numpy.zeros((len(points), 3, 3))
    transforms[:, 0, 0] = transforms[:, 1, 1] = scale
    transforms[:, :2, 2] = -scale[:, None] * centroid
    transforms[:, 2, 2] = 1.0
    inverses = numpy.zeros_like(transforms)
    inverses[:, 0, 0] = inverses[:, 1, 1] = 1.0 / scale
    inverses[:, :2, 2] = centroid
    inverses[:, 2, 2] = 1.0
    return centred * scale[:, None, None], transforms, inverses, valid


def _smallest_triangle(points):
    a, b, c = (points[:, _TRIPLES[:, i]] for i in range(3))
    cross = ((b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1])
             - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0]))
    return 0.5 * numpy.abs(cross).min(axis=1)


def minimal_homographies(source, target):
    """
    Homographies through a stack of 4-pair samples.

    Vectorized form of :func:`homography_from_point_pairs` restricted to
    exactly four pairs per sample, with the same normalization and the
    same degeneracy rules. Degenerate samples are flagged instead of
    raising.

    Parameters
    ----------
    source, target : array-like
        (B, 4, 2) sample coordinates.

    Returns
    -------
    matrices : numpy.ndarray
        (B, 3, 3) normalized homographies; identity where invalid.
    valid : numpy.ndarray
        (B,) False for collinear or coincident samples and singular
        solutions.

    """
    source = numpy.asarray(source, dtype=float).reshape(-1, 4, 2)
    target = numpy.asarray(target, dtype=float).reshape(-1, 4, 2)
    source_n, t_source, _, valid_source = _normalize_stack(source)
    target_n, _, t_target_inverse, valid_target = _normalize_stack(target)
    valid = (valid_source & valid_target
             & (_smallest_triangle(source_n) >= COLLINEARITY_TOLERANCE)
             & (_smallest_triangle(target_n) >= COLLINEARITY_TOLERANCE))
    _, _, vt = numpy.linalg.svd(_design_matrix(source_n, target_n))
    h_normalized = vt[:, -1].reshape(-1, 3, 3)
    matrices, solved = normalize_matrices(
        numpy.matmul(numpy.matmul(t_target_inverse, h_normalized), t_source))
    valid &= solved
    matrices[~valid] = numpy.eye(3)
    return matrices, valid
