"""Total least-squares plane fitting."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
from collections import namedtuple
import numpy

# local imports
from orthomatch.errors import DegeneratePoints
from orthomatch.core.camera import Plane

__all__ = ['PlaneFit', 'fit_plane']

RANK_TOLERANCE = 1e-9

PlaneFit = namedtuple('PlaneFit', 'plane rms centroid count')


def fit_plane(points):
    """
    Fit a plane to a point cloud in camera coordinates.

    The normal is the right singular vector of the centred points with
    the smallest singular value, oriented towards the camera center.

    Parameters
    ----------
    points : array-like
        (N, 3) points in meters, N >= 3.

    Returns
    -------
    PlaneFit
        Plane (n . X = -d), rms orthogonal residual, centroid and the
        number of points.

    Raises
    ------
    DegeneratePoints
        With fewer than 3 points, collinear points, or a plane through
        the camera center.

    """
    points = numpy.asarray(points, dtype=float).reshape(-1, 3)
    if len(points) < 3:
        raise DegeneratePoints('A plane needs 3 points, got {}.'
                               .format(len(points)))
    centroid = points.mean(axis=0)
    centred = points - centroid
    _, singular, vt = numpy.linalg.svd(centred, full_matrices=False)
    if singular[0] == 0 or singular[1] <= RANK_TOLERANCE * singular[0]:
        raise DegeneratePoints('Points are collinear or coincident.')
    normal = vt[2]
    if normal.dot(centroid) > 0:
        normal = -normal
    d = abs(normal.dot(centroid))
    if d == 0:
        raise DegeneratePoints('Plane passes through the camera center.')
    rms = float(numpy.sqrt(numpy.mean(centred.dot(normal) ** 2)))
    return PlaneFit(Plane(normal, d), rms, centroid, len(points))
