"""Harris corner detection with greedy non-maximum suppression."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import logging
import numpy
from scipy import ndimage

# local imports
from orthomatch.errors import InvariantError
from orthomatch.features.keypoint import Keypoint, check_bounds
from orthomatch.imaging.image import gradients

__all__ = ['detect_harris', 'harris_response']

logger = logging.getLogger(__name__)

RELATIVE_THRESHOLD = 0.01
ABSOLUTE_THRESHOLD = 1e-12


def harris_response(image, k=0.04, sigma=1.0):
    """
    Harris corner response det(M) - k trace(M)^2.

    M is the structure tensor of the central-difference gradients,
    smoothed by a Gaussian of standard deviation sigma.

    """
    gx, gy = gradients(image)
    sxx = ndimage.gaussian_filter(gx * gx, sigma)
    syy = ndimage.gaussian_filter(gy * gy, sigma)
    sxy = ndimage.gaussian_filter(gx * gy, sigma)
    return sxx * syy - sxy * sxy - k * (sxx + syy) ** 2


def _disk(radius):
    offsets = numpy.arange(-radius, radius + 1)
    return offsets[None, :] ** 2 + offsets[:, None] ** 2 <= radius ** 2


def _suppress(response, candidates, nms_radius):
    """Greedy suppression in decreasing score, ties by (y, x) ascending."""
    ys, xs = candidates
    order = numpy.lexsort((xs, ys, -response[ys, xs]))
    height, width = response.shape
    disk = _disk(nms_radius)
    blocked = numpy.zeros((height + 2 * nms_radius, width + 2 * nms_radius),
                          dtype=bool)
    kept = []
    for index in order:
        y, x = ys[index], xs[index]
        if blocked[y + nms_radius, x + nms_radius]:
            continue
        kept.append((y, x))
        blocked[y:y + 2 * nms_radius + 1, x:x + 2 * nms_radius + 1] |= disk
    return kept


def _parabola_offset(before, center, after):
    """Subpixel peak offset of a sampled parabola, limited to half a pixel."""
    curvature = before - 2.0 * center + after
    if curvature >= 0:
        return 0.0
    return float(numpy.clip(0.5 * (before - after) / curvature, -0.5, 0.5))


def _refine(response, y, x):
    height, width = response.shape
    dx = dy = 0.0
    if 0 < x < width - 1:
        dx = _parabola_offset(*response[y, x - 1:x + 2])
    if 0 < y < height - 1:
        dy = _parabola_offset(*response[y - 1:y + 2, x])
    return dx, dy


def detect_harris(image, max_keypoints=2000, nms_radius=3, k=0.04,
                  sigma=1.0, mask=None):
    """
    Detect Harris corners.

    Parameters
    ----------
    image : orthomatch.imaging.Image
        1-channel image.
    max_keypoints : int
        Maximal number of keypoints returned.
    nms_radius : int
        Radius in pixels of the non-maximum suppression disk.
    k : float
        Harris sensitivity.
    sigma : float
        Standard deviation of the structure tensor smoothing.
    mask : numpy.ndarray, optional
        Boolean (height, width) mask; pixels where it is False never
        become keypoints.

    Returns
    -------
    list of Keypoint
        Keypoints sorted by decreasing score, ties by (y, x) ascending.
        Unoriented (orientation 0).

    """
    if image.channels != 1:
        raise InvariantError('Harris detection needs a 1-channel image.')
    response = harris_response(image, k, sigma)
    if mask is not None:
        response = numpy.where(mask, response, 0.0)
    peak = response.max()
    threshold = max(RELATIVE_THRESHOLD * peak, ABSOLUTE_THRESHOLD)
    local_max = ndimage.maximum_filter(response, size=3, mode='constant',
                                       cval=-numpy.inf)
    candidates = numpy.nonzero((response > threshold)
                               & (response >= local_max))
    kept = _suppress(response, candidates, int(nms_radius))[:max_keypoints]
    width, height = image.width, image.height
    keypoints = []
    for y, x in kept:
        dx, dy = _refine(response, y, x)
        keypoints.append(Keypoint(min(max(x + dx, 0.0), width - 1),
                                  min(max(y + dy, 0.0), height - 1),
                                  float(response[y, x])))
    check_bounds(keypoints, width, height, 'harris')
    logger.debug('Harris: %d candidates, %d keypoints kept.',
                 len(candidates[0]), len(keypoints))
    return keypoints
