"""Dominant gradient orientation of a keypoint neighbourhood."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import numpy

# local imports
from orthomatch.errors import PatchOutOfBounds
from orthomatch.imaging.image import gradients

__all__ = ['estimate_orientation', 'orientation_from_gradients',
           'NUM_BINS']

NUM_BINS = 36
BIN_WIDTH = 2.0 * numpy.pi / NUM_BINS
SMOOTHING = numpy.array([1.0, 4.0, 6.0, 4.0, 1.0]) / 16.0


def _smooth(histogram):
    result = numpy.zeros_like(histogram)
    for shift, weight in zip(range(-2, 3), SMOOTHING):
        result += weight * numpy.roll(histogram, shift)
    return result


def orientation_from_gradients(gx, gy, x, y, radius=8):
    """
    Dominant orientation from precomputed gradients.

    Parameters
    ----------
    gx, gy : numpy.ndarray
        Image gradients.
    x, y : float
        Keypoint location; the disk is centred on the nearest pixel.
    radius : int
        Disk radius in pixels.

    Returns
    -------
    float
        Orientation in [0, 2 pi).

    Raises
    ------
    PatchOutOfBounds
        When the disk leaves the image.

    """
    height, width = gx.shape
    cx, cy = int(numpy.floor(x + 0.5)), int(numpy.floor(y + 0.5))
    if (cx - radius < 0 or cy - radius < 0
            or cx + radius > width - 1 or cy + radius > height - 1):
        raise PatchOutOfBounds('Orientation disk of radius {} around ({}, {}) '
                               'leaves the image.'.format(radius, x, y))
    dy, dx = numpy.mgrid[-radius:radius + 1, -radius:radius + 1]
    inside = dx ** 2 + dy ** 2 <= radius ** 2
    px = gx[cy - radius:cy + radius + 1, cx - radius:cx + radius + 1][inside]
    py = gy[cy - radius:cy + radius + 1, cx - radius:cx + radius + 1][inside]
    sigma = radius / 2.0
    spatial = numpy.exp(-(dx[inside] ** 2 + dy[inside] ** 2)
                        / (2.0 * sigma ** 2))
    weights = spatial * numpy.hypot(px, py)
    angles = numpy.mod(numpy.arctan2(py, px), 2.0 * numpy.pi)
    bins = numpy.round(angles / BIN_WIDTH).astype(int) % NUM_BINS
    histogram = numpy.zeros(NUM_BINS)
    numpy.add.at(histogram, bins, weights)
    histogram = _smooth(histogram)
    peak = int(numpy.argmax(histogram))
    if histogram[peak] <= 0:
        return 0.0
    before = histogram[(peak - 1) % NUM_BINS]
    after = histogram[(peak + 1) % NUM_BINS]
    curvature = before - 2.0 * histogram[peak] + after
    offset = 0.5 * (before - after) / curvature if curvature < 0 else 0.0
    angle = numpy.mod((peak + offset) * BIN_WIDTH, 2.0 * numpy.pi)
    # mod may round up to exactly 2 pi for tiny negative angles
    return float(angle) if angle < 2.0 * numpy.pi else 0.0


def estimate_orientation(image, keypoint, radius=8):
    """
    Dominant gradient direction around a keypoint.

    A 36-bin histogram of gradient angles is accumulated over the disk of
    the given radius, weighted by gradient magnitude and a Gaussian of
    standard deviation radius / 2, then circularly smoothed. The peak is
    refined by parabolic interpolation; equal peaks resolve to the lowest
    angle.

    Parameters
    ----------
    image : orthomatch.imaging.Image
        1-channel image.
    keypoint : Keypoint
        Keypoint location.
    radius : int
        Disk radius in pixels.

    Returns
    -------
    float
        Orientation in radians, in [0, 2 pi). An angle of 0 means
        the gradient points along +x; pi / 2 along +y (down).

    Raises
    ------
    PatchOutOfBounds
        When the disk leaves the image.

    """
    gx, gy = gradients(image)
    return orientation_from_gradients(gx, gy, keypoint.x, keypoint.y, radius)
