"""Bilinear sampling and inverse-mapped homography warping."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import numpy

# local imports
from orthomatch.core.homography import invert, transform_points
from orthomatch.imaging.image import Image, WarpResult

__all__ = ['sample_bilinear', 'warp', 'warp_array']


def sample_bilinear(array, xs, ys, mask=None):
    """
    Sample an array at real-valued pixel coordinates.

    A sample is valid when its four taps lie inside the array and, if
    a mask is given, all four taps are masked valid. Invalid samples are 0.

    Parameters
    ----------
    array : numpy.ndarray
        (H, W) or (H, W, C) values.
    xs, ys : numpy.ndarray
        Sample coordinates of identical shape; NaN entries are invalid.
    mask : numpy.ndarray, optional
        (H, W) boolean validity of the source pixels.

    Returns
    -------
    values : numpy.ndarray
        Sampled values with shape xs.shape (+ (C,) for multi-channel input).
    valid : numpy.ndarray
        Boolean mask with shape xs.shape.

    """
    height, width = array.shape[:2]
    xs = numpy.asarray(xs, dtype=float)
    ys = numpy.asarray(ys, dtype=float)
    with numpy.errstate(invalid='ignore'):
        valid = ((xs >= 0) & (xs <= width - 1)
                 & (ys >= 0) & (ys <= height - 1))
    sx = numpy.where(valid, xs, 0.0)
    sy = numpy.where(valid, ys, 0.0)
    x0 = numpy.clip(numpy.floor(sx).astype(int), 0, max(width - 2, 0))
    y0 = numpy.clip(numpy.floor(sy).astype(int), 0, max(height - 2, 0))
    x1 = numpy.minimum(x0 + 1, width - 1)
    y1 = numpy.minimum(y0 + 1, height - 1)
    fx = sx - x0
    fy = sy - y0
    if mask is not None:
        valid &= (mask[y0, x0] & mask[y0, x1] & mask[y1, x0] & mask[y1, x1])
    if array.ndim == 3:
        fx = fx[..., None]
        fy = fy[..., None]
    top = (1.0 - fx) * array[y0, x0] + fx * array[y0, x1]
    bottom = (1.0 - fx) * array[y1, x0] + fx * array[y1, x1]
    values = (1.0 - fy) * top + fy * bottom
    if array.ndim == 3:
        values[~valid] = 0.0
    else:
        values = numpy.where(valid, values, 0.0)
    return values, valid


def _output_grid(out_width, out_height):
    ys, xs = numpy.mgrid[0:out_height, 0:out_width]
    return numpy.stack([xs.ravel(), ys.ravel()], axis=1).astype(float)


def warp_array(array, homography, out_width, out_height, mask=None):
    """
    Warp a raw array by homography with inverse mapping.

    Output pixel p samples the input at H^-1 p. Used for images as well
    as depth maps (with their validity mask).

    Returns
    -------
    values, valid : numpy.ndarray
        Warped values (0 where invalid) and the validity mask.

    """
    inverse = invert(homography)
    source, finite = transform_points(inverse, _output_grid(out_width,
                                                            out_height))
    xs = source[:, 0].reshape(out_height, out_width)
    ys = source[:, 1].reshape(out_height, out_width)
    values, valid = sample_bilinear(array, xs, ys, mask)
    return values, valid & finite.reshape(out_height, out_width)


def warp(image, homography, out_width, out_height, mask=None):
    """
    Warp an image by homography onto an out_width x out_height canvas.

    Parameters
    ----------
    image : Image
        Source raster.
    homography : orthomatch.core.Homography
        Map from source to output pixel coordinates.
    out_width, out_height : int
        Canvas size.
    mask : numpy.ndarray, optional
        Validity of the source pixels (for depth-derived sources).

    Returns
    -------
    WarpResult
        Warped image and validity mask.

    Raises
    ------
    DegenerateHomography
        When the homography cannot be inverted.

    """
    values, valid = warp_array(image.data, homography, out_width, out_height,
                               mask)
    valid.setflags(write=False)
    return WarpResult(Image(values), valid)
