"""Depth maps and back-projection to camera coordinates."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import numpy

# local imports
from orthomatch.errors import EmptyROI, InvariantError

__all__ = ['DepthMap', 'backproject', 'backproject_pixels', 'roi_mask']


class DepthMap(object):
    """
    Metric depth raster with a per-pixel validity mask.

    Attributes
    ----------
    depth : numpy.ndarray
        (height, width) depth along the optical axis in meters. Invalid
        pixels hold 0.
    mask : numpy.ndarray
        (height, width) boolean validity.

    """

    __slots__ = ('depth', 'mask')

    def __init__(self, depth, mask=None):
        """
        Constructor.

        Parameters
        ----------
        depth : array-like
            Depth values in meters.
        mask : array-like, optional
            Validity mask. Defaults to finite and positive depths.

        Raises
        ------
        InvariantError
            When a pixel marked valid has a non-finite or non-positive
            depth, or when shapes differ.

        """
        depth = numpy.array(depth, dtype=float)
        if depth.ndim != 2 or depth.size == 0:
            raise InvariantError('Depth map must be a non-empty 2D array.')
        with numpy.errstate(invalid='ignore'):
            usable = numpy.isfinite(depth) & (depth > 0)
        if mask is None:
            mask = usable
        else:
            mask = numpy.array(mask, dtype=bool)
            if mask.shape != depth.shape:
                raise InvariantError('Mask shape {} differs from depth shape '
                                     '{}.'.format(mask.shape, depth.shape))
            if numpy.any(mask & ~usable):
                raise InvariantError('Valid depths must be finite and > 0.')
        depth = numpy.where(mask, depth, 0.0)
        depth.setflags(write=False)
        mask.setflags(write=False)
        self.depth = depth
        self.mask = mask

    @property
    def height(self):
        return self.depth.shape[0]

    @property
    def width(self):
        return self.depth.shape[1]

    @property
    def shape(self):
        return self.depth.shape


def roi_mask(roi, shape):
    """
    Boolean mask of a region of interest.

    Parameters
    ----------
    roi : None, tuple, numpy.ndarray or object with ``to_mask``
        None selects the whole raster; a tuple (x0, y0, x1, y1) selects
        columns x0..x1-1 and rows y0..y1-1; an array is used as mask.
    shape : tuple
        (height, width) of the raster.

    """
    height, width = shape
    if roi is None:
        return numpy.ones(shape, dtype=bool)
    if hasattr(roi, 'to_mask'):
        return roi.to_mask(shape)
    if isinstance(roi, numpy.ndarray) and roi.dtype == bool:
        if roi.shape != tuple(shape):
            raise InvariantError('ROI mask shape {} differs from {}.'
                                 .format(roi.shape, shape))
        return roi
    x0, y0, x1, y1 = [int(v) for v in roi]
    if not (0 <= x0 < x1 <= width and 0 <= y0 < y1 <= height):
        raise InvariantError('ROI {} is empty or leaves the {}x{} raster.'
                             .format(tuple(roi), width, height))
    mask = numpy.zeros(shape, dtype=bool)
    mask[y0:y1, x0:x1] = True
    return mask


def backproject(depth, intrinsics, roi=None):
    """
    Point cloud of the valid depth pixels inside roi.

    Each pixel (u, v) with depth z gives z K^-1 (u, v, 1).

    Parameters
    ----------
    depth : DepthMap
        Metric depth.
    intrinsics : orthomatch.core.Intrinsics
        Camera intrinsics.
    roi : optional
        Region accepted by :func:`roi_mask`.

    Returns
    -------
    numpy.ndarray
        (N, 3) points in meters, in row-major pixel order.

    Raises
    ------
    EmptyROI
        When no valid pixel lies inside the ROI.

    """
    selected = roi_mask(roi, depth.shape) & depth.mask
    vs, us = numpy.nonzero(selected)
    if len(us) == 0:
        raise EmptyROI('No valid depth inside the region of interest.')
    z = depth.depth[vs, us]
    return _lift(intrinsics, us.astype(float), vs.astype(float), z)


def _lift(intrinsics, us, vs, z):
    x = (us - intrinsics.cx) / intrinsics.fx * z
    y = (vs - intrinsics.cy) / intrinsics.fy * z
    return numpy.stack([x, y, z], axis=1)


def backproject_pixels(depth, intrinsics, pixels):
    """
    Back-project subpixel locations using the depth of the nearest pixel.

    Parameters
    ----------
    depth : DepthMap
        Metric depth.
    intrinsics : orthomatch.core.Intrinsics
        Camera intrinsics.
    pixels : array-like
        (N, 2) pixel coordinates (x, y).

    Returns
    -------
    points : numpy.ndarray
        (N, 3) points; rows without valid depth are NaN.
    valid : numpy.ndarray
        (N,) boolean mask of rows with valid depth.

    """
    pixels = numpy.asarray(pixels, dtype=float).reshape(-1, 2)
    cols = numpy.floor(pixels[:, 0] + 0.5).astype(int)
    rows = numpy.floor(pixels[:, 1] + 0.5).astype(int)
    inside = ((cols >= 0) & (cols < depth.width)
              & (rows >= 0) & (rows < depth.height))
    valid = numpy.zeros(len(pixels), dtype=bool)
    valid[inside] = depth.mask[rows[inside], cols[inside]]
    z = numpy.full(len(pixels), numpy.nan)
    z[valid] = depth.depth[rows[valid], cols[valid]]
    return _lift(intrinsics, pixels[:, 0], pixels[:, 1], z), valid
