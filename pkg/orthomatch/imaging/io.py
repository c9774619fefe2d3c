"""
PNG input and output.

Images are 8-bit (gray or RGB) PNG files. Depth maps are 16-bit
single-channel PNG files holding millimeters, with 0 marking invalid
pixels.
"""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import logging
import os.path
import cv2
import numpy

# local imports
from orthomatch.errors import ImageFormatError
from orthomatch.imaging.image import Image
from orthomatch.imaging.depth import DepthMap

__all__ = ['read_image', 'write_image', 'read_depth', 'write_depth',
           'IMAGE_EXTENSIONS']

logger = logging.getLogger(__name__)

IMAGE_EXTENSIONS = ('.png', '.jpg', '.jpeg', '.bmp', '.tif', '.tiff')
MAX_DEPTH_MM = 65535


def _read_raw(path):
    if not os.path.isfile(path):
        raise ImageFormatError('{}: no such file.'.format(path))
    data = cv2.imread(path, cv2.IMREAD_UNCHANGED)
    if data is None:
        raise ImageFormatError('{}: unreadable image.'.format(path))
    return data


def read_image(path):
    """
    Read an image file as an :class:`Image` in [0, 1].

    Alpha channels are discarded, channel order is converted to RGB and
    8-bit or 16-bit samples are scaled by their maximum code value.

    """
    data = _read_raw(path)
    if data.dtype == numpy.uint8:
        scale = 255.0
    elif data.dtype == numpy.uint16:
        scale = 65535.0
    else:
        raise ImageFormatError('{}: unsupported sample type {}.'
                               .format(path, data.dtype))
    if data.ndim == 3:
        if data.shape[2] == 4:
            data = data[:, :, :3]
        if data.shape[2] == 1:
            data = data[:, :, 0]
        else:
            data = cv2.cvtColor(data, cv2.COLOR_BGR2RGB)
    return Image(data.astype(float) / scale)


def write_image(image, path):
    """Write an image as 8-bit PNG (values rounded to the nearest code)."""
    data = numpy.round(image.data * 255.0).astype(numpy.uint8)
    if image.channels == 3:
        data = cv2.cvtColor(data, cv2.COLOR_RGB2BGR)
    if not cv2.imwrite(path, data):
        raise ImageFormatError('{}: cannot write image.'.format(path))
    logger.debug('Wrote %s (%dx%d).', path, image.width, image.height)


def read_depth(path, shape=None):
    """
    Read a 16-bit millimeter depth PNG.

    Parameters
    ----------
    path : str
        File path.
    shape : tuple, optional
        Expected (height, width), usually the shape of the paired image.

    Returns
    -------
    DepthMap
        Depth in meters; zero codes are invalid.

    Raises
    ------
    ImageFormatError
        On unreadable files, wrong sample type or shape mismatch.

    """
    data = _read_raw(path)
    if data.dtype != numpy.uint16 or data.ndim != 2:
        raise ImageFormatError('{}: depth must be a 16-bit single channel '
                               'PNG.'.format(path))
    if shape is not None and data.shape != tuple(shape):
        raise ImageFormatError('{}: depth size {} differs from image size {}.'
                               .format(path, data.shape, tuple(shape)))
    millimeters = data.astype(float)
    return DepthMap(millimeters / 1000.0, millimeters > 0)


def write_depth(depth, path):
    """Write depth as 16-bit millimeters; out-of-range depths are clipped."""
    millimeters = numpy.round(depth.depth * 1000.0)
    millimeters = numpy.clip(millimeters, 0, MAX_DEPTH_MM)
    millimeters[~depth.mask] = 0
    if not cv2.imwrite(path, millimeters.astype(numpy.uint16)):
        raise ImageFormatError('{}: cannot write depth.'.format(path))
