"""Module defining raster image containers and pixel operations."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
from collections import namedtuple
import numpy

# local imports
from orthomatch.errors import InvariantError

__all__ = ['Image', 'WarpResult', 'grayscale', 'gradients']

RANGE_TOLERANCE = 1e-9
LUMA = numpy.array([0.299, 0.587, 0.114])

WarpResult = namedtuple('WarpResult', 'image validity')


class Image(object):
    """
    Immutable raster with 1 or 3 channels and values in [0, 1].

    Attributes
    ----------
    data : numpy.ndarray
        (height, width) or (height, width, 3) float array, read-only.

    """

    __slots__ = ('data',)

    def __init__(self, data):
        """
        Constructor.

        Parameters
        ----------
        data : array-like
            Pixel values, row-major. Values within 1e-9 outside [0, 1]
            (interpolation round-off) are clipped.

        Raises
        ------
        InvariantError
            When the layout or the value range is invalid.

        """
        array = numpy.array(data, dtype=float)
        if array.ndim == 3 and array.shape[2] == 1:
            array = array[:, :, 0]
        if not (array.ndim == 2 or (array.ndim == 3 and array.shape[2] == 3)):
            raise InvariantError('Image must have 1 or 3 channels, got shape '
                                 '{}.'.format(array.shape))
        if array.shape[0] == 0 or array.shape[1] == 0:
            raise InvariantError('Image must not be empty.')
        if not numpy.all(numpy.isfinite(array)):
            raise InvariantError('Image holds non-finite values.')
        if (array.min() < -RANGE_TOLERANCE
                or array.max() > 1.0 + RANGE_TOLERANCE):
            raise InvariantError('Image values must lie in [0, 1], got '
                                 '[{}, {}].'.format(array.min(), array.max()))
        array = numpy.clip(array, 0.0, 1.0)
        array.setflags(write=False)
        self.data = array

    @property
    def height(self):
        return self.data.shape[0]

    @property
    def width(self):
        return self.data.shape[1]

    @property
    def channels(self):
        return 1 if self.data.ndim == 2 else 3

    @property
    def shape(self):
        return self.data.shape

    def crop(self, x0, y0, width, height):
        """Return the sub-image with top-left corner (x0, y0)."""
        if (x0 < 0 or y0 < 0 or x0 + width > self.width
                or y0 + height > self.height):
            raise InvariantError('Crop ({}, {}, {}, {}) leaves the {}x{} '
                                 'image.'.format(x0, y0, width, height,
                                                 self.width, self.height))
        return Image(self.data[y0:y0 + height, x0:x0 + width])


def grayscale(image):
    """Luma 0.299 R + 0.587 G + 0.114 B; 1-channel images are returned as is."""
    if image.channels == 1:
        return image
    return Image(image.data.dot(LUMA))


def gradients(image):
    """
    Central-difference gradients with replicated borders.

    Parameters
    ----------
    image : Image
        1-channel image.

    Returns
    -------
    gx, gy : numpy.ndarray
        Derivatives along x (columns) and y (rows), in [-0.5, 0.5].

    """
    if image.channels != 1:
        raise InvariantError('Gradients need a 1-channel image.')
    return array_gradients(image.data)


def array_gradients(array):
    padded = numpy.pad(array, 1, mode='edge')
    gx = 0.5 * (padded[1:-1, 2:] - padded[1:-1, :-2])
    gy = 0.5 * (padded[2:, 1:-1] - padded[:-2, 1:-1])
    return gx, gy
