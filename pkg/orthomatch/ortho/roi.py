"""Module defining the ROI class."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import numpy

# local imports
from orthomatch.errors import InvariantError

__all__ = ['ROI']


class ROI(object):
    """
    Region of interest: a pixel rectangle or an explicit mask.

    Rectangles follow slicing conventions: (x0, y0, x1, y1) covers columns
    x0 .. x1 - 1 and rows y0 .. y1 - 1.

    Attributes
    ----------
    rectangle : tuple of int or None
        (x0, y0, x1, y1) when the ROI is rectangular.
    mask : numpy.ndarray or None
        Boolean mask when the ROI is given per pixel.

    """

    def __init__(self, rectangle=None, mask=None):
        if (rectangle is None) == (mask is None):
            raise InvariantError('ROI needs exactly one of rectangle or mask.')
        self.rectangle = None
        self.mask = None
        if rectangle is not None:
            x0, y0, x1, y1 = [int(v) for v in rectangle]
            if x0 < 0 or y0 < 0 or x1 <= x0 or y1 <= y0:
                raise InvariantError('ROI rectangle {} is empty or negative.'
                                     .format(tuple(rectangle)))
            self.rectangle = (x0, y0, x1, y1)
        else:
            mask = numpy.array(mask, dtype=bool)
            if mask.ndim != 2 or not mask.any():
                raise InvariantError('ROI mask must be a non-empty 2D mask.')
            mask.setflags(write=False)
            self.mask = mask

    @classmethod
    def parse(cls, text):
        """Parse 'x0,y0,x1,y1'."""
        try:
            values = [int(v) for v in text.split(',')]
        except ValueError:
            raise InvariantError('Invalid ROI {!r}.'.format(text))
        if len(values) != 4:
            raise InvariantError('ROI needs 4 values, got {!r}.'.format(text))
        return cls(values)

    @classmethod
    def full(cls, width, height):
        return cls((0, 0, width, height))

    def to_mask(self, shape):
        """Boolean mask of the ROI on a raster of the given (height, width)."""
        height, width = shape
        if self.mask is not None:
            if self.mask.shape != tuple(shape):
                raise InvariantError('ROI mask shape {} differs from {}.'
                                     .format(self.mask.shape, tuple(shape)))
            return self.mask
        x0, y0, x1, y1 = self.rectangle
        if x1 > width or y1 > height:
            raise InvariantError('ROI {} leaves the {}x{} image.'
                                 .format(self.rectangle, width, height))
        mask = numpy.zeros(shape, dtype=bool)
        mask[y0:y1, x0:x1] = True
        return mask

    def corners(self):
        """Corner pixels of the ROI bounding box, clockwise from top-left."""
        if self.rectangle is not None:
            x0, y0, x1, y1 = self.rectangle
        else:
            rows, cols = numpy.nonzero(self.mask)
            x0, y0 = cols.min(), rows.min()
            x1, y1 = cols.max() + 1, rows.max() + 1
        return numpy.array([[x0, y0], [x1 - 1, y0], [x1 - 1, y1 - 1],
                            [x0, y1 - 1]], dtype=float)

    def to_json(self):
        if self.rectangle is not None:
            return list(self.rectangle)
        rows, cols = numpy.nonzero(self.mask)
        return {'shape': list(self.mask.shape),
                'pixels': numpy.stack([cols, rows], axis=1).tolist()}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, dict):
            mask = numpy.zeros(data['shape'], dtype=bool)
            pixels = numpy.asarray(data['pixels'], dtype=int).reshape(-1, 2)
            mask[pixels[:, 1], pixels[:, 0]] = True
            return cls(mask=mask)
        return cls(data)
