from __future__ import absolute_import, division, print_function

import numpy
import pytest

from orthomatch.errors import InvariantError
from orthomatch.ortho.roi import ROI


def test_parse_rectangle():
    roi = ROI.parse('1,2,5,6')
    assert roi.rectangle == (1, 2, 5, 6)
    mask = roi.to_mask((8, 8))
    assert mask.sum() == 16
    assert mask[2, 1] and mask[5, 4] and not mask[6, 4]
    assert roi.corners().tolist() == [[1, 2], [4, 2], [4, 5], [1, 5]]


@pytest.mark.parametrize('text', ['a,b,c,d', '1,2,3', '4,0,2,3', '-1,0,3,3'])
def test_invalid_rectangles(text):
    with pytest.raises(InvariantError):
        ROI.parse(text)


def test_rectangle_must_fit_the_image():
    with pytest.raises(InvariantError):
        ROI((0, 0, 10, 4)).to_mask((4, 8))


def test_mask_roi():
    mask = numpy.zeros((6, 6), dtype=bool)
    mask[1:3, 2:5] = True
    roi = ROI(mask=mask)
    assert roi.corners().tolist() == [[2, 1], [4, 1], [4, 2], [2, 2]]
    restored = ROI.from_json(roi.to_json())
    assert numpy.array_equal(restored.mask, mask)
    with pytest.raises(InvariantError):
        roi.to_mask((5, 5))
    with pytest.raises(InvariantError):
        ROI(mask=numpy.zeros((3, 3)))
    with pytest.raises(InvariantError):
        ROI()


def test_full_roi_json():
    roi = ROI.full(64, 48)
    assert roi.to_json() == [0, 0, 64, 48]
    assert ROI.from_json([0, 0, 64, 48]).rectangle == (0, 0, 64, 48)
