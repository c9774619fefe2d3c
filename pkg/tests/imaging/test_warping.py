from __future__ import absolute_import, division, print_function

import numpy
import pytest

from orthomatch.core.homography import (
    Homography, rotation_homography, scaling_homography
)
from orthomatch.imaging.image import Image
from orthomatch.imaging.warping import sample_bilinear, warp
from orthomatch.synth.textures import random_texture, square_card


@pytest.fixture
def texture():
    return random_texture(48, 40, seed=4)


def test_sample_bilinear_interpolates():
    array = numpy.array([[0.0, 1.0], [2.0, 3.0]])
    values, valid = sample_bilinear(array, numpy.array([0.5, 1.0, 1.5]),
                                    numpy.array([0.5, 1.0, 0.0]))
    assert valid.tolist() == [True, True, False]
    assert numpy.allclose(values, [1.5, 3.0, 0.0])


def test_sample_bilinear_mask_and_nan():
    array = numpy.ones((3, 3))
    mask = numpy.ones((3, 3), dtype=bool)
    mask[0, 0] = False
    values, valid = sample_bilinear(array, numpy.array([0.5, 1.5, numpy.nan]),
                                    numpy.array([0.5, 1.5, 1.0]), mask)
    assert valid.tolist() == [False, True, False]
    assert values.tolist() == [0.0, 1.0, 0.0]


def test_identity_warp(texture):
    result = warp(texture, Homography.identity(), texture.width,
                  texture.height)
    assert result.validity.all()
    assert numpy.array_equal(result.image.data, texture.data)


def test_half_turn_twice_restores_image(texture):
    center = ((texture.width - 1) / 2.0, (texture.height - 1) / 2.0)
    half_turn = rotation_homography(180, center)
    once = warp(texture, half_turn, texture.width, texture.height)
    inner = (slice(1, -1), slice(1, -1))
    assert numpy.allclose(once.image.data[inner],
                          numpy.rot90(texture.data, 2)[inner], atol=1e-9)
    twice = warp(once.image, half_turn, texture.width, texture.height)
    inner = (slice(2, -2), slice(2, -2))
    assert numpy.allclose(twice.image.data[inner], texture.data[inner],
                          atol=1e-9)


def test_scaling_preserves_area():
    card = square_card()
    result = warp(card, scaling_homography(2.0), 128, 128)
    assert abs(result.image.data.sum() - 4 * 16 ** 2) < 1e-6


def test_outside_pixels_are_invalid(texture):
    shift = Homography([[1.0, 0.0, 10.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    result = warp(texture, shift, texture.width, texture.height)
    assert not result.validity[:, :10].any()
    assert result.validity[:, 10:].all()
    assert (result.image.data[:, :10] == 0).all()


def test_color_warp():
    data = numpy.zeros((8, 8, 3))
    data[..., 1] = 0.5
    result = warp(Image(data), Homography.identity(), 8, 8)
    assert result.image.channels == 3
    assert numpy.allclose(result.image.data[..., 1], 0.5)

