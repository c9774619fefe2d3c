"""Synthetic test cards and textures."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import numpy
from scipy import ndimage

# local imports
from orthomatch.imaging.image import Image

__all__ = ['random_texture', 'checkerboard', 'gradient_card', 'step_edge',
           'square_card', 'sinusoid_card']

TEXTURE_SCALES = (1.5, 3.0, 6.0)


def random_texture(width, height, seed=0, scales=TEXTURE_SCALES):
    """
    Smooth random texture stretched to [0, 1].

    Sum of Gaussian-filtered white noise at several scales, so the card
    has corners at every scale the detector looks at.

    """
    rng = numpy.random.Generator(numpy.random.PCG64(seed))
    texture = numpy.zeros((height, width))
    for sigma in scales:
        layer = ndimage.gaussian_filter(rng.standard_normal((height, width)),
                                        sigma, mode='wrap')
        texture += layer / max(layer.std(), 1e-12)
    texture -= texture.min()
    texture /= max(texture.max(), 1e-12)
    return Image(texture)


def checkerboard(cells=8, cell_size=16, low=0.0, high=1.0):
    """Checkerboard of cells x cells squares, top-left cell dark."""
    index = numpy.arange(cells * cell_size) // cell_size
    board = (index[:, None] + index[None, :]) % 2
    return Image(numpy.where(board == 1, high, low))


def gradient_card(width=64, height=64):
    """Diagonal ramp from 0 (top-left) to 1 (bottom-right)."""
    ys, xs = numpy.mgrid[0:height, 0:width]
    return Image(0.5 * xs / max(width - 1, 1) + 0.5 * ys / max(height - 1, 1))


def step_edge(size=33, low=0.2, high=0.8, vertical=True):
    """Step edge: dark left / bright right (or dark top / bright bottom)."""
    card = numpy.full((size, size), low)
    if vertical:
        card[:, size // 2:] = high
    else:
        card[size // 2:, :] = high
    return Image(card)


def square_card(size=64, x0=24, y0=24, side=16):
    """White square of the given side on black."""
    card = numpy.zeros((size, size))
    card[y0:y0 + side, x0:x0 + side] = 1.0
    return Image(card)


def sinusoid_card(width, height, periods=(3.0, 2.0)):
    """0.5 + 0.25 (sin(2 pi px x / w) + sin(2 pi py y / h)), for gradient
    accuracy checks."""
    ys, xs = numpy.mgrid[0:height, 0:width].astype(float)
    return Image(0.5 + 0.25 * (numpy.sin(2 * numpy.pi * periods[0] * xs
                                         / width)
                               + numpy.sin(2 * numpy.pi * periods[1] * ys
                                           / height)))
