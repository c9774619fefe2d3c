"""
Rotated and warped image pairs with exact ground-truth homographies.

A pair is drawn from a seed: a crop of the source image (default 400x400)
and a homography made of primitives applied about the crop center in the
fixed order scale, shear, perspective, rotation. The second image is the
crop warped onto a canvas that holds the whole warped crop.
"""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
from collections import namedtuple
import numpy

# local imports
from orthomatch.errors import ConfigOutOfRange, InvariantError
from orthomatch.core.homography import (
    Homography, compose, rotation_homography, transform_points,
    translation_homography
)
from orthomatch.imaging.image import Image
from orthomatch.imaging.warping import warp

__all__ = ['SynthConfig', 'TransformParams', 'PairSpec', 'derive_seed',
           'sample_homography', 'sample_pair_spec', 'generate_pair',
           'SAFE_SCALE', 'MAX_SHEAR', 'MAX_PERSPECTIVE']

SAFE_SCALE = (0.7, 1.4)
MAX_SHEAR = 0.15
MAX_PERSPECTIVE = 1e-4
H_GT_TOLERANCE = 1e-12
CANVAS_SLACK = 1e-6


class SynthConfig(namedtuple('SynthConfig',
                             'crop_size rotation_step scale_range shear '
                             'perspective noise_sigma')):
    """
    Pair generation parameters.

    Attributes
    ----------
    crop_size : int
        Side of the square crop (clamped to the source size).
    rotation_step : float
        Rotation angles are multiples of this step in degrees; must
        divide 360.
    scale_range : tuple of float
        (low, high) isotropic scale, within [0.7, 1.4].
    shear : float
        Maximal absolute shear, <= 0.15.
    perspective : float
        Maximal absolute perspective coefficient per pixel, <= 1e-4.
    noise_sigma : float
        Standard deviation of Gaussian noise added to the second image.

    """

    __slots__ = ()

    def __new__(cls, crop_size=400, rotation_step=15.0, scale_range=(1.0, 1.0),
                shear=0.0, perspective=0.0, noise_sigma=0.0):
        return super(SynthConfig, cls).__new__(
            cls, int(crop_size), float(rotation_step),
            tuple(float(s) for s in scale_range), float(shear),
            float(perspective), float(noise_sigma))

    def validate(self):
        """Raise ConfigOutOfRange on every value outside its safe range."""
        problems = []
        low, high = self.scale_range
        if not SAFE_SCALE[0] <= low <= high <= SAFE_SCALE[1]:
            problems.append('scale_range {} not within {}'
                            .format(self.scale_range, SAFE_SCALE))
        if not 0 <= self.shear <= MAX_SHEAR:
            problems.append('shear {} not in [0, {}]'
                            .format(self.shear, MAX_SHEAR))
        if not 0 <= self.perspective <= MAX_PERSPECTIVE:
            problems.append('perspective {} not in [0, {}]'
                            .format(self.perspective, MAX_PERSPECTIVE))
        if not 0 <= self.noise_sigma <= 1:
            problems.append('noise_sigma {} not in [0, 1]'
                            .format(self.noise_sigma))
        if self.crop_size < 16:
            problems.append('crop_size {} below 16'.format(self.crop_size))
        if self.rotation_step <= 0 or abs(
                360.0 / self.rotation_step
                - round(360.0 / self.rotation_step)) > 1e-9:
            problems.append('rotation_step {} does not divide 360'
                            .format(self.rotation_step))
        if problems:
            raise ConfigOutOfRange('Invalid synthetic data config: {}.'
                                   .format('; '.join(problems)))
        return self

    @property
    def rotation_count(self):
        return int(round(360.0 / self.rotation_step))

    def to_json(self):
        return dict(self._asdict(), scale_range=list(self.scale_range))


class TransformParams(namedtuple('TransformParams',
                                 'theta scale shear perspective center')):
    """
    Primitive parameters of a pair homography.

    Attributes
    ----------
    theta : float
        Rotation in degrees.
    scale : float
        Isotropic scale.
    shear : float
        Horizontal shear factor.
    perspective : tuple of float
        (px, py) entries of the projective row.
    center : tuple of float
        Crop center all primitives act about.

    """

    __slots__ = ()

    def homography(self):
        """R P Sh S about the center: scale first, rotation last."""
        cx, cy = self.center
        px, py = self.perspective
        about = translation_homography(-cx, -cy)
        back = translation_homography(cx, cy)
        scale = Homography(numpy.diag([self.scale, self.scale, 1.0]))
        shear = Homography([[1.0, self.shear, 0.0], [0.0, 1.0, 0.0],
                            [0.0, 0.0, 1.0]])
        perspective = Homography([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0],
                                  [px, py, 1.0]])
        local = compose(perspective, compose(shear, scale))
        warp_part = compose(back, compose(local, about))
        return compose(rotation_homography(self.theta, self.center),
                       warp_part)

    def to_json(self):
        return {'theta': self.theta, 'scale': self.scale,
                'shear': self.shear, 'perspective': list(self.perspective),
                'center': list(self.center)}


def derive_seed(corpus_seed, index):
    """Independent per-entry seed from the corpus seed and entry index."""
    sequence = numpy.random.SeedSequence([int(corpus_seed), int(index)])
    return int(sequence.generate_state(1, dtype=numpy.uint32)[0])


def sample_homography(seed, config, center):
    """
    Draw the transform part of a pair.

    The rotation is uniform over the multiples of config.rotation_step;
    scale, shear and perspective are uniform within their ranges. Values
    are always drawn in the same order so a seed fixes every parameter.

    Parameters
    ----------
    seed : int
        PRNG seed.
    config : SynthConfig
        Ranges.
    center : tuple of float
        Center the primitives act about.

    Returns
    -------
    TransformParams
        Sampled parameters.

    Raises
    ------
    ConfigOutOfRange
        When a range exceeds its safe bounds.

    """
    config.validate()
    rng = numpy.random.Generator(numpy.random.PCG64(seed))
    return _draw(rng, config, center)


def _draw(rng, config, center):
    step = int(rng.integers(0, config.rotation_count))
    low, high = config.scale_range
    scale = float(rng.uniform(low, high))
    shear = float(rng.uniform(-config.shear, config.shear))
    px, py = rng.uniform(-config.perspective, config.perspective, 2)
    return TransformParams(step * config.rotation_step, scale, shear,
                           (float(px), float(py)),
                           (float(center[0]), float(center[1])))


class PairSpec(object):
    """
    Full description of a generated pair.

    Attributes
    ----------
    source : str
        Source image identifier.
    crop : tuple of int
        (x0, y0, width, height) of the crop in the source image.
    params : TransformParams
        Primitive parameters.
    offset : tuple of float
        Canvas translation applied after the primitives.
    canvas : tuple of int
        (width, height) of the second image.
    seed : int
        Seed the spec was drawn from.
    h_gt : Homography
        Map from first to second image pixels.

    """

    def __init__(self, source, crop, params, seed, offset=None, canvas=None):
        self.source = source
        self.crop = tuple(int(v) for v in crop)
        self.params = params
        self.seed = int(seed)
        core = params.homography()
        if offset is None:
            offset, canvas = _canvas(core, self.crop[2], self.crop[3])
        self.offset = (float(offset[0]), float(offset[1]))
        self.canvas = (int(canvas[0]), int(canvas[1]))
        self.h_gt = compose(translation_homography(*self.offset), core)

    def to_json(self):
        return {'source': self.source, 'crop': list(self.crop),
                'params': self.params.to_json(), 'seed': self.seed,
                'offset': list(self.offset), 'canvas': list(self.canvas)}

    @classmethod
    def from_json(cls, data, h_gt=None):
        """
        Rebuild a spec; if h_gt is given it must match the composition of
        the stored primitives within 1e-12.
        """
        params = data['params']
        spec = cls(data['source'], data['crop'], TransformParams(
            float(params['theta']), float(params['scale']),
            float(params['shear']), tuple(params['perspective']),
            tuple(params['center'])), data['seed'], data['offset'],
            data['canvas'])
        if h_gt is not None and numpy.linalg.norm(
                spec.h_gt.matrix - h_gt.matrix) > H_GT_TOLERANCE:
            raise InvariantError('Stored H_gt differs from its primitives.')
        return spec


def _canvas(core, width, height):
    corners = numpy.array([[0, 0], [width - 1, 0], [width - 1, height - 1],
                           [0, height - 1]], dtype=float)
    mapped, finite = transform_points(core, corners)
    if not finite.all():
        raise InvariantError('Crop corners map to infinity.')
    low = numpy.floor(mapped.min(axis=0) + CANVAS_SLACK)
    high = mapped.max(axis=0) - low
    size = numpy.ceil(high - CANVAS_SLACK).astype(int) + 1
    return (0.0 - low[0], 0.0 - low[1]), (int(size[0]), int(size[1]))


def sample_pair_spec(source, image_size, seed, config):
    """
    Draw crop position and transform for one pair.

    Parameters
    ----------
    source : str
        Source image identifier.
    image_size : tuple of int
        (width, height) of the source image.
    seed : int
        Entry seed.
    config : SynthConfig
        Generation parameters.

    Returns
    -------
    PairSpec
        Pair description.

    """
    config.validate()
    width, height = image_size
    crop_w = min(config.crop_size, width)
    crop_h = min(config.crop_size, height)
    rng = numpy.random.Generator(numpy.random.PCG64(seed))
    params = _draw(rng, config, ((crop_w - 1) / 2.0, (crop_h - 1) / 2.0))
    x0 = int(rng.integers(0, width - crop_w + 1))
    y0 = int(rng.integers(0, height - crop_h + 1))
    return PairSpec(source, (x0, y0, crop_w, crop_h), params, seed)


def generate_pair(source, spec, noise_sigma=0.0):
    """
    Render the two images of a pair.

    Parameters
    ----------
    source : orthomatch.imaging.Image
        Source image.
    spec : PairSpec
        Pair description.
    noise_sigma : float
        Standard deviation of Gaussian noise added to valid pixels of the
        second image (seeded by spec.seed).

    Returns
    -------
    first, second : orthomatch.imaging.Image
        Crop and its warp.
    h_gt : Homography
        Map from first to second image pixels.

    """
    x0, y0, width, height = spec.crop
    first = source.crop(x0, y0, width, height)
    warped = warp(first, spec.h_gt, spec.canvas[0], spec.canvas[1])
    second = warped.image
    if noise_sigma > 0:
        rng = numpy.random.Generator(numpy.random.PCG64(spec.seed))
        noise = rng.normal(0.0, noise_sigma, second.shape)
        valid = warped.validity
        if second.channels == 3:
            valid = valid[..., None]
        second = Image(numpy.clip(numpy.where(valid, second.data + noise,
                                              second.data), 0.0, 1.0))
    return first, second, spec.h_gt
