"""
End-to-end matching of an image pair.

Stages run in order: optional orthographic rectification of both views,
Harris detection, description by every enabled head, mutual nearest
neighbour matching per head, the correspondence ensemble, back-projection
of ortho matches to the perspective images and RANSAC verification. The
verified model therefore always relates perspective pixels (or perspective
camera frames for pose3d).
"""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
from collections import namedtuple, OrderedDict
from contextlib import contextmanager
import logging
import os.path
import time
import numpy
from scipy import ndimage

# local imports
from orthomatch.errors import (
    ConfigurationError, OrthomatchError, PipelineError
)
from orthomatch.core.serialization import intrinsics_from_json
from orthomatch.features.descriptors import PATCH_SIZE, describe
from orthomatch.features.harris import detect_harris
from orthomatch.imaging.image import grayscale
from orthomatch.imaging.io import read_depth, read_image
from orthomatch.matching.combination import ensemble
from orthomatch.matching.mnn import match_mnn
from orthomatch.matching.ransac import ransac_homography, ransac_pose_3d
from orthomatch.ortho.ortho_view import (
    apply_ortho, backproject_matches, ipm_from_json, ortho_from_depth
)
from orthomatch.ortho.roi import ROI

__all__ = ['View', 'PipelineResult', 'run_pipeline', 'view_from_entry',
           'detect_and_describe', 'STAGES']

logger = logging.getLogger(__name__)

STAGES = ('ortho', 'detect', 'describe', 'match', 'ensemble', 'backproject',
          'ransac')

View = namedtuple('View', 'id image depth intrinsics roi ipm')
View.__new__.__defaults__ = (None, None, None, None)
View.__doc__ = """
One perspective image with its optional geometry.

Attributes
----------
id : str
    Identifier used in messages and match sets.
image : orthomatch.imaging.Image
depth : orthomatch.imaging.DepthMap or None
intrinsics : orthomatch.core.Intrinsics or None
roi : orthomatch.ortho.ROI or None
    Plane region for depth-based rectification.
ipm : orthomatch.ortho.OrthoSpec or None
    Fixed top-view mapping for IPM rectification.
"""


class PipelineResult(namedtuple('PipelineResult',
                                'matches ransac timings ortho head_matches')):
    """
    Outcome of :func:`run_pipeline`.

    Attributes
    ----------
    matches : MatchSet
        Final matches in perspective pixel coordinates.
    ransac : RansacResult or None
        Verification result; None when the model is 'none'.
    timings : OrderedDict
        Seconds spent per stage.
    ortho : tuple
        OrthoSpec of both views, or (None, None) without rectification.
    head_matches : dict
        MNN matches per head, before the ensemble, in the coordinates the
        descriptors were computed in.

    """

    __slots__ = ()


def view_from_entry(entry, root='', load_depth=True):
    """
    Load a manifest entry as a View.

    Parameters
    ----------
    entry : dict
        Entry with 'id', 'image' and optional 'depth', 'k', 'roi' and
        'ipm' ({"pairs", "size"} or {"h_ortho", "size"}).
    root : str
        Directory that relative paths start from.
    load_depth : bool
        Read the depth file when present.

    """
    image = read_image(os.path.join(root, entry['image']))
    depth = None
    if load_depth and entry.get('depth'):
        depth = read_depth(os.path.join(root, entry['depth']),
                           (image.height, image.width))
    intrinsics = None
    if entry.get('k') is not None:
        intrinsics = intrinsics_from_json({'k': entry['k']})
    roi = None
    if entry.get('roi') is not None:
        roi = ROI.from_json(entry['roi'])
    ipm = None
    if entry.get('ipm') is not None:
        ipm = ipm_from_json(entry['ipm'])
    return View(entry['id'], image, depth, intrinsics, roi, ipm)


class _Stages(object):
    """Times stages and wraps their failures with entry context."""

    def __init__(self, entry):
        self.entry = entry
        self.timings = OrderedDict()

    @contextmanager
    def run(self, name):
        start = time.perf_counter()
        try:
            yield
        except ConfigurationError:
            raise
        except OrthomatchError as error:
            raise PipelineError(name, self.entry, error) from error
        finally:
            self.timings[name] = (self.timings.get(name, 0.0)
                                  + time.perf_counter() - start)


def _check_inputs(views, config, entry):
    problems = []
    for view in views:
        if config.ortho.enabled and config.ortho.mode == 'depth' and (
                view.depth is None or view.intrinsics is None):
            problems.append('stage ortho: view {} needs depth and '
                            'intrinsics'.format(view.id))
        if config.ortho.enabled and config.ortho.mode == 'ipm' \
                and view.ipm is None:
            problems.append('stage ortho: view {} has no IPM mapping'
                            .format(view.id))
        if config.ransac.model == 'pose3d' and (
                view.depth is None or view.intrinsics is None):
            problems.append('stage ransac: view {} needs depth and '
                            'intrinsics for pose3d'.format(view.id))
    if problems:
        raise ConfigurationError('entry {}: {}.'.format(
            entry, '; '.join(problems)))


def _rectify(view, config):
    if config.ortho.mode == 'depth':
        return ortho_from_depth(view.image, view.depth, view.intrinsics,
                                view.roi, config.ortho.standoff,
                                config.ortho.max_side)
    return apply_ortho(view.image, view.ipm), view.ipm


def detect_and_describe(image, config, heads, name='', mask=None):
    """
    Harris keypoints and descriptors of every requested head.

    Parameters
    ----------
    image : orthomatch.imaging.Image
        Image (converted to gray).
    config : PipelineConfig
        Detector and descriptor parameters.
    heads : iterable of str
        'vanilla' and/or 'robust'.
    name : str
        Image identifier.
    mask : numpy.ndarray, optional
        Pixels allowed as keypoints.

    Returns
    -------
    dict
        head -> DescriptorSet.

    """
    gray = grayscale(image)
    return _describe(gray, _detect(gray, config, mask), config, heads, name)


def _detect(gray, config, mask):
    detector = config.detector
    return detect_harris(gray, detector.max_keypoints, detector.nms_radius,
                         detector.harris_k, detector.sigma, mask)


def _describe(gray, keypoints, config, heads, name):
    descriptor = config.descriptor
    return {head: describe(gray, keypoints, head, descriptor.dimension,
                           descriptor.smoothing,
                           descriptor.orientation_radius, name)
            for head in heads}


def _keypoint_mask(validity, config):
    """Valid pixels far enough from invalid ones for a full patch."""
    margin = max(PATCH_SIZE // 2, config.descriptor.orientation_radius) + 1
    return ndimage.minimum_filter(validity.astype(numpy.uint8),
                                  size=2 * margin + 1, mode='constant',
                                  cval=0).astype(bool)


def run_pipeline(view_a, view_b, config, entry=None):
    """
    Match two views and verify the matches.

    Parameters
    ----------
    view_a, view_b : View
        The image pair.
    config : PipelineConfig
        Pipeline parameters.
    entry : str, optional
        Entry identifier for messages; defaults to 'a_id/b_id'.

    Returns
    -------
    PipelineResult

    Raises
    ------
    ConfigurationError
        When an input required by the configuration is missing.
    PipelineError
        When a stage fails; the stage name, entry and cause are attached.

    """
    entry = entry or '{}/{}'.format(view_a.id, view_b.id)
    _check_inputs((view_a, view_b), config, entry)
    stages = _Stages(entry)
    images, masks, specs = [], [], [None, None]
    if config.ortho.enabled:
        with stages.run('ortho'):
            for index, view in enumerate((view_a, view_b)):
                warped, specs[index] = _rectify(view, config)
                images.append(warped.image)
                masks.append(_keypoint_mask(warped.validity, config))
    else:
        images = [view_a.image, view_b.image]
        masks = [None, None]

    heads = config.heads
    with stages.run('detect'):
        grays = [grayscale(image) for image in images]
        keypoints = [_detect(gray, config, mask)
                     for gray, mask in zip(grays, masks)]
    with stages.run('describe'):
        sets = [_describe(gray, kps, config, heads, view.id)
                for gray, kps, view in zip(grays, keypoints,
                                           (view_a, view_b))]
    with stages.run('match'):
        head_matches = {head: match_mnn(sets[0][head], sets[1][head])
                        for head in heads}
    if config.descriptor.head == 'ensemble':
        with stages.run('ensemble'):
            matches = ensemble(head_matches['vanilla'],
                               head_matches['robust'],
                               config.ensemble.keep_fraction,
                               config.ensemble.collapse_radius)
    else:
        matches = head_matches[config.descriptor.head]
    if config.ortho.enabled:
        with stages.run('backproject'):
            matches, _ = backproject_matches(matches, specs[0], specs[1])

    result = None
    if config.ransac.model != 'none':
        ransac = config.ransac
        with stages.run('ransac'):
            if ransac.model == 'homography':
                result = ransac_homography(matches, ransac.threshold_px,
                                           ransac.max_iters,
                                           ransac.confidence, config.seed)
            else:
                result = ransac_pose_3d(matches, view_a.depth, view_b.depth,
                                        view_a.intrinsics,
                                        view_b.intrinsics,
                                        ransac.threshold_m, ransac.max_iters,
                                        ransac.confidence, config.seed)
    logger.debug('entry %s: %d matches; timings %s', entry, len(matches),
                 ', '.join('{}={:.3f}s'.format(k, v)
                           for k, v in stages.timings.items()))
    return PipelineResult(matches, result, stages.timings, tuple(specs),
                          head_matches)
