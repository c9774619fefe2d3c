"""
Evaluation protocols.

Each protocol runs the matching pipeline over the entries of a manifest
and assembles an :class:`EvalReport`. Entries are independent and may be
processed concurrently; records always follow manifest order.
"""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
import logging
import os.path
import numpy
from scipy.spatial import cKDTree
from tqdm import tqdm

# local imports
from orthomatch.errors import InvariantError, MatchingError, PipelineError
from orthomatch.core.serialization import pose_from_json
from orthomatch.config.manifest import load_manifest
from orthomatch.evaluation.metrics import (
    MMAConfig, mma, pose_error, relative_pose
)
from orthomatch.evaluation.report import EvalReport
from orthomatch.imaging.io import read_image
from orthomatch.matching.ransac import ransac_homography
from orthomatch.pipeline import View, run_pipeline, view_from_entry
from orthomatch.synth.corpus import load_corpus

__all__ = ['VPRConfig', 'eval_mma', 'eval_pose_protocol', 'eval_vpr',
           'map_entries']

logger = logging.getLogger(__name__)


class VPRConfig(namedtuple('VPRConfig', 'prior_radius localization_radius '
                           'report_radii')):
    """
    Place recognition radii in meters.

    Attributes
    ----------
    prior_radius : float
        References farther than this from the query are not candidates.
    localization_radius : float
        A retrieval is correct within this distance; below prior_radius.
    report_radii : tuple of float
        Extra radii recall is reported at, each at most prior_radius.

    """

    __slots__ = ()

    def __new__(cls, prior_radius=52.0, localization_radius=7.0,
                report_radii=(7.0, 30.0)):
        prior_radius = float(prior_radius)
        localization_radius = float(localization_radius)
        report_radii = tuple(float(r) for r in report_radii)
        if not 0 < localization_radius < prior_radius:
            raise InvariantError('Localization radius must lie in (0, prior '
                                 'radius), got {} and {}.'
                                 .format(localization_radius, prior_radius))
        if any(not 0 < r <= prior_radius for r in report_radii):
            raise InvariantError('Report radii must lie in (0, {}], got {}.'
                                 .format(prior_radius, report_radii))
        return super(VPRConfig, cls).__new__(cls, prior_radius,
                                             localization_radius,
                                             report_radii)

    def to_json(self):
        return {'prior_radius': self.prior_radius,
                'localization_radius': self.localization_radius,
                'report_radii': list(self.report_radii)}


def map_entries(function, items, workers=1, description=None,
                progress=True):
    """Apply function to every item, concurrently, keeping item order."""
    items = list(items)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        return list(tqdm(executor.map(function, items), total=len(items),
                         desc=description, disable=not progress))


def _single_view(path, view_id):
    return View(view_id, read_image(path))


def eval_mma(corpus_path, config, mma_config=None, verified=False,
             progress=True):
    """
    Mean matching accuracy over a rotated-pair corpus.

    Parameters
    ----------
    corpus_path : str
        Corpus manifest.
    config : PipelineConfig
        Pipeline parameters; RANSAC settings apply to verification only.
    mma_config : MMAConfig, optional
        Thresholds and keypoint budget; the budget overrides
        detector.max_keypoints.
    verified : bool
        Also score the subset of matches that RANSAC homography
        verification keeps.
    progress : bool
        Show a progress bar.

    Returns
    -------
    EvalReport
        Kind 'mma'; records carry the accuracy per threshold of each pair.

    """
    mma_config = mma_config or MMAConfig()
    entries = load_corpus(corpus_path)
    pipeline_config = config.replace(
        detector={'max_keypoints': mma_config.max_keypoints},
        ransac={'model': 'none'})

    def evaluate(entry):
        view_a = _single_view(entry.image_a, entry.id + '/a')
        view_b = _single_view(entry.image_b, entry.id + '/b')
        record = {'id': entry.id, 'theta': entry.theta}
        try:
            result = run_pipeline(view_a, view_b, pipeline_config, entry.id)
        except PipelineError as error:
            logger.warning('%s', error)
            result = None
        matches = result.matches if result else None
        scored = mma(matches, entry.h_gt, mma_config.thresholds) \
            if matches is not None else None
        record['matches'] = scored.match_count if scored else 0
        record['accuracy'] = (scored.accuracies if scored
                              else [0.0] * len(mma_config.thresholds))
        record['empty'] = scored.empty if scored else True
        if verified:
            record.update(_verified_accuracy(matches, entry, pipeline_config,
                                             mma_config))
        return record

    records = map_entries(evaluate, entries, config.effective_workers(),
                          'eval-mma', progress)
    return EvalReport('mma', {'pipeline': pipeline_config.to_json(),
                              'mma': mma_config.to_json(),
                              'verified': verified,
                              'corpus': os.path.abspath(corpus_path)},
                      {'pipeline': config.seed}, records)


def _verified_accuracy(matches, entry, config, mma_config):
    failed = [0.0] * len(mma_config.thresholds)
    if matches is None or len(matches) == 0:
        return {'verified_accuracy': failed, 'verified_matches': 0,
                'verification_failed': True}
    ransac = config.ransac
    try:
        result = ransac_homography(matches, ransac.threshold_px,
                                   ransac.max_iters, ransac.confidence,
                                   config.seed)
    except MatchingError as error:
        logger.debug('%s: verification failed (%s).', entry.id, error)
        return {'verified_accuracy': failed, 'verified_matches': 0,
                'verification_failed': True}
    scored = mma(matches.subset(result.inliers), entry.h_gt,
                 mma_config.thresholds)
    return {'verified_accuracy': scored.accuracies,
            'verified_matches': scored.match_count,
            'verification_failed': False}


def eval_pose_protocol(manifest_path, config, progress=True):
    """
    Relative pose errors between representatives and their candidates.

    Every (representative, candidate) pair is matched with the pipeline
    and verified with 3D-3D RANSAC on the depth of both views. Failed
    estimations are recorded as failures and excluded from the error
    statistics.

    Parameters
    ----------
    manifest_path : str
        Pose manifest.
    config : PipelineConfig
        Pipeline parameters; the RANSAC model is forced to pose3d.

    Returns
    -------
    EvalReport
        Kind 'pose'.

    Raises
    ------
    ManifestError
        When the manifest is invalid.

    """
    manifest = load_manifest(manifest_path, 'eval-pose')
    root = os.path.dirname(os.path.abspath(manifest_path))
    entries = {entry['id']: entry for entry in manifest['entries']}
    pipeline_config = config.replace(ransac={'model': 'pose3d'})
    tasks = [(pair['representative'], candidate)
             for pair in manifest['pairs']
             for candidate in pair['candidates']]

    def evaluate(task):
        first, second = entries[task[0]], entries[task[1]]
        record = {'representative': task[0], 'candidate': task[1],
                  'sequence': first.get('sequence', '')}
        truth = relative_pose(pose_from_json(first['pose']),
                              pose_from_json(second['pose']))
        try:
            result = run_pipeline(view_from_entry(first, root),
                                  view_from_entry(second, root),
                                  pipeline_config,
                                  '{}/{}'.format(*task))
        except PipelineError as error:
            logger.info('%s', error)
            record.update({'failed': True, 'angular_error': None,
                           'translation_error': None, 'inliers': 0,
                           'error': str(error.cause)})
            return record
        error = pose_error(result.ransac.model, truth)
        record.update({'failed': False,
                       'angular_error': error.angular_error,
                       'translation_error': error.translation_error,
                       'inliers': result.ransac.inlier_count})
        return record

    records = map_entries(evaluate, tasks, config.effective_workers(),
                          'eval-pose', progress)
    return EvalReport('pose', {'pipeline': pipeline_config.to_json(),
                               'manifest': os.path.abspath(manifest_path)},
                      {'pipeline': config.seed}, records)


def eval_vpr(queries_path, references_path, vpr_config, config,
             progress=True):
    """
    Place recognition recall with a positional prior.

    References within prior_radius of a query are its candidates. The
    retrieved reference has the most RANSAC-verified inliers; ties go to
    the nearest reference, then to the lowest id. A query is correct when
    the retrieved reference lies within localization_radius. Queries
    without candidates are incorrect and flagged.

    Returns
    -------
    EvalReport
        Kind 'vpr'.

    Raises
    ------
    ManifestError
        When a manifest is invalid.

    """
    queries = load_manifest(queries_path, 'eval-vpr')['entries']
    references = load_manifest(references_path, 'eval-vpr')['entries']
    query_root = os.path.dirname(os.path.abspath(queries_path))
    reference_root = os.path.dirname(os.path.abspath(references_path))
    coordinates = numpy.array([r['xy'] for r in references], dtype=float)
    tree = cKDTree(coordinates)
    pipeline_config = config.replace(ransac={'model': 'homography'})

    def evaluate(query):
        position = numpy.array(query['xy'], dtype=float)
        candidates = sorted(tree.query_ball_point(position,
                                                  vpr_config.prior_radius))
        record = {'query': query['id'], 'candidates': len(candidates),
                  'no_candidates': not candidates, 'retrieved': None,
                  'inliers': 0, 'distance': None, 'correct': False,
                  'correct_at': {repr(r): False
                                 for r in vpr_config.report_radii}}
        if not candidates:
            return record
        view = view_from_entry(query, query_root, load_depth=False)
        scores = []
        for index in candidates:
            reference = references[index]
            distance = float(numpy.linalg.norm(coordinates[index]
                                               - position))
            try:
                result = run_pipeline(
                    view, view_from_entry(reference, reference_root,
                                          load_depth=False),
                    pipeline_config,
                    '{}/{}'.format(query['id'], reference['id']))
                inliers = result.ransac.inlier_count
            except PipelineError as error:
                logger.debug('%s', error)
                inliers = 0
            scores.append((-inliers, distance, reference['id']))
        inliers, distance, retrieved = min(scores)
        record.update({'retrieved': retrieved, 'inliers': -inliers,
                       'distance': distance,
                       'correct': distance <= vpr_config.localization_radius,
                       'correct_at': {repr(r): distance <= r
                                      for r in vpr_config.report_radii}})
        return record

    records = map_entries(evaluate, queries, config.effective_workers(),
                          'eval-vpr', progress)
    return EvalReport('vpr', {'pipeline': pipeline_config.to_json(),
                              'vpr': vpr_config.to_json(),
                              'queries': os.path.abspath(queries_path),
                              'references':
                                  os.path.abspath(references_path)},
                      {'pipeline': config.seed}, records)
