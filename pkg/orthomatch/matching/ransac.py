"""
RANSAC geometric verification.

One hypothesis loop serves both models: planar homographies from 4-point
DLT samples and rigid 3D poses from 3-point Procrustes samples.
Hypotheses are solved and scored in batches of stacked arrays; only the
final least-squares refit goes through the fully validated estimators.
Samples are drawn with numpy's PCG64 generator seeded by the caller, so
a seed fixes the result bit for bit.
"""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
from collections import namedtuple
import logging
import math
import numpy

# local imports
from orthomatch.errors import (
    DegenerateConfiguration, DegenerateHomography, DegenerateSample,
    InsufficientMatches, NoModelFound
)
from orthomatch.core.camera import Pose
from orthomatch.core.dlt import (
    homography_from_point_pairs, minimal_homographies
)
from orthomatch.core.homography import (
    Homography, normalize_matrices, transform_point_stack
)
from orthomatch.core.serialization import homography_to_json, pose_to_json
from orthomatch.imaging.depth import backproject_pixels

__all__ = ['RansacResult', 'ransac_homography', 'ransac_pose_3d',
           'ransac_rigid', 'rigid_transform', 'symmetric_transfer_error',
           'adaptive_iterations']

logger = logging.getLogger(__name__)

COLLINEARITY_TOLERANCE = 1e-9
BATCH_SIZE = 64


class RansacResult(namedtuple('RansacResult',
                              'model inliers inlier_count iterations')):
    """
    Outcome of a RANSAC run.

    Attributes
    ----------
    model : Homography or Pose
        Model refit on the inliers.
    inliers : numpy.ndarray
        Boolean flag per input match, tested against model.
    inlier_count : int
        Number of true flags.
    iterations : int
        Hypotheses drawn before the adaptive cutoff.

    """

    __slots__ = ()

    def to_json(self):
        if isinstance(self.model, Pose):
            model = dict(pose_to_json(self.model), type='pose3d')
        else:
            model = dict(homography_to_json(self.model), type='homography')
        return {'model': model, 'inliers': self.inliers.tolist(),
                'inlier_count': self.inlier_count,
                'iterations': self.iterations}


def adaptive_iterations(inlier_ratio, sample_size, confidence, max_iters):
    """N = log(1 - confidence) / log(1 - w^s), capped at max_iters."""
    all_inliers = inlier_ratio ** sample_size
    if all_inliers >= 1:
        return 1
    if all_inliers <= 0:
        return max_iters
    needed = math.log(1.0 - confidence) / math.log(1.0 - all_inliers)
    return int(min(max_iters, max(1, math.ceil(needed))))


def _run(count, sample_size, hypotheses, residuals, threshold, max_iters,
         confidence, seed):
    """
    Hypothesis loop over batches of minimal samples.

    hypotheses maps a (B, sample_size) index array to a (B, ...) model
    stack and a validity mask; residuals maps a model stack to (B, count)
    residuals. Samples are drawn one at a time from the seeded generator
    and visited in order, so the adaptive cutoff falls on the same
    hypothesis as a one-by-one loop.
    """
    rng = numpy.random.Generator(numpy.random.PCG64(seed))
    best, best_inliers, best_count = None, None, 0
    needed = max_iters
    iterations = 0
    while iterations < needed:
        batch = min(BATCH_SIZE, needed - iterations)
        samples = numpy.array([rng.choice(count, sample_size, replace=False)
                               for _ in range(batch)])
        models, valid = hypotheses(samples)
        inliers = numpy.zeros((batch, count), dtype=bool)
        if valid.any():
            inliers[valid] = residuals(models[valid]) < threshold
        counts = inliers.sum(axis=1)
        for index in range(batch):
            iterations += 1
            if counts[index] > best_count:
                best, best_inliers = models[index], inliers[index]
                best_count = int(counts[index])
                needed = adaptive_iterations(best_count / float(count),
                                             sample_size, confidence,
                                             max_iters)
            if iterations >= needed:
                break
    if best is None or best_count < sample_size:
        raise NoModelFound('No hypothesis reached {} inliers in {} '
                           'iterations.'.format(sample_size, iterations))
    return best, best_inliers, iterations


def _refit(best, inliers, fit, residuals, threshold, sample_size,
           degenerate):
    """Least-squares refit on the inliers; keeps best if the refit fails."""
    try:
        model = fit(numpy.nonzero(inliers)[0])
    except degenerate:
        return best, inliers
    refit_inliers = residuals(model) < threshold
    if refit_inliers.sum() >= sample_size:
        return model, refit_inliers
    return best, inliers


def _transfer_errors(matrices, source, target):
    inverses, _ = normalize_matrices(numpy.linalg.inv(matrices))
    forward, finite_f = transform_point_stack(matrices, source)
    backward, finite_b = transform_point_stack(inverses, target)
    squared = (((forward - target) ** 2).sum(axis=2)
               + ((backward - source) ** 2).sum(axis=2))
    errors = numpy.sqrt(squared / 2.0)
    errors[~(finite_f & finite_b)] = numpy.inf
    return errors


def symmetric_transfer_error(homography, source, target):
    """
    Per-pair sqrt((|H a - b|^2 + |H^-1 b - a|^2) / 2); infinite when a
    point maps to infinity.
    """
    return _transfer_errors(homography.matrix[None], source, target)[0]


def ransac_homography(matches, threshold_px=3.0, max_iters=2000,
                      confidence=0.999, seed=0):
    """
    Verify matches with a homography.

    Parameters
    ----------
    matches : MatchSet
        Candidate correspondences (endpoint coordinates are used).
    threshold_px : float
        Inlier bound on the symmetric transfer error, in pixels.
    max_iters : int
        Hypothesis cap.
    confidence : float
        Target probability of drawing one all-inlier sample.
    seed : int
        PRNG seed.

    Returns
    -------
    RansacResult
        Homography mapping image A pixels to image B pixels.

    Raises
    ------
    InsufficientMatches
        With fewer than 4 matches.
    NoModelFound
        When no sample gathers 4 inliers.

    """
    if len(matches) < 4:
        raise InsufficientMatches('Homography RANSAC needs 4 matches, got {}.'
                                  .format(len(matches)))
    source, target = matches.points_a, matches.points_b

    def hypotheses(samples):
        return minimal_homographies(source[samples], target[samples])

    def fit(sample):
        return homography_from_point_pairs(source[sample], target[sample])

    def residuals(model):
        return symmetric_transfer_error(model, source, target)

    best, inliers, iterations = _run(
        len(matches), 4, hypotheses,
        lambda matrices: _transfer_errors(matrices, source, target),
        threshold_px, max_iters, confidence, seed)
    model, inliers = _refit(Homography(best), inliers, fit, residuals,
                            threshold_px, 4,
                            (DegenerateConfiguration, DegenerateHomography))
    logger.debug('Homography RANSAC: %d/%d inliers after %d iterations.',
                 int(inliers.sum()), len(matches), iterations)
    return RansacResult(model, inliers, int(inliers.sum()), iterations)


def _rigid_stack(points_a, points_b):
    """
    Kabsch solve on (B, N, 3) stacks.

    Returns (B, 3, 4) [R | t] models and a validity mask, False where the
    points of A are collinear or coincident.
    """
    centroid_a = points_a.mean(axis=1)
    centroid_b = points_b.mean(axis=1)
    centred_a = points_a - centroid_a[:, None, :]
    centred_b = points_b - centroid_b[:, None, :]
    singular = numpy.linalg.svd(centred_a, compute_uv=False)
    valid = ((singular[:, 0] > 0)
             & (singular[:, 1] > COLLINEARITY_TOLERANCE * singular[:, 0]))
    u, _, vt = numpy.linalg.svd(numpy.einsum('bki,bkj->bij', centred_a,
                                             centred_b))
    v, ut = vt.transpose(0, 2, 1), u.transpose(0, 2, 1)
    correction = numpy.tile(numpy.eye(3), (len(points_a), 1, 1))
    correction[:, 2, 2] = numpy.where(
        numpy.linalg.det(numpy.matmul(v, ut)) < 0, -1.0, 1.0)
    rotations = numpy.matmul(numpy.matmul(v, correction), ut)
    models = numpy.empty((len(points_a), 3, 4))
    models[:, :, :3] = rotations
    models[:, :, 3] = centroid_b - numpy.einsum('bij,bj->bi', rotations,
                                                centroid_a)
    return models, valid


def _rigid_residuals(models, points_a, points_b):
    moved = (numpy.einsum('bij,nj->bni', models[:, :, :3], points_a)
             + models[:, None, :, 3])
    return numpy.linalg.norm(moved - points_b, axis=2)


def rigid_transform(points_a, points_b):
    """
    Least-squares rigid transform with points_b = R points_a + t.

    Orthogonal Procrustes (Kabsch) with a reflection guard, so the
    rotation is always proper.

    Raises
    ------
    DegenerateSample
        When points_a are collinear or coincident.

    """
    points_a = numpy.asarray(points_a, dtype=float).reshape(-1, 3)
    points_b = numpy.asarray(points_b, dtype=float).reshape(-1, 3)
    if len(points_a) < 3:
        raise DegenerateSample('A rigid transform needs 3 points.')
    models, valid = _rigid_stack(points_a[None], points_b[None])
    if not valid[0]:
        raise DegenerateSample('Points are collinear or coincident.')
    return Pose(models[0, :, :3], models[0, :, 3])


def ransac_rigid(points_a, points_b, threshold_m=0.05, max_iters=2000,
                 confidence=0.999, seed=0):
    """
    RANSAC over 3D-3D correspondences.

    Returns
    -------
    RansacResult
        Pose mapping frame A to frame B; inlier iff the 3D residual
        |R a + t - b| is below threshold_m.

    """
    points_a = numpy.asarray(points_a, dtype=float).reshape(-1, 3)
    points_b = numpy.asarray(points_b, dtype=float).reshape(-1, 3)
    if len(points_a) < 3:
        raise InsufficientMatches('Pose RANSAC needs 3 matches, got {}.'
                                  .format(len(points_a)))

    def hypotheses(samples):
        return _rigid_stack(points_a[samples], points_b[samples])

    def fit(sample):
        return rigid_transform(points_a[sample], points_b[sample])

    def residuals(model):
        return numpy.linalg.norm(model.apply(points_a) - points_b, axis=1)

    best, inliers, iterations = _run(
        len(points_a), 3, hypotheses,
        lambda models: _rigid_residuals(models, points_a, points_b),
        threshold_m, max_iters, confidence, seed)
    model, inliers = _refit(Pose(best[:, :3], best[:, 3]), inliers, fit,
                            residuals, threshold_m, 3, DegenerateSample)
    return RansacResult(model, inliers, int(inliers.sum()), iterations)


def ransac_pose_3d(matches, depth_a, depth_b, intrinsics_a, intrinsics_b,
                   threshold_m=0.05, max_iters=2000, confidence=0.999,
                   seed=0):
    """
    Verify matches with a rigid pose from depth.

    Both endpoints are back-projected with the depth of their nearest
    pixel. Matches lacking valid depth at either endpoint never count as
    inliers.

    Parameters
    ----------
    matches : MatchSet
        Candidate correspondences.
    depth_a, depth_b : orthomatch.imaging.DepthMap
        Metric depth of both views.
    intrinsics_a, intrinsics_b : orthomatch.core.Intrinsics
        Intrinsics of both views.

    Returns
    -------
    RansacResult
        Pose mapping camera A coordinates to camera B coordinates, with
        one inlier flag per input match.

    Raises
    ------
    InsufficientMatches
        With fewer than 3 matches having depth at both endpoints.
    NoModelFound
        When no sample gathers 3 inliers.

    """
    cloud_a, valid_a = backproject_pixels(depth_a, intrinsics_a,
                                          matches.points_a)
    cloud_b, valid_b = backproject_pixels(depth_b, intrinsics_b,
                                          matches.points_b)
    usable = numpy.nonzero(valid_a & valid_b)[0]
    if len(usable) < 3:
        raise InsufficientMatches('Pose RANSAC needs 3 matches with depth, '
                                  'got {}.'.format(len(usable)))
    result = ransac_rigid(cloud_a[usable], cloud_b[usable], threshold_m,
                          max_iters, confidence, seed)
    inliers = numpy.zeros(len(matches), dtype=bool)
    inliers[usable] = result.inliers
    logger.debug('Pose RANSAC: %d/%d inliers (%d with depth) after %d '
                 'iterations.', result.inlier_count, len(matches),
                 len(usable), result.iterations)
    return RansacResult(result.model, inliers, result.inlier_count,
                        result.iterations)
