"""Matching accuracy and pose error metrics."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
from collections import namedtuple
import numpy

# local imports
from orthomatch.errors import InvariantError
from orthomatch.core.camera import Pose
from orthomatch.core.homography import transform_points

__all__ = ['MMAConfig', 'MMAResult', 'PoseError', 'mma',
           'reprojection_errors', 'rotation_error', 'translation_error',
           'relative_pose', 'pose_error', 'DEFAULT_THRESHOLDS']

DEFAULT_THRESHOLDS = tuple(range(1, 11))


class MMAConfig(namedtuple('MMAConfig', 'thresholds max_keypoints')):
    """
    Mean matching accuracy parameters.

    Attributes
    ----------
    thresholds : tuple of float
        Pixel thresholds, positive and strictly ascending.
    max_keypoints : int
        Keypoints detected per image.

    """

    __slots__ = ()

    def __new__(cls, thresholds=DEFAULT_THRESHOLDS, max_keypoints=2000):
        thresholds = tuple(float(t) for t in thresholds)
        if not thresholds or thresholds[0] <= 0 or any(
                b <= a for a, b in zip(thresholds, thresholds[1:])):
            raise InvariantError('Thresholds must be positive and ascending, '
                                 'got {}.'.format(thresholds))
        if int(max_keypoints) < 1:
            raise InvariantError('max_keypoints must be positive.')
        return super(MMAConfig, cls).__new__(cls, thresholds,
                                             int(max_keypoints))

    def to_json(self):
        return {'thresholds': list(self.thresholds),
                'max_keypoints': self.max_keypoints}


MMAResult = namedtuple('MMAResult', 'thresholds accuracies match_count empty')


def reprojection_errors(matches, homography):
    """
    Distance between H a and b for every match; infinite when a maps to
    infinity.
    """
    if len(matches) == 0:
        return numpy.zeros(0)
    mapped, finite = transform_points(homography, matches.points_a)
    errors = numpy.linalg.norm(mapped - matches.points_b, axis=1)
    errors[~finite] = numpy.inf
    return errors


def mma(matches, homography, thresholds=DEFAULT_THRESHOLDS):
    """
    Matching accuracy per pixel threshold.

    A match is correct at threshold t when the ground-truth reprojection
    of its first endpoint lies strictly closer than t to its second
    endpoint.

    Parameters
    ----------
    matches : orthomatch.matching.MatchSet
        Matches with endpoint coordinates.
    homography : orthomatch.core.Homography
        Ground truth mapping image A to image B.
    thresholds : iterable of float
        Pixel thresholds.

    Returns
    -------
    MMAResult
        Accuracy per threshold; an empty match set gives accuracy 0 with
        empty set to True.

    """
    thresholds = tuple(float(t) for t in thresholds)
    errors = reprojection_errors(matches, homography)
    if len(errors) == 0:
        return MMAResult(thresholds, [0.0] * len(thresholds), 0, True)
    accuracies = [float(numpy.mean(errors < t)) for t in thresholds]
    return MMAResult(thresholds, accuracies, len(errors), False)


PoseError = namedtuple('PoseError', 'angular_error translation_error')
PoseError.__doc__ = """Rotation error in degrees and translation error in
meters."""


def rotation_error(rotation_hat, rotation_gt):
    """
    Angle in degrees of R_hat R_gt^T.

    Computed from the trace, which equals the norm of the rotation log
    divided by sqrt(2); the cosine is clamped to [-1, 1].

    """
    relative = numpy.asarray(rotation_hat).dot(numpy.asarray(rotation_gt).T)
    cosine = (numpy.trace(relative) - 1.0) / 2.0
    return float(numpy.degrees(numpy.arccos(numpy.clip(cosine, -1.0, 1.0))))


def translation_error(translation_hat, translation_gt):
    return float(numpy.linalg.norm(numpy.asarray(translation_hat, dtype=float)
                                   - numpy.asarray(translation_gt,
                                                   dtype=float)))


def relative_pose(pose_a, pose_b):
    """
    Pose mapping camera A coordinates to camera B coordinates, from two
    camera-to-world poses: R = R_b^T R_a, t = R_b^T (t_a - t_b).
    """
    rotation_bt = pose_b.rotation.T
    return Pose(rotation_bt.dot(pose_a.rotation),
                rotation_bt.dot(pose_a.translation - pose_b.translation))


def pose_error(estimate, truth):
    return PoseError(rotation_error(estimate.rotation, truth.rotation),
                     translation_error(estimate.translation,
                                       truth.translation))
