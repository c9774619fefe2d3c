from __future__ import absolute_import, division, print_function

import numpy
import pytest
from scipy.spatial.transform import Rotation

from orthomatch.errors import InvariantError
from orthomatch.core.camera import Pose
from orthomatch.core.homography import Homography, translation_homography
from orthomatch.evaluation.metrics import (
    MMAConfig, mma, pose_error, relative_pose, reprojection_errors,
    rotation_error, translation_error
)
from orthomatch.evaluation.protocols import VPRConfig
from orthomatch.matching.match_set import MatchSet


def offset_matches(offsets):
    """Matches whose second endpoint misses the truth by the given pixels."""
    points = [[10.0 * i, 0.0, 10.0 * i + o, 0.0]
              for i, o in enumerate(offsets)]
    return MatchSet([(i, i, 0.1, 'vanilla') for i in range(len(offsets))],
                    points)


def test_mma_counts_strictly_closer_matches():
    result = mma(offset_matches([0.5, 5.0, 9.0]), Homography.identity(),
                 thresholds=(1, 5, 6, 10))
    assert numpy.allclose(result.accuracies, [1 / 3, 1 / 3, 2 / 3, 1.0])
    assert result.match_count == 3
    assert not result.empty


def test_mma_without_matches():
    result = mma(offset_matches([]), Homography.identity(), thresholds=(1, 2))
    assert result.accuracies == [0.0, 0.0]
    assert result.empty


def test_reprojection_uses_ground_truth():
    matches = MatchSet([(0, 0, 0.1, 'robust')], [[1.0, 2.0, 4.0, 6.0]])
    errors = reprojection_errors(matches, translation_homography(3.0, 4.0))
    assert numpy.allclose(errors, 0.0)


def test_point_at_infinity_is_never_correct():
    truth = Homography([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [-0.01, 0.0, 1.0]])
    matches = MatchSet([(0, 0, 0.1, 'robust')], [[100.0, 0.0, 0.0, 0.0]])
    assert numpy.isinf(reprojection_errors(matches, truth)[0])
    assert mma(matches, truth, (1000,)).accuracies == [0.0]


def test_rotation_error():
    truth = Rotation.from_rotvec([0.1, -0.3, 0.2]).as_matrix()
    tilt = Rotation.from_rotvec([0.0, 0.0, numpy.deg2rad(30)]).as_matrix()
    assert numpy.isclose(rotation_error(tilt.dot(truth), truth), 30.0)
    assert rotation_error(truth, truth) == pytest.approx(0.0, abs=1e-4)
    assert numpy.isclose(translation_error([1, 2, 3], [1, 2, 5]), 2.0)


def test_relative_pose_of_camera_to_world_poses():
    rng = numpy.random.Generator(numpy.random.PCG64(0))
    pose_a = Pose(Rotation.from_rotvec(rng.normal(size=3)).as_matrix(),
                  rng.normal(size=3))
    pose_b = Pose(Rotation.from_rotvec(rng.normal(size=3)).as_matrix(),
                  rng.normal(size=3))
    relative = relative_pose(pose_a, pose_b)
    point = rng.normal(size=(1, 3))
    world = pose_a.apply(point)
    assert numpy.allclose(pose_b.apply(relative.apply(point)), world)
    error = pose_error(relative, relative_pose(pose_a, pose_b))
    assert error.angular_error == pytest.approx(0.0, abs=1e-4)
    assert error.translation_error == pytest.approx(0.0)


@pytest.mark.parametrize('thresholds', [(), (0, 1), (2, 1), (1, 1)])
def test_invalid_thresholds(thresholds):
    with pytest.raises(InvariantError):
        MMAConfig(thresholds)


@pytest.mark.parametrize('radii', [(52, 60, ()), (52, 0, ()), (52, 7, (60,))])
def test_invalid_vpr_radii(radii):
    with pytest.raises(InvariantError):
        VPRConfig(*radii)
