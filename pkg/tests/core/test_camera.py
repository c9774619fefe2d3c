from __future__ import absolute_import, division, print_function

import numpy
import pytest
from scipy.spatial.transform import Rotation

from orthomatch.errors import InvariantError
from orthomatch.core.camera import Intrinsics, Plane, Pose, unit_vector


@pytest.fixture
def intrinsics():
    return Intrinsics(500.0, 480.0, 320.0, 240.0)


@pytest.fixture
def pose():
    return Pose(Rotation.from_rotvec([0.2, 0.1, -0.3]).as_matrix(),
                [0.5, -1.0, 2.0])


def test_intrinsics_matrix(intrinsics):
    k = intrinsics.matrix()
    assert k[2, 2] == 1.0
    assert numpy.allclose(k.dot(intrinsics.inverse_matrix()), numpy.eye(3))
    assert Intrinsics.from_matrix(k) == intrinsics


@pytest.mark.parametrize('values', [
    (0.0, 1.0, 0.0, 0.0), (1.0, -1.0, 0.0, 0.0), (1.0, 1.0, numpy.nan, 0.0)
])
def test_invalid_intrinsics(values):
    with pytest.raises(InvariantError):
        Intrinsics(*values)


def test_intrinsics_from_matrix_rejects_skew():
    with pytest.raises(InvariantError):
        Intrinsics.from_matrix([[1.0, 0.5, 0.0], [0.0, 1.0, 0.0],
                                [0.0, 0.0, 1.0]])
    with pytest.raises(InvariantError):
        Intrinsics.from_matrix([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0],
                                [0.0, 0.0, 2.0]])


def test_unit_vector():
    assert numpy.allclose(unit_vector([0.0, 3.0, 4.0]), [0.0, 0.6, 0.8])
    with pytest.raises(InvariantError):
        unit_vector([0.0, 0.0, 0.0])
    with pytest.raises(InvariantError):
        unit_vector([0.0, 3.0, 4.0], tolerance=1e-12)
    with pytest.raises(InvariantError):
        unit_vector([1.0, 0.0])


def test_plane_normalizes_and_checks_distance():
    plane = Plane([0.0, 0.0, -2.0], 1.5)
    assert numpy.allclose(plane.normal, [0.0, 0.0, -1.0])
    with pytest.raises(InvariantError):
        Plane([0.0, 0.0, -1.0], 0.0)


def test_pose_inverse_and_compose(pose):
    points = numpy.array([[0.0, 0.0, 1.0], [1.0, 2.0, 3.0]])
    assert numpy.allclose(pose.inverse().apply(pose.apply(points)), points)
    identity = pose.compose(pose.inverse())
    assert numpy.allclose(identity.rotation, numpy.eye(3))
    assert numpy.allclose(identity.translation, numpy.zeros(3))
    twice = pose.compose(pose)
    assert numpy.allclose(twice.apply(points), pose.apply(pose.apply(points)))


def test_pose_rejects_reflection():
    with pytest.raises(InvariantError):
        Pose(numpy.diag([1.0, -1.0, 1.0]), numpy.zeros(3))
