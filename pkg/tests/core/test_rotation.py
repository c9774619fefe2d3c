from __future__ import absolute_import, division, print_function

import numpy
import pytest
from scipy.spatial.transform import Rotation

from orthomatch.errors import InvariantError
from orthomatch.core.rotation import (
    align_rotation, axis_angle_rotation, check_rotation, rotation_angle, skew
)


def random_unit_vectors(count, seed=0):
    rng = numpy.random.Generator(numpy.random.PCG64(seed))
    vectors = rng.standard_normal((count, 3))
    return vectors / numpy.linalg.norm(vectors, axis=1)[:, None]


def assert_proper_rotation(matrix):
    assert numpy.allclose(matrix.T.dot(matrix), numpy.eye(3), atol=1e-12)
    assert abs(numpy.linalg.det(matrix) - 1.0) < 1e-12


def test_skew_is_cross_product():
    a, b = random_unit_vectors(2)
    assert numpy.allclose(skew(a).dot(b), numpy.cross(a, b))


def test_check_rotation_accepts_rotations():
    matrix = Rotation.from_rotvec([0.1, -0.4, 0.7]).as_matrix()
    result = check_rotation(matrix)
    assert numpy.array_equal(result, matrix)
    assert not result.flags.writeable


@pytest.mark.parametrize('matrix', [
    2.0 * numpy.eye(3),
    numpy.diag([1.0, 1.0, -1.0]),
    numpy.full((3, 3), numpy.nan),
])
def test_check_rotation_rejects_invalid_matrices(matrix):
    with pytest.raises(InvariantError):
        check_rotation(matrix)


def test_align_rotation_matches_minimal_rotation():
    for o, n in zip(random_unit_vectors(20, 1), random_unit_vectors(20, 2)):
        result = align_rotation(o, n)
        axis = numpy.cross(o, n)
        angle = numpy.arccos(numpy.clip(o.dot(n), -1.0, 1.0))
        expected = Rotation.from_rotvec(
            axis / numpy.linalg.norm(axis) * angle).as_matrix()
        assert numpy.allclose(result, expected, atol=1e-10)
        assert numpy.allclose(result.dot(o), n, atol=1e-12)


def test_align_rotation_matches_quaternion_oracle():
    origins = random_unit_vectors(10000, 7)
    targets = random_unit_vectors(10000, 8)
    # half-way quaternion [o x n, 1 + o.n], scalar last
    quaternions = numpy.hstack([numpy.cross(origins, targets),
                                1.0 + numpy.sum(origins * targets, axis=1,
                                                keepdims=True)])
    expected = Rotation.from_quat(quaternions).as_matrix()
    for o, n, matrix in zip(origins, targets, expected):
        assert numpy.allclose(align_rotation(o, n), matrix, rtol=0,
                              atol=1e-9)


def test_align_rotation_of_parallel_vectors_is_identity():
    o = numpy.array([0.0, 0.0, 1.0])
    assert numpy.allclose(align_rotation(o, o), numpy.eye(3), atol=1e-15)


def test_align_rotation_nearly_parallel():
    o = numpy.array([0.0, 0.0, 1.0])
    n = numpy.array([1e-8, 0.0, 1.0])
    n /= numpy.linalg.norm(n)
    result = align_rotation(o, n)
    assert_proper_rotation(result)
    assert numpy.allclose(result.dot(o), n, atol=1e-12)


def test_align_rotation_antiparallel_uses_half_turn():
    o = numpy.array([0.0, 0.0, 1.0])
    result = align_rotation(o, -o)
    assert_proper_rotation(result)
    assert numpy.allclose(result.dot(o), -o, atol=1e-12)
    assert numpy.allclose(result, numpy.diag([1.0, -1.0, -1.0]))


def test_align_rotation_antiparallel_general_axis():
    o = random_unit_vectors(1, 5)[0]
    result = align_rotation(o, -o)
    assert_proper_rotation(result)
    assert numpy.allclose(result.dot(o), -o, atol=1e-12)


def test_axis_angle_and_rotation_angle():
    rotation = axis_angle_rotation([0.0, 0.0, 1.0], 0.3)
    assert_proper_rotation(rotation)
    assert abs(rotation_angle(rotation) - 0.3) < 1e-12
    assert numpy.allclose(rotation.dot([1.0, 0.0, 0.0]),
                          [numpy.cos(0.3), numpy.sin(0.3), 0.0])
