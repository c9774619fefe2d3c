from __future__ import absolute_import, division, print_function

import io
import os.path

import numpy
import pytest
from scipy.spatial.transform import Rotation

from orthomatch.errors import FormatError
from orthomatch.core.camera import Intrinsics, Pose
from orthomatch.core.homography import Homography
from orthomatch.core.serialization import (
    homography_from_json, homography_to_json, intrinsics_from_json,
    intrinsics_to_json, pose_from_json, pose_to_json, read_json, to_builtin,
    write_json
)


def test_geometry_survives_json_files(tmpdir):
    homography = Homography([[1.0 / 3.0, 0.1, 7.0], [0.2, 0.9, -1.0],
                             [1e-5, 2e-5, 1.0]])
    intrinsics = Intrinsics(512.5, 511.25, 319.5, 239.5)
    pose = Pose(Rotation.from_rotvec([0.3, -0.2, 0.1]).as_matrix(),
                [0.1, 0.2, 0.3])
    path = os.path.join(str(tmpdir), 'geometry.json')
    write_json({'h': homography_to_json(homography),
                'k': intrinsics_to_json(intrinsics),
                'pose': pose_to_json(pose)}, path)
    data = read_json(path)
    assert homography_from_json(data['h']) == homography
    assert intrinsics_from_json(data['k']) == intrinsics
    restored = pose_from_json(data['pose'])
    assert numpy.array_equal(restored.rotation, pose.rotation)
    assert numpy.array_equal(restored.translation, pose.translation)


def test_write_json_is_deterministic(tmpdir):
    first = os.path.join(str(tmpdir), 'a.json')
    second = os.path.join(str(tmpdir), 'b.json')
    write_json({'b': numpy.float64(0.5), 'a': numpy.arange(3)}, first)
    write_json({'a': [0, 1, 2], 'b': 0.5}, second)
    with io.open(first) as a, io.open(second) as b:
        assert a.read() == b.read()


def test_floats_use_shortest_round_trip_repr(tmpdir):
    path = os.path.join(str(tmpdir), 'floats.json')
    values = [0.1, 1.0 / 3.0, 2.0 ** -40, 1e300]
    write_json({'values': values}, path)
    with io.open(path) as input_stream:
        text = input_stream.read()
    assert '0.1,' in text
    assert '0.10000000000000001' not in text
    assert read_json(path)['values'] == values


def test_to_builtin():
    value = to_builtin({'x': numpy.int64(3), 'y': numpy.bool_(True),
                        'z': (numpy.float32(0.5),)})
    assert value == {'x': 3, 'y': True, 'z': [0.5]}
    assert type(value['x']) is int


def test_invalid_json(tmpdir):
    path = os.path.join(str(tmpdir), 'bad.json')
    with io.open(path, 'w') as output:
        output.write(u'{"h": [1, 2')
    with pytest.raises(FormatError):
        read_json(path)


def test_wrong_shapes():
    with pytest.raises(FormatError):
        homography_from_json({'h': [1.0, 2.0]})
    with pytest.raises(FormatError):
        intrinsics_from_json({})
    with pytest.raises(FormatError):
        pose_from_json({'r': numpy.eye(3).tolist(), 't': [1.0]})
