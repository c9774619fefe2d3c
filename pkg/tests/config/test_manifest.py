from __future__ import absolute_import, division, print_function

import json
import os.path

import pytest

from orthomatch.errors import ManifestError
from orthomatch.config.manifest import load_manifest, validate_manifest

IDENTITY = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


@pytest.fixture
def root(tmpdir):
    for name in ('a.png', 'b.png', 'd.png'):
        tmpdir.join(name).write('')
    return str(tmpdir)


def write(root, data, name='manifest.json'):
    path = os.path.join(root, name)
    with open(path, 'w') as output:
        if isinstance(data, str):
            output.write(data)
        else:
            json.dump(data, output)
    return path


def test_valid_corpus(root):
    path = write(root, {'pairs': [
        {'id': 'p0', 'image_a': 'a.png', 'image_b': 'b.png',
         'h_gt': IDENTITY, 'theta': 90}]})
    assert validate_manifest(path, 'eval-mma') == []
    assert load_manifest(path, 'eval-mma')['pairs'][0]['id'] == 'p0'


def test_corpus_violations(root):
    path = write(root, {'pairs': [
        {'id': 'p0', 'image_a': 'a.png', 'image_b': 'b.png'},
        {'id': 'p0', 'image_a': 'x.png', 'image_b': 'b.png',
         'h_gt': [[1, 0, 0], [0, 0, 0], [0, 0, 1]], 'theta': 'ninety'},
    ]})
    violations = validate_manifest(path, 'eval-mma')
    assert violations == [
        "pairs[0]: missing field 'h_gt'",
        "pairs[1]: duplicate id 'p0'",
        "pairs[1]: field 'image_a': file x.png not found",
        "pairs[1]: field 'h_gt' is singular",
        "pairs[1]: field 'theta' must be a number",
    ]
    with pytest.raises(ManifestError) as info:
        load_manifest(path, 'eval-mma')
    assert info.value.violations == violations


def test_empty_and_broken_manifests(root):
    assert validate_manifest(write(root, {'pairs': []}), 'eval-mma') == [
        "manifest: 'pairs' is empty"]
    broken = validate_manifest(write(root, '{"pairs": ['), 'eval-mma')
    assert len(broken) == 1 and broken[0].startswith('invalid JSON')
    with pytest.raises(ValueError):
        validate_manifest(write(root, {}), 'eval-speed')
    with pytest.raises(ManifestError):
        load_manifest(os.path.join(root, 'missing.json'), 'eval-mma')


def pose_entry(entry_id, **changes):
    entry = {'id': entry_id, 'image': 'a.png', 'depth': 'd.png',
             'k': [[100, 0, 50], [0, 100, 40], [0, 0, 1]],
             'pose': {'r': IDENTITY, 't': [0, 0, -2]},
             'sequence': 's', 'roi': [0, 0, 10, 10]}
    entry.update(changes)
    return entry


def test_pose_manifest(root):
    path = write(root, {'entries': [pose_entry('r'), pose_entry('c')],
                        'pairs': [{'representative': 'r',
                                   'candidates': ['c']}]})
    assert validate_manifest(path, 'eval-pose') == []
    path = write(root, {'entries': [
        pose_entry('r', k=[[0, 0, 0], [0, 1, 0], [0, 0, 1]]),
        pose_entry('c', pose={'r': [[2, 0, 0], [0, 1, 0], [0, 0, 1]],
                              't': [0, 0]}, roi=[5, 5, 2, 2]),
    ], 'pairs': [{'representative': 'x', 'candidates': ['c', 'y']}]})
    assert validate_manifest(path, 'eval-pose') == [
        "entries[0]: field 'k' must be an upper-triangular 3x3 matrix with "
        "positive focal lengths",
        "entries[1]: field 'pose.r' must be a rotation matrix",
        "entries[1]: field 'pose.t' must hold 3 finite numbers",
        "entries[1]: field 'roi' must be [x0, y0, x1, y1] with x0 < x1 and "
        "y0 < y1",
        "pairs[0]: unknown representative 'x'",
        "pairs[0]: unknown candidate 'y'",
    ]


def test_vpr_manifest(root):
    path = write(root, {'entries': [{'id': 'q', 'image': 'a.png',
                                     'xy': [1.0, 2.0]},
                                    {'id': 'r', 'image': 'b.png',
                                     'xy': [1.0]}]})
    assert validate_manifest(path, 'eval-vpr') == [
        "entries[1]: field 'xy' must hold 2 finite numbers"]


def test_ipm_field(root):
    pairs = [[10, 10, 0, 0], [90, 10, 40, 0], [95, 60, 40, 40],
             [5, 60, 0, 40]]
    path = write(root, {'entries': [
        {'id': 'q0', 'image': 'a.png', 'xy': [0, 0],
         'ipm': {'pairs': pairs, 'size': [41, 41]}},
        {'id': 'q1', 'image': 'a.png', 'xy': [0, 0],
         'ipm': {'h_ortho': IDENTITY, 'size': [8, 8]}},
        {'id': 'q2', 'image': 'a.png', 'xy': [0, 0], 'ipm': None}]})
    assert validate_manifest(path, 'eval-vpr') == []
    path = write(root, {'entries': [
        {'id': 'q0', 'image': 'a.png', 'xy': [0, 0],
         'ipm': {'pairs': pairs[:3], 'size': [41, 0]}},
        {'id': 'q1', 'image': 'a.png', 'xy': [0, 0],
         'ipm': {'h_ortho': [[1, 0, 0], [0, 0, 0], [0, 0, 1]],
                 'size': [8, 8.5]}},
        {'id': 'q2', 'image': 'a.png', 'xy': [0, 0], 'ipm': {'size': [8, 8]}},
        {'id': 'q3', 'image': 'a.png', 'xy': [0, 0], 'ipm': [1, 2]}]})
    assert validate_manifest(path, 'eval-vpr') == [
        "entries[0]: field 'ipm.size' must hold 2 positive integers",
        "entries[0]: field 'ipm.pairs' must hold at least 4 rows "
        "[x, y, x_top, y_top]",
        "entries[1]: field 'ipm.size' must hold 2 positive integers",
        "entries[1]: field 'ipm.h_ortho' must be a regular 3x3 matrix",
        "entries[2]: field 'ipm' needs 'pairs' or 'h_ortho'",
        "entries[3]: field 'ipm' must hold 'size' and 'pairs' or 'h_ortho'",
    ]
