from __future__ import absolute_import, division, print_function

import os.path

import pytest

from orthomatch.errors import ManifestError
from orthomatch.config.pipeline_config import PipelineConfig
from orthomatch.evaluation.metrics import MMAConfig
from orthomatch.evaluation.protocols import (
    VPRConfig, eval_mma, eval_pose_protocol, eval_vpr, map_entries
)
from orthomatch.evaluation.report import EvalReport
from orthomatch.imaging.io import write_image
from orthomatch.synth.corpus import MANIFEST_NAME, build_corpus
from orthomatch.synth.pairs import SynthConfig
from orthomatch.synth.rigs import build_pose_rig, build_vpr_corpus
from orthomatch.synth.textures import random_texture


@pytest.fixture(scope='module')
def corpus(tmpdir_factory):
    images = tmpdir_factory.mktemp('images')
    for index in range(2):
        write_image(random_texture(96, 96, seed=20 + index),
                    str(images.join('card{}.png'.format(index))))
    out_dir = str(tmpdir_factory.mktemp('corpus'))
    build_corpus(str(images), out_dir, SynthConfig(crop_size=80,
                                                   rotation_step=90.0),
                 seed=1, pairs_per_image=2, progress=False)
    return os.path.join(out_dir, MANIFEST_NAME)


def test_map_entries_keeps_order():
    assert map_entries(lambda x: x * x, range(20), workers=4,
                       progress=False) == [x * x for x in range(20)]


def test_mma_protocol(corpus, tmpdir):
    config = PipelineConfig({'workers': 2})
    report = eval_mma(corpus, config, MMAConfig((1, 3, 5), 500),
                      verified=True, progress=False)
    assert report.kind == 'mma'
    assert [r['id'] for r in report.records] == [
        'card0-000', 'card0-001', 'card1-000', 'card1-001']
    assert report.config['pipeline']['detector']['max_keypoints'] == 500
    assert report.config['pipeline']['ransac']['model'] == 'none'
    for record in report.records:
        assert len(record['accuracy']) == 3
        assert record['accuracy'] == sorted(record['accuracy'])
        assert 'verified_accuracy' in record
    a = report.aggregates
    assert a['pairs'] == 4
    assert a['mma'][-1] > 0.5
    assert 'mma_verified' in a
    path = os.path.join(str(tmpdir), 'mma.json')
    report.write(path)
    assert EvalReport.load(path).aggregates == a


def test_protocols_reject_invalid_manifests(tmpdir):
    path = tmpdir.join('broken.json')
    path.write('{"entries": []}')
    with pytest.raises(ManifestError):
        eval_pose_protocol(str(path), PipelineConfig(), progress=False)
    with pytest.raises(ManifestError):
        eval_vpr(str(path), str(path), VPRConfig(), PipelineConfig(),
                 progress=False)


@pytest.mark.slow
def test_pose_protocol(tmpdir):
    manifest = build_pose_rig(str(tmpdir), count=2, max_angle=10.0,
                              max_roll=0.0, width=160, height=120, seed=3,
                              progress=False)
    config = PipelineConfig({'ortho': {'enabled': True}})
    report = eval_pose_protocol(manifest, config, progress=False)
    assert len(report.records) == 2
    assert report.config['pipeline']['ransac']['model'] == 'pose3d'
    assert report.aggregates['failure_rate'] < 1.0
    assert set(report.aggregates['per_sequence']) == {'seq00'}


@pytest.mark.slow
def test_vpr_protocol(tmpdir):
    queries, references = build_vpr_corpus(
        str(tmpdir), queries=2, decoys=1, map_size=800, view_size=96,
        seed=5, progress=False)
    config = PipelineConfig({'ortho': {'enabled': True, 'mode': 'ipm'}})
    report = eval_vpr(queries, references, VPRConfig(), config,
                      progress=False)
    assert report.config['pipeline']['ortho']['mode'] == 'ipm'
    assert [r['query'] for r in report.records] == ['q000', 'q001']
    assert all(r['candidates'] >= 2 for r in report.records)
    assert report.aggregates['flagged'] == 0
    assert set(report.aggregates['recall_at']) == {'7.0', '30.0'}


@pytest.fixture(scope='module')
def rotated_corpus(tmpdir_factory):
    images = tmpdir_factory.mktemp('textures')
    for index in range(3):
        write_image(random_texture(160, 160, seed=40 + index),
                    str(images.join('texture{}.png'.format(index))))
    out_dir = str(tmpdir_factory.mktemp('rotated'))
    build_corpus(str(images), out_dir, SynthConfig(crop_size=128,
                                                   rotation_step=90.0),
                 seed=2, pairs_per_image=8, progress=False)
    return os.path.join(out_dir, MANIFEST_NAME)


@pytest.mark.slow
def test_robust_head_wins_on_rotated_pairs(rotated_corpus):
    mma_config = MMAConfig(max_keypoints=500)
    at_six = mma_config.thresholds.index(6.0)
    aggregates = {}
    for head in ('vanilla', 'robust', 'ensemble'):
        config = PipelineConfig({'descriptor': {'head': head}})
        aggregates[head] = eval_mma(rotated_corpus, config, mma_config,
                                    progress=False).aggregates
    per_theta = {head: a['mma_per_theta'] for head, a in aggregates.items()}
    for theta in (90.0, 180.0, 270.0):
        key = repr(theta)
        assert key in per_theta['robust']
        assert (per_theta['robust'][key][at_six]
                >= per_theta['vanilla'][key][at_six] + 0.2)
    average = {head: a['mma_average'][at_six]
               for head, a in aggregates.items()}
    assert average['ensemble'] >= max(average['vanilla'],
                                      average['robust']) - 0.02


@pytest.mark.slow
def test_rectified_robust_pose_beats_perspective_vanilla(tmpdir):
    manifest = build_pose_rig(str(tmpdir), count=4, max_angle=30.0,
                              max_roll=180.0, seed=6, progress=False)
    rectified = eval_pose_protocol(manifest, PipelineConfig(
        {'ortho': {'enabled': True}, 'descriptor': {'head': 'robust'}}),
        progress=False).aggregates
    perspective = eval_pose_protocol(manifest, PipelineConfig(
        {'descriptor': {'head': 'vanilla'}}), progress=False).aggregates
    assert rectified['failure_rate'] < 0.5
    assert rectified['mean_angular_error'] < 2.0
    assert (perspective['mean_angular_error'] is None
            or perspective['failures'] > 0
            or perspective['mean_angular_error']
            > rectified['mean_angular_error'])


@pytest.mark.slow
def test_robust_head_recognizes_opposite_views(tmpdir):
    queries, references = build_vpr_corpus(
        str(tmpdir), queries=10, decoys=3, map_size=1000, view_size=64,
        seed=7, progress=False)
    recall = {}
    for head in ('vanilla', 'robust'):
        config = PipelineConfig({'descriptor': {'head': head},
                                 'ortho': {'enabled': True, 'mode': 'ipm'}})
        recall[head] = eval_vpr(queries, references, VPRConfig(), config,
                                progress=False).aggregates['recall']
    assert recall['robust'] >= 0.9
    assert recall['robust'] > recall['vanilla']
