from __future__ import absolute_import, division, print_function

import numpy
import pytest

from orthomatch.errors import ConfigurationError, FormatError, PipelineError
from orthomatch.config.pipeline_config import PipelineConfig
from orthomatch.core.homography import Homography
from orthomatch.evaluation.metrics import pose_error, relative_pose
from orthomatch.imaging.image import Image
from orthomatch.imaging.io import write_image
from orthomatch.ortho.ortho_view import ipm_from_annotations
from orthomatch.pipeline import (
    View, detect_and_describe, run_pipeline, view_from_entry
)
from orthomatch.synth.scenes import (
    arc_poses, default_intrinsics, render_plane_view, road_scene
)
from orthomatch.synth.textures import random_texture


@pytest.fixture(scope='module')
def texture():
    return random_texture(128, 128, seed=9)


def correct_fraction(matches, mapping, tolerance=1.0):
    if len(matches) == 0:
        return 0.0
    expected = mapping(matches.points_a)
    errors = numpy.linalg.norm(expected - matches.points_b, axis=1)
    return float(numpy.mean(errors < tolerance))


def test_identical_views(texture):
    view = View('card', texture)
    result = run_pipeline(view, view, PipelineConfig())
    assert len(result.matches) >= 4
    assert set(result.matches.heads) <= {'vanilla', 'robust'}
    assert result.ransac.model.allclose(Homography.identity(), atol=1e-6)
    assert result.ransac.inliers.all()
    assert list(result.timings) == ['detect', 'describe', 'match',
                                    'ensemble', 'ransac']
    assert result.ortho == (None, None)


def test_robust_head_handles_quarter_turns(texture):
    width = texture.width
    rotated = Image(numpy.rot90(texture.data))
    config = PipelineConfig({'ransac': {'model': 'none'}})
    result = run_pipeline(View('card', texture), View('turned', rotated),
                          config)
    assert result.ransac is None

    def turn(points):
        return numpy.stack([points[:, 1], width - 1 - points[:, 0]], axis=1)

    robust = correct_fraction(result.head_matches['robust'], turn)
    vanilla = correct_fraction(result.head_matches['vanilla'], turn)
    assert robust > 0.8
    assert robust > vanilla + 0.3
    assert correct_fraction(result.matches, turn) > 0.7


def test_missing_geometry_is_a_configuration_error(texture):
    view = View('card', texture)
    with pytest.raises(ConfigurationError):
        run_pipeline(view, view, PipelineConfig({'ortho': {'enabled': True}}))
    with pytest.raises(ConfigurationError):
        run_pipeline(view, view,
                     PipelineConfig({'ransac': {'model': 'pose3d'}}))
    with pytest.raises(ConfigurationError):
        run_pipeline(view, view, PipelineConfig(
            {'ortho': {'enabled': True, 'mode': 'ipm'}}))


def test_featureless_views_fail_at_verification():
    blank = View('blank', Image(numpy.full((64, 64), 0.5)))
    with pytest.raises(PipelineError) as info:
        run_pipeline(blank, blank, PipelineConfig(), entry='blank-pair')
    assert info.value.stage == 'ransac'
    assert info.value.entry == 'blank-pair'
    assert 'blank-pair' in str(info.value)


def test_detect_and_describe(texture):
    config = PipelineConfig({'detector': {'max_keypoints': 50}})
    sets = detect_and_describe(texture, config, config.heads, name='card')
    assert sorted(sets) == ['robust', 'vanilla']
    assert len(sets['robust']) <= 50
    assert sets['robust'].name == 'card'
    assert len(sets['vanilla']) <= 50


def test_ipm_rectified_pipeline():
    scene = road_scene()
    spec = ipm_from_annotations(scene.pairs, scene.out_size)
    view = View('road', scene.image, ipm=spec)
    config = PipelineConfig({'ortho': {'enabled': True, 'mode': 'ipm'}})
    result = run_pipeline(view, view, config)
    assert result.ortho == (spec, spec)
    assert 'backproject' in result.timings
    assert result.ransac.model.allclose(Homography.identity(), atol=1e-6)


def test_view_from_entry_reads_ipm(tmpdir):
    scene = road_scene()
    write_image(scene.image, str(tmpdir.join('road.png')))
    size = list(scene.out_size)
    from_pairs = view_from_entry(
        {'id': 'road', 'image': 'road.png',
         'ipm': {'pairs': scene.pairs.tolist(), 'size': size}}, str(tmpdir))
    from_matrix = view_from_entry(
        {'id': 'road', 'image': 'road.png',
         'ipm': {'h_ortho': scene.h_ipm.matrix.tolist(), 'size': size}},
        str(tmpdir))
    for view in (from_pairs, from_matrix):
        assert view.ipm.mode == 'ipm'
        assert (view.ipm.out_width, view.ipm.out_height) == scene.out_size
    assert from_pairs.ipm.homography.allclose(scene.h_ipm, atol=1e-3)
    assert from_matrix.ipm.homography.allclose(scene.h_ipm)
    assert view_from_entry({'id': 'road', 'image': 'road.png'},
                           str(tmpdir)).ipm is None
    with pytest.raises(FormatError):
        view_from_entry({'id': 'road', 'image': 'road.png',
                         'ipm': {'size': size}}, str(tmpdir))


@pytest.mark.slow
def test_pose_from_rectified_views():
    texture = random_texture(600, 600, seed=4)
    intrinsics = default_intrinsics(320, 240)
    pose_a, pose_b = arc_poses([0.0, 15.0], 2.0)
    views = [render_plane_view(texture, intrinsics, pose, 320, 240)
             for pose in (pose_a, pose_b)]
    config = PipelineConfig({'ortho': {'enabled': True},
                             'ransac': {'model': 'pose3d'}})
    result = run_pipeline(
        View('a', views[0].image, views[0].depth, intrinsics),
        View('b', views[1].image, views[1].depth, intrinsics), config)
    assert result.ortho[0].mode == 'surface_normal'
    error = pose_error(result.ransac.model, relative_pose(pose_a, pose_b))
    assert error.angular_error < 2.0
    assert error.translation_error < 0.1


@pytest.mark.slow
def test_rectification_recovers_overlap_of_distant_viewpoints():
    texture = random_texture(600, 600, seed=8)
    intrinsics = default_intrinsics(320, 240)
    views = [render_plane_view(texture, intrinsics, pose, 320, 240)
             for pose in arc_poses([-30.0, 30.0], 2.0)]
    first, second = [View(name, view.image, view.depth, intrinsics)
                     for name, view in zip('ab', views)]

    def inliers(ortho):
        config = PipelineConfig({'descriptor': {'head': 'robust'},
                                 'ortho': {'enabled': ortho}})
        try:
            return run_pipeline(first, second, config).ransac.inlier_count
        except PipelineError:
            return 0

    rectified = inliers(True)
    assert rectified >= 20
    assert rectified >= 2 * inliers(False)
