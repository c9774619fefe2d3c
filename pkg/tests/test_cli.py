from __future__ import absolute_import, division, print_function

import json
import os.path

import numpy
import pandas
import pytest

from orthomatch.cli import main
from orthomatch.imaging.depth import DepthMap
from orthomatch.imaging.image import Image
from orthomatch.imaging.io import read_image, write_depth, write_image
from orthomatch.synth.rigs import build_vpr_corpus
from orthomatch.synth.scenes import road_scene
from orthomatch.synth.textures import random_texture
from orthomatch.version import __version__


@pytest.fixture
def images(tmpdir):
    folder = tmpdir.mkdir('images')
    texture = random_texture(96, 96, seed=30)
    write_image(texture, str(folder.join('card.png')))
    write_image(Image(numpy.rot90(texture.data)),
                str(folder.join('turned.png')))
    return str(folder)


def read(path):
    with open(path) as input_stream:
        return json.load(input_stream)


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(['--version'])
    assert info.value.code == 0
    assert __version__ in capsys.readouterr().out


@pytest.mark.parametrize('argv', [
    [], ['rotate'], ['describe', '--out', 'x.omds'],
    ['eval-mma', '--corpus', 'c.json', '--out', 'r.json', '--head', 'sift'],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 1


def test_corpus_to_report(tmpdir, images, capsys):
    corpus = str(tmpdir.join('corpus'))
    assert main(['-q', 'gen-rotated', '--in', images, '--out', corpus,
                 '--pairs-per-image', '1', '--rot-step', '90',
                 '--crop-size', '64', '--seed', '3']) == 0
    manifest = os.path.join(corpus, 'manifest.json')
    assert main(['validate', '--manifest', manifest]) == 0
    report = str(tmpdir.join('mma.json'))
    assert main(['-q', 'eval-mma', '--corpus', manifest, '--out', report,
                 '--thresholds', '1', '3', '5', '--max-keypoints', '300',
                 '--ransac']) == 0
    assert read(report)['aggregates']['pairs'] == 2
    curves = str(tmpdir.join('curves.csv'))
    capsys.readouterr()
    assert main(['report', '--in', report, '--csv', curves]) == 0
    assert 'MMA@3px' in capsys.readouterr().out
    assert pandas.read_csv(curves)['threshold'].tolist() == [1.0, 3.0, 5.0]


def test_invalid_inputs_exit_with_one(tmpdir, images):
    broken = tmpdir.join('broken.json')
    broken.write('{"pairs": []}')
    assert main(['validate', '--manifest', str(broken)]) == 1
    assert main(['report', '--in', str(broken)]) == 1
    assert main(['gen-rotated', '--in', str(tmpdir.mkdir('empty')),
                 '--out', str(tmpdir.join('c'))]) == 1
    assert main(['gen-rotated', '--in', images, '--out',
                 str(tmpdir.join('c')), '--shear', '0.5']) == 1
    card = os.path.join(images, 'card.png')
    assert main(['match', '--a', card, '--b', card, '--out',
                 str(tmpdir.join('m.json')),
                 '--set', 'detector.max_keypoints=0']) == 1
    assert main(['match', '--a', card, '--b', card, '--out',
                 str(tmpdir.join('m.json')), '--ransac', 'pose3d']) == 1


def test_runtime_failures_exit_with_two(tmpdir):
    blank = str(tmpdir.join('blank.png'))
    write_image(Image(numpy.full((48, 48), 0.5)), blank)
    out = str(tmpdir.join('m.json'))
    assert main(['match', '--a', blank, '--b', blank, '--out', out]) == 2
    missing = str(tmpdir.join('missing.png'))
    assert main(['match', '--a', missing, '--b', blank, '--out', out]) == 2


def test_match_images(tmpdir, images):
    out = str(tmpdir.join('matches.json'))
    card = os.path.join(images, 'card.png')
    assert main(['match', '--a', card, '--b', card, '--out', out,
                 '--timings']) == 0
    data = read(out)
    assert len(data['matches']['pairs']) >= 4
    assert data['ransac']['model']['type'] == 'homography'
    assert 'detect' in data['timings']


def test_describe_and_match_descriptor_files(tmpdir, images):
    files = []
    for name in ('card', 'turned'):
        files.append(str(tmpdir.join(name + '.omds')))
        assert main(['describe', '--in', os.path.join(images, name + '.png'),
                     '--out', files[-1], '--max-kp', '200']) == 0
    out = str(tmpdir.join('matches.json'))
    assert main(['match', '--a', files[0], '--b', files[1], '--out', out,
                 '--ransac', 'none']) == 0
    data = read(out)
    assert data['ransac'] is None
    assert all(pair[3] == 'external' for pair in data['matches']['pairs'])
    assert main(['match', '--a', files[0], '--b', files[1], '--out', out,
                 '--ransac', 'pose3d']) == 1
    assert main(['match', '--a', files[0],
                 '--b', os.path.join(images, 'card.png'), '--out', out]) == 1


def test_match_descriptor_ensemble(tmpdir, images):
    files = {}
    for head in ('robust', 'vanilla'):
        for name in ('card', 'turned'):
            files[name, head] = str(tmpdir.join(
                '{}-{}.omds'.format(name, head)))
            assert main(['describe', '--in',
                         os.path.join(images, name + '.png'),
                         '--out', files[name, head], '--head', head,
                         '--max-kp', '200']) == 0
    out = str(tmpdir.join('matches.json'))
    counts = {}
    for head in ('robust', 'vanilla'):
        assert main(['match', '--a', files['card', head],
                     '--b', files['turned', head], '--ransac', 'none',
                     '--out', out]) == 0
        counts[head] = len(read(out)['matches']['pairs'])
    assert main(['match', '--a', files['card', 'robust'],
                 '--b', files['turned', 'robust'],
                 '--ensemble', files['card', 'vanilla'],
                 files['turned', 'vanilla'], '--ransac', 'none',
                 '--out', out]) == 0
    data = read(out)
    heads = set(pair[3] for pair in data['matches']['pairs'])
    assert 'external' in heads
    assert heads <= {'external', 'external1'}
    assert 1 <= len(data['matches']['pairs']) <= int(numpy.ceil(
        (counts['robust'] + counts['vanilla']) / 2.0))
    assert (data['matches']['a'], data['matches']['b']) == (
        'card-robust.omds', 'turned-robust.omds')
    card = os.path.join(images, 'card.png')
    assert main(['match', '--a', card, '--b', card, '--ensemble',
                 files['card', 'vanilla'], files['turned', 'vanilla'],
                 '--out', out]) == 1
    assert main(['match', '--a', files['card', 'robust'],
                 '--b', files['turned', 'robust'],
                 '--ensemble', card, card, '--out', out]) == 1


def test_match_images_with_depth_and_pose(tmpdir, images):
    card = os.path.join(images, 'card.png')
    depth = str(tmpdir.join('depth.png'))
    write_depth(DepthMap(numpy.full((96, 96), 2.0)), depth)
    out = str(tmpdir.join('pose.json'))
    assert main(['match', '--a', card, '--b', card, '--depth-a', depth,
                 '--depth-b', depth, '--k', '96,96,47.5,47.5',
                 '--ransac', 'pose3d', '--out', out]) == 0
    model = read(out)['ransac']['model']
    assert model['type'] == 'pose3d'
    assert numpy.allclose(model['r'], numpy.eye(3), atol=1e-6)
    assert numpy.allclose(model['t'], 0.0, atol=1e-6)
    assert main(['match', '--a', card, '--b', card, '--depth-a', depth,
                 '--k', '96,96,47.5,47.5', '--ransac', 'pose3d',
                 '--out', out]) == 1
    omds = str(tmpdir.join('card.omds'))
    assert main(['describe', '--in', card, '--out', omds]) == 0
    assert main(['match', '--a', omds, '--b', omds, '--depth-a', depth,
                 '--ransac', 'none', '--out', out]) == 1


def test_ortho_ipm(tmpdir):
    scene = road_scene()
    image = str(tmpdir.join('road.png'))
    write_image(scene.image, image)
    pairs = tmpdir.join('pairs.json')
    pairs.write(json.dumps({'pairs': scene.pairs.tolist(),
                            'size': list(scene.out_size)}))
    out, spec = str(tmpdir.join('top.png')), str(tmpdir.join('spec.json'))
    assert main(['ortho', '--mode', 'ipm', '--img', image, '--pairs',
                 str(pairs), '--out', out, '--spec', spec]) == 0
    top = read_image(out)
    assert (top.width, top.height) == (240, 600)
    assert read(spec)['mode'] == 'ipm'
    assert main(['ortho', '--mode', 'ipm', '--img', image, '--out',
                 out]) == 1


def test_ortho_depth(tmpdir):
    image = str(tmpdir.join('card.png'))
    write_image(random_texture(64, 48, seed=2), image)
    depth = str(tmpdir.join('depth.png'))
    write_depth(DepthMap(numpy.full((48, 64), 2.0)), depth)
    out, spec = str(tmpdir.join('ortho.png')), str(tmpdir.join('spec.json'))
    assert main(['ortho', '--img', image, '--depth', depth,
                 '--k', '64,64,31.5,23.5', '--out', out,
                 '--spec', spec]) == 0
    data = read(spec)
    assert data['mode'] == 'surface_normal'
    assert (data['out_w'], data['out_h']) == (64, 48)
    assert numpy.allclose(data['plane']['n'], [0.0, 0.0, -1.0])
    assert main(['ortho', '--img', image, '--depth', depth, '--out',
                 out]) == 1
    assert main(['ortho', '--img', image, '--depth', depth, '--k', '1,2',
                 '--out', out]) == 1


@pytest.mark.slow
def test_eval_vpr_on_top_views(tmpdir):
    queries, references = build_vpr_corpus(
        str(tmpdir), queries=2, decoys=1, map_size=800, view_size=64,
        seed=4, progress=False)
    out = str(tmpdir.join('vpr.json'))
    assert main(['-q', 'eval-vpr', '--queries', queries, '--refs',
                 references, '--ortho', 'on', '--out', out]) == 0
    report = read(out)
    assert report['config']['pipeline']['ortho']['mode'] == 'ipm'
    assert report['aggregates']['queries'] == 2


def test_eval_vpr_top_views_need_ipm(tmpdir, images):
    manifest = tmpdir.join('views.json')
    manifest.write(json.dumps({'entries': [
        {'id': 'card', 'image': os.path.join(images, 'card.png'),
         'xy': [0.0, 0.0]}]}))
    out = str(tmpdir.join('vpr.json'))
    assert main(['-q', 'eval-vpr', '--queries', str(manifest), '--refs',
                 str(manifest), '--ortho', 'on', '--out', out]) == 1
    assert not os.path.exists(out)
