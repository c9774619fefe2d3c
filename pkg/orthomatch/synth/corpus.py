"""Rotated-pair corpus generation and loading."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
import logging
import os
import os.path
from tqdm import tqdm

# local imports
from orthomatch.errors import EmptyInputDir
from orthomatch.core.serialization import (
    homography_from_json, homography_to_json, write_json
)
from orthomatch.config.manifest import load_manifest
from orthomatch.imaging.io import IMAGE_EXTENSIONS, read_image, write_image
from orthomatch.synth.pairs import (
    PairSpec, SynthConfig, derive_seed, generate_pair, sample_pair_spec
)
from orthomatch.version import __version__

__all__ = ['CorpusEntry', 'build_corpus', 'load_corpus', 'list_images',
           'MANIFEST_NAME']

logger = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.json'
PAIR_DIRECTORY = 'pairs'

CorpusEntry = namedtuple('CorpusEntry',
                         'id image_a image_b h_gt theta spec')


def list_images(directory):
    """Sorted image files of a directory (not recursive)."""
    if not os.path.isdir(directory):
        raise EmptyInputDir('{}: not a directory.'.format(directory))
    names = sorted(name for name in os.listdir(directory)
                   if os.path.splitext(name)[1].lower() in IMAGE_EXTENSIONS)
    if not names:
        raise EmptyInputDir('{}: no image file found.'.format(directory))
    return [os.path.join(directory, name) for name in names]


def build_corpus(images_dir, out_dir, config=None, seed=0,
                 pairs_per_image=8, workers=1, progress=True):
    """
    Generate rotated pairs for every image of a directory.

    Entry i (pairs_per_image consecutive entries per source image, sources
    in name order) is drawn from derive_seed(seed, i), so the corpus is
    fully determined by the directory content, the config and the seed,
    whatever the number of workers.

    Parameters
    ----------
    images_dir : str
        Directory of source images.
    out_dir : str
        Output directory; receives manifest.json and a pairs/ folder.
    config : SynthConfig, optional
        Generation parameters (defaults to SynthConfig()).
    seed : int
        Corpus seed.
    pairs_per_image : int
        Pairs drawn from each source image.
    workers : int
        Source images processed concurrently.
    progress : bool
        Show a progress bar.

    Returns
    -------
    dict
        The corpus manifest as written.

    Raises
    ------
    EmptyInputDir
        When the directory holds no image.
    ConfigOutOfRange
        When config is invalid.

    """
    config = (config or SynthConfig()).validate()
    sources = list_images(images_dir)
    pair_dir = os.path.join(out_dir, PAIR_DIRECTORY)
    if not os.path.isdir(pair_dir):
        os.makedirs(pair_dir)

    def build_source(item):
        index, path = item
        image = read_image(path)
        stem = os.path.splitext(os.path.basename(path))[0]
        entries = []
        for j in range(pairs_per_image):
            entry_seed = derive_seed(seed, index * pairs_per_image + j)
            spec = sample_pair_spec(os.path.basename(path),
                                    (image.width, image.height),
                                    entry_seed, config)
            first, second, h_gt = generate_pair(image, spec,
                                                config.noise_sigma)
            entry_id = '{}-{:03d}'.format(stem, j)
            names = [os.path.join(PAIR_DIRECTORY, '{}_{}.png'
                                  .format(entry_id, side))
                     for side in ('a', 'b')]
            write_image(first, os.path.join(out_dir, names[0]))
            write_image(second, os.path.join(out_dir, names[1]))
            entries.append({'id': entry_id,
                            'image_a': names[0].replace(os.sep, '/'),
                            'image_b': names[1].replace(os.sep, '/'),
                            'h_gt': homography_to_json(h_gt)['h'],
                            'theta': spec.params.theta,
                            'spec': spec.to_json()})
        return entries

    items = list(enumerate(sources))
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        results = list(tqdm(executor.map(build_source, items),
                            total=len(items), desc='gen-rotated',
                            disable=not progress))
    pairs = [entry for entries in results for entry in entries]
    manifest = {'generator_version': __version__, 'seed': seed,
                'config': config.to_json(), 'pairs': pairs}
    write_json(manifest, os.path.join(out_dir, MANIFEST_NAME))
    logger.info('Wrote %d pairs from %d images to %s.', len(pairs),
                len(sources), out_dir)
    return manifest


def load_corpus(path):
    """
    Read a corpus manifest.

    The manifest is validated first; every stored H_gt is checked against
    the composition of its primitives.

    Returns
    -------
    list of CorpusEntry
        Entries with absolute image paths, in manifest order.

    Raises
    ------
    ManifestError
        When the manifest violates its schema.
    InvariantError
        When an H_gt differs from its primitives.

    """
    manifest = load_manifest(path, 'eval-mma')
    root = os.path.dirname(os.path.abspath(path))
    entries = []
    for pair in manifest['pairs']:
        h_gt = homography_from_json({'h': pair['h_gt']})
        spec = None
        if 'spec' in pair:
            spec = PairSpec.from_json(pair['spec'], h_gt)
        entries.append(CorpusEntry(
            pair['id'], os.path.join(root, pair['image_a']),
            os.path.join(root, pair['image_b']), h_gt,
            float(pair.get('theta', 0.0)), spec))
    return entries
