"""
Synthetic datasets for the pose and place recognition protocols.

build_pose_rig renders a textured plane from cameras on an arc and writes
a pose manifest pairing a fronto-parallel representative with every arc
view. build_vpr_corpus renders oblique views of a large ground texture
and writes reference and query manifests in which each query sees its
place from the opposite direction.
"""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import logging
import os
import os.path
import numpy
from tqdm import tqdm

# local imports
from orthomatch.core.serialization import (
    intrinsics_to_json, pose_to_json, write_json
)
from orthomatch.imaging.io import write_depth, write_image
from orthomatch.synth.pairs import derive_seed
from orthomatch.synth.scenes import (
    arc_poses, default_intrinsics, ground_view, render_plane_view
)
from orthomatch.synth.textures import random_texture

__all__ = ['build_pose_rig', 'build_vpr_corpus', 'POSE_MANIFEST',
           'QUERY_MANIFEST', 'REFERENCE_MANIFEST']

logger = logging.getLogger(__name__)

POSE_MANIFEST = 'poses.json'
QUERY_MANIFEST = 'queries.json'
REFERENCE_MANIFEST = 'references.json'


def _ensure_directory(path):
    if not os.path.isdir(path):
        os.makedirs(path)


def build_pose_rig(out_dir, count=100, sequences=1, max_angle=45.0,
                   max_roll=180.0, distance=2.0, width=320, height=240,
                   texel_size=0.01, texture_size=600, depth_noise_sigma=0.0,
                   seed=0, progress=True):
    """
    Write a textured-plane arc rig and its pose manifest.

    Every sequence has its own texture, a fronto-parallel representative
    and count candidates whose viewing angles are evenly spaced in
    [-max_angle, max_angle] degrees, each rolled by a random angle in
    [-max_roll, max_roll]. Entries carry exact depth and a central ROI on
    the plane.

    Parameters
    ----------
    out_dir : str
        Output directory.
    count : int
        Candidates per sequence.
    sequences : int
        Number of sequences.
    max_angle, max_roll : float
        Viewing angle and roll ranges in degrees.
    distance : float
        Camera distance from the plane center in meters.
    width, height : int
        Image size.
    texel_size : float
        Texel side in meters.
    texture_size : int
        Texture side in texels.
    depth_noise_sigma : float
        Gaussian depth noise in meters.
    seed : int
        Rig seed.
    progress : bool
        Show a progress bar.

    Returns
    -------
    str
        Path of the pose manifest.

    """
    _ensure_directory(os.path.join(out_dir, 'views'))
    intrinsics = default_intrinsics(width, height)
    roi = [int(0.2 * width), int(0.2 * height), int(0.8 * width),
           int(0.8 * height)]
    entries, pairs = [], []
    angles = numpy.linspace(-max_angle, max_angle, count)
    for sequence in tqdm(range(sequences), desc='pose rig',
                         disable=not progress):
        sequence_seed = derive_seed(seed, sequence)
        rng = numpy.random.Generator(numpy.random.PCG64(sequence_seed))
        texture = random_texture(texture_size, texture_size, sequence_seed)
        rolls = rng.uniform(-max_roll, max_roll, count)
        views = [('rep', arc_poses([0.0], distance)[0])]
        for j, (angle, roll) in enumerate(zip(angles, rolls)):
            views.append(('{:03d}'.format(j),
                          arc_poses([angle], distance, roll)[0]))
        label = 'seq{:02d}'.format(sequence)
        ids = []
        for k, (suffix, pose) in enumerate(views):
            view = render_plane_view(texture, intrinsics, pose, width, height,
                                     texel_size, depth_noise_sigma,
                                     derive_seed(sequence_seed, k))
            entry_id = '{}-{}'.format(label, suffix)
            image = 'views/{}.png'.format(entry_id)
            depth = 'views/{}_depth.png'.format(entry_id)
            write_image(view.image, os.path.join(out_dir, image))
            write_depth(view.depth, os.path.join(out_dir, depth))
            entries.append({'id': entry_id, 'image': image, 'depth': depth,
                            'k': intrinsics_to_json(intrinsics)['k'],
                            'pose': pose_to_json(pose), 'sequence': label,
                            'roi': roi})
            ids.append(entry_id)
        pairs.append({'representative': ids[0], 'candidates': ids[1:]})
    path = os.path.join(out_dir, POSE_MANIFEST)
    write_json({'entries': entries, 'pairs': pairs}, path)
    logger.info('Wrote %d views in %d sequences to %s.', len(entries),
                sequences, out_dir)
    return path


def _inside(point, low, high):
    return low <= point[0] <= high and low <= point[1] <= high


def build_vpr_corpus(out_dir, queries=20, decoys=5, map_size=2000,
                     texel_size=0.1, view_size=160, decoy_range=(20.0, 45.0),
                     position_noise=2.0, heading_noise=10.0, tilt=30.0,
                     seed=0, progress=True):
    """
    Write an opposite-view place recognition corpus.

    Every view is an oblique perspective image of a ground footprint
    (see :func:`orthomatch.synth.scenes.ground_view`), annotated with the
    point pairs of its inverse perspective mapping in the entry's 'ipm'
    field. Each place gets a reference view; its query sees the same
    footprint from the opposite direction (heading + 180 degrees, up to
    heading_noise of jitter) at a position up to position_noise meters
    away. Every place adds decoy references decoy_range meters from the
    place, inside the default prior radius and outside the default
    localization radius. Coordinates are footprint centers in meters.

    Returns
    -------
    queries_path, references_path : str
        Paths of the two manifests.

    """
    rng = numpy.random.Generator(numpy.random.PCG64(seed))
    texture = random_texture(map_size, map_size, seed)
    extent = map_size * texel_size
    margin = 2.0 * view_size * texel_size
    low, high = margin, extent - margin
    for folder in ('queries', 'references'):
        _ensure_directory(os.path.join(out_dir, folder))
    query_entries, reference_entries = [], []

    def add(entries, folder, entry_id, center, heading):
        image = '{}/{}.png'.format(folder, entry_id)
        view = ground_view(texture, center, heading, view_size, texel_size,
                           tilt)
        write_image(view.image, os.path.join(out_dir, image))
        entries.append({'id': entry_id, 'image': image,
                        'xy': [float(center[0]), float(center[1])],
                        'ipm': {'pairs': view.pairs.tolist(),
                                'size': list(view.out_size)}})

    for i in tqdm(range(queries), desc='vpr corpus', disable=not progress):
        place = rng.uniform(low, high, 2)
        heading = float(rng.uniform(0.0, 360.0))
        add(reference_entries, 'references', 'ref{:03d}'.format(i), place,
            heading)
        shift = rng.uniform(-1.0, 1.0, 2)
        shift *= position_noise / max(numpy.linalg.norm(shift), 1.0)
        query_heading = (heading + 180.0
                         + rng.uniform(-heading_noise, heading_noise))
        add(query_entries, 'queries', 'q{:03d}'.format(i), place + shift,
            query_heading % 360.0)
        placed = 0
        while placed < decoys:
            angle = rng.uniform(0.0, 2.0 * numpy.pi)
            radius = rng.uniform(*decoy_range)
            decoy = place + radius * numpy.array([numpy.cos(angle),
                                                  numpy.sin(angle)])
            decoy_heading = float(rng.uniform(0.0, 360.0))
            if not _inside(decoy, low, high):
                continue
            add(reference_entries, 'references',
                'ref{:03d}-d{}'.format(i, placed), decoy, decoy_heading)
            placed += 1
    queries_path = os.path.join(out_dir, QUERY_MANIFEST)
    references_path = os.path.join(out_dir, REFERENCE_MANIFEST)
    write_json({'entries': query_entries}, queries_path)
    write_json({'entries': reference_entries}, references_path)
    logger.info('Wrote %d queries and %d references to %s.',
                len(query_entries), len(reference_entries), out_dir)
    return queries_path, references_path
