"""
Rendering of textured planes seen by pinhole cameras.

The scene plane is the world plane Z = 0 carrying a texture centred on
the world origin, texture columns along world X and rows along world Y.
Camera poses are camera-to-world: X_w = R X_c + C. Images are rendered by
the exact plane-to-image homography K [r1 r2 t] A, so depth and
correspondences between views are known in closed form.
"""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
from collections import namedtuple
import logging
import numpy

# local imports
from orthomatch.core.camera import Intrinsics, Pose
from orthomatch.core.homography import (
    Homography, compose, invert, transform_points, translation_homography
)
from orthomatch.core.rotation import axis_angle_rotation
from orthomatch.imaging.depth import DepthMap
from orthomatch.imaging.image import Image
from orthomatch.imaging.warping import warp
from orthomatch.synth.textures import random_texture

__all__ = ['PlaneView', 'RoadScene', 'GroundView', 'texture_homography',
           'render_plane_view', 'arc_poses', 'road_scene', 'ground_view',
           'default_intrinsics']

logger = logging.getLogger(__name__)

PlaneView = namedtuple('PlaneView', 'image depth intrinsics pose homography')
RoadScene = namedtuple('RoadScene',
                       'image depth intrinsics pose pairs out_size h_ipm')
GroundView = namedtuple('GroundView',
                        'image intrinsics pose pairs out_size h_ipm')

ROAD_TEXEL = 0.025
ROAD_SIZE = (240, 800)
ROAD_LANES = ((40, 48), (192, 200))
ROAD_CENTER_LINE = (118, 122)
ROAD_DASH = 80
ROAD_TOP_ROW = 200


def default_intrinsics(width, height, focal=None):
    """Square pixels, principal point at the image center."""
    focal = float(max(width, height)) if focal is None else focal
    return Intrinsics(focal, focal, (width - 1) / 2.0, (height - 1) / 2.0)


def texture_homography(intrinsics, pose, texture_size, texel_size):
    """
    Map from texture pixels to image pixels.

    Parameters
    ----------
    intrinsics : orthomatch.core.Intrinsics
        Camera intrinsics.
    pose : orthomatch.core.Pose
        Camera-to-world pose.
    texture_size : tuple of int
        (width, height) of the texture in texels.
    texel_size : float
        Side of a texel in meters.

    Returns
    -------
    Homography

    """
    width, height = texture_size
    s = float(texel_size)
    world_from_texel = numpy.array([[s, 0.0, -s * (width - 1) / 2.0],
                                    [0.0, s, -s * (height - 1) / 2.0],
                                    [0.0, 0.0, 1.0]])
    camera = pose.inverse()
    projection = numpy.column_stack([camera.rotation[:, 0],
                                     camera.rotation[:, 1],
                                     camera.translation])
    return Homography(intrinsics.matrix().dot(projection)
                      .dot(world_from_texel))


def _plane_depth(intrinsics, pose, width, height):
    """Depth of the plane Z = 0 along every pixel ray."""
    camera = pose.inverse()
    normal = camera.rotation[:, 2]
    ys, xs = numpy.mgrid[0:height, 0:width].astype(float)
    rays = numpy.stack([xs, ys, numpy.ones_like(xs)], axis=-1).dot(
        intrinsics.inverse_matrix().T)
    denominator = rays.dot(normal)
    with numpy.errstate(divide='ignore', invalid='ignore'):
        depth = -pose.translation[2] / denominator
    return numpy.where(numpy.isfinite(depth) & (depth > 0), depth, 0.0)


def render_plane_view(texture, intrinsics, pose, width, height,
                      texel_size=0.01, depth_noise_sigma=0.0, seed=0):
    """
    Render a textured plane and its exact depth.

    Parameters
    ----------
    texture : orthomatch.imaging.Image
        Texture laid on the plane Z = 0, centred on the origin.
    intrinsics : orthomatch.core.Intrinsics
        Camera intrinsics.
    pose : orthomatch.core.Pose
        Camera-to-world pose.
    width, height : int
        Image size.
    texel_size : float
        Side of a texel in meters.
    depth_noise_sigma : float
        Standard deviation in meters of Gaussian noise added to valid
        depths.
    seed : int
        Seed of the depth noise.

    Returns
    -------
    PlaneView
        Image, depth (valid where the texture is seen), intrinsics, pose
        and the texture-to-image homography.

    """
    homography = texture_homography(intrinsics, pose,
                                    (texture.width, texture.height),
                                    texel_size)
    rendered = warp(texture, homography, width, height)
    depth = _plane_depth(intrinsics, pose, width, height)
    valid = rendered.validity & (depth > 0)
    if depth_noise_sigma > 0:
        rng = numpy.random.Generator(numpy.random.PCG64(seed))
        depth = depth + rng.normal(0.0, depth_noise_sigma, depth.shape)
        valid &= depth > 0
    logger.debug('Rendered %dx%d view, %d pixels on the plane.', width,
                 height, int(valid.sum()))
    return PlaneView(rendered.image, DepthMap(numpy.where(valid, depth, 0.0),
                                              valid),
                     intrinsics, pose, homography)


def arc_poses(angles, distance, roll=0.0):
    """
    Cameras on an arc in the XZ plane, all looking at the world origin.

    Parameters
    ----------
    angles : iterable of float
        Viewing angles in degrees from the plane normal; 0 is
        fronto-parallel.
    distance : float
        Distance of every camera center from the origin, meters.
    roll : float
        In-plane rotation in degrees applied about each optical axis.

    Returns
    -------
    list of orthomatch.core.Pose
        Camera-to-world poses; camera center (D sin a, 0, -D cos a).

    """
    poses = []
    spin = axis_angle_rotation([0.0, 0.0, 1.0], numpy.deg2rad(roll))
    for angle in angles:
        a = numpy.deg2rad(angle)
        c, s = numpy.cos(a), numpy.sin(a)
        rotation = numpy.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])
        center = [distance * s, 0.0, -distance * c]
        poses.append(Pose(rotation.dot(spin), center))
    return poses


def _road_texture(seed):
    width, height = ROAD_SIZE
    road = 0.25 + 0.15 * random_texture(width, height, seed).data
    for low, high in ROAD_LANES:
        road[:, low:high] = 0.95
    rows = (numpy.arange(height) // ROAD_DASH) % 2 == 0
    road[numpy.ix_(rows, numpy.arange(*ROAD_CENTER_LINE))] = 0.9
    return Image(road)


def road_scene(width=320, height=240, seed=0, camera_height=1.5,
               pitch=70.0, lateral_offset=0.0):
    """
    Forward-looking view of a straight road with lane markings.

    The camera sits camera_height above the road behind its near end,
    tilted by pitch degrees from looking straight down. Lane marking
    centers at two distances are annotated with their top-view
    positions; the top view is the road texture from row 200 on, one
    pixel per texel.

    Returns
    -------
    RoadScene
        Image, depth, intrinsics, camera-to-world pose, (4, 4) annotation
        rows [x, y, x_top, y_top], top-view size and the exact
        image-to-top-view homography.

    """
    texture = _road_texture(seed)
    intrinsics = default_intrinsics(width, height, focal=300.0)
    half_length = (ROAD_SIZE[1] - 1) * ROAD_TEXEL / 2.0
    rotation = axis_angle_rotation([1.0, 0.0, 0.0], numpy.deg2rad(pitch))
    pose = Pose(rotation, [lateral_offset, half_length + 1.0,
                           -camera_height])
    view = render_plane_view(texture, intrinsics, pose, width, height,
                             ROAD_TEXEL)
    to_top = translation_homography(0.0, -ROAD_TOP_ROW)
    h_ipm = compose(to_top, invert(view.homography))
    top = []
    for low, high in ROAD_LANES:
        for row in (639.5, 239.5):
            top.append([(low + high - 1) / 2.0, row])
    top = numpy.array(top)
    image_points, _ = transform_points(view.homography, top)
    pairs = numpy.hstack([image_points, top - [0.0, ROAD_TOP_ROW]])
    out_size = (ROAD_SIZE[0], ROAD_SIZE[1] - ROAD_TOP_ROW)
    return RoadScene(view.image, view.depth, intrinsics, pose, pairs,
                     out_size, h_ipm)


def ground_view(texture, place, heading, view_size, texel_size, tilt=30.0,
                standoff=1.6):
    """
    Oblique view of a square ground footprint with top-view annotations.

    The camera looks at the footprint center along heading degrees in
    the texture frame, tilted by tilt degrees from straight down, from
    standoff footprint sides away. Its image is twice the footprint side
    wide and three quarters as high. The top view is view_size pixels
    square at one pixel per texel, facing up along the heading.

    Parameters
    ----------
    texture : orthomatch.imaging.Image
        Ground texture.
    place : array-like
        Footprint center in meters from texel (0, 0).
    heading : float
        Viewing direction in degrees, 0 along texture columns.
    view_size : int
        Top-view side in pixels (= texels).
    texel_size : float
        Texel side in meters.

    Returns
    -------
    GroundView
        Image, intrinsics, camera-to-world pose, (8, 4) annotation rows
        [x, y, x_top, y_top], top-view size and the exact image-to-top-view
        homography.

    """
    width, height = 2 * view_size, 3 * view_size // 2
    intrinsics = default_intrinsics(width, height)
    phi, alpha = numpy.deg2rad(heading), numpy.deg2rad(tilt)
    forward = numpy.array([numpy.cos(phi), numpy.sin(phi), 0.0])
    down = numpy.array([0.0, 0.0, 1.0])
    axis = numpy.sin(alpha) * forward + numpy.cos(alpha) * down
    right = numpy.cross(down, forward)
    image_down = numpy.cos(alpha) * -forward + numpy.sin(alpha) * down
    s = float(texel_size)
    texel = numpy.asarray(place, dtype=float) / s
    target = numpy.array([s * (texel[0] - (texture.width - 1) / 2.0),
                          s * (texel[1] - (texture.height - 1) / 2.0), 0.0])
    pose = Pose(numpy.column_stack([right, image_down, axis]),
                target - standoff * view_size * s * axis)
    view = render_plane_view(texture, intrinsics, pose, width, height, s)
    middle = (view_size - 1) / 2.0
    offset = texel - middle * (right[:2] - forward[:2])
    top_to_texel = Homography([[right[0], -forward[0], offset[0]],
                               [right[1], -forward[1], offset[1]],
                               [0.0, 0.0, 1.0]])
    image_from_top = compose(view.homography, top_to_texel)
    low, high = 0.1 * view_size, 0.9 * view_size - 1
    top = numpy.array([[low, low], [middle, low], [high, low],
                       [high, middle], [high, high], [middle, high],
                       [low, high], [low, middle]])
    image_points, _ = transform_points(image_from_top, top)
    return GroundView(view.image, intrinsics, pose,
                      numpy.hstack([image_points, top]),
                      (view_size, view_size), invert(image_from_top))
