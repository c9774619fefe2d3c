"""
Orthographic view generation.

Two modes produce an :class:`OrthoSpec`. In surface-normal mode a plane is
fitted to the back-projected depth of a region of interest and a virtual
camera is placed on the plane normal above the centroid, looking at the
plane; the plane-induced homography re-renders the view from there. In IPM
mode a fixed homography is estimated from annotated point pairs, typically
lane markers mapped onto a rectangle.
"""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import logging
import numpy

# local imports
from orthomatch.errors import (
    DegenerateHomography, EmptyROI, FormatError, InvariantError
)
from orthomatch.core.camera import Pose
from orthomatch.core.dlt import homography_from_point_pairs
from orthomatch.core.homography import (
    Homography, compose, invert, rectifying_homography, scaling_homography,
    transform_points, translation_homography
)
from orthomatch.core.rotation import align_rotation, axis_angle_rotation
from orthomatch.core.serialization import (
    homography_from_json, homography_to_json
)
from orthomatch.imaging.depth import backproject
from orthomatch.imaging.warping import warp
from orthomatch.matching.match_set import MatchSet
from orthomatch.ortho.plane_fit import fit_plane
from orthomatch.ortho.roi import ROI

__all__ = ['OrthoSpec', 'ortho_from_depth', 'ipm_from_annotations',
           'ipm_from_json', 'apply_ortho', 'backproject_matches',
           'virtual_camera_pose', 'MODES', 'MIN_VALID_PIXELS',
           'DEFAULT_MAX_SIDE']

logger = logging.getLogger(__name__)

MODES = ('surface_normal', 'ipm')
MIN_VALID_PIXELS = 50
DEFAULT_MAX_SIDE = 1024
OPTICAL_AXIS = numpy.array([0.0, 0.0, 1.0])
IMAGE_X_AXIS = numpy.array([1.0, 0.0, 0.0])
IMAGE_Y_AXIS = numpy.array([0.0, 1.0, 0.0])


class OrthoSpec(object):
    """
    Everything needed to reproduce an orthographic warp.

    Attributes
    ----------
    mode : str
        'surface_normal' or 'ipm'.
    homography : Homography
        H_ortho mapping perspective pixels to orthographic pixels.
    out_width, out_height : int
        Orthographic canvas size.
    provenance : dict
        Plane fit statistics ({'n', 'd', 'rms', ...}) for surface-normal
        mode, or {'pairs': [[xs, ys, xt, yt], ...]} for IPM mode.

    """

    def __init__(self, mode, homography, out_width, out_height,
                 provenance=None):
        if mode not in MODES:
            raise InvariantError('Unknown ortho mode {}.'.format(mode))
        if not isinstance(homography, Homography):
            homography = Homography(homography)
        if out_width < 1 or out_height < 1:
            raise InvariantError('Ortho canvas must be at least 1x1.')
        self.mode = mode
        self.homography = homography
        self.out_width = int(out_width)
        self.out_height = int(out_height)
        self.provenance = dict(provenance or {})

    def __repr__(self):
        return 'OrthoSpec({}, {}x{})'.format(self.mode, self.out_width,
                                             self.out_height)

    def to_json(self):
        result = {'mode': self.mode,
                  'h_ortho': homography_to_json(self.homography)['h'],
                  'out_w': self.out_width, 'out_h': self.out_height}
        result.update(self.provenance)
        return result

    @classmethod
    def from_json(cls, data):
        try:
            provenance = {k: v for k, v in data.items()
                          if k not in ('mode', 'h_ortho', 'out_w', 'out_h')}
            return cls(data['mode'], homography_from_json(
                {'h': data['h_ortho']}), data['out_w'], data['out_h'],
                provenance)
        except (KeyError, TypeError, AttributeError) as error:
            raise FormatError('Invalid ortho spec: {}'.format(error))


def virtual_camera_pose(plane_fit, standoff=None):
    """
    Pose from the real camera frame to the fronto-parallel virtual camera.

    The virtual optical axis is -n, its center sits at
    centroid + standoff n, and its x axis is the real camera's x axis
    projected onto the plane (the y axis when x is parallel to n).

    Returns
    -------
    orthomatch.core.Pose
        Pose mapping real camera coordinates to virtual ones.

    """
    normal = plane_fit.plane.normal
    standoff = plane_fit.plane.d if standoff is None else float(standoff)
    if not standoff > 0:
        raise InvariantError('Standoff must be positive, got {}.'
                             .format(standoff))
    aligned = align_rotation(OPTICAL_AXIS, -normal)
    target_x = IMAGE_X_AXIS - IMAGE_X_AXIS.dot(normal) * normal
    if numpy.linalg.norm(target_x) < 1e-6:
        target_x = IMAGE_Y_AXIS - IMAGE_Y_AXIS.dot(normal) * normal
    target_x /= numpy.linalg.norm(target_x)
    current_x = aligned.dot(IMAGE_X_AXIS)
    gauge = numpy.arctan2(numpy.cross(current_x, target_x).dot(-normal),
                          current_x.dot(target_x))
    rotation = axis_angle_rotation(-normal, gauge).dot(aligned)
    center = plane_fit.centroid + standoff * normal
    return Pose(rotation.T, -rotation.T.dot(center))


def _fit_canvas(homography, corners, max_side):
    """Shift (and shrink) so the warped corners fill a canvas from (0, 0)."""
    mapped, finite = transform_points(homography, corners)
    h = homography.matrix
    w = corners.dot(h[2, :2]) + h[2, 2]
    if not finite.all() or not (numpy.all(w > 0) or numpy.all(w < 0)):
        raise DegenerateHomography('Region of interest crosses the horizon '
                                   'of the orthographic view.')
    low = mapped.min(axis=0)
    extent = mapped.max(axis=0) - low
    homography = compose(translation_homography(-low[0], -low[1]),
                         homography)
    scale = 1.0
    if extent.max() + 1 > max_side:
        scale = (max_side - 1) / extent.max()
        homography = compose(scaling_homography(scale), homography)
    size = numpy.floor(extent * scale + 1e-6).astype(int) + 1
    return homography, int(size[0]), int(size[1])


def ortho_from_depth(image, depth, intrinsics, roi=None, standoff=None,
                     max_side=DEFAULT_MAX_SIDE):
    """
    Fronto-parallel view of the dominant plane inside roi.

    Parameters
    ----------
    image : orthomatch.imaging.Image
        Perspective view.
    depth : orthomatch.imaging.DepthMap
        Metric depth of the same view.
    intrinsics : orthomatch.core.Intrinsics
        Camera intrinsics, shared by the virtual camera.
    roi : ROI, optional
        Region holding the plane; defaults to the whole image.
    standoff : float, optional
        Distance of the virtual camera from the plane; defaults to the
        fitted plane distance d.
    max_side : int
        Largest canvas side; larger views are scaled down.

    Returns
    -------
    warped : orthomatch.imaging.WarpResult
        Orthographic view.
    spec : OrthoSpec
        Mode 'surface_normal' with plane statistics.

    Raises
    ------
    EmptyROI
        With fewer than 50 valid depth pixels in the ROI.
    DegeneratePoints
        When the ROI points do not span a plane.
    DegenerateHomography
        When the ROI cannot be rectified.

    """
    if depth.shape != (image.height, image.width):
        raise InvariantError('Depth size {} differs from image size {}.'
                             .format(depth.shape, (image.height,
                                                   image.width)))
    if roi is None:
        roi = ROI.full(image.width, image.height)
    points = backproject(depth, intrinsics, roi)
    if len(points) < MIN_VALID_PIXELS:
        raise EmptyROI('ROI holds {} valid depth pixels, {} needed.'
                       .format(len(points), MIN_VALID_PIXELS))
    plane_fit = fit_plane(points)
    pose = virtual_camera_pose(plane_fit, standoff)
    raw = rectifying_homography(intrinsics, pose.rotation, pose.translation,
                                plane_fit.plane)
    homography, width, height = _fit_canvas(raw, roi.corners(), max_side)
    plane = plane_fit.plane
    logger.debug('Plane n=%s d=%.4f rms=%.2e; ortho canvas %dx%d.',
                 plane.normal, plane.d, plane_fit.rms, width, height)
    spec = OrthoSpec('surface_normal', homography, width, height, {
        'plane': {'n': plane.normal.tolist(), 'd': plane.d,
                  'rms': plane_fit.rms, 'count': plane_fit.count},
        'roi': roi.to_json(),
        'standoff': plane.d if standoff is None else float(standoff)})
    return apply_ortho(image, spec), spec


def ipm_from_annotations(point_pairs, out_size):
    """
    Inverse perspective mapping from annotated point pairs.

    Parameters
    ----------
    point_pairs : array-like
        (N, 4) rows [xs, ys, xt, yt] or N pairs ((xs, ys), (xt, yt)),
        N >= 4, perspective pixels to top-view pixels.
    out_size : tuple of int
        (width, height) of the top view.

    Returns
    -------
    OrthoSpec
        Mode 'ipm'.

    Raises
    ------
    InsufficientPoints, DegenerateConfiguration
        From the DLT estimate.

    """
    pairs = numpy.asarray(point_pairs, dtype=float).reshape(-1, 4)
    homography = homography_from_point_pairs(pairs[:, :2], pairs[:, 2:])
    width, height = out_size
    return OrthoSpec('ipm', homography, width, height,
                     {'pairs': pairs.tolist()})


def ipm_from_json(data):
    """
    IPM spec from an annotation object.

    Two forms are accepted, both with the top-view "size" [width,
    height]: annotated point pairs {"pairs": [[xs, ys, xt, yt], ...]}
    solved by :func:`ipm_from_annotations`, or a ready mapping
    {"h_ortho": 3x3}.

    Raises
    ------
    FormatError
        When neither form is present or a field is malformed.

    """
    try:
        width, height = (int(value) for value in data['size'])
        if 'h_ortho' in data:
            return OrthoSpec('ipm', homography_from_json(
                {'h': data['h_ortho']}), width, height)
        return ipm_from_annotations(data['pairs'], (width, height))
    except (KeyError, TypeError, ValueError) as error:
        raise FormatError('Invalid IPM annotation, expected "size" with '
                          '"pairs" or "h_ortho": {!r}.'.format(error))


def apply_ortho(image, spec):
    """Warp image by spec.homography onto the spec canvas."""
    return warp(image, spec.homography, spec.out_width, spec.out_height)


def backproject_matches(matches, spec_a, spec_b):
    """
    Map match endpoints from orthographic to perspective pixels.

    Parameters
    ----------
    matches : MatchSet
        Matches between two orthographic views.
    spec_a, spec_b : OrthoSpec or None
        Specs of the two views; None leaves that side unchanged.

    Returns
    -------
    matches : MatchSet
        Matches in perspective coordinates; indices, distances and heads
        are preserved.
    dropped : int
        Number of matches removed because an endpoint maps to infinity.

    """
    points_a, finite_a = _to_perspective(matches.points_a, spec_a)
    points_b, finite_b = _to_perspective(matches.points_b, spec_b)
    keep = finite_a & finite_b
    dropped = int(len(matches) - keep.sum())
    if dropped:
        logger.warning('%d matches map to infinity and were dropped.',
                       dropped)
    points = numpy.hstack([points_a, points_b])[keep]
    kept = [m for m, k in zip(matches.matches, keep) if k]
    return MatchSet(kept, points, matches.name_a, matches.name_b), dropped


def _to_perspective(points, spec):
    if spec is None:
        return numpy.array(points), numpy.ones(len(points), dtype=bool)
    return transform_points(invert(spec.homography), points)
