"""
Command line interface.

Exit codes: 0 on success, 1 for invalid arguments, configuration,
manifests or input formats, 2 for failures while running a pipeline.
"""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import argparse
import logging
import os.path
import sys

# local imports
from orthomatch.errors import (
    ConfigOutOfRange, ConfigurationError, EmptyInputDir, FormatError,
    InvariantError, ManifestError, OrthomatchError, ReportError
)
from orthomatch.config.manifest import MANIFEST_COMMANDS, validate_manifest
from orthomatch.config.pipeline_config import PipelineConfig
from orthomatch.core.camera import Intrinsics
from orthomatch.core.serialization import (
    intrinsics_from_json, read_json, write_json
)
from orthomatch.evaluation.metrics import MMAConfig
from orthomatch.evaluation.protocols import (
    VPRConfig, eval_mma, eval_pose_protocol, eval_vpr
)
from orthomatch.evaluation.report import EvalReport
from orthomatch.features.exchange import (
    load_external_descriptors, save_descriptors
)
from orthomatch.imaging.io import read_depth, read_image, write_image
from orthomatch.matching.combination import combine_match_sets
from orthomatch.matching.mnn import match_mnn
from orthomatch.matching.ransac import ransac_homography
from orthomatch.ortho.ortho_view import (
    apply_ortho, ipm_from_json, ortho_from_depth
)
from orthomatch.ortho.roi import ROI
from orthomatch.pipeline import View, detect_and_describe, run_pipeline
from orthomatch.synth.corpus import build_corpus
from orthomatch.synth.pairs import SynthConfig
from orthomatch.synth.rigs import build_pose_rig, build_vpr_corpus
from orthomatch.version import __version__

__all__ = ['main', 'build_parser']

logger = logging.getLogger(__name__)

SUCCESS, INVALID, RUNTIME_FAILURE = 0, 1, 2
VALIDATION_ERRORS = (ConfigurationError, ManifestError, FormatError,
                     InvariantError, ConfigOutOfRange, EmptyInputDir,
                     ReportError)
DESCRIPTOR_EXTENSION = '.omds'
HEAD_CHOICES = ('vanilla', 'robust', 'ensemble')


class _Parser(argparse.ArgumentParser):
    """Argument parser exiting with the validation error code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INVALID, '{}: error: {}\n'.format(self.prog, message))


def _load_config(args, **sections):
    """Configuration file, then --set overrides, then command options."""
    overrides = list(args.set or [])
    if args.seed is not None:
        overrides.append('seed={}'.format(args.seed))
    if getattr(args, 'workers', None) is not None:
        overrides.append('workers={}'.format(args.workers))
    if args.config:
        config = PipelineConfig.from_file(args.config, overrides)
    else:
        config = PipelineConfig(None, overrides)
    if sections:
        config = config.replace(**sections)
    return config


def _intrinsics(text):
    """Intrinsics from a JSON file holding "k", or from 'fx,fy,cx,cy'."""
    if os.path.isfile(text):
        return intrinsics_from_json(read_json(text))
    try:
        values = [float(v) for v in text.split(',')]
    except ValueError:
        raise InvariantError('Invalid intrinsics {!r}.'.format(text))
    if len(values) != 4:
        raise InvariantError('Intrinsics need a JSON file or fx,fy,cx,cy.')
    return Intrinsics(*values)


def _gen_rotated(args):
    config = SynthConfig(args.crop_size, args.rot_step,
                         (args.scale_min, args.scale_max), args.shear,
                         args.perspective, args.noise_sigma)
    manifest = build_corpus(args.input, args.out, config, args.seed or 0,
                            args.pairs_per_image, args.workers or 1,
                            not args.quiet)
    print('Wrote {} pairs to {}.'.format(len(manifest['pairs']), args.out))


def _gen_pose_rig(args):
    path = build_pose_rig(args.out, args.count, args.sequences,
                          args.max_angle, args.max_roll,
                          depth_noise_sigma=args.depth_noise,
                          seed=args.seed or 0, progress=not args.quiet)
    print('Wrote {}.'.format(path))


def _gen_vpr(args):
    paths = build_vpr_corpus(args.out, args.queries, args.decoys,
                             seed=args.seed or 0, progress=not args.quiet)
    print('Wrote {} and {}.'.format(*paths))


def _describe(args):
    sections = {}
    if args.max_kp is not None:
        sections['detector'] = {'max_keypoints': args.max_kp}
    config = _load_config(args, **sections)
    image = read_image(args.input)
    name = os.path.basename(args.input)
    descriptors = detect_and_describe(image, config, [args.head], name)
    save_descriptors(descriptors[args.head], args.out)
    print('Wrote {} {} descriptors to {}.'.format(
        len(descriptors[args.head]), args.head, args.out))


def _is_descriptor_file(path):
    return os.path.splitext(path)[1].lower() == DESCRIPTOR_EXTENSION


def _image_view(path, depth_path=None, intrinsics=None):
    image = read_image(path)
    depth = None
    if depth_path:
        depth = read_depth(depth_path, (image.height, image.width))
    return View(os.path.basename(path), image, depth,
                _intrinsics(intrinsics) if intrinsics else None)


def _match(args):
    sections = {}
    if args.ransac:
        sections['ransac'] = {'model': args.ransac}
    if args.head:
        sections['descriptor'] = {'head': args.head}
    config = _load_config(args, **sections)
    if _is_descriptor_file(args.a) != _is_descriptor_file(args.b):
        raise ConfigurationError('--a and --b must both be images or both '
                                 'descriptor files.')
    if _is_descriptor_file(args.a):
        output = _match_descriptors(args, config)
    else:
        if args.ensemble:
            raise ConfigurationError('--ensemble combines descriptor files; '
                                     'images use --head ensemble.')
        result = run_pipeline(
            _image_view(args.a, args.depth_a, args.k),
            _image_view(args.b, args.depth_b, args.k_b or args.k), config)
        output = {'matches': result.matches.to_json(),
                  'ransac': (result.ransac.to_json() if result.ransac
                             else None)}
        if args.timings:
            output['timings'] = dict(result.timings)
    write_json(output, args.out)
    print('Wrote {} matches to {}.'.format(len(output['matches']['pairs']),
                                          args.out))


def _match_descriptors(args, config):
    """
    MNN and homography verification of exchange-format files.

    Each --ensemble pair is matched on its own and tagged 'external1',
    'external2', ... before all sets go through the ensemble with the
    pair of --a and --b (tagged 'external').
    """
    if config.ransac.model == 'pose3d':
        raise ConfigurationError('pose3d verification needs images with '
                                 '--depth-a, --depth-b and --k, not '
                                 'descriptor files.')
    if args.depth_a or args.depth_b or args.k or args.k_b:
        raise ConfigurationError('--depth-a, --depth-b and --k apply to '
                                 'image inputs only.')
    name_a, name_b = os.path.basename(args.a), os.path.basename(args.b)
    match_sets = []
    for index, (path_a, path_b) in enumerate([(args.a, args.b)]
                                             + list(args.ensemble or [])):
        if not (_is_descriptor_file(path_a) and _is_descriptor_file(path_b)):
            raise ConfigurationError('--ensemble expects pairs of {} files.'
                                     .format(DESCRIPTOR_EXTENSION))
        set_a = load_external_descriptors(path_a, name=name_a)
        set_b = load_external_descriptors(path_b, name=name_b)
        label = 'external{}'.format(index) if index else 'external'
        match_sets.append(match_mnn(set_a, set_b).relabel(label))
    matches = match_sets[0]
    if len(match_sets) > 1:
        matches = combine_match_sets(match_sets,
                                     config.ensemble.keep_fraction,
                                     config.ensemble.collapse_radius)
    result = None
    if config.ransac.model == 'homography':
        ransac = config.ransac
        result = ransac_homography(matches, ransac.threshold_px,
                                   ransac.max_iters, ransac.confidence,
                                   config.seed)
    return {'matches': matches.to_json(),
            'ransac': result.to_json() if result else None}


def _ortho(args):
    image = read_image(args.input)
    if args.mode == 'ipm':
        if not args.pairs:
            raise ConfigurationError('ortho --mode ipm needs --pairs.')
        try:
            spec = ipm_from_json(read_json(args.pairs))
        except FormatError as error:
            raise FormatError('{}: {}'.format(args.pairs, error))
        warped = apply_ortho(image, spec)
    else:
        if not (args.depth and args.k):
            raise ConfigurationError('ortho --mode depth needs --depth and '
                                     '--k.')
        depth = read_depth(args.depth, (image.height, image.width))
        roi = ROI.parse(args.roi) if args.roi else None
        warped, spec = ortho_from_depth(image, depth, _intrinsics(args.k),
                                        roi, args.standoff, args.max_side)
    write_image(warped.image, args.out)
    if args.spec:
        write_json(spec.to_json(), args.spec)
    print('Wrote {}x{} {} view to {}.'.format(spec.out_width,
                                             spec.out_height, spec.mode,
                                             args.out))


def _finish_report(report, args):
    report.write(args.out)
    for line in report.summary():
        print(line)
    print('Wrote {}.'.format(args.out))


def _eval_mma(args):
    config = _load_config(args, descriptor={'head': args.head})
    mma_config = MMAConfig(args.thresholds, args.max_keypoints)
    report = eval_mma(args.corpus, config, mma_config, args.ransac,
                      not args.quiet)
    _finish_report(report, args)


def _eval_pose(args):
    sections = {'ortho': {'enabled': args.ortho == 'on'}}
    if args.head:
        sections['descriptor'] = {'head': args.head}
    config = _load_config(args, **sections)
    _finish_report(eval_pose_protocol(args.manifest, config,
                                      not args.quiet), args)


def _eval_vpr(args):
    ortho = {'enabled': False}
    if args.ortho == 'on':
        ortho = {'enabled': True, 'mode': 'ipm'}
    config = _load_config(args, descriptor={'head': args.head}, ortho=ortho)
    radii = args.report_radii
    if radii is None:
        radii = [r for r in (args.loc_m, 30.0) if r <= args.prior_m]
    vpr_config = VPRConfig(args.prior_m, args.loc_m, radii)
    _finish_report(eval_vpr(args.queries, args.refs, vpr_config, config,
                            not args.quiet), args)


def _report(args):
    report = EvalReport.load(args.input)
    for line in report.summary():
        print(line)
    if args.csv:
        report.write_curves(args.csv)
        print('Wrote {}.'.format(args.csv))


def _validate(args):
    violations = validate_manifest(args.manifest, args.command)
    if violations:
        raise ManifestError('{}: invalid {} manifest.'.format(
            args.manifest, args.command), violations)
    print('{}: valid {} manifest.'.format(args.manifest, args.command))


def _add_common(parser, pipeline=True, workers=False):
    parser.add_argument('--seed', type=int, default=None,
                        help='seed of every random choice')
    if pipeline:
        parser.add_argument('--config', help='pipeline configuration JSON')
        parser.add_argument('--set', action='append', metavar='KEY=VALUE',
                            help='override a configuration key, e.g. '
                                 'descriptor.head=robust')
    if workers:
        parser.add_argument('--workers', type=int, default=None,
                            help='entries processed concurrently')


def build_parser():
    parser = _Parser(prog='orthomatch',
                     description='Rotation-robust matching with '
                                 'orthographic views.')
    parser.add_argument('--version', action='version',
                        version='%(prog)s {}'.format(__version__))
    parser.add_argument('-v', '--verbose', action='store_true',
                        help='log debug messages')
    parser.add_argument('-q', '--quiet', action='store_true',
                        help='only log errors, no progress bars')
    commands = parser.add_subparsers(dest='name', metavar='command',
                                     parser_class=_Parser)
    commands.required = True

    sub = commands.add_parser('gen-rotated', help='build a rotated-pair '
                                                  'corpus')
    sub.add_argument('--in', dest='input', required=True)
    sub.add_argument('--out', required=True)
    sub.add_argument('--pairs-per-image', type=int, default=8)
    sub.add_argument('--rot-step', type=float, default=15.0)
    sub.add_argument('--crop-size', type=int, default=400)
    sub.add_argument('--scale-min', type=float, default=1.0)
    sub.add_argument('--scale-max', type=float, default=1.0)
    sub.add_argument('--shear', type=float, default=0.0)
    sub.add_argument('--perspective', type=float, default=0.0)
    sub.add_argument('--noise-sigma', type=float, default=0.0)
    _add_common(sub, pipeline=False, workers=True)
    sub.set_defaults(run=_gen_rotated)

    sub = commands.add_parser('gen-pose-rig', help='render a textured-plane '
                                                   'arc rig')
    sub.add_argument('--out', required=True)
    sub.add_argument('--count', type=int, default=100)
    sub.add_argument('--sequences', type=int, default=1)
    sub.add_argument('--max-angle', type=float, default=45.0)
    sub.add_argument('--max-roll', type=float, default=180.0)
    sub.add_argument('--depth-noise', type=float, default=0.0)
    _add_common(sub, pipeline=False)
    sub.set_defaults(run=_gen_pose_rig)

    sub = commands.add_parser('gen-vpr', help='build an opposite-view place '
                                              'recognition corpus')
    sub.add_argument('--out', required=True)
    sub.add_argument('--queries', type=int, default=20)
    sub.add_argument('--decoys', type=int, default=5)
    _add_common(sub, pipeline=False)
    sub.set_defaults(run=_gen_vpr)

    sub = commands.add_parser('describe', help='detect and describe one '
                                               'image')
    sub.add_argument('--in', '--image', dest='input', required=True)
    sub.add_argument('--out', required=True,
                     help='descriptor file (exchange format)')
    sub.add_argument('--head', choices=('vanilla', 'robust'),
                     default='robust')
    sub.add_argument('--max-kp', type=int, default=None)
    _add_common(sub)
    sub.set_defaults(run=_describe)

    sub = commands.add_parser('match', help='match two images or two '
                                            'descriptor files')
    sub.add_argument('--a', required=True,
                     help='first image or .omds descriptor file')
    sub.add_argument('--b', required=True,
                     help='second image or .omds descriptor file')
    sub.add_argument('--head', choices=HEAD_CHOICES)
    sub.add_argument('--ransac', choices=('homography', 'pose3d', 'none'))
    sub.add_argument('--ensemble', nargs=2, action='append',
                     metavar=('A', 'B'),
                     help='another pair of descriptor files of the same '
                          'images, combined with --a/--b by the ensemble; '
                          'repeatable')
    sub.add_argument('--depth-a', help='16-bit millimeter depth PNG of --a')
    sub.add_argument('--depth-b', help='16-bit millimeter depth PNG of --b')
    sub.add_argument('--k', help='intrinsics of --a (and of --b unless '
                                 '--k-b is given): JSON file with "k", or '
                                 'fx,fy,cx,cy')
    sub.add_argument('--k-b', help='intrinsics of --b')
    sub.add_argument('--out', required=True,
                     help='match JSON; floats use the shortest round-trip '
                          'repr')
    sub.add_argument('--timings', action='store_true',
                     help='include stage timings in the output')
    _add_common(sub)
    sub.set_defaults(run=_match)

    sub = commands.add_parser('ortho', help='orthographic view of an image')
    sub.add_argument('--mode', choices=('depth', 'ipm'), default='depth')
    sub.add_argument('--img', '--image', dest='input', required=True)
    sub.add_argument('--depth', help='16-bit millimeter depth PNG')
    sub.add_argument('--k', help='JSON file with "k", or fx,fy,cx,cy')
    sub.add_argument('--roi', help='plane region x0,y0,x1,y1')
    sub.add_argument('--pairs', help='JSON with IPM "pairs" and "size"')
    sub.add_argument('--standoff', type=float, default=None)
    sub.add_argument('--max-side', type=int, default=1024)
    sub.add_argument('--out', required=True)
    sub.add_argument('--spec', help='write the ortho spec JSON here')
    _add_common(sub, pipeline=False)
    sub.set_defaults(run=_ortho)

    sub = commands.add_parser('eval-mma', help='mean matching accuracy')
    sub.add_argument('--corpus', required=True)
    sub.add_argument('--head', choices=HEAD_CHOICES, default='ensemble')
    sub.add_argument('--ransac', action='store_true',
                     help='also score RANSAC-verified matches')
    sub.add_argument('--thresholds', type=float, nargs='+',
                     default=list(range(1, 11)))
    sub.add_argument('--max-keypoints', type=int, default=2000)
    sub.add_argument('--out', required=True)
    _add_common(sub, workers=True)
    sub.set_defaults(run=_eval_mma)

    sub = commands.add_parser('eval-pose', help='relative pose errors')
    sub.add_argument('--manifest', required=True)
    sub.add_argument('--ortho', choices=('on', 'off'), default='off')
    sub.add_argument('--head', choices=HEAD_CHOICES)
    sub.add_argument('--out', required=True)
    _add_common(sub, workers=True)
    sub.set_defaults(run=_eval_pose)

    sub = commands.add_parser('eval-vpr', help='place recognition recall')
    sub.add_argument('--queries', required=True)
    sub.add_argument('--refs', required=True)
    sub.add_argument('--prior-m', type=float, default=52.0)
    sub.add_argument('--loc-m', type=float, default=7.0)
    sub.add_argument('--report-radii', type=float, nargs='+')
    sub.add_argument('--ortho', choices=('on', 'off'), default='off',
                     help='match inverse perspective mapped top views; '
                          'entries need an "ipm" field')
    sub.add_argument('--head', choices=HEAD_CHOICES, default='robust')
    sub.add_argument('--out', required=True)
    _add_common(sub, workers=True)
    sub.set_defaults(run=_eval_vpr)

    sub = commands.add_parser('report', help='summarize a report')
    sub.add_argument('--in', dest='input', required=True)
    sub.add_argument('--csv', help='write plot data as CSV')
    _add_common(sub, pipeline=False)
    sub.set_defaults(run=_report)

    sub = commands.add_parser('validate', help='check a manifest')
    sub.add_argument('--manifest', required=True)
    sub.add_argument('--command', choices=MANIFEST_COMMANDS,
                     default='eval-mma')
    _add_common(sub, pipeline=False)
    sub.set_defaults(run=_validate)
    return parser


def _configure_logging(args):
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.ERROR
    logging.basicConfig(level=level, format='%(levelname)s: %(message)s')


def main(argv=None):
    """Run one command; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)
    try:
        args.run(args)
    except VALIDATION_ERRORS as error:
        logger.error('%s', error)
        return INVALID
    except OrthomatchError as error:
        logger.error('%s', error)
        return RUNTIME_FAILURE
    except (IOError, OSError) as error:
        logger.error('%s', error)
        return RUNTIME_FAILURE
    return SUCCESS


if __name__ == '__main__':
    sys.exit(main())
