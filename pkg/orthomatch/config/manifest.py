"""
Dataset manifest validation.

Three manifest kinds are used by the evaluation commands:

* eval-mma: a rotated-pair corpus, {"pairs": [{"id", "image_a",
  "image_b", "h_gt", "theta"?, "spec"?}, ...]}.
* eval-pose: {"entries": [{"id", "image", "depth", "k", "pose",
  "sequence"?, "roi"?, "ipm"?}, ...], "pairs": [{"representative",
  "candidates"}]}.
* eval-vpr: {"entries": [{"id", "image", "xy", "ipm"?}, ...]}.

The optional "ipm" field holds a top-view "size" [width, height] with
either annotated "pairs" [[x, y, x_top, y_top], ...] or a ready "h_ortho".

Image paths are relative to the manifest directory. Validation is
exhaustive: every violation is reported, none stops the scan.
"""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import io
import json
import os.path
import numpy

# local imports
from orthomatch.errors import ManifestError

__all__ = ['validate_manifest', 'load_manifest', 'MANIFEST_COMMANDS']

MANIFEST_COMMANDS = ('eval-mma', 'eval-pose', 'eval-vpr')
ROTATION_TOLERANCE = 1e-6


def _read(path):
    with io.open(path, 'r', encoding='utf-8') as input_stream:
        text = input_stream.read()
    try:
        return json.loads(text), []
    except ValueError as error:
        return None, ['invalid JSON: {}'.format(error)]


def _numbers(value, shape):
    try:
        array = numpy.array(value, dtype=float)
    except (TypeError, ValueError):
        return None
    if array.shape != shape or not numpy.all(numpy.isfinite(array)):
        return None
    return array


class _Checker(object):
    """Collects violations for one manifest."""

    def __init__(self, root):
        self.root = root
        self.violations = []

    def add(self, where, message):
        self.violations.append('{}: {}'.format(where, message))

    def field(self, where, entry, name):
        if name not in entry:
            self.add(where, "missing field '{}'".format(name))
            return False
        return True

    def identifier(self, where, entry, seen):
        if not self.field(where, entry, 'id'):
            return
        value = entry['id']
        if not isinstance(value, str) or not value:
            self.add(where, "field 'id' must be a non-empty string")
        elif value in seen:
            self.add(where, "duplicate id '{}'".format(value))
        else:
            seen.add(value)

    def file(self, where, entry, name):
        if not self.field(where, entry, name):
            return
        value = entry[name]
        if not isinstance(value, str):
            self.add(where, "field '{}' must be a path".format(name))
        elif not os.path.isfile(os.path.join(self.root, value)):
            self.add(where, "field '{}': file {} not found"
                     .format(name, value))

    def homography(self, where, entry, name):
        if not self.field(where, entry, name):
            return
        matrix = _numbers(entry[name], (3, 3))
        if matrix is None:
            self.add(where, "field '{}' must be 3x3 finite numbers"
                     .format(name))
        elif abs(numpy.linalg.det(matrix)) <= 1e-12 * max(
                numpy.abs(matrix).max() ** 3, 1e-300):
            self.add(where, "field '{}' is singular".format(name))

    def intrinsics(self, where, entry):
        if not self.field(where, entry, 'k'):
            return
        k = _numbers(entry['k'], (3, 3))
        if (k is None or k[0, 0] <= 0 or k[1, 1] <= 0
                or numpy.any(k[[1, 2, 2], [0, 0, 1]] != 0) or k[2, 2] != 1):
            self.add(where, "field 'k' must be an upper-triangular 3x3 "
                     "matrix with positive focal lengths")

    def pose(self, where, entry):
        if not self.field(where, entry, 'pose'):
            return
        pose = entry['pose']
        if not isinstance(pose, dict):
            self.add(where, "field 'pose' must hold 'r' and 't'")
            return
        rotation = _numbers(pose.get('r'), (3, 3))
        if rotation is None or numpy.abs(
                rotation.T.dot(rotation) - numpy.eye(3)).max() \
                > ROTATION_TOLERANCE or numpy.linalg.det(rotation) < 0:
            self.add(where, "field 'pose.r' must be a rotation matrix")
        if _numbers(pose.get('t'), (3,)) is None:
            self.add(where, "field 'pose.t' must hold 3 finite numbers")

    def ipm(self, where, entry):
        if entry.get('ipm') is None:
            return
        value = entry['ipm']
        if not isinstance(value, dict):
            self.add(where, "field 'ipm' must hold 'size' and 'pairs' or "
                     "'h_ortho'")
            return
        size = _numbers(value.get('size'), (2,))
        if size is None or numpy.any(size < 1) \
                or numpy.any(size != numpy.round(size)):
            self.add(where, "field 'ipm.size' must hold 2 positive "
                     "integers")
        if 'h_ortho' in value:
            matrix = _numbers(value['h_ortho'], (3, 3))
            if matrix is None or abs(numpy.linalg.det(matrix)) <= 1e-12 \
                    * max(numpy.abs(matrix).max() ** 3, 1e-300):
                self.add(where, "field 'ipm.h_ortho' must be a regular 3x3 "
                         "matrix")
        elif 'pairs' in value:
            try:
                pairs = numpy.array(value['pairs'], dtype=float)
            except (TypeError, ValueError):
                pairs = None
            if (pairs is None or pairs.ndim != 2 or pairs.shape[1] != 4
                    or len(pairs) < 4
                    or not numpy.all(numpy.isfinite(pairs))):
                self.add(where, "field 'ipm.pairs' must hold at least 4 "
                         "rows [x, y, x_top, y_top]")
        else:
            self.add(where, "field 'ipm' needs 'pairs' or 'h_ortho'")

    def roi(self, where, entry):
        if 'roi' not in entry or entry['roi'] is None:
            return
        value = entry['roi']
        if isinstance(value, dict):
            if 'shape' not in value or 'pixels' not in value:
                self.add(where, "field 'roi' mask needs 'shape' and "
                         "'pixels'")
            return
        box = _numbers(value, (4,))
        if box is None or box[0] < 0 or box[1] < 0 or box[2] <= box[0] \
                or box[3] <= box[1]:
            self.add(where, "field 'roi' must be [x0, y0, x1, y1] with "
                     "x0 < x1 and y0 < y1")

    def items(self, data, key):
        if not isinstance(data, dict) or key not in data:
            self.add('manifest', "missing list '{}'".format(key))
            return []
        if not isinstance(data[key], list):
            self.add('manifest', "'{}' must be a list".format(key))
            return []
        result = []
        for index, entry in enumerate(data[key]):
            where = '{}[{}]'.format(key, index)
            if isinstance(entry, dict):
                result.append((where, entry))
            else:
                self.add(where, 'entry must be an object')
        if not data[key]:
            self.add('manifest', "'{}' is empty".format(key))
        return result


def _check_corpus(checker, data):
    seen = set()
    for where, pair in checker.items(data, 'pairs'):
        checker.identifier(where, pair, seen)
        checker.file(where, pair, 'image_a')
        checker.file(where, pair, 'image_b')
        checker.homography(where, pair, 'h_gt')
        if 'theta' in pair and (isinstance(pair['theta'], bool) or
                                not isinstance(pair['theta'], (int, float))):
            checker.add(where, "field 'theta' must be a number")


def _check_pose(checker, data):
    seen = set()
    for where, entry in checker.items(data, 'entries'):
        checker.identifier(where, entry, seen)
        checker.file(where, entry, 'image')
        checker.file(where, entry, 'depth')
        checker.intrinsics(where, entry)
        checker.pose(where, entry)
        checker.roi(where, entry)
        checker.ipm(where, entry)
        if 'sequence' in entry and not isinstance(entry['sequence'], str):
            checker.add(where, "field 'sequence' must be a string")
    for where, pair in checker.items(data, 'pairs'):
        if checker.field(where, pair, 'representative') \
                and pair['representative'] not in seen:
            checker.add(where, "unknown representative '{}'"
                        .format(pair['representative']))
        if checker.field(where, pair, 'candidates'):
            candidates = pair['candidates']
            if not isinstance(candidates, list) or not candidates:
                checker.add(where, "field 'candidates' must be a non-empty "
                            "list")
                continue
            for candidate in candidates:
                if candidate not in seen:
                    checker.add(where, "unknown candidate '{}'"
                                .format(candidate))


def _check_vpr(checker, data):
    seen = set()
    for where, entry in checker.items(data, 'entries'):
        checker.identifier(where, entry, seen)
        checker.file(where, entry, 'image')
        if checker.field(where, entry, 'xy') \
                and _numbers(entry['xy'], (2,)) is None:
            checker.add(where, "field 'xy' must hold 2 finite numbers")
        checker.ipm(where, entry)


CHECKS = {'eval-mma': _check_corpus, 'eval-pose': _check_pose,
          'eval-vpr': _check_vpr}


def validate_manifest(path, command):
    """
    Check a manifest against the schema of a command.

    Parameters
    ----------
    path : str
        Manifest path.
    command : str
        'eval-mma', 'eval-pose' or 'eval-vpr'.

    Returns
    -------
    list of str
        Every violation, naming the entry index and field; empty when the
        manifest is valid.

    Raises
    ------
    IOError
        When the file cannot be read.
    ValueError
        For an unknown command.

    """
    if command not in CHECKS:
        raise ValueError('No manifest schema for command {}.'
                         .format(command))
    data, violations = _read(path)
    if violations:
        return violations
    checker = _Checker(os.path.dirname(os.path.abspath(path)))
    CHECKS[command](checker, data)
    return checker.violations


def load_manifest(path, command):
    """
    Validate and return a manifest.

    Raises
    ------
    ManifestError
        With every violation when the manifest is invalid or unreadable.

    """
    try:
        violations = validate_manifest(path, command)
    except (IOError, OSError) as error:
        raise ManifestError('{}: cannot read manifest ({}).'
                            .format(path, error))
    if violations:
        raise ManifestError('{}: invalid {} manifest.'.format(path, command),
                            violations)
    with io.open(path, 'r', encoding='utf-8') as input_stream:
        return json.load(input_stream)
