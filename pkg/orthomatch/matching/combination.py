"""Correspondence ensemble of descriptor heads."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import logging
import math
import numpy
from scipy.spatial import cKDTree

# local imports
from orthomatch.errors import InvariantError
from orthomatch.matching.match_set import MatchSet

__all__ = ['ensemble', 'combine_match_sets']

logger = logging.getLogger(__name__)

ROUNDING_SLACK = 1e-9


def _duplicates(points, heads, order, radius):
    """Flag matches whose endpoints both lie within radius of a better
    match from another head."""
    dropped = numpy.zeros(len(points), dtype=bool)
    if radius <= 0 or len(points) < 2:
        return dropped
    rank = numpy.empty(len(order), dtype=int)
    rank[order] = numpy.arange(len(order))
    neighbours = {}
    for i, j in cKDTree(points).query_pairs(radius * numpy.sqrt(2.0)):
        if heads[i] == heads[j]:
            continue
        if (numpy.hypot(*(points[i, :2] - points[j, :2])) > radius
                or numpy.hypot(*(points[i, 2:] - points[j, 2:])) > radius):
            continue
        first, second = (i, j) if rank[i] < rank[j] else (j, i)
        neighbours.setdefault(second, []).append(first)
    for index in order:
        if any(not dropped[other] for other in neighbours.get(index, ())):
            dropped[index] = True
    return dropped


def combine_match_sets(match_sets, keep_fraction=0.5, collapse_radius=0.5):
    """
    Merge the matches of several heads and keep the lowest-distance
    fraction.

    The union of all sets is sorted by (distance, head, index_a). A match
    whose two endpoints both lie within collapse_radius pixels of a
    better-ranked match from another head is a duplicate and is
    removed. Of the M remaining matches, the first ceil(keep_fraction M)
    are kept.

    Parameters
    ----------
    match_sets : list of MatchSet
        Matches of the same image pair, one set per head label.
    keep_fraction : float
        Fraction in (0, 1] of matches to keep.
    collapse_radius : float
        Duplicate radius in pixels.

    Returns
    -------
    MatchSet
        Kept matches in increasing distance.

    Raises
    ------
    InvariantError
        On a bad fraction, when the sets describe different image pairs
        or when two sets share a head label.

    """
    if not 0 < keep_fraction <= 1:
        raise InvariantError('keep_fraction must lie in (0, 1], got {}.'
                             .format(keep_fraction))
    if not match_sets:
        raise InvariantError('Nothing to combine.')
    sets = [s for s in match_sets if len(s)]
    names = set((s.name_a, s.name_b) for s in sets)
    if len(names) > 1:
        raise InvariantError('Ensemble inputs describe different image '
                             'pairs: {}.'.format(sorted(names)))
    labels = [head for s in sets for head in s.count_by_head()]
    if len(labels) != len(set(labels)):
        raise InvariantError('Ensemble inputs share head labels: {}.'
                             .format(sorted(labels)))
    name_a, name_b = names.pop() if names else (match_sets[0].name_a,
                                                match_sets[0].name_b)
    matches = [m for s in sets for m in s.matches]
    if not matches:
        return MatchSet.empty(name_a, name_b)
    points = numpy.vstack([s.points for s in sets])
    heads = [m.head for m in matches]
    order = sorted(range(len(matches)),
                   key=lambda i: (matches[i].distance, matches[i].head,
                                  matches[i].index_a))
    dropped = _duplicates(points, heads, numpy.array(order), collapse_radius)
    survivors = [i for i in order if not dropped[i]]
    keep = int(math.ceil(keep_fraction * len(survivors) - ROUNDING_SLACK))
    kept = survivors[:max(keep, 1)]
    logger.debug('Ensemble: %d matches from %d heads, %d duplicates, %d '
                 'kept.', len(matches), len(labels), int(dropped.sum()),
                 len(kept))
    return MatchSet([matches[i] for i in kept], points[kept], name_a, name_b)


def ensemble(matches_vanilla, matches_robust, keep_fraction=0.5,
             collapse_radius=0.5):
    """
    Ensemble of the vanilla and robust heads of one image pair.

    See :func:`combine_match_sets`.

    """
    return combine_match_sets([matches_vanilla, matches_robust],
                              keep_fraction, collapse_radius)
