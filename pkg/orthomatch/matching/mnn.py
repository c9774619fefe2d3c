"""Brute-force mutual nearest neighbour matching."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import logging
import numpy
from scipy.spatial.distance import cdist

# local imports
from orthomatch.errors import DimensionMismatch
from orthomatch.matching.match_set import MatchSet

__all__ = ['match_mnn']

logger = logging.getLogger(__name__)


def match_mnn(a, b):
    """
    Mutual nearest neighbour matches between two descriptor sets.

    Pair (i, j) is kept iff j is the nearest descriptor of b to a[i] and
    i is the nearest descriptor of a to b[j] (Euclidean distance,
    exhaustive). Equal distances resolve to the lowest index.

    Parameters
    ----------
    a, b : orthomatch.features.DescriptorSet
        Descriptor sets of equal dimension.

    Returns
    -------
    MatchSet
        Matches tagged with the head of a, ordered by index_a.

    Raises
    ------
    DimensionMismatch
        When descriptor dimensions differ.

    """
    if a.dimension != b.dimension:
        raise DimensionMismatch('Descriptor dimensions differ: {} vs {}.'
                                .format(a.dimension, b.dimension))
    if len(a) == 0 or len(b) == 0:
        return MatchSet.empty(a.name, b.name)
    distances = cdist(a.vectors, b.vectors, 'euclidean')
    nearest_b = numpy.argmin(distances, axis=1)
    nearest_a = numpy.argmin(distances, axis=0)
    index_a = numpy.arange(len(a))
    mutual = nearest_a[nearest_b] == index_a
    index_a = index_a[mutual]
    index_b = nearest_b[mutual]
    matches = [(i, j, distances[i, j], a.head)
               for i, j in zip(index_a, index_b)]
    points = numpy.hstack([a.points[index_a], b.points[index_b]])
    logger.debug('MNN %s: %d x %d descriptors, %d matches.', a.head, len(a),
                 len(b), len(matches))
    return MatchSet(matches, points, a.name, b.name)
