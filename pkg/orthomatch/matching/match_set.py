"""Module defining Match and MatchSet."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
from collections import namedtuple
import numpy

# local imports
from orthomatch.errors import FormatError, InvariantError

__all__ = ['Match', 'MatchSet']


Match = namedtuple('Match', 'index_a index_b distance head')


class MatchSet(object):
    """
    Correspondences between two described images.

    Attributes
    ----------
    matches : tuple of Match
        Index pairs into the descriptor sets of each head.
    points : numpy.ndarray
        (M, 4) read-only endpoint coordinates [xa, ya, xb, yb].
    name_a, name_b : str
        Identifiers of the two descriptor sets.

    """

    def __init__(self, matches, points, name_a='', name_b=''):
        """
        Constructor.

        Raises
        ------
        InvariantError
            On negative distances, duplicate pairs, or when an index is
            reused within a head.

        """
        self.matches = tuple(Match(int(m[0]), int(m[1]), float(m[2]), m[3])
                             for m in matches)
        points = numpy.array(points, dtype=float).reshape(-1, 4)
        if len(points) != len(self.matches):
            raise InvariantError('{} matches but {} endpoint rows.'
                                 .format(len(self.matches), len(points)))
        points.setflags(write=False)
        self.points = points
        self.name_a = name_a
        self.name_b = name_b
        self._check()

    def _check(self):
        seen_a, seen_b = set(), set()
        for match in self.matches:
            if not match.distance >= 0:
                raise InvariantError('Match distance must be >= 0, got {}.'
                                     .format(match.distance))
            if match.index_a < 0 or match.index_b < 0:
                raise InvariantError('Negative keypoint index in {}.'
                                     .format(match))
            key_a = (match.head, match.index_a)
            key_b = (match.head, match.index_b)
            if key_a in seen_a or key_b in seen_b:
                raise InvariantError('Match {} breaks the mutual nearest '
                                     'neighbour property.'.format(match))
            seen_a.add(key_a)
            seen_b.add(key_b)

    @classmethod
    def empty(cls, name_a='', name_b=''):
        return cls([], numpy.zeros((0, 4)), name_a, name_b)

    def __len__(self):
        return len(self.matches)

    def __iter__(self):
        return iter(self.matches)

    def __repr__(self):
        return 'MatchSet({!r} -> {!r}, {} matches)'.format(
            self.name_a, self.name_b, len(self))

    @property
    def points_a(self):
        return self.points[:, :2]

    @property
    def points_b(self):
        return self.points[:, 2:]

    @property
    def distances(self):
        return numpy.array([m.distance for m in self.matches], dtype=float)

    @property
    def heads(self):
        return [m.head for m in self.matches]

    def subset(self, selection):
        """New set with the matches selected by a boolean mask or indices."""
        indices = numpy.arange(len(self))[selection]
        return MatchSet([self.matches[i] for i in indices],
                        self.points[indices], self.name_a, self.name_b)

    def count_by_head(self):
        counts = {}
        for match in self.matches:
            counts[match.head] = counts.get(match.head, 0) + 1
        return counts

    def relabel(self, head):
        """Same matches under a single head label."""
        return MatchSet([m._replace(head=head) for m in self.matches],
                        self.points, self.name_a, self.name_b)

    def to_json(self):
        return {'a': self.name_a, 'b': self.name_b,
                'pairs': [[m.index_a, m.index_b, m.distance, m.head]
                          for m in self.matches],
                'points': self.points.tolist()}

    @classmethod
    def from_json(cls, data):
        try:
            return cls([tuple(p) for p in data['pairs']], data['points'],
                       data.get('a', ''), data.get('b', ''))
        except (KeyError, TypeError, ValueError, IndexError) as error:
            raise FormatError('Invalid match set: {}'.format(error))
