"""
Finite perfect distributive lattices with a box and a diamond.

A finite distributive lattice is its own canonical extension, so every
algebra here is perfect: nominals range over the completely join-irreducible
elements and co-nominals over the completely meet-irreducible ones.
All operations are held as numpy tables indexed by element position.
"""
import itertools
import json
import logging
import os

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)


class AlgebraError(ValueError):
    def __init__(self, message, offending=()):
        super().__init__(message)
        self.offending = tuple(offending)


class NotALattice(AlgebraError):pass
class NotDistributive(AlgebraError):pass
class BoxNotMeetPreserving(AlgebraError):pass
class DiaNotJoinPreserving(AlgebraError):pass


BATTERY_FILES = ('chain2', 'chain3', 'chain4', 'diamond', 'diamond_twisted')
BATTERY_SEED = 2024
BATTERY_SIZE = 10

algebra_path = os.path.join(os.path.dirname(__file__), 'algebras')


def _transitive_closure(leq):
    leq = leq.copy()
    for k in range(len(leq)):
        leq |= leq[:, k:k + 1] & leq[k:k + 1, :]
    return leq


class FiniteAlgebra:
    """A finite distributive lattice with a meet-preserving box and a join-preserving diamond.

    Parameters
    ----------
    elements : sequence of str
        Element names.
    leq_pairs : iterable of (str, str)
        Generating pairs of the order; the reflexive-transitive closure is taken.
    box, dia : dict
        Operator tables mapping every element name to an element name.
    name : str, default=None

    Raises
    ------
    NotALattice, NotDistributive, BoxNotMeetPreserving, DiaNotJoinPreserving
        With the offending tuple of element names in ``offending``.
    """

    def __init__(self, elements, leq_pairs, box, dia, name=None):
        self.elements = tuple(str(e) for e in elements)
        self.name = name or 'algebra%d' % len(self.elements)
        if not self.elements:
            raise NotALattice('An algebra needs at least one element')
        if len(set(self.elements)) != len(self.elements):
            raise AlgebraError('Duplicate element names in %s' % (self.elements,))
        self.index = {e: i for i, e in enumerate(self.elements)}

        leq = np.eye(self.size, dtype=bool)
        for a, b in leq_pairs:
            leq[self._lookup(a), self._lookup(b)] = True
        self.leq = _transitive_closure(leq)

        self._check_antisymmetric()
        self._build_lattice()
        self._check_distributive()
        self.box = self._operator(box, 'box')
        self.dia = self._operator(dia, 'dia')
        self._check_operators()
        self._derive()

    @property
    def size(self):
        return len(self.elements)

    def _lookup(self, name):
        try:
            return self.index[str(name)]
        except KeyError:
            raise AlgebraError('Unknown element:%s' % name, offending=(name,)) from None

    def _check_antisymmetric(self):
        both = self.leq & self.leq.T & ~np.eye(self.size, dtype=bool)
        bad = np.argwhere(both)
        if len(bad):
            a, b = bad[0]
            raise NotALattice('The order is not antisymmetric: %s <= %s <= %s' % (
                self.elements[a], self.elements[b], self.elements[a]),
                offending=(self.elements[a], self.elements[b]))

    def _greatest(self, mask):
        for c in np.flatnonzero(mask):
            if self.leq[mask, c].all():
                return c
        return None

    def _least(self, mask):
        for c in np.flatnonzero(mask):
            if self.leq[c, mask].all():
                return c
        return None

    def _build_lattice(self):
        n = self.size
        self.meet_table = np.zeros((n, n), dtype=int)
        self.join_table = np.zeros((n, n), dtype=int)
        for a, b in itertools.product(range(n), repeat=2):
            m = self._greatest(self.leq[:, a] & self.leq[:, b])
            j = self._least(self.leq[a, :] & self.leq[b, :])
            if m is None or j is None:
                raise NotALattice('%s and %s have no %s' % (
                    self.elements[a], self.elements[b], 'meet' if m is None else 'join'),
                    offending=(self.elements[a], self.elements[b]))
            self.meet_table[a, b] = m
            self.join_table[a, b] = j
        everything = np.ones(n, dtype=bool)
        self.bottom = int(self._least(everything))
        self.top = int(self._greatest(everything))

    def _check_distributive(self):
        n = self.size
        a = np.arange(n)[:, None, None]
        lhs = self.meet_table[a, self.join_table[None, :, :]]
        rhs = self.join_table[self.meet_table[:, :, None], self.meet_table[:, None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            triple = tuple(self.elements[i] for i in bad[0])
            raise NotDistributive('%s meet (%s join %s) differs from the join of the meets' % triple,
                                  offending=triple)

    def _operator(self, table, label):
        if isinstance(table, np.ndarray):
            values = table.astype(int)
        else:
            missing = [e for e in self.elements if e not in table]
            if missing:
                raise AlgebraError('The %s table misses %s' % (label, ', '.join(missing)),
                                   offending=tuple(missing))
            values = np.array([self._lookup(table[e]) for e in self.elements], dtype=int)
        if values.shape != (self.size,):
            raise AlgebraError('The %s table has the wrong length' % label)
        return values

    def _check_operators(self):
        if self.box[self.top] != self.top:
            raise BoxNotMeetPreserving('box does not preserve the empty meet: box(%s) = %s' % (
                self.elements[self.top], self.elements[self.box[self.top]]),
                offending=(self.elements[self.top],))
        if self.dia[self.bottom] != self.bottom:
            raise DiaNotJoinPreserving('dia does not preserve the empty join: dia(%s) = %s' % (
                self.elements[self.bottom], self.elements[self.dia[self.bottom]]),
                offending=(self.elements[self.bottom],))
        bad = np.argwhere(self.box[self.meet_table] != self.meet_table[self.box[:, None], self.box[None, :]])
        if len(bad):
            pair = tuple(self.elements[i] for i in bad[0])
            raise BoxNotMeetPreserving('box does not preserve the meet of %s and %s' % pair, offending=pair)
        bad = np.argwhere(self.dia[self.join_table] != self.join_table[self.dia[:, None], self.dia[None, :]])
        if len(bad):
            pair = tuple(self.elements[i] for i in bad[0])
            raise DiaNotJoinPreserving('dia does not preserve the join of %s and %s' % pair, offending=pair)

    def join_all(self, indices):
        result = self.bottom
        for c in indices:
            result = self.join_table[result, c]
        return int(result)

    def meet_all(self, indices):
        result = self.top
        for c in indices:
            result = self.meet_table[result, c]
        return int(result)

    def _derive(self):
        n = self.size
        r = range(n)
        self.imp = np.array([[self.join_all(c for c in r if self.leq[self.meet_table[a, c], b])
                              for b in r] for a in r], dtype=int)
        self.coimp = np.array([[self.meet_all(c for c in r if self.leq[a, self.join_table[b, c]])
                                for b in r] for a in r], dtype=int)
        self.black_dia = np.array([self.meet_all(b for b in r if self.leq[a, self.box[b]]) for a in r], dtype=int)
        self.black_box = np.array([self.join_all(a for a in r if self.leq[self.dia[a], b]) for b in r], dtype=int)

        strictly = self.leq & ~np.eye(n, dtype=bool)
        self.join_irreducibles = np.array(
            [x for x in r if x != self.bottom and self.join_all(np.flatnonzero(strictly[:, x])) != x], dtype=int)
        self.meet_irreducibles = np.array(
            [x for x in r if x != self.top and self.meet_all(np.flatnonzero(strictly[x, :])) != x], dtype=int)
        for x in self.join_irreducibles:
            above = self.leq[x, self.join_table]
            assert np.array_equal(above, self.leq[x, :][:, None] | self.leq[x, :][None, :]), \
                '%s is join-irreducible but not join-prime' % self.elements[x]
        self.kappa = {int(x): self.join_all(c for c in r if not self.leq[x, c]) for x in self.join_irreducibles}
        images = sorted(self.kappa.values())
        assert images == sorted(int(m) for m in self.meet_irreducibles), 'kappa is not onto the meet-irreducibles'
        for x, y in itertools.product(self.kappa, repeat=2):
            assert self.leq[x, y] == self.leq[self.kappa[x], self.kappa[y]], 'kappa is not an order isomorphism'

    @classmethod
    def from_tables(cls, elements, leq, box, dia, name=None):
        """Build from a boolean order matrix and integer operator vectors."""
        leq = np.asarray(leq, dtype=bool)
        pairs = [(elements[a], elements[b]) for a, b in np.argwhere(leq)]
        return cls(elements, pairs, np.asarray(box), np.asarray(dia), name=name)

    @classmethod
    def from_json(cls, data, name=None):
        for key in ('elements', 'leq', 'box', 'dia'):
            if key not in data:
                raise AlgebraError('Algebra description misses "%s"' % key)
        return cls(data['elements'], [tuple(pair) for pair in data['leq']], data['box'], data['dia'],
                   name=name or data.get('name'))

    def to_json(self):
        covers = self.covers()
        return {
            'name': self.name,
            'elements': list(self.elements),
            'leq': [[self.elements[a], self.elements[b]] for a, b in covers],
            'box': {e: self.elements[self.box[i]] for i, e in enumerate(self.elements)},
            'dia': {e: self.elements[self.dia[i]] for i, e in enumerate(self.elements)},
        }

    def covers(self):
        """Pairs (a, b) with b covering a."""
        strictly = self.leq & ~np.eye(self.size, dtype=bool)
        result = []
        for a, b in np.argwhere(strictly):
            between = strictly[a, :] & strictly[:, b]
            if not between.any():
                result.append((int(a), int(b)))
        return result

    def element(self, name):
        return self._lookup(name)

    def names(self, indices):
        return [self.elements[i] for i in indices]

    def is_perfect(self):
        """Every element is the join of the join-irreducibles below it and the meet of the meet-irreducibles above."""
        for a in range(self.size):
            below = [x for x in self.join_irreducibles if self.leq[x, a]]
            above = [m for m in self.meet_irreducibles if self.leq[a, m]]
            if self.join_all(below) != a or self.meet_all(above) != a:
                return False
        return True

    def summary(self):
        return pd.Series({
            'name': self.name,
            'size': self.size,
            'join_irreducibles': ' '.join(self.names(self.join_irreducibles)),
            'meet_irreducibles': ' '.join(self.names(self.meet_irreducibles)),
            'chain': bool((self.leq | self.leq.T).all()),
            'boolean': len(self.join_irreducibles) > 0 and 2 ** len(self.join_irreducibles) == self.size,
        })

    def __repr__(self):
        return 'FiniteAlgebra(%s, size=%d)' % (self.name, self.size)


def load_algebra(path):
    """Load and validate an algebra from a JSON file."""
    with open(path) as file:
        data = json.load(file)
    name = os.path.splitext(os.path.basename(path))[0]
    algebra = FiniteAlgebra.from_json(data, name=data.get('name', name))
    logger.debug('Loaded %r from %s', algebra, path)
    return algebra


def heyting_imp(A, a, b):
    return A.elements[A.imp[A.element(a), A.element(b)]]


def co_imp(A, a, b):
    return A.elements[A.coimp[A.element(a), A.element(b)]]


def black_dia(A, a):
    return A.elements[A.black_dia[A.element(a)]]


def black_box(A, a):
    return A.elements[A.black_box[A.element(a)]]


def _random_poset(rng, points, density=0.4):
    relation = np.triu(rng.random((points, points)) < density, 1) | np.eye(points, dtype=bool)
    return _transitive_closure(relation)


def _downsets(order):
    points = len(order)
    result = []
    for bits in range(2 ** points):
        members = np.array([(bits >> i) & 1 for i in range(points)], dtype=bool)
        if all(members[order[:, x]].all() for x in range(points) if members[x]):
            result.append(members)
    return result


def random_algebra(rng, max_size=8, max_points=4, density=0.4, name=None):
    """A random algebra built from the down-sets of a random poset.

    The diamond is ``D -> down(R[D])`` for a random relation R and the box is
    ``D -> {x : S[down(x)] is contained in D}`` for a random relation S, so
    both operators preserve the required joins and meets by construction.

    Parameters
    ----------
    rng : numpy.random.Generator
    max_size : int, default=8
        Lattices with more elements are rejected and redrawn.
    max_points : int, default=4
        Largest poset drawn.
    """
    if max_size < 2:
        raise ValueError('max_size must be at least 2')
    while True:
        points = int(rng.integers(1, max_points + 1))
        order = _random_poset(rng, points, density)
        downsets = _downsets(order)
        if len(downsets) <= max_size:
            break
    letters = 'abcdefgh'

    def label(members):
        maximal = [x for x in range(points) if members[x]
                   and not any(members[y] and order[x, y] and x != y for y in range(points))]
        return ''.join(letters[x] for x in maximal) or '0'

    elements = [label(d) for d in downsets]
    index = {tuple(d): i for i, d in enumerate(downsets)}
    leq = np.array([[bool(np.all(~a | b)) for b in downsets] for a in downsets])

    R = rng.random((points, points)) < density
    S = rng.random((points, points)) < density

    def down(members):
        return np.any(order[:, members], axis=1) if members.any() else np.zeros(points, dtype=bool)

    dia = []
    box = []
    for d in downsets:
        image = np.any(R[d, :], axis=0) if d.any() else np.zeros(points, dtype=bool)
        dia.append(index[tuple(down(image))])
        inside = np.array([all(np.all(~S[y, :] | d) for y in range(points) if order[y, x])
                           for x in range(points)], dtype=bool)
        box.append(index[tuple(inside)])
    return FiniteAlgebra.from_tables(elements, leq, box, dia, name=name)


def bundled_algebras():
    return [load_algebra(os.path.join(algebra_path, '%s.json' % stem)) for stem in BATTERY_FILES]


def battery(max_size=8, seed=BATTERY_SEED, size=BATTERY_SIZE):
    """The fixed algebra battery: the bundled files followed by seeded random instances."""
    algebras = [A for A in bundled_algebras() if A.size <= max_size]
    rng = np.random.default_rng(seed)
    count = 0
    while len(algebras) < size:
        count += 1
        algebras.append(random_algebra(rng, max_size=max_size, name='random%d' % count))
    return algebras
