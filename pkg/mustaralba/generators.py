"""
Random formulas, inductive inequalities and Ackermann triples.

All generators take a ``numpy.random.Generator`` so that suites are
reproducible from a seed.
"""
from dataclasses import dataclass

from mustaralba.classifier import Level, classify
from mustaralba.rules import syntactic_shape
from mustaralba.syntax import (Polarity, Bot, Top, PropVar, FixVar, Nominal, CoNominal,
                               Box, Dia, BlackBox, BlackDia, And, Or, Implies, CoImplies,
                               Mu, Nu, Inequality, child_polarities, is_negative_in, is_positive_in,
                               propvars)
from mustaralba.system import Side

BASIC = (Box, Dia, And, Or, Implies, CoImplies)
PLUS = BASIC + (BlackBox, BlackDia)
POSITIVE = (Box, Dia, And, Or)
BINDERS = (Mu, Nu)

_FIXVAR_NAMES = 'XYZW'

_CLOSED_POSITIVE = (Nominal, BlackDia, Mu)
_CLOSED_NEGATIVE = (CoNominal, BlackBox, Nu)


class GenerationError(RuntimeError):pass


def _shape_allows(kind, sign, shape):
    """Sign-local version of the informal closed/open characterization."""
    if shape is None:
        return True
    positive, negative = (_CLOSED_POSITIVE, _CLOSED_NEGATIVE) if shape == 'closed' else \
        (_CLOSED_NEGATIVE, _CLOSED_POSITIVE)
    if issubclass(kind, positive):
        return sign is Polarity.POSITIVE
    if issubclass(kind, negative):
        return sign is Polarity.NEGATIVE
    return True


class _Grower:

    def __init__(self, rng, atoms, connectives, binders, leaf_rate, shape, polarity):
        self.rng = rng
        self.atoms = tuple(atoms)
        self.connectives = tuple(connectives)
        self.binders = tuple(binders)
        self.leaf_rate = leaf_rate
        self.shape = shape
        self.polarity = dict(polarity or {})

    def leaf(self, sign, bound):
        options = [Bot(), Top()]
        for atom in self.atoms:
            if not _shape_allows(type(atom), sign, self.shape):
                continue
            wanted = self.polarity.get(atom.name) if isinstance(atom, PropVar) else None
            if wanted is not None and wanted is not sign:
                continue
            options.append(atom)
        options += [FixVar(name) for name, at in bound.items() if at is sign]
        return options[int(self.rng.integers(len(options)))]

    def grow(self, depth, sign, bound):
        if depth <= 0 or self.rng.random() < self.leaf_rate:
            return self.leaf(sign, bound)
        kinds = [k for k in self.connectives + self.binders if _shape_allows(k, sign, self.shape)]
        kind = kinds[int(self.rng.integers(len(kinds)))]
        if kind in BINDERS:
            name = _FIXVAR_NAMES[len(bound)] if len(bound) < len(_FIXVAR_NAMES) else 'X%d' % len(bound)
            return kind(name, self.grow(depth - 1, sign, {**bound, name: sign}))
        if kind in (Box, Dia, BlackBox, BlackDia):
            return kind(self.grow(depth - 1, sign, bound))
        signs = child_polarities(kind(Bot(), Bot()), sign)
        return kind(*[self.grow(depth - 1, s, bound) for s in signs])


def random_formula(rng, variables=('p', 'q'), depth=3, connectives=BASIC, binders=BINDERS,
                   atoms=None, leaf_rate=0.25, shape=None, polarity=None, sign=Polarity.POSITIVE):
    """A random formula with positively bound fixed-point variables.

    Parameters
    ----------
    rng : numpy.random.Generator
    variables : sequence of str
        Propositional variables, used unless `atoms` is given.
    depth : int
        Maximal height.
    atoms : sequence of Atom, optional
        Leaves to draw from, nominals and co-nominals included.
    shape : {None, 'closed', 'open'}
        Restrict nominals, co-nominals, black operators and binders to the
        signs allowed in syntactically closed (open) formulas.
    polarity : dict, optional
        Variable name to the only :class:`~mustaralba.syntax.Polarity` its
        occurrences may have.
    sign : Polarity
        Sign of the generated formula in its context.
    """
    atoms = [PropVar(v) for v in variables] if atoms is None else list(atoms)
    grower = _Grower(rng, atoms, connectives, binders, leaf_rate, shape, polarity)
    return grower.grow(depth, sign, {})


def random_inequality(rng, variables=('p', 'q'), depth=3, binders=BINDERS):
    """A random L1 inequality."""
    lhs = random_formula(rng, variables, depth, binders=binders)
    rhs = random_formula(rng, variables, depth, binders=binders)
    return Inequality(lhs, rhs)


def _boxes(rng, f, most=2):
    for _ in range(int(rng.integers(0, most + 1))):
        f = Box(f)
    return f


def _antecedent(rng, variables, width):
    """A Sahlqvist antecedent: diamonds and meets over boxed variables."""
    parts = []
    for _ in range(width):
        p = variables[int(rng.integers(len(variables)))]
        part = _boxes(rng, PropVar(p))
        for _ in range(int(rng.integers(0, 2))):
            part = Dia(part)
        parts.append(part)
    result = parts[0]
    for part in parts[1:]:
        result = And(result, part)
    return result


def tame_candidate(rng, variables=('p', 'q'), depth=3):
    """A Sahlqvist antecedent below a positive consequent that may contain least fixed points."""
    lhs = _antecedent(rng, variables, int(rng.integers(1, 3)))
    rhs = random_formula(rng, variables, depth, connectives=POSITIVE, binders=(Mu,))
    return Inequality(lhs, rhs)


def restricted_candidate(rng, variables=('p', 'q'), depth=2):
    """A least fixed point of a diamond inner formula on the critical branch of a boxed variable."""
    p = variables[int(rng.integers(len(variables)))]
    guarded = _boxes(rng, PropVar(p), most=2)
    if rng.random() < 0.5:
        guarded = Box(guarded)
    bodies = (Or(Dia(FixVar('X')), guarded), Or(guarded, Dia(Dia(FixVar('X')))),
              Dia(Or(FixVar('X'), guarded)))
    binder = Mu('X', bodies[int(rng.integers(len(bodies)))])
    lhs = binder
    for _ in range(int(rng.integers(0, 2))):
        lhs = Dia(lhs)
    rhs = random_formula(rng, variables, depth, connectives=POSITIVE, binders=())
    return Inequality(lhs, rhs)


_CANDIDATES = {
    Level.TAME_INDUCTIVE: tame_candidate,
    Level.RESTRICTED_INDUCTIVE: restricted_candidate,
}


def inductive_inequalities(rng, count, level=Level.TAME_INDUCTIVE, variables=('p', 'q'), max_tries=None):
    """Draw `count` distinct inequalities for which some order-type establishes `level`.

    Raises
    ------
    GenerationError
        When `max_tries` candidates (default ``50 * count``) do not suffice.
    """
    level = Level(level)
    if level not in _CANDIDATES:
        raise ValueError('Unknown generator level:%s' % level.label)
    candidate = _CANDIDATES[level]
    max_tries = 50 * count if max_tries is None else max_tries
    found = []
    for _ in range(max_tries):
        if len(found) >= count:
            break
        ineq = candidate(rng, variables)
        if ineq in found or not propvars(ineq):
            continue
        if any(level in w.levels for w in classify(ineq).candidates):
            found.append(ineq)
    if len(found) < count:
        raise GenerationError('Only %d of %d %s inequalities after %d tries'
                              % (len(found), count, level.label, max_tries))
    return found


@dataclass(frozen=True)
class AckermannTriple:
    """``alpha <= p & lhs <= rhs`` (right) or ``p <= alpha & lhs <= rhs`` (left).

    Right: alpha is p-free and syntactically closed, lhs is closed and
    positive in p, rhs is open and negative in p. Left is the order dual.
    """
    variable: str
    side: Side
    alpha: object
    lhs: object
    rhs: object

    def bound(self):
        p = PropVar(self.variable)
        return Inequality(self.alpha, p) if self.side is Side.RIGHT else Inequality(p, self.alpha)

    def inequality(self):
        return Inequality(self.lhs, self.rhs)

    def conditions(self):
        p = self.variable
        lhs, rhs = syntactic_shape(self.lhs), syntactic_shape(self.rhs)
        alpha = syntactic_shape(self.alpha)
        if self.side is Side.RIGHT:
            return (p not in propvars(self.alpha) and alpha.closed and lhs.closed and rhs.open
                    and is_positive_in(self.lhs, p) and is_negative_in(self.rhs, p))
        return (p not in propvars(self.alpha) and alpha.open and lhs.closed and rhs.open
                and is_negative_in(self.lhs, p) and is_positive_in(self.rhs, p))


def ackermann_triple(rng, side=Side.RIGHT, variable='p', others=('q',), depth=2, max_tries=500):
    """A random triple meeting the side conditions of (RA) or (LA)."""
    side = Side(side)
    pool = [PropVar(q) for q in others] + [Nominal('j'), CoNominal('n')]
    with_p = pool + [PropVar(variable)]
    alpha_shape = 'closed' if side is Side.RIGHT else 'open'
    lhs_polarity = Polarity.POSITIVE if side is Side.RIGHT else Polarity.NEGATIVE
    for _ in range(max_tries):
        triple = AckermannTriple(
            variable, side,
            random_formula(rng, depth=depth, connectives=PLUS, atoms=pool, shape=alpha_shape),
            random_formula(rng, depth=depth, connectives=PLUS, atoms=with_p, shape='closed',
                           polarity={variable: lhs_polarity}),
            random_formula(rng, depth=depth, connectives=PLUS, atoms=with_p, shape='open',
                           polarity={variable: lhs_polarity.flip()}),
        )
        if triple.conditions():
            return triple
    raise GenerationError('No %s Ackermann triple after %d tries' % (side.value, max_tries))
