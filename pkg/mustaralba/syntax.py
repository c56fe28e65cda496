"""
Abstract syntax of the intuitionistic modal mu-calculus and its extensions.

Formulas are immutable trees of frozen dataclasses. The five variable sorts
(propositional, fixed-point, placeholder, nominal and co-nominal) are
separate atom classes so that their namespaces can never collide.
"""
import itertools
from dataclasses import dataclass
from enum import Enum


class PolarityError(ValueError):pass
class MixedBinders(ValueError):pass


class Polarity(Enum):
    POSITIVE = '+'
    NEGATIVE = '-'

    def flip(self):
        return Polarity.NEGATIVE if self is Polarity.POSITIVE else Polarity.POSITIVE

    def __str__(self):
        return self.value


class LanguageTag(Enum):
    """The languages of the calculus, from the basic language L up to L*+.

    L2 and L2plus are kept for completeness: the parser has no separate
    syntax for their binders, which coincide with the L1 binders on finite
    algebras, so ``language_of`` never returns them.
    """
    L = 'L'
    LPLUS = 'Lplus'
    L1 = 'L1'
    L1PLUS = 'L1plus'
    L2 = 'L2'
    L2PLUS = 'L2plus'
    LSTAR = 'Lstar'
    LSTARPLUS = 'LstarPlus'

    @property
    def plus(self):
        return self.value.endswith(('plus', 'Plus'))


@dataclass(frozen=True)
class Formula:

    @property
    def children(self):
        return ()

    def rebuild(self, children):
        return self

    def __str__(self):
        from mustaralba.parser import print_formula
        return print_formula(self)


@dataclass(frozen=True)
class Constant(Formula):
    pass


@dataclass(frozen=True)
class Bot(Constant):
    pass


@dataclass(frozen=True)
class Top(Constant):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class PropVar(Atom):
    pass


@dataclass(frozen=True)
class FixVar(Atom):
    pass


@dataclass(frozen=True)
class PlaceVar(Atom):
    pass


@dataclass(frozen=True)
class Nominal(Atom):
    pass


@dataclass(frozen=True)
class CoNominal(Atom):
    pass


@dataclass(frozen=True)
class Unary(Formula):
    arg: Formula

    @property
    def children(self):
        return (self.arg,)

    def rebuild(self, children):
        return type(self)(*children)


@dataclass(frozen=True)
class Box(Unary):
    pass


@dataclass(frozen=True)
class Dia(Unary):
    pass


@dataclass(frozen=True)
class BlackBox(Unary):
    pass


@dataclass(frozen=True)
class BlackDia(Unary):
    pass


@dataclass(frozen=True)
class Binary(Formula):
    left: Formula
    right: Formula

    @property
    def children(self):
        return (self.left, self.right)

    def rebuild(self, children):
        return type(self)(*children)


@dataclass(frozen=True)
class And(Binary):
    pass


@dataclass(frozen=True)
class Or(Binary):
    pass


@dataclass(frozen=True)
class Implies(Binary):
    pass


@dataclass(frozen=True)
class CoImplies(Binary):
    pass


@dataclass(frozen=True)
class Binder(Formula):
    var: str
    body: Formula

    @property
    def children(self):
        return (self.body,)

    def rebuild(self, children):
        return type(self)(self.var, children[0])


@dataclass(frozen=True)
class Mu(Binder):
    pass


@dataclass(frozen=True)
class Nu(Binder):
    pass


@dataclass(frozen=True)
class MuStar(Binder):
    pass


@dataclass(frozen=True)
class NuStar(Binder):
    pass


@dataclass(frozen=True)
class Inequality:
    lhs: Formula
    rhs: Formula

    @property
    def children(self):
        return (self.lhs, self.rhs)

    def __str__(self):
        from mustaralba.parser import print_inequality
        return print_inequality(self)


PLAIN_BINDERS = (Mu, Nu)
STARRED_BINDERS = (MuStar, NuStar)
LEAST_BINDERS = (Mu, MuStar)
GREATEST_BINDERS = (Nu, NuStar)

_STAR = {Mu: MuStar, Nu: NuStar}
_UNSTAR = {MuStar: Mu, NuStar: Nu}

# Sort order used whenever atoms of several sorts are enumerated together.
SORT_ORDER = (PropVar, Nominal, CoNominal, PlaceVar, FixVar)

CONSTRUCTORS = {cls.__name__: cls for cls in (
    Bot, Top, PropVar, FixVar, PlaceVar, Nominal, CoNominal,
    Box, Dia, BlackBox, BlackDia, And, Or, Implies, CoImplies,
    Mu, Nu, MuStar, NuStar)}

_fresh_fixvars = itertools.count(1)


def subformulas(f):
    """Pre-order iterator over all subformula occurrences of `f`.

    `f` may also be an :class:`Inequality`, in which case both sides are
    visited, left first.
    """
    stack = list(reversed(f.children)) if isinstance(f, Inequality) else [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(g.children))


def _names(f, cls):
    return tuple(sorted({g.name for g in subformulas(f) if type(g) is cls}))


def propvars(f):
    return _names(f, PropVar)


def nominals(f):
    return _names(f, Nominal)


def conominals(f):
    return _names(f, CoNominal)


def placeholders(f):
    return _names(f, PlaceVar)


def atoms(f):
    """All free atoms of `f` except fixed-point variables, ordered by sort then name."""
    found = {g for g in subformulas(f) if type(g) in SORT_ORDER[:4]}
    return sorted(found, key=atom_sort_key)


def atom_sort_key(a):
    return (SORT_ORDER.index(type(a)), a.name)


def free_fixvars(f, bound=frozenset()):
    if isinstance(f, Inequality):
        return free_fixvars(f.lhs, bound) | free_fixvars(f.rhs, bound)
    if isinstance(f, FixVar):
        return frozenset() if f.name in bound else frozenset([f.name])
    if isinstance(f, Binder):
        return free_fixvars(f.body, bound | {f.var})
    result = frozenset()
    for child in f.children:
        result |= free_fixvars(child, bound)
    return result


def is_sentence(f):
    """True when `f` has no free fixed-point variables."""
    return not free_fixvars(f)


def is_pure(f):
    """True when no propositional variable occurs in `f`."""
    return not any(isinstance(g, PropVar) for g in subformulas(f))


def is_constant(f):
    """True for sentences built from constants and operators only."""
    if any(isinstance(g, (PropVar, Nominal, CoNominal, PlaceVar)) for g in subformulas(f)):
        return False
    return is_sentence(f)


def has_binders(f):
    return any(isinstance(g, Binder) for g in subformulas(f))


def child_polarities(f, sign):
    """Signs of the children of `f` when `f` itself carries `sign`."""
    if isinstance(f, Implies):
        return (sign.flip(), sign)
    if isinstance(f, CoImplies):
        return (sign, sign.flip())
    return (sign,) * len(f.children)


def polarity_of_occurrences(f, v, sign=Polarity.POSITIVE):
    """Polarity of every free occurrence of the atom `v` in `f`, left to right.

    Parameters
    ----------
    f : Formula
    v : Atom or str
        A string is read as the name of a propositional variable.
    sign : Polarity
        The sign of the root of `f`.

    Returns
    -------
    list of Polarity
    """
    if isinstance(v, str):
        v = PropVar(v)
    found = []

    def walk(g, s):
        if g == v:
            found.append(s)
            return
        if isinstance(v, FixVar) and isinstance(g, Binder) and g.var == v.name:
            return
        for child, child_sign in zip(g.children, child_polarities(g, s)):
            walk(child, child_sign)

    walk(f, sign)
    return found


def is_positive_in(f, v):
    return all(s is Polarity.POSITIVE for s in polarity_of_occurrences(f, v))


def is_negative_in(f, v):
    return all(s is Polarity.NEGATIVE for s in polarity_of_occurrences(f, v))


def check_binder_positivity(f):
    """Raise PolarityError if a bound fixed-point variable occurs negatively."""
    for g in subformulas(f):
        if isinstance(g, Binder):
            signs = polarity_of_occurrences(g.body, FixVar(g.var))
            if Polarity.NEGATIVE in signs:
                raise PolarityError('Fixed-point variable %s occurs negatively in %s' % (g.var, g))
    return f


def _mentions(f, atom):
    if isinstance(atom, FixVar):
        return atom.name in free_fixvars(f)
    return any(g == atom for g in subformulas(f))


def fresh_fixvar(name):
    stem = name.split("'")[0]
    return "%s'%d" % (stem, next(_fresh_fixvars))


def substitute(f, bindings):
    """Simultaneous capture-avoiding substitution.

    Parameters
    ----------
    f : Formula or Inequality
    bindings : dict
        Maps atoms (``PropVar('p')``, ``PlaceVar('x1')``, ``FixVar('X')``, ...)
        to replacement formulas.

    Examples
    --------
    >>> substitute(Or(Dia(PlaceVar('x1')), PlaceVar('x2')),
    ...            {PlaceVar('x1'): Nominal('j'), PlaceVar('x2'): CoNominal('n')})
    Or(left=Dia(arg=Nominal(name='j')), right=CoNominal(name='n'))
    """
    if isinstance(f, Inequality):
        return Inequality(substitute(f.lhs, bindings), substitute(f.rhs, bindings))
    if not bindings:
        return f
    return _substitute(f, dict(bindings))


def _substitute(f, bindings):
    if isinstance(f, (Atom, Constant)):
        return bindings.get(f, f)
    if isinstance(f, Binder):
        inner = {k: v for k, v in bindings.items() if k != FixVar(f.var) and _mentions(f.body, k)}
        if not inner:
            return f
        var, body = f.var, f.body
        if any(var in free_fixvars(v) for v in inner.values()):
            var = fresh_fixvar(f.var)
            body = _substitute(body, {FixVar(f.var): FixVar(var)})
        return type(f)(var, _substitute(body, inner))
    return f.rebuild(tuple(_substitute(child, bindings) for child in f.children))


def positions(f, prefix=()):
    """Yield (path, subformula) pairs in pre-order, a path being a tuple of child indices."""
    yield prefix, f
    for i, child in enumerate(f.children):
        yield from positions(child, prefix + (i,))


def replace_at(f, path, g):
    if not path:
        return g
    children = list(f.children)
    children[path[0]] = replace_at(children[path[0]], path[1:], g)
    if isinstance(f, Inequality):
        return Inequality(*children)
    return f.rebuild(tuple(children))


def _binder_kinds(f):
    kinds = {type(g) for g in subformulas(f) if isinstance(g, Binder)}
    plain = bool(kinds & set(PLAIN_BINDERS))
    starred = bool(kinds & set(STARRED_BINDERS))
    if plain and starred:
        raise MixedBinders('Both starred and unstarred binders occur in %s' % f)
    return plain, starred


def _map_binders(f, table):
    if isinstance(f, Inequality):
        return Inequality(_map_binders(f.lhs, table), _map_binders(f.rhs, table))
    if isinstance(f, Binder):
        return table.get(type(f), type(f))(f.var, _map_binders(f.body, table))
    if not f.children:
        return f
    return f.rebuild(tuple(_map_binders(child, table) for child in f.children))


def star(f):
    """Replace every mu/nu binder by its starred counterpart."""
    _binder_kinds(f)
    return _map_binders(f, _STAR)


def unstar(f):
    _binder_kinds(f)
    return _map_binders(f, _UNSTAR)


def language_of(f):
    """The least language containing `f` (a formula or an inequality)."""
    plain, starred = _binder_kinds(f)
    plus = any(isinstance(g, (Nominal, CoNominal, BlackBox, BlackDia)) for g in subformulas(f))
    if starred:
        return LanguageTag.LSTARPLUS if plus else LanguageTag.LSTAR
    if plain:
        return LanguageTag.L1PLUS if plus else LanguageTag.L1
    return LanguageTag.LPLUS if plus else LanguageTag.L


def to_json(f):
    """The ``{"op": ..., "args": [...]}`` tree form of a formula or inequality."""
    if isinstance(f, Inequality):
        return {'op': 'Inequality', 'args': [to_json(f.lhs), to_json(f.rhs)]}
    op = type(f).__name__
    if isinstance(f, Atom):
        return {'op': op, 'args': [f.name]}
    if isinstance(f, Binder):
        return {'op': op, 'args': [f.var, to_json(f.body)]}
    return {'op': op, 'args': [to_json(child) for child in f.children]}


def from_json(obj):
    op = obj['op']
    args = obj.get('args', [])
    if op == 'Inequality':
        return Inequality(from_json(args[0]), from_json(args[1]))
    if op not in CONSTRUCTORS:
        raise ValueError('Unknown formula operator:%s' % op)
    cls = CONSTRUCTORS[op]
    if issubclass(cls, Atom):
        return cls(args[0])
    if issubclass(cls, Binder):
        return cls(args[0], from_json(args[1]))
    return cls(*[from_json(arg) for arg in args])


def big_or(formulas):
    """Right-nested join of `formulas`, Bot when empty."""
    formulas = list(formulas)
    if not formulas:
        return Bot()
    result = formulas[-1]
    for f in reversed(formulas[:-1]):
        result = Or(f, result)
    return result


def big_and(formulas):
    formulas = list(formulas)
    if not formulas:
        return Top()
    result = formulas[-1]
    for f in reversed(formulas[:-1]):
        result = And(f, result)
    return result
