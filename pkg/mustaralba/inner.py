"""
Inner formulas: syntactic certificates of complete join (meet) preservation.

A diamond inner formula is built from placeholders, the bound fixed-point
variables, ``<>``, ``|`` and starred least fixed points, plus the guarded
clauses ``psi -< pi``, ``pi & psi`` and ``pi -< phi`` where ``pi`` is a
constant sentence and ``phi`` a box inner formula of the dual order-type.
Box inner formulas are the order dual. :func:`recognize_inner` splits a
fixed-point body into such a template and the subterms it abstracts.
"""
import itertools
from dataclasses import dataclass, field
from enum import Enum

from mustaralba.classifier import Order, OrderType
from mustaralba.syntax import (Formula, Bot, Top, FixVar, PlaceVar, Box, Dia, And, Or,
                               Implies, CoImplies, Binder, LEAST_BINDERS, MuStar, NuStar, Mu, Nu,
                               free_fixvars, is_constant, subformulas, substitute)


class NotInner(ValueError):
    def __init__(self, message, subterm=None):
        super().__init__(message)
        self.subterm = subterm


class InnerKind(Enum):
    BOX = 'BoxIF'
    DIA = 'DiaIF'

    def dual(self):
        return InnerKind.DIA if self is InnerKind.BOX else InnerKind.BOX


@dataclass(frozen=True)
class InnerFormulaCertificate:
    """A decomposition ``body = template[bindings / x, params / z]``.

    Attributes
    ----------
    template : Formula
        Inner formula over the placeholders ``?x1, ?x2, ...``, the fixed-point
        variables `fixvars` and the parameters ``?z1, ?z2, ...``.
    tau : OrderType
        Order-type over the placeholders and `fixvars`.
    kind : InnerKind
    bindings : dict
        Placeholder name to the abstracted subterm.
    params : dict
        Parameter name to a constant sentence.
    fixvars : tuple
        Fixed-point variables of the template, all of order-type 1.
    """
    template: Formula
    tau: OrderType
    kind: InnerKind
    bindings: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    fixvars: tuple = ()

    @property
    def placeholders(self):
        return tuple(sorted(self.bindings, key=lambda name: int(name[1:])))

    def variables(self):
        """Placeholders then fixed-point variables, as atoms."""
        return tuple(PlaceVar(x) for x in self.placeholders) + tuple(FixVar(X) for X in self.fixvars)

    def term(self):
        """The template with its parameters filled in."""
        return substitute(self.template, {PlaceVar(z): pi for z, pi in self.params.items()})

    def instantiate(self, values):
        """Substitute `values` (placeholder name to formula) into the template.

        ``instantiate(bindings)`` gives back the recognized formula.
        """
        return substitute(self.term(), {PlaceVar(name): value for name, value in values.items()})

    def to_json(self):
        from mustaralba.parser import print_formula
        return {
            'kind': self.kind.value,
            'template': print_formula(self.template),
            'term': print_formula(self.term()),
            'tau': self.tau.to_json(),
            'bindings': {name: print_formula(f) for name, f in sorted(self.bindings.items())},
            'params': {name: print_formula(f) for name, f in sorted(self.params.items())},
            'fixvars': list(self.fixvars),
        }


class _Recognizer:

    def __init__(self):
        self._ids = itertools.count(1)
        self.cuts = {}
        self.params = {}

    def cut(self, f, dual):
        name = 'c%d' % next(self._ids)
        self.cuts[name] = (f, Order.DUAL if dual else Order.ONE)
        return PlaceVar(name)

    def param(self, f):
        name = 'k%d' % next(self._ids)
        self.params[name] = f
        return PlaceVar(name)

    def inner(self, f, kind, bound, dual):
        if free_fixvars(f) & bound:
            return self.step(f, kind, bound, dual)
        if isinstance(f, Bot if kind is InnerKind.DIA else Top):
            return f
        try:
            return self.step(f, kind, bound, dual)
        except NotInner:
            return self.cut(f, dual)

    def step(self, f, kind, bound, dual):
        if isinstance(f, FixVar) and f.name in bound:
            if dual:
                raise NotInner('%s occurs in a reversed position' % f, f)
            return f
        if kind is InnerKind.DIA:
            return self._dia(f, bound, dual)
        return self._box(f, bound, dual)

    def _dia(self, f, bound, dual):
        K = InnerKind.DIA
        if isinstance(f, Dia):
            return Dia(self.inner(f.arg, K, bound, dual))
        if isinstance(f, Or):
            return Or(self.inner(f.left, K, bound, dual), self.inner(f.right, K, bound, dual))
        if isinstance(f, Binder) and isinstance(f, LEAST_BINDERS):
            return type(f)(f.var, self.inner(f.body, K, bound | {f.var}, dual))
        if isinstance(f, CoImplies):
            if is_constant(f.right):
                return CoImplies(self.inner(f.left, K, bound, dual), self.param(f.right))
            if is_constant(f.left):
                return CoImplies(self.param(f.left), self.inner(f.right, InnerKind.BOX, bound, not dual))
        if isinstance(f, And):
            if is_constant(f.left):
                return And(self.param(f.left), self.inner(f.right, K, bound, dual))
            if is_constant(f.right):
                return And(self.inner(f.left, K, bound, dual), self.param(f.right))
        raise NotInner('%s cannot head a diamond inner formula' % f, f)

    def _box(self, f, bound, dual):
        K = InnerKind.BOX
        if isinstance(f, Box):
            return Box(self.inner(f.arg, K, bound, dual))
        if isinstance(f, And):
            return And(self.inner(f.left, K, bound, dual), self.inner(f.right, K, bound, dual))
        if isinstance(f, Binder) and not isinstance(f, LEAST_BINDERS):
            return type(f)(f.var, self.inner(f.body, K, bound | {f.var}, dual))
        if isinstance(f, Implies):
            if is_constant(f.left):
                return Implies(self.param(f.left), self.inner(f.right, K, bound, dual))
            if is_constant(f.right):
                return Implies(self.inner(f.left, InnerKind.DIA, bound, not dual), self.param(f.right))
        if isinstance(f, Or):
            if is_constant(f.left):
                return Or(self.param(f.left), self.inner(f.right, K, bound, dual))
            if is_constant(f.right):
                return Or(self.inner(f.left, K, bound, dual), self.param(f.right))
        raise NotInner('%s cannot head a box inner formula' % f, f)


def _first_use(f):
    seen = []
    for g in subformulas(f):
        if isinstance(g, PlaceVar) and g.name not in seen:
            seen.append(g.name)
    return seen


def recognize_inner(f, kind, fixvars=None):
    """Decompose `f` as an inner formula of the requested kind.

    Subterms free of the bound fixed-point variables are kept in the
    template as long as the recursion can continue through them and are
    abstracted into placeholders at the first node where it cannot.
    Placeholders met inside a reversed clause get order-type ∂.

    Parameters
    ----------
    f : Formula
    kind : InnerKind or str
    fixvars : iterable of str, optional
        The fixed-point variables the template keeps, by default the free
        fixed-point variables of `f`.

    Raises
    ------
    NotInner
        When a subterm containing a bound fixed-point variable does not fit
        the recursion.
    """
    kind = InnerKind(kind)
    fixvars = tuple(sorted(free_fixvars(f) if fixvars is None else fixvars))
    recognizer = _Recognizer()
    template = recognizer.inner(f, kind, frozenset(fixvars), False)

    renaming, bindings, params, tau = {}, {}, {}, {}
    xs, zs = itertools.count(1), itertools.count(1)
    for name in _first_use(template):
        if name in recognizer.cuts:
            new = 'x%d' % next(xs)
            bindings[new], tau[new] = recognizer.cuts[name]
        else:
            new = 'z%d' % next(zs)
            params[new] = recognizer.params[name]
        renaming[PlaceVar(name)] = PlaceVar(new)
    template = substitute(template, renaming)
    for X in fixvars:
        tau[X] = Order.ONE

    certificate = InnerFormulaCertificate(template, OrderType.from_mapping(tau), kind,
                                          bindings, params, fixvars)
    assert certificate.instantiate(bindings) == f, 'inner decomposition does not rebuild %s' % f
    return certificate


def recognize_binder(f):
    """Certificate for the body of a starred binder: diamond kind under mu*, box kind under nu*."""
    if not isinstance(f, (MuStar, NuStar, Mu, Nu)):
        raise NotInner('%s is not a fixed-point binder' % f, f)
    kind = InnerKind.DIA if isinstance(f, LEAST_BINDERS) else InnerKind.BOX
    return recognize_inner(f.body, kind, fixvars=(f.var,))
