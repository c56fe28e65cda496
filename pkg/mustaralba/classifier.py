"""
Syntactic classification of mu-inequalities.

The signed generation trees of ``+lhs`` and ``-rhs`` are built once; every
node carries the set of roles its (connective, sign) pair may play. For an
order-type each critical branch is split, top-down, into an outer skeleton
part, an inner skeleton part and a PIA part, and the resulting
decompositions decide the four classes recursive, inductive, restricted
inductive and tame inductive.
"""
import itertools
from dataclasses import dataclass, field, replace
from enum import Enum, IntEnum

import networkx as nx

from mustaralba.syntax import (Polarity, Formula, PropVar, Atom, Constant,
                               Box, Dia, And, Or, Implies, CoImplies,
                               Mu, Nu, MuStar, NuStar, Binder, Inequality,
                               LanguageTag, MixedBinders, child_polarities, is_sentence,
                               language_of, propvars)


class NotGood(ValueError):
    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class NodeClass(Enum):
    DELTA_ADJOINT = 'DeltaAdjoint'
    SLR_OUTER = 'SLR_outer'
    SLR_INNER = 'SLR_inner'
    SLA = 'SLA'
    SRA = 'SRA'
    SRR = 'SRR'
    BINDER_SKELETON = 'BinderSkeleton'
    BINDER_PIA = 'BinderPIA'
    LEAF = 'Leaf'


OUTER = frozenset({NodeClass.DELTA_ADJOINT, NodeClass.SLR_OUTER})
INNER = frozenset({NodeClass.BINDER_SKELETON, NodeClass.SLA, NodeClass.SLR_INNER})
PIA = frozenset({NodeClass.BINDER_PIA, NodeClass.SRA, NodeClass.SRR})

_POS = Polarity.POSITIVE
_NEG = Polarity.NEGATIVE

_ROLES = {
    (Or, _POS): {NodeClass.DELTA_ADJOINT, NodeClass.SLA, NodeClass.SRR},
    (And, _NEG): {NodeClass.DELTA_ADJOINT, NodeClass.SLA, NodeClass.SRR},
    (And, _POS): {NodeClass.DELTA_ADJOINT, NodeClass.SLR_INNER, NodeClass.SRA},
    (Or, _NEG): {NodeClass.DELTA_ADJOINT, NodeClass.SLR_INNER, NodeClass.SRA},
    (Dia, _POS): {NodeClass.SLR_OUTER, NodeClass.SLA},
    (Box, _NEG): {NodeClass.SLR_OUTER, NodeClass.SLA},
    (CoImplies, _POS): {NodeClass.SLR_OUTER, NodeClass.SLR_INNER},
    (Implies, _NEG): {NodeClass.SLR_OUTER, NodeClass.SLR_INNER},
    (Box, _POS): {NodeClass.SRA},
    (Dia, _NEG): {NodeClass.SRA},
    (Implies, _POS): {NodeClass.SRR},
    (CoImplies, _NEG): {NodeClass.SRR},
    (Mu, _POS): {NodeClass.BINDER_SKELETON},
    (Nu, _NEG): {NodeClass.BINDER_SKELETON},
    (Nu, _POS): {NodeClass.BINDER_PIA},
    (Mu, _NEG): {NodeClass.BINDER_PIA},
}
_UNSTARRED = {MuStar: Mu, NuStar: Nu}


def node_roles(f, sign):
    """The roles a node labelled with the main connective of `f` and `sign` may play."""
    if isinstance(f, (Atom, Constant)):
        return frozenset({NodeClass.LEAF})
    kind = _UNSTARRED.get(type(f), type(f))
    return frozenset(_ROLES.get((kind, sign), ()))


class Order(Enum):
    ONE = '1'
    DUAL = '∂'

    @property
    def is_dual(self):
        return self is Order.DUAL

    def flip(self):
        return Order.ONE if self is Order.DUAL else Order.DUAL

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class OrderType:
    """An assignment of 1 or ∂ to variable names, kept sorted by name."""
    entries: tuple = ()

    @classmethod
    def from_mapping(cls, mapping):
        return cls(tuple(sorted((name, Order(value) if not isinstance(value, Order) else value)
                                for name, value in mapping.items())))

    def __getitem__(self, name):
        for key, value in self.entries:
            if key == name:
                return value
        raise KeyError(name)

    def get(self, name, default=Order.ONE):
        try:
            return self[name]
        except KeyError:
            return default

    def names(self):
        return tuple(name for name, _ in self.entries)

    def dual(self):
        return OrderType(tuple((name, value.flip()) for name, value in self.entries))

    def to_json(self):
        return {name: value.value for name, value in self.entries}

    def __str__(self):
        return '(%s)' % ', '.join('%s:%s' % (name, value) for name, value in self.entries)


@dataclass(frozen=True)
class DependencyOrder:
    """A strict order on propositional variables given by pairs (a, b) meaning a < b."""
    pairs: frozenset = frozenset()

    def graph(self, variables=()):
        g = nx.DiGraph()
        g.add_nodes_from(variables)
        g.add_edges_from(self.pairs)
        return g

    def is_acyclic(self):
        return nx.is_directed_acyclic_graph(self.graph())

    def closure(self):
        return DependencyOrder(frozenset(nx.transitive_closure(self.graph()).edges()))

    def linear_extension(self, variables):
        """The variables in an order compatible with the dependency order, ties broken by name."""
        g = self.graph(variables)
        wanted = set(variables)
        return [v for v in nx.lexicographical_topological_sort(g) if v in wanted]

    def to_json(self):
        return [list(pair) for pair in sorted(self.pairs)]

    def __str__(self):
        return '{%s}' % ', '.join('%s<%s' % pair for pair in sorted(self.pairs))


@dataclass(frozen=True)
class SignedTree:
    formula: Formula
    sign: Polarity
    children: tuple = ()
    roles: frozenset = frozenset()

    @property
    def label(self):
        return '%s%s' % (self.sign, _node_name(self.formula))


def _node_name(f):
    if isinstance(f, Atom):
        return f.name
    return type(f).__name__


def signed_tree(f, sign=Polarity.POSITIVE):
    signs = child_polarities(f, sign)
    children = tuple(signed_tree(child, s) for child, s in zip(f.children, signs))
    return SignedTree(f, sign, children, node_roles(f, sign))


@dataclass(frozen=True)
class Branch:
    path: tuple
    nodes: tuple

    @property
    def leaf(self):
        return self.nodes[-1]


def branches(t, path=(), nodes=()):
    nodes = nodes + (t,)
    if not t.children:
        yield Branch(path, nodes)
        return
    for i, child in enumerate(t.children):
        yield from branches(child, path + (i,), nodes)


def is_critical_leaf(t, epsilon):
    if not isinstance(t.formula, PropVar):
        return False
    order = epsilon.get(t.formula.name)
    return (t.sign is _POS and order is Order.ONE) or (t.sign is _NEG and order is Order.DUAL)


def critical_branches(t, epsilon):
    """Branches ending in +p with epsilon_p = 1 or in -p with epsilon_p = ∂."""
    return [b for b in branches(t) if is_critical_leaf(b.leaf, epsilon)]


def critical_leaves(t, epsilon):
    return [b.leaf for b in critical_branches(t, epsilon)]


def live_leaves(t):
    return [b.leaf for b in branches(t) if isinstance(b.leaf.formula, PropVar)]


@dataclass(frozen=True)
class BranchDecomposition:
    branch: Branch
    p3: tuple
    p2: tuple
    p1: tuple
    nb_pia: bool
    nl: bool
    omega_conf: bool = True
    constraints: frozenset = frozenset()
    tree: int = 0

    @property
    def variable(self):
        return self.branch.leaf.formula.name

    def to_json(self):
        def segment(nodes):
            return [{'node': node.label, 'role': role.value} for node, role in nodes]
        return {
            'tree': 'lhs' if self.tree == 0 else 'rhs',
            'path': list(self.branch.path),
            'leaf': self.branch.leaf.label,
            'p3': segment(self.p3),
            'p2': segment(self.p2),
            'p1': segment(self.p1),
            'flags': {'nb_pia': self.nb_pia, 'nl': self.nl, 'omega_conf': self.omega_conf},
        }


def _role_in(node, group):
    roles = node.roles & group
    return next(iter(roles)) if roles else None


def _sibling(branch, position):
    """The other child of the binary node at `position` of the branch."""
    parent = branch.nodes[position]
    taken = branch.path[position]
    return parent.children[1 - taken]


def decompose_branch(t, branch, epsilon, tree=0):
    """Split a critical branch into its P3, P2 and P1 parts.

    Splits are tried with the longest possible P3 and then the longest
    possible P2, backtracking towards longer P1 parts. The preferred split
    also has the shortest P1, hence the fewest dependency constraints.

    Raises
    ------
    NotGood
        When no split satisfies the good-branch conditions.
    """
    nodes = branch.nodes[:-1]
    k = len(nodes)
    outer = 0
    while outer < k and _role_in(nodes[outer], OUTER):
        outer += 1

    reason = None
    for b in range(k, -1, -1):
        a = min(b, outer)
        p2 = [(n, _role_in(n, INNER)) for n in nodes[a:b]]
        if any(role is None for _, role in p2):
            bad = next(n for n, role in p2 if role is None)
            reason = reason or NotGood('%s cannot be part of the inner skeleton' % bad.label, bad)
            continue
        p1 = [(n, _role_in(n, PIA)) for n in nodes[b:]]
        if any(role is None for _, role in p1):
            bad = next(n for n, role in reversed(p1) if role is None)
            reason = NotGood('%s in the scope of a PIA part is not a PIA node' % bad.label, bad)
            break
        failure = _check_conditions(branch, a, b, p2, p1, epsilon)
        if failure is not None:
            reason = reason or failure
            continue
        p3 = tuple((n, _role_in(n, OUTER)) for n in nodes[:a])
        return _decomposition(branch, a, b, p3, tuple(p2), tuple(p1), epsilon, tree)
    raise reason or NotGood('No good split for the branch ending in %s' % branch.leaf.label, branch.leaf)


def _check_conditions(branch, a, b, p2, p1, epsilon):
    if p1 and not is_sentence(p1[0][0].formula):
        return NotGood('%s at the top of the PIA part is not a sentence' % p1[0][0].formula, p1[0][0])
    for offset, (node, role) in enumerate(p1):
        if role is NodeClass.SRR:
            sibling = _sibling(branch, b + offset)
            if not is_sentence(sibling.formula) or critical_leaves(sibling, epsilon):
                return NotGood('Side %s of %s has critical occurrences' % (sibling.formula, node.label), node)
    for offset, (node, role) in enumerate(p2):
        if role is NodeClass.SLR_INNER:
            sibling = _sibling(branch, a + offset)
            if not is_sentence(sibling.formula) or critical_leaves(sibling, epsilon):
                return NotGood('Side %s of %s has critical occurrences' % (sibling.formula, node.label), node)
    return None


def _decomposition(branch, a, b, p3, p2, p1, epsilon, tree):
    leaf = branch.leaf.formula.name
    constraints = set()
    for offset, (node, role) in enumerate(p1):
        if role is NodeClass.SRR:
            sibling = _sibling(branch, b + offset)
            constraints.update((name, leaf) for name in propvars(sibling.formula))
    nb_pia = not any(isinstance(node.formula, Binder) for node, _ in p1)
    nl = True
    for offset, (node, role) in enumerate(p2):
        if role is NodeClass.SLR_INNER and live_leaves(_sibling(branch, a + offset)):
            nl = False
    return BranchDecomposition(branch, p3, p2, p1, nb_pia, nl, True, frozenset(constraints), tree)


class Level(IntEnum):
    NONE = 0
    RECURSIVE = 1
    INDUCTIVE = 2
    RESTRICTED_INDUCTIVE = 3
    TAME_INDUCTIVE = 4

    @property
    def label(self):
        return {0: 'None', 1: 'Recursive', 2: 'Inductive', 3: 'RestrictedInductive', 4: 'TameInductive'}[self.value]


@dataclass(frozen=True)
class Witness:
    epsilon: OrderType
    omega: DependencyOrder
    level: Level
    levels: frozenset
    decompositions: tuple = ()

    def to_json(self):
        return {
            'epsilon': self.epsilon.to_json(),
            'omega': self.omega.to_json(),
            'level': self.level.label,
            'levels': sorted(level.label for level in self.levels),
            'branches': [d.to_json() for d in self.decompositions],
        }


@dataclass(frozen=True)
class Classification:
    """Outcome of :func:`classify`.

    `level` is the highest class reached and `witnesses` the order-types
    reaching it. Levels are not nested: an order-type can be restricted
    inductive without being tame, so every level met by some candidate is
    kept in `levels` with its own witnesses.
    """
    level: Level
    witnesses: tuple = ()
    candidates: tuple = ()
    note: str = None

    @property
    def levels(self):
        return frozenset(level for w in self.candidates for level in w.levels)

    def witnesses_at(self, level):
        """The candidates establishing `level`."""
        level = Level(level)
        return tuple(w for w in self.candidates if level in w.levels)

    def to_json(self):
        return {
            'level': self.level.label,
            'witnesses': [w.to_json() for w in self.witnesses],
            'levels': {level.label: [w.epsilon.to_json() for w in self.witnesses_at(level)]
                       for level in sorted(self.levels, reverse=True)},
            'note': self.note,
        }


def _binder_positions(t, path=()):
    if isinstance(t.formula, Binder):
        yield path, t
    for i, child in enumerate(t.children):
        yield from _binder_positions(child, path + (i,))


def witnesses_for(ineq, epsilon):
    """Analyse `ineq` for one order-type.

    Returns
    -------
    Witness or None
        None when some critical branch is not good, otherwise the witness
        with every class the order-type establishes.
    """
    trees = (signed_tree(ineq.lhs, _POS), signed_tree(ineq.rhs, _NEG))
    decompositions = []
    on_critical = set()
    for index, t in enumerate(trees):
        for branch in critical_branches(t, epsilon):
            try:
                decompositions.append(decompose_branch(t, branch, epsilon, tree=index))
            except NotGood:
                return None
            on_critical.update((index, branch.path[:depth]) for depth in range(len(branch.path)))

    levels = {Level.RECURSIVE}
    constraints = frozenset().union(*(d.constraints for d in decompositions))
    dependency = DependencyOrder(constraints)
    omega = DependencyOrder()
    if dependency.is_acyclic():
        levels.add(Level.INDUCTIVE)
        omega = dependency.closure()
        binders = [((index, path), node) for index, t in enumerate(trees)
                   for path, node in _binder_positions(t)]
        restricted = (all(d.nb_pia and d.nl for d in decompositions)
                      and all(position in on_critical for position, _ in binders))
        tame = (not constraints
                and not any(position in on_critical for position, _ in binders)
                and all(node.roles == {NodeClass.BINDER_PIA} for _, node in binders))
        if restricted:
            levels.add(Level.RESTRICTED_INDUCTIVE)
        if tame:
            levels.add(Level.TAME_INDUCTIVE)
    else:
        decompositions = [replace(d, omega_conf=False) for d in decompositions]
    return Witness(epsilon, omega, max(levels), frozenset(levels), tuple(decompositions))


def order_types(variables):
    """All order-types over `variables`, 1 before ∂ in product order."""
    variables = sorted(variables)
    for values in itertools.product((Order.ONE, Order.DUAL), repeat=len(variables)):
        yield OrderType(tuple(zip(variables, values)))


def classify(ineq):
    """Classify an L1 inequality.

    Every order-type is analysed; the level is the highest class reached by
    some order-type and the witnesses are all order-types reaching it.

    Examples
    --------
    >>> from mustaralba.parser import parse_inequality
    >>> classify(parse_inequality('p <= p')).level.label
    'TameInductive'
    """
    try:
        language = language_of(ineq)
    except MixedBinders as e:
        return Classification(Level.NONE, note=str(e))
    if language not in (LanguageTag.L, LanguageTag.L1):
        return Classification(Level.NONE, note='only L1 inequalities are classified, got %s' % language.value)
    candidates = [w for w in (witnesses_for(ineq, eps) for eps in order_types(propvars(ineq))) if w is not None]
    level = max((w.level for w in candidates), default=Level.NONE)
    witnesses = tuple(w for w in candidates if w.level == level)
    return Classification(level, witnesses, tuple(candidates))
