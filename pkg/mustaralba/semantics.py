"""
Interpretation of formulas, inequalities and quasi-inequalities on finite algebras.

Validity is decided by brute force. All assignments are enumerated at once
as a numpy grid (propositional variables over the whole algebra, nominals
over the join-irreducibles, co-nominals over the meet-irreducibles) and
term functions are evaluated column-wise on index arrays.
"""
import itertools
import os
from dataclasses import dataclass, field

import numpy as np

from mustaralba.syntax import (Bot, Top, Atom, PropVar, FixVar, Nominal, CoNominal,
                               Box, Dia, BlackBox, BlackDia, And, Or, Implies, CoImplies,
                               Binder, LEAST_BINDERS, atoms, atom_sort_key)


class UnboundVariable(KeyError):pass
class FixpointMismatch(AssertionError):pass


PAIR_CHUNK = 1000000
CHECK_FIXPOINTS = os.environ.get('MUSTAR_ALBA_CHECK_FIXPOINTS', '') not in ('', '0')


@dataclass
class Assignment:
    """Values (element names) for the atoms of a formula."""
    prop: dict = field(default_factory=dict)
    nom: dict = field(default_factory=dict)
    conom: dict = field(default_factory=dict)
    fix: dict = field(default_factory=dict)

    def environment(self, A):
        env = {}
        for name, value in self.prop.items():
            env[PropVar(name)] = A.element(value)
        for name, value in self.nom.items():
            i = A.element(value)
            if i not in A.join_irreducibles:
                raise ValueError('Nominal %s must denote a join-irreducible, not %s' % (name, value))
            env[Nominal(name)] = i
        for name, value in self.conom.items():
            i = A.element(value)
            if i not in A.meet_irreducibles:
                raise ValueError('Co-nominal %s must denote a meet-irreducible, not %s' % (name, value))
            env[CoNominal(name)] = i
        for name, value in self.fix.items():
            env[FixVar(name)] = A.element(value)
        return env

    @classmethod
    def from_row(cls, A, names, env, row):
        result = cls()
        for atom in names:
            value = A.elements[int(env[atom][row])]
            if isinstance(atom, PropVar):
                result.prop[atom.name] = value
            elif isinstance(atom, Nominal):
                result.nom[atom.name] = value
            elif isinstance(atom, CoNominal):
                result.conom[atom.name] = value
            else:
                result.fix[atom.name] = value
        return result

    def to_json(self):
        return {'prop': dict(self.prop), 'nom': dict(self.nom), 'conom': dict(self.conom), 'fix': dict(self.fix)}


@dataclass
class ValidityReport:
    valid: bool
    countermodel: object = None
    member: int = None
    algebra: str = None

    def __bool__(self):
        return bool(self.valid)

    def to_json(self):
        countermodel = self.countermodel
        if isinstance(countermodel, Assignment):
            countermodel = countermodel.to_json()
        return {'valid': bool(self.valid), 'algebra': self.algebra, 'member': self.member,
                'countermodel': countermodel}


def _lookup(env, f):
    try:
        return env[f]
    except KeyError:
        raise UnboundVariable(f) from None


def _evaluate(A, f, env, check_fixpoints):
    if isinstance(f, Bot):
        return A.bottom
    if isinstance(f, Top):
        return A.top
    if isinstance(f, Atom):
        return _lookup(env, f)
    if isinstance(f, Binder):
        return _fixpoint(A, f, env, check_fixpoints)
    args = [_evaluate(A, child, env, check_fixpoints) for child in f.children]
    return _apply(A, f, args)


def _apply(A, f, args):
    if isinstance(f, And):
        return A.meet_table[args[0], args[1]]
    if isinstance(f, Or):
        return A.join_table[args[0], args[1]]
    if isinstance(f, Implies):
        return A.imp[args[0], args[1]]
    if isinstance(f, CoImplies):
        return A.coimp[args[0], args[1]]
    if isinstance(f, Box):
        return A.box[args[0]]
    if isinstance(f, Dia):
        return A.dia[args[0]]
    if isinstance(f, BlackBox):
        return A.black_box[args[0]]
    if isinstance(f, BlackDia):
        return A.black_dia[args[0]]
    raise TypeError('Not a formula:%r' % (f,))


def _fixpoint(A, f, env, check_fixpoints):
    least = isinstance(f, LEAST_BINDERS)
    var = FixVar(f.var)
    current = A.bottom if least else A.top
    for _ in range(A.size + 1):
        following = _evaluate(A, f.body, {**env, var: current}, check_fixpoints)
        if following == current:
            break
        current = following
    else:
        raise FixpointMismatch('Kleene iteration did not stabilise for %s' % f)

    if check_fixpoints:
        row = {key: np.full(1, value) for key, value in env.items()}
        _check_extremal(A, f, row, np.full(1, current), check_fixpoints)
    return int(current)


def evaluate(A, f, v, check_fixpoints=True):
    """Value of `f` on `A` under the assignment `v`, as an element name.

    Binders are computed by Kleene iteration and, when `check_fixpoints` is
    set, compared with the meet of all pre-fixed points (join of all
    post-fixed points for greatest fixed points).
    """
    env = v.environment(A) if isinstance(v, Assignment) else dict(v)
    return A.elements[_evaluate(A, f, env, check_fixpoints)]


def _check_extremal(A, f, env, values, check_fixpoints):
    """Compare the Kleene values of the binder `f` with its least pre-fixed (greatest post-fixed) points.

    `env` holds one row per entry of `values`; on every row the body is
    evaluated with the bound variable running over the whole algebra.
    """
    size = len(values)
    points = np.arange(A.size)
    wide = {key: np.repeat(value, A.size) for key, value in env.items()}
    wide[FixVar(f.var)] = np.tile(points, size)
    body = evaluate_many(A, f.body, wide, size * A.size, check_fixpoints).reshape(size, A.size)
    if isinstance(f, LEAST_BINDERS):
        chosen = A.leq[body, points[None, :]]
        extremal, table = np.full(size, A.top, dtype=int), A.meet_table
    else:
        chosen = A.leq[points[None, :], body]
        extremal, table = np.full(size, A.bottom, dtype=int), A.join_table
    for x in points:
        extremal = np.where(chosen[:, x], table[extremal, x], extremal)
    bad = np.flatnonzero(extremal != values)
    if len(bad):
        row = bad[0]
        raise FixpointMismatch('%s: Kleene iteration gives %s, the extremal fixed point is %s' % (
            f, A.elements[values[row]], A.elements[extremal[row]]))


def evaluate_many(A, f, env, size, check_fixpoints=None):
    """Vectorized evaluation over index arrays of length `size`.

    Parameters
    ----------
    A : FiniteAlgebra
    f : Formula
    env : dict
        Maps atoms to integer arrays of element indices.
    size : int
    check_fixpoints : bool, optional
        Compare the Kleene value of every binder with its extremal pre- or
        post-fixed point, as :func:`evaluate` does. Defaults to
        ``CHECK_FIXPOINTS``, which the ``MUSTAR_ALBA_CHECK_FIXPOINTS``
        environment variable switches on.

    Returns
    -------
    numpy.ndarray

    Raises
    ------
    FixpointMismatch
        When Kleene iteration does not reach the extremal fixed point.
    """
    if check_fixpoints is None:
        check_fixpoints = CHECK_FIXPOINTS
    if isinstance(f, Bot):
        return np.full(size, A.bottom, dtype=int)
    if isinstance(f, Top):
        return np.full(size, A.top, dtype=int)
    if isinstance(f, Atom):
        return _lookup(env, f)
    if isinstance(f, Binder):
        var = FixVar(f.var)
        current = np.full(size, A.bottom if isinstance(f, LEAST_BINDERS) else A.top, dtype=int)
        for _ in range(A.size + 1):
            following = evaluate_many(A, f.body, {**env, var: current}, size, check_fixpoints)
            if np.array_equal(following, current):
                break
            current = following
        else:
            raise FixpointMismatch('Kleene iteration did not stabilise for %s' % f)
        if check_fixpoints:
            _check_extremal(A, f, env, current, check_fixpoints)
        return current
    args = [evaluate_many(A, child, env, size, check_fixpoints) for child in f.children]
    return _apply(A, f, args)


def term_function(A, f, variables):
    """Table of the term function of `f` over all values of `variables` (atoms, in order).

    Returns an array of shape ``(A.size,) * len(variables)``.
    """
    env, size = assignment_grid(A, variables, sorts=False)
    return evaluate_many(A, f, env, size).reshape((A.size,) * len(variables))


def domain(A, atom):
    if isinstance(atom, Nominal):
        return A.join_irreducibles
    if isinstance(atom, CoNominal):
        return A.meet_irreducibles
    return np.arange(A.size)


def grid_size(A, names):
    return int(np.prod([len(domain(A, atom)) for atom in names], dtype=float))


def assignment_grid(A, names, sorts=True):
    """All assignments of `names`, row by row in lexicographic order.

    Returns
    -------
    env : dict
        Atom to index array.
    size : int
        Number of rows.
    """
    if not names:
        return {}, 1
    domains = [domain(A, atom) if sorts else np.arange(A.size) for atom in names]
    mesh = np.meshgrid(*domains, indexing='ij')
    env = {atom: m.ravel() for atom, m in zip(names, mesh)}
    return env, mesh[0].size


def _holds(A, ineq, env, size):
    lhs = evaluate_many(A, ineq.lhs, env, size)
    rhs = evaluate_many(A, ineq.rhs, env, size)
    return A.leq[lhs, rhs]


def check_inequality(A, ineq):
    """Decide validity of `ineq` on `A` by enumerating all assignments."""
    names = atoms(ineq)
    env, size = assignment_grid(A, names)
    ok = _holds(A, ineq, env, size)
    if ok.all():
        return ValidityReport(True, algebra=A.name)
    row = int(np.argmin(ok))
    return ValidityReport(False, countermodel=Assignment.from_row(A, names, env, row), algebra=A.name)


def member_atoms(member):
    found = set()
    for ineq in tuple(member.antecedent) + (member.consequent,):
        found.update(atoms(ineq))
    return sorted(found, key=atom_sort_key)


def check_member(A, member):
    """A quasi-inequality holds iff, under every assignment, the antecedent implies the consequent.

    Existentially introduced names occur only in the antecedent, so reading
    them universally over the whole implication is equivalent.
    """
    names = member_atoms(member)
    env, size = assignment_grid(A, names)
    premise = np.ones(size, dtype=bool)
    for ineq in member.antecedent:
        premise &= _holds(A, ineq, env, size)
    ok = ~premise | _holds(A, member.consequent, env, size)
    if ok.all():
        return ValidityReport(True, algebra=A.name)
    row = int(np.argmin(ok))
    return ValidityReport(False, countermodel=Assignment.from_row(A, names, env, row), algebra=A.name)


def check_quasi_system(A, system):
    """Validity of a quasi-system (or a single member, or a sequence of members) on `A`."""
    members = getattr(system, 'members', None)
    if members is None:
        members = [system] if hasattr(system, 'antecedent') else list(system)
    for k, member in enumerate(members):
        report = check_member(A, member)
        if not report.valid:
            report.member = k
            return report
    return ValidityReport(True, algebra=A.name)


def _join_tau(A, tau, x, y):
    return np.where(tau, A.meet_table[x, y], A.join_table[x, y])


def _meet_tau(A, tau, x, y):
    return np.where(tau, A.join_table[x, y], A.meet_table[x, y])


def check_preservation(A, certificate):
    """Complete join (meet) preservation of a diamond (box) certificate's template on A^tau.

    On a finite algebra complete preservation amounts to preserving binary
    joins (meets) coordinatewise and the empty join (meet), where dual
    coordinates use the reversed order. Every pair of tuples is checked,
    about ``PAIR_CHUNK`` pairs at a time.
    """
    variables = certificate.variables()
    tau = np.array([certificate.tau[v.name].is_dual for v in variables], dtype=bool)
    k = len(variables)
    diamond = certificate.kind.value == 'DiaIF'
    if diamond:
        empty = np.where(tau, A.top, A.bottom)
        target_empty = A.bottom
    else:
        empty = np.where(tau, A.bottom, A.top)
        target_empty = A.top

    def value(tuples):
        env = {v: tuples[:, i] for i, v in enumerate(variables)}
        return evaluate_many(A, certificate.term(), env, len(tuples))

    at_empty = value(empty.reshape(1, k).astype(int))[0]
    if at_empty != target_empty:
        return ValidityReport(False, countermodel={'empty': A.names(empty)}, algebra=A.name)
    if k == 0:
        return ValidityReport(True, algebra=A.name)

    tuples = np.array(list(itertools.product(range(A.size), repeat=k)), dtype=int)
    count = len(tuples)
    values = value(tuples)
    rows = max(1, PAIR_CHUNK // count)
    for start in range(0, count, rows):
        block = np.arange(start, min(start + rows, count))
        first = np.repeat(block, count)
        second = np.tile(np.arange(count), len(block))
        x, y = tuples[first], tuples[second]
        if diamond:
            combined = value(_join_tau(A, tau[None, :], x, y))
            expected = A.join_table[values[first], values[second]]
        else:
            combined = value(_meet_tau(A, tau[None, :], x, y))
            expected = A.meet_table[values[first], values[second]]
        bad = np.flatnonzero(combined != expected)
        if len(bad):
            i = bad[0]
            return ValidityReport(False, countermodel={'first': A.names(x[i]), 'second': A.names(y[i])},
                                  algebra=A.name)
    return ValidityReport(True, algebra=A.name)
