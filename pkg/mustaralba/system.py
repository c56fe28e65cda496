"""
States of a run: quasi-inequalities, quasi-systems and rule applications.
"""
import itertools
from dataclasses import dataclass, replace
from enum import Enum

from mustaralba.parser import print_formula, print_inequality
from mustaralba.syntax import (Inequality, Nominal, CoNominal, nominals, conominals,
                               is_pure, subformulas, substitute, to_json as formula_to_json)


class Mode(Enum):
    TAME = 'tame'
    PROPER = 'proper'
    AUTO = 'auto'


class Rule(Enum):
    FA = 'FA'
    OR_LA = 'OrLA'
    AND_RA = 'AndRA'
    DIA_LA = 'DiaLA'
    BOX_RA = 'BoxRA'
    MINUS_LR = 'MinusLR'
    IMP_RR = 'ImpRR'
    AND_LR = 'AndLR'
    OR_RR = 'OrRR'
    BOX_APPR = 'BoxAppr'
    DIA_APPR = 'DiaAppr'
    IMP_APPR = 'ImpAppr'
    MINUS_APPR = 'MinusAppr'
    MU_AR = 'MuAR'
    NU_AR = 'NuAR'
    RA = 'RA'
    LA = 'LA'

    @property
    def group(self):
        return _GROUPS[self]

    def __str__(self):
        return self.value


_GROUPS = {
    Rule.FA: 'first',
    Rule.OR_LA: 'adjunction', Rule.AND_RA: 'adjunction',
    Rule.DIA_LA: 'adjunction', Rule.BOX_RA: 'adjunction',
    Rule.MINUS_LR: 'residuation', Rule.IMP_RR: 'residuation',
    Rule.AND_LR: 'residuation', Rule.OR_RR: 'residuation',
    Rule.BOX_APPR: 'approximation', Rule.DIA_APPR: 'approximation',
    Rule.IMP_APPR: 'approximation', Rule.MINUS_APPR: 'approximation',
    Rule.MU_AR: 'fixpoint', Rule.NU_AR: 'fixpoint',
    Rule.RA: 'ackermann', Rule.LA: 'ackermann',
}


class Side(Enum):
    LEFT = 'left'
    RIGHT = 'right'


@dataclass(frozen=True)
class QuasiInequality:
    """``exists v [a1 & ... & an => consequent]``."""
    antecedent: tuple
    consequent: Inequality
    exists_vars: tuple = ()
    origin: int = 0

    def names(self):
        found = set()
        for ineq in self.antecedent + (self.consequent,):
            found.update(Nominal(name) for name in nominals(ineq))
            found.update(CoNominal(name) for name in conominals(ineq))
        return found | set(self.exists_vars)

    def is_pure(self):
        return all(is_pure(ineq.lhs) and is_pure(ineq.rhs) for ineq in self.antecedent + (self.consequent,))

    def with_antecedent(self, index, replacement, exists=()):
        """Replace the inequality at `index` by the inequalities in `replacement`."""
        antecedent = self.antecedent[:index] + tuple(replacement) + self.antecedent[index + 1:]
        return replace(self, antecedent=antecedent, exists_vars=self.exists_vars + tuple(exists))

    def to_text(self):
        body = '%s => %s' % (' & '.join(print_inequality(i) for i in self.antecedent) or 'T <= T',
                             print_inequality(self.consequent))
        if not self.exists_vars:
            return '[%s]' % body
        return 'exists %s [%s]' % (' '.join(print_formula(v) for v in self.exists_vars), body)

    def to_json(self):
        return {
            'exists': [print_formula(v) for v in self.exists_vars],
            'antecedent': [print_inequality(i) for i in self.antecedent],
            'consequent': print_inequality(self.consequent),
            'origin': self.origin,
        }


@dataclass(frozen=True)
class QuasiSystem:
    """Members read conjunctively, plus the fresh-name counter shared by all sorts."""
    members: tuple = ()
    fresh_counter: int = 0
    mode: Mode = Mode.AUTO

    def fresh(self, cls):
        """A fresh nominal (``$jK``) or co-nominal (``#nK``) and the advanced system."""
        used = set()
        for member in self.members:
            used.update(member.names())
        counter = self.fresh_counter
        while True:
            counter += 1
            atom = cls(('j%d' if cls is Nominal else 'n%d') % counter)
            if atom not in used:
                return atom, replace(self, fresh_counter=counter)

    def with_members(self, index, replacement):
        members = self.members[:index] + tuple(replacement) + self.members[index + 1:]
        return replace(self, members=members)

    def member_indices(self, origin):
        return [k for k, member in enumerate(self.members) if member.origin == origin]

    def is_pure(self):
        return all(member.is_pure() for member in self.members)

    def to_text(self):
        return '\n'.join(member.to_text() for member in self.members)

    def to_json(self):
        return {'members': [member.to_json() for member in self.members],
                'fresh_counter': self.fresh_counter, 'mode': self.mode.value}


@dataclass(frozen=True)
class RuleApplication:
    """One step of a trace.

    `member` and `index` locate the target inequality in the system the step
    is applied to. `produced` and `result` are filled in by the engine once
    the step has been applied.
    """
    rule: Rule
    member: int = None
    index: int = None
    variable: str = None
    isolate: Side = None
    certificate: object = None
    inequality: Inequality = None
    origin: int = 0
    produced: tuple = ()
    result: tuple = ()

    def to_json(self):
        out = {'rule': self.rule.value, 'target': {'member': self.member, 'index': self.index}}
        if self.variable is not None:
            out['variable'] = self.variable
        if self.isolate is not None:
            out['isolate'] = self.isolate.value
        if self.certificate is not None:
            out['certificate'] = self.certificate.to_json()
        if self.inequality is not None:
            out['inequality'] = print_inequality(self.inequality)
            out['inequality_tree'] = {'op': 'Inequality', 'args': [formula_to_json(self.inequality.lhs),
                                                                   formula_to_json(self.inequality.rhs)]}
        out['produced'] = list(self.produced)
        out['result_members'] = list(self.result)
        return out


def _renaming(inequalities):
    mapping, counters = {}, {Nominal: itertools.count(1), CoNominal: itertools.count(1)}
    stems = {Nominal: 'i', CoNominal: 'm'}
    for ineq in inequalities:
        for atom in _atoms_in_order(ineq):
            if atom not in mapping:
                cls = type(atom)
                mapping[atom] = cls('%s%d' % (stems[cls], next(counters[cls])))
    return mapping


def _atoms_in_order(ineq):
    return [g for g in subformulas(ineq) if isinstance(g, (Nominal, CoNominal))]


MAX_PERMUTED = 8


def canonical_form(member):
    """Renaming- and order-invariant form of a quasi-inequality.

    Nominals and co-nominals are renamed by first use, consequent first,
    and the antecedent order minimizing the renamed text is chosen.

    Returns
    -------
    tuple
        ``(antecedent strings, consequent string)``
    """
    antecedent = list(member.antecedent)
    orders = itertools.permutations(antecedent)
    if len(antecedent) > MAX_PERMUTED:
        orders = [antecedent]
    best = None
    for order in orders:
        mapping = _renaming((member.consequent,) + tuple(order))
        texts = tuple(print_inequality(substitute(ineq, mapping)) for ineq in order)
        if best is None or texts < best[0]:
            best = (texts, print_inequality(substitute(member.consequent, mapping)))
    return best


def canonical_system(system):
    """Canonical forms of all members, as a sorted tuple."""
    return tuple(sorted(canonical_form(member) for member in system.members))
