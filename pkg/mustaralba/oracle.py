"""
Property harnesses deciding, on finite algebras, the soundness facts the
calculus relies on.

* :class:`SoundnessOracle` walks random applicable rules from first
  approximations of random inequalities and checks that every step, and
  every preprocessing step, preserves validity in both directions.
* :class:`AckermannOracle` checks the Ackermann equivalences on random
  triples meeting the syntactic side conditions.
* :func:`verify` compares the validity of an input inequality with that of
  the pure system a run produces.

Reports are pandas DataFrames, one row per check.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from mustaralba.algebra import battery, random_algebra
from mustaralba.engine import Engine, preprocess
from mustaralba.generators import GenerationError, ackermann_triple, random_inequality
from mustaralba.parser import print_inequality
from mustaralba.rules import (NotApplicable, ShapeMismatch, SideConditionViolated, applicable, apply_step,
                              first_approximation)
from mustaralba.semantics import (assignment_grid, check_inequality, check_quasi_system, evaluate_many,
                                  grid_size, member_atoms)
from mustaralba.syntax import (Bot, Top, PropVar, atoms, atom_sort_key, positions, replace_at, star,
                               substitute)
from mustaralba.system import Mode, Side, QuasiSystem

logger = logging.getLogger(__name__)

MAX_GRID = 200000

COLUMNS = ['case', 'step', 'rule', 'algebra', 'before', 'after', 'ok', 'skipped', 'detail']


@dataclass
class OracleReport:
    """Outcome of a harness run.

    Attributes
    ----------
    checks : pandas.DataFrame
        One row per (step, algebra) check with columns ``case``, ``step``,
        ``rule``, ``algebra``, ``before``, ``after``, ``ok``, ``skipped`` and
        ``detail``. Skipped rows stand for algebras whose assignment grid
        exceeds ``MAX_GRID``; they are never violations.
    counterexamples : list of dict
        Minimized violating steps.
    """
    checks: pd.DataFrame = field(default_factory=lambda: pd.DataFrame(columns=COLUMNS))
    counterexamples: list = field(default_factory=list)

    @property
    def violations(self):
        if self.checks.empty:
            return self.checks
        failed = ~self.checks['ok'].astype(bool) & ~self.checks['skipped'].astype(bool)
        return self.checks[failed]

    @property
    def unchecked(self):
        """``(case, step, rule)`` of the steps skipped on every algebra."""
        if self.checks.empty:
            return pd.DataFrame(columns=['case', 'step', 'rule'])
        keys = [self.checks['case'], self.checks['step'], self.checks['rule']]
        skipped = self.checks['skipped'].astype(bool).groupby(keys, dropna=False).all()
        return skipped[skipped].rename('skipped').reset_index()[['case', 'step', 'rule']]

    @property
    def passed(self):
        return len(self.violations) == 0 and len(self.unchecked) == 0

    def summary(self):
        """Checks, skipped checks and violations per rule."""
        if self.checks.empty:
            return pd.DataFrame(columns=['checks', 'skipped', 'violations'])
        skipped = self.checks['skipped'].astype(bool)
        ok = self.checks['ok'].astype(bool)
        counts = pd.DataFrame({'rule': self.checks['rule'], 'checks': (~skipped).astype(int),
                               'skipped': skipped.astype(int), 'violations': (~skipped & ~ok).astype(int)})
        return counts.groupby('rule').sum()

    def to_json(self):
        skipped = int(self.checks['skipped'].astype(bool).sum()) if not self.checks.empty else 0
        return {'passed': self.passed, 'checks': int(len(self.checks)) - skipped, 'skipped': skipped,
                'violations': int(len(self.violations)),
                'unchecked': self.unchecked.to_dict(orient='records'),
                'per_rule': self.summary().reset_index().to_dict(orient='records'),
                'counterexamples': self.counterexamples}


def _too_large(A, system):
    return any(grid_size(A, member_atoms(m)) > MAX_GRID for m in system.members)


def _skipped(rule, A, detail=None):
    return {'rule': rule, 'algebra': None if A is None else A.name, 'before': None, 'after': None,
            'ok': True, 'skipped': True, 'detail': detail}


def check_application(system, application, algebras):
    """Validity of `system` before and after `application` on each algebra.

    Returns
    -------
    after : QuasiSystem
    rows : list of dict
        One row per algebra. Algebras too large to enumerate give skipped
        rows, and so does an empty `algebras`.
    """
    after = apply_step(system, application)
    rule = application.rule.value
    rows = []
    for A in algebras:
        if _too_large(A, system) or _too_large(A, after):
            rows.append(_skipped(rule, A))
            continue
        before_report = check_quasi_system(A, system)
        after_report = check_quasi_system(A, after)
        rows.append({'rule': rule, 'algebra': A.name, 'before': before_report.valid,
                     'after': after_report.valid, 'ok': before_report.valid == after_report.valid,
                     'skipped': False, 'detail': None})
    if not rows:
        rows.append(_skipped(rule, None))
    return after, rows


def _checked(rows):
    return any(not row['skipped'] for row in rows)


def _violates(system, application, A):
    try:
        after = apply_step(system, application)
    except (NotApplicable, ShapeMismatch, SideConditionViolated):
        return False
    return check_quasi_system(A, system).valid != check_quasi_system(A, after).valid


def _targets(system, application):
    member = system.members[application.member]
    if application.index is not None:
        return [application.index]
    return list(range(len(member.antecedent)))


def shrink(system, application, algebras):
    """Replace subformulas of the targeted inequalities by T or F while the violation persists.

    Returns
    -------
    system : QuasiSystem
        The smallest violating system found.
    algebra : FiniteAlgebra or None
        An algebra on which the shrunk step still violates, None when the
        step does not violate on any of `algebras`.
    """
    witness = next((A for A in algebras if _violates(system, application, A)), None)
    if witness is None:
        return system, None
    changed = True
    while changed:
        changed = False
        for k in _targets(system, application):
            member = system.members[application.member]
            ineq = member.antecedent[k]
            for path, sub in positions(ineq):
                if not path or isinstance(sub, (Bot, Top)):
                    continue
                for constant in (Bot(), Top()):
                    smaller = replace_at(ineq, path, constant)
                    candidate = system.with_members(application.member, [member.with_antecedent(k, [smaller])])
                    if _violates(candidate, application, witness):
                        system, changed = candidate, True
                        break
                if changed:
                    break
            if changed:
                break
    return system, witness


class SoundnessOracle:
    """Random walks through the calculus, checked step by step.

    Parameters
    ----------
    seed : int, default=1
    algebra_count : int, default=50
        Random algebras drawn once per run.
    formula_count : int, default=40
        Random L1 inequalities, each the start of one walk.
    max_algebra_size : int, default=8
    walk_length : int, default=6
        Rule applications per walk.
    algebras_per_check : int, default=4
        Each step is checked on this many algebras, rotating through the pool.
    """

    def __init__(self, seed=1, algebra_count=50, formula_count=40, max_algebra_size=8, walk_length=6,
                 algebras_per_check=4):
        self.seed = seed
        self.algebra_count = algebra_count
        self.formula_count = formula_count
        self.max_algebra_size = max_algebra_size
        self.walk_length = walk_length
        self.algebras_per_check = algebras_per_check

    def __repr__(self):
        return ('SoundnessOracle(seed=%d, algebra_count=%d, formula_count=%d, max_algebra_size=%d, '
                'walk_length=%d, algebras_per_check=%d)' % (self.seed, self.algebra_count, self.formula_count,
                                                            self.max_algebra_size, self.walk_length,
                                                            self.algebras_per_check))

    def run(self):
        rng = np.random.default_rng(self.seed)
        algebras = [random_algebra(rng, max_size=self.max_algebra_size, name='random%d' % k)
                    for k in range(self.algebra_count)]
        smallest = min(algebras, key=lambda A: A.size, default=None)
        rows, counterexamples = [], []
        rotation = 0
        for case in range(self.formula_count):
            ineq = random_inequality(rng)
            rotation, subset = self._subset(algebras, rotation)
            rows += self._check_preprocessing(case, ineq, subset)
            system = QuasiSystem(mode=Mode.PROPER)
            start = star(ineq)
            checked = self._check_first_approximation(start, subset)
            if not _checked(checked) and smallest is not None and smallest not in subset:
                checked += self._check_first_approximation(start, [smallest])
            rows += [dict(row, case=case, step=0) for row in checked]
            system = first_approximation(start, system)
            for step in range(1, self.walk_length + 1):
                options = applicable(system)
                if not options:
                    break
                application = options[int(rng.integers(len(options)))]
                rotation, subset = self._subset(algebras, rotation)
                after, checked = check_application(system, application, subset)
                if not _checked(checked) and smallest is not None and smallest not in subset:
                    checked += check_application(system, application, [smallest])[1]
                for row in checked:
                    rows.append(dict(row, case=case, step=step))
                    if not row['ok']:
                        counterexamples.append(self._counterexample(system, application, subset))
                        logger.warning('%s violated validity preservation on %s', application.rule, row['algebra'])
                    elif row['skipped']:
                        logger.debug('%s skipped on %s', application.rule, row['algebra'])
                system = after
            logger.debug('walk %d done with %d members', case, len(system.members))
        report = OracleReport(pd.DataFrame(rows, columns=COLUMNS), counterexamples)
        logger.info('%d checks, %d violations, %d steps unchecked', len(report.checks), len(report.violations),
                    len(report.unchecked))
        return report

    def _subset(self, algebras, rotation):
        if not algebras:
            return rotation, []
        count = min(self.algebras_per_check, len(algebras))
        subset = [algebras[(rotation + k) % len(algebras)] for k in range(count)]
        return rotation + count, subset

    def _check_preprocessing(self, case, ineq, algebras):
        steps = []
        preprocess(ineq, steps)
        rows = []
        for step in steps:
            for A in algebras:
                before = check_inequality(A, step.before).valid
                after = all(check_inequality(A, part).valid for part in step.after)
                rows.append({'case': case, 'step': -1, 'rule': 'Preprocess:%s' % step.rule.split('(')[0],
                             'algebra': A.name, 'before': before, 'after': after, 'ok': before == after,
                             'skipped': False, 'detail': print_inequality(step.before)})
        return rows

    def _check_first_approximation(self, ineq, algebras):
        system = first_approximation(ineq)
        detail = print_inequality(ineq)
        rows = []
        for A in algebras:
            if _too_large(A, system):
                rows.append(_skipped('FA', A, detail))
                continue
            before = check_inequality(A, ineq).valid
            after = check_quasi_system(A, system).valid
            rows.append({'rule': 'FA', 'algebra': A.name, 'before': before, 'after': after,
                         'ok': before == after, 'skipped': False, 'detail': detail})
        if not rows:
            rows.append(_skipped('FA', None, detail))
        return rows

    def _counterexample(self, system, application, algebras):
        shrunk, witness = shrink(system, application, algebras)
        return {'rule': application.rule.value, 'algebra': None if witness is None else witness.name,
                'system': shrunk.to_text(), 'application': application.to_json()}


class AckermannOracle:
    """Exhaustive check of the right- and left-handed Ackermann equivalences.

    For a triple ``alpha, lhs, rhs`` and every assignment of the other
    atoms, some value ``a`` of the eliminated variable with ``alpha <= a``
    (``a <= alpha``) and ``lhs(a) <= rhs(a)`` exists exactly when
    ``lhs(alpha) <= rhs(alpha)``.

    Parameters
    ----------
    seed : int, default=1
    triple_count : int, default=100
        Triples per side.
    max_algebra_size : int, default=6
    algebra_count : int, default=10
    """

    def __init__(self, seed=1, triple_count=100, max_algebra_size=6, algebra_count=10):
        self.seed = seed
        self.triple_count = triple_count
        self.max_algebra_size = max_algebra_size
        self.algebra_count = algebra_count

    def run(self):
        rng = np.random.default_rng(self.seed)
        algebras = battery(max_size=self.max_algebra_size, size=self.algebra_count)
        rows = []
        for side in (Side.RIGHT, Side.LEFT):
            for case in range(self.triple_count):
                try:
                    triple = ackermann_triple(rng, side)
                except GenerationError as e:
                    logger.warning(str(e))
                    continue
                A = algebras[case % len(algebras)]
                ok = check_triple(A, triple)
                if not ok:
                    logger.warning('Ackermann %s failed on %s for %s', side.value, A.name, triple)
                rows.append({'case': case, 'step': 0, 'rule': 'RA' if side is Side.RIGHT else 'LA',
                             'algebra': A.name, 'before': None, 'after': None, 'ok': ok, 'skipped': False,
                             'detail': '%s ; %s' % (print_inequality(triple.bound()),
                                                   print_inequality(triple.inequality()))})
        return OracleReport(pd.DataFrame(rows, columns=COLUMNS))


def check_triple(A, triple):
    """Decide the Ackermann equivalence of `triple` on `A` by enumeration."""
    p = PropVar(triple.variable)
    bound, ineq = triple.bound(), triple.inequality()
    others = sorted((set(atoms(bound)) | set(atoms(ineq))) - {p}, key=atom_sort_key)
    env, size = assignment_grid(A, others + [p], sorts=True)
    alpha = evaluate_many(A, triple.alpha, env, size)
    values = env[p]
    below = A.leq[alpha, values] if triple.side is Side.RIGHT else A.leq[values, alpha]
    holds = A.leq[evaluate_many(A, triple.lhs, env, size), evaluate_many(A, triple.rhs, env, size)]
    exists = (below & holds).reshape(-1, A.size).any(axis=1)

    reduced, count = assignment_grid(A, others, sorts=True)
    eliminated = substitute(ineq, {p: triple.alpha})
    direct = A.leq[evaluate_many(A, eliminated.lhs, reduced, count), evaluate_many(A, eliminated.rhs, reduced, count)]
    return bool(np.array_equal(exists, direct))


@dataclass
class VerifyReport:
    """Per-algebra validity of an input inequality and of the pure system of its run."""
    status: str
    run: object
    frame: pd.DataFrame = None

    @property
    def equivalent(self):
        return self.frame is not None and bool(self.frame['agree'].all())

    def to_json(self):
        return {'status': self.status, 'equivalent': self.equivalent,
                'algebras': [] if self.frame is None else self.frame.to_dict(orient='records'),
                'run': self.run.to_json(trace=False)}


def verify(ineq, algebras=None, mode='auto'):
    """Run `ineq` and compare input validity with pure-output validity on every algebra.

    Parameters
    ----------
    ineq : Inequality
    algebras : list of FiniteAlgebra, optional
        Defaults to the fixed battery.
    mode : str or Mode, default='auto'
    """
    algebras = battery() if algebras is None else algebras
    result = Engine(mode).run(ineq)
    if not result.success:
        return VerifyReport(result.status, result)
    rows = []
    for A in algebras:
        input_report = check_inequality(A, ineq)
        output_report = check_quasi_system(A, result.pure_system)
        rows.append({'algebra': A.name, 'size': A.size, 'input_valid': input_report.valid,
                     'output_valid': output_report.valid, 'agree': input_report.valid == output_report.valid})
    return VerifyReport(result.status, result, pd.DataFrame(rows))
