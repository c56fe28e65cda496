"""
The rewrite rules of the calculus, acting on quasi-systems.

Every rule takes a :class:`~mustaralba.system.QuasiSystem`, a member index
and an antecedent index and returns a new system; systems are never
mutated. :func:`apply_step` dispatches a
:class:`~mustaralba.system.RuleApplication` and :func:`applicable` lists
every rule instance that could fire, whatever the strategy.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

from mustaralba.inner import NotInner, recognize_binder
from mustaralba.syntax import (Bot, Top, PropVar, FixVar, PlaceVar, Nominal, CoNominal,
                               Box, Dia, BlackBox, BlackDia, And, Or, Implies, CoImplies,
                               Nu, MuStar, NuStar, Inequality, LEAST_BINDERS,
                               big_and, big_or, is_negative_in, is_positive_in, propvars, substitute)
from mustaralba.system import (Mode, Rule, Side, QuasiInequality, QuasiSystem, RuleApplication)

logger = logging.getLogger(__name__)


class ShapeMismatch(ValueError):pass
class NotApplicable(ValueError):pass


class SideConditionViolated(ValueError):
    def __init__(self, message, condition=None, inequality=None):
        super().__init__(message)
        self.condition = condition
        self.inequality = inequality


def first_approximation(ineq, system=None, origin=0):
    """``phi <= psi`` becomes ``[i <= phi & psi <= m => i <= m]`` with fresh i, m.

    The new member is appended to `system` (an empty system when None).
    """
    system = QuasiSystem() if system is None else system
    i, system = system.fresh(Nominal)
    m, system = system.fresh(CoNominal)
    member = QuasiInequality((Inequality(i, ineq.lhs), Inequality(ineq.rhs, m)), Inequality(i, m),
                             origin=origin)
    return system.with_members(len(system.members), [member])


def _target(system, member, index):
    try:
        q = system.members[member]
        return q, q.antecedent[index]
    except (IndexError, TypeError):
        raise NotApplicable('No inequality %s in member %s' % (index, member)) from None


def _expect(condition, rule, ineq):
    if not condition:
        raise ShapeMismatch('%s does not apply to %s' % (rule, ineq))


def apply_residuation(system, member, index, rule, isolate=None):
    """MinusLR, ImpRR, AndLR or OrRR on the target inequality.

    `isolate` picks the conjunct (AndLR) or disjunct (OrRR) kept alone; the
    defaults are the left conjunct and the right disjunct.
    """
    rule = Rule(rule)
    q, ineq = _target(system, member, index)
    lhs, rhs = ineq.lhs, ineq.rhs
    if rule is Rule.MINUS_LR:
        _expect(isinstance(lhs, CoImplies), rule, ineq)
        new = Inequality(lhs.left, Or(lhs.right, rhs))
    elif rule is Rule.IMP_RR:
        _expect(isinstance(rhs, Implies), rule, ineq)
        new = Inequality(And(lhs, rhs.left), rhs.right)
    elif rule is Rule.AND_LR:
        _expect(isinstance(lhs, And), rule, ineq)
        if Side(isolate or Side.LEFT) is Side.LEFT:
            new = Inequality(lhs.left, Implies(lhs.right, rhs))
        else:
            new = Inequality(lhs.right, Implies(lhs.left, rhs))
    elif rule is Rule.OR_RR:
        _expect(isinstance(rhs, Or), rule, ineq)
        if Side(isolate or Side.RIGHT) is Side.RIGHT:
            new = Inequality(CoImplies(lhs, rhs.left), rhs.right)
        else:
            new = Inequality(CoImplies(lhs, rhs.right), rhs.left)
    else:
        raise ShapeMismatch('%s is not a residuation rule' % rule)
    return system.with_members(member, [q.with_antecedent(index, [new])])


def apply_adjunction(system, member, index, rule):
    """OrLA and AndRA split the target in place; DiaLA and BoxRA use the black adjoints."""
    rule = Rule(rule)
    q, ineq = _target(system, member, index)
    lhs, rhs = ineq.lhs, ineq.rhs
    if rule is Rule.OR_LA:
        _expect(isinstance(lhs, Or), rule, ineq)
        new = [Inequality(lhs.left, rhs), Inequality(lhs.right, rhs)]
    elif rule is Rule.AND_RA:
        _expect(isinstance(rhs, And), rule, ineq)
        new = [Inequality(lhs, rhs.left), Inequality(lhs, rhs.right)]
    elif rule is Rule.DIA_LA:
        _expect(isinstance(lhs, Dia), rule, ineq)
        new = [Inequality(lhs.arg, BlackBox(rhs))]
    elif rule is Rule.BOX_RA:
        _expect(isinstance(rhs, Box), rule, ineq)
        new = [Inequality(BlackDia(lhs), rhs.arg)]
    else:
        raise ShapeMismatch('%s is not an adjunction rule' % rule)
    return system.with_members(member, [q.with_antecedent(index, new)])


def apply_approximation(system, member, index, rule):
    """The ordinary approximation rules; introduced names are fresh and existential."""
    rule = Rule(rule)
    q, ineq = _target(system, member, index)
    lhs, rhs = ineq.lhs, ineq.rhs
    if rule is Rule.BOX_APPR:
        _expect(isinstance(lhs, Box) and isinstance(rhs, CoNominal), rule, ineq)
        n, system = system.fresh(CoNominal)
        new, exists = [Inequality(Box(n), rhs), Inequality(lhs.arg, n)], [n]
    elif rule is Rule.DIA_APPR:
        _expect(isinstance(lhs, Nominal) and isinstance(rhs, Dia), rule, ineq)
        j, system = system.fresh(Nominal)
        new, exists = [Inequality(lhs, Dia(j)), Inequality(j, rhs.arg)], [j]
    elif rule is Rule.IMP_APPR:
        _expect(isinstance(lhs, Implies) and isinstance(rhs, CoNominal), rule, ineq)
        j, system = system.fresh(Nominal)
        n, system = system.fresh(CoNominal)
        new = [Inequality(Implies(j, n), rhs), Inequality(j, lhs.left), Inequality(lhs.right, n)]
        exists = [j, n]
    elif rule is Rule.MINUS_APPR:
        _expect(isinstance(lhs, Nominal) and isinstance(rhs, CoImplies), rule, ineq)
        j, system = system.fresh(Nominal)
        n, system = system.fresh(CoNominal)
        new = [Inequality(lhs, CoImplies(j, n)), Inequality(j, rhs.left), Inequality(rhs.right, n)]
        exists = [j, n]
    else:
        raise ShapeMismatch('%s is not an approximation rule' % rule)
    return system.with_members(member, [q.with_antecedent(index, new, exists)])


def fp_certificate(ineq):
    """The certificate licensing a fixed-point approximation on `ineq`, or None."""
    if isinstance(ineq.lhs, Nominal) and isinstance(ineq.rhs, MuStar):
        binder = ineq.rhs
    elif isinstance(ineq.lhs, NuStar) and isinstance(ineq.rhs, CoNominal):
        binder = ineq.lhs
    else:
        return None
    try:
        certificate = recognize_binder(binder)
    except NotInner:
        return None
    return certificate if certificate.placeholders else None


def apply_fp_approximation(system, member, index, certificate=None):
    """MuAR on ``i <= mu* X.psi`` or NuAR on ``nu* X.phi <= m``.

    The target member is replaced by one member per placeholder of the
    certificate. Member k keeps the pure inequality with the k-th
    placeholder set to a fresh name (a nominal when its order-type is 1
    under mu*, a co-nominal under nu*, swapped for order-type ∂) and the
    other placeholders set to the least (mu*) or greatest (nu*) element of
    their order-type, plus the side inequality relating the fresh name to
    the abstracted subterm.

    Raises
    ------
    NotApplicable
        In tame mode, or when the binder body is not an inner formula.
    """
    if system.mode is Mode.TAME:
        raise NotApplicable('Fixed-point approximation is not allowed in a tame run')
    q, ineq = _target(system, member, index)
    if certificate is None:
        certificate = fp_certificate(ineq)
    if certificate is None:
        raise NotApplicable('No inner-formula certificate for %s' % ineq)
    least = isinstance(ineq.rhs, MuStar) and isinstance(ineq.lhs, Nominal)
    binder = ineq.rhs if least else ineq.lhs
    if not least and not (isinstance(binder, NuStar) and isinstance(ineq.rhs, CoNominal)):
        raise ShapeMismatch('Fixed-point approximation does not apply to %s' % ineq)
    if certificate.instantiate(certificate.bindings) != binder.body:
        raise NotApplicable('Certificate does not match %s' % binder)

    names = certificate.placeholders
    fresh = []
    for x in names:
        dual = certificate.tau[x].is_dual
        cls = (CoNominal if dual else Nominal) if least else (Nominal if dual else CoNominal)
        atom, system = system.fresh(cls)
        fresh.append(atom)

    produced = []
    for k, x in enumerate(names):
        values = {}
        for y in names:
            dual = certificate.tau[y].is_dual
            if y == x:
                values[y] = fresh[k]
            elif least:
                values[y] = Top() if dual else Bot()
            else:
                values[y] = Bot() if dual else Top()
        pure_binder = type(binder)(binder.var, certificate.instantiate(values))
        phi = certificate.bindings[x]
        dual = certificate.tau[x].is_dual
        if least:
            pure = Inequality(ineq.lhs, pure_binder)
            side = Inequality(phi, fresh[k]) if dual else Inequality(fresh[k], phi)
        else:
            pure = Inequality(pure_binder, ineq.rhs)
            side = Inequality(fresh[k], phi) if dual else Inequality(phi, fresh[k])
        produced.append(q.with_antecedent(index, [pure, side], [fresh[k]]))
    return system.with_members(member, produced)


@dataclass(frozen=True)
class Shape:
    closed: bool
    open: bool
    almost_closed: bool
    almost_open: bool


@lru_cache(maxsize=4096)
def syntactic_shape(f):
    """Syntactic (almost) openness and closedness, by simultaneous recursion.

    Unstarred binders are treated like their starred counterparts;
    fixed-point variables and placeholders behave like propositional
    variables.
    """
    if isinstance(f, (Bot, Top, PropVar, FixVar, PlaceVar)):
        return Shape(True, True, True, True)
    if isinstance(f, Nominal):
        return Shape(True, False, True, False)
    if isinstance(f, CoNominal):
        return Shape(False, True, False, True)
    if isinstance(f, (And, Or)):
        a, b = syntactic_shape(f.left), syntactic_shape(f.right)
        return Shape(a.closed and b.closed, a.open and b.open,
                     a.almost_closed and b.almost_closed, a.almost_open and b.almost_open)
    if isinstance(f, Implies):
        a, b = syntactic_shape(f.left), syntactic_shape(f.right)
        return Shape(a.open and b.closed, a.closed and b.open,
                     a.almost_open and b.almost_closed, a.almost_closed and b.almost_open)
    if isinstance(f, CoImplies):
        a, b = syntactic_shape(f.left), syntactic_shape(f.right)
        return Shape(a.closed and b.open, a.open and b.closed,
                     a.almost_closed and b.almost_open, a.almost_open and b.almost_closed)
    if isinstance(f, (Box, Dia)):
        return syntactic_shape(f.arg)
    if isinstance(f, BlackDia):
        a = syntactic_shape(f.arg)
        return Shape(a.closed, False, a.almost_closed, False)
    if isinstance(f, BlackBox):
        a = syntactic_shape(f.arg)
        return Shape(False, a.open, False, a.almost_open)
    if isinstance(f, LEAST_BINDERS):
        a = syntactic_shape(f.body)
        return Shape(a.closed, False, a.almost_closed, a.almost_open)
    if isinstance(f, (Nu, NuStar)):
        a = syntactic_shape(f.body)
        return Shape(False, a.open, a.almost_closed, a.almost_open)
    raise TypeError('Not a formula:%r' % (f,))


def _mentions(ineq, p):
    return p in propvars(ineq)


def ackermann_partition(member, variable, side):
    """Split an antecedent into bounds for `variable` and the inequalities they feed.

    Returns
    -------
    alphas : list of int
        Indices of ``alpha <= p`` (right) or ``p <= alpha`` (left).
    others : list of int
        Indices of the remaining inequalities mentioning `variable`.

    Raises
    ------
    SideConditionViolated
        When an inequality fits neither role.
    """
    side = Side(side)
    p = PropVar(variable)
    alphas, others = [], []
    for k, ineq in enumerate(member.antecedent):
        if not _mentions(ineq, variable):
            continue
        bound = ineq.lhs if side is Side.LEFT else ineq.rhs
        value = ineq.rhs if side is Side.LEFT else ineq.lhs
        if bound == p and variable not in propvars(value):
            alphas.append(k)
        else:
            others.append(k)
    check_side_conditions(member, variable, side, alphas, others)
    return alphas, others


def check_side_conditions(member, variable, side, alphas, others):
    side = Side(side)
    for k in alphas:
        ineq = member.antecedent[k]
        alpha = ineq.lhs if side is Side.RIGHT else ineq.rhs
        shape = syntactic_shape(alpha)
        if side is Side.RIGHT and not shape.closed:
            raise SideConditionViolated('bound %s is not syntactically closed' % alpha, 'alpha_closed', ineq)
        if side is Side.LEFT and not shape.open:
            raise SideConditionViolated('bound %s is not syntactically open' % alpha, 'alpha_open', ineq)
    for k in others:
        ineq = member.antecedent[k]
        lhs, rhs = syntactic_shape(ineq.lhs), syntactic_shape(ineq.rhs)
        if side is Side.RIGHT:
            checks = [(is_positive_in(ineq.lhs, variable), 'beta_positive'),
                      (lhs.closed, 'beta_closed'),
                      (is_negative_in(ineq.rhs, variable), 'gamma_negative'),
                      (rhs.open, 'gamma_open')]
        else:
            checks = [(is_negative_in(ineq.lhs, variable), 'gamma_negative'),
                      (lhs.closed, 'gamma_closed'),
                      (is_positive_in(ineq.rhs, variable), 'beta_positive'),
                      (rhs.open, 'beta_open')]
        for ok, condition in checks:
            if not ok:
                raise SideConditionViolated('%s fails %s for %s' % (ineq, condition, variable), condition, ineq)


def apply_ackermann(system, member, variable, side):
    """(RA) on the right side, (LA) on the left side, eliminating `variable` from one member."""
    side = Side(side)
    q = system.members[member]
    if not any(_mentions(ineq, variable) for ineq in q.antecedent):
        raise NotApplicable('%s does not occur in member %d' % (variable, member))
    alphas, others = ackermann_partition(q, variable, side)
    if side is Side.RIGHT:
        value = big_or([q.antecedent[k].lhs for k in alphas])
    else:
        value = big_and([q.antecedent[k].rhs for k in alphas])
    bindings = {PropVar(variable): value}
    antecedent = []
    for k, ineq in enumerate(q.antecedent):
        if k in alphas:
            continue
        antecedent.append(substitute(ineq, bindings) if k in others else ineq)
    new = QuasiInequality(tuple(antecedent), q.consequent, q.exists_vars, q.origin)
    return system.with_members(member, [new])


def apply_step(system, application):
    """Apply one :class:`~mustaralba.system.RuleApplication` to `system`."""
    rule, a = application.rule, application
    logger.debug('%s on member %s, inequality %s', rule, a.member, a.index)
    if rule is Rule.FA:
        return first_approximation(a.inequality, system, a.origin)
    group = rule.group
    if group == 'residuation':
        return apply_residuation(system, a.member, a.index, rule, a.isolate)
    if group == 'adjunction':
        return apply_adjunction(system, a.member, a.index, rule)
    if group == 'approximation':
        return apply_approximation(system, a.member, a.index, rule)
    if group == 'fixpoint':
        return apply_fp_approximation(system, a.member, a.index, a.certificate)
    if group == 'ackermann':
        return apply_ackermann(system, a.member, a.variable, Side.RIGHT if rule is Rule.RA else Side.LEFT)
    raise NotApplicable('Unknown rule:%s' % rule)


def _shapes(ineq):
    lhs, rhs = ineq.lhs, ineq.rhs
    if isinstance(lhs, CoImplies):
        yield Rule.MINUS_LR, None
    if isinstance(rhs, Implies):
        yield Rule.IMP_RR, None
    if isinstance(lhs, And):
        yield Rule.AND_LR, Side.LEFT
        yield Rule.AND_LR, Side.RIGHT
    if isinstance(rhs, Or):
        yield Rule.OR_RR, Side.RIGHT
        yield Rule.OR_RR, Side.LEFT
    if isinstance(lhs, Or):
        yield Rule.OR_LA, None
    if isinstance(rhs, And):
        yield Rule.AND_RA, None
    if isinstance(lhs, Dia):
        yield Rule.DIA_LA, None
    if isinstance(rhs, Box):
        yield Rule.BOX_RA, None
    if isinstance(lhs, Box) and isinstance(rhs, CoNominal):
        yield Rule.BOX_APPR, None
    if isinstance(lhs, Nominal) and isinstance(rhs, Dia):
        yield Rule.DIA_APPR, None
    if isinstance(lhs, Implies) and isinstance(rhs, CoNominal):
        yield Rule.IMP_APPR, None
    if isinstance(lhs, Nominal) and isinstance(rhs, CoImplies):
        yield Rule.MINUS_APPR, None


def applicable(system):
    """Every rule instance applicable to `system`, regardless of strategy."""
    found = []
    for m, member in enumerate(system.members):
        for k, ineq in enumerate(member.antecedent):
            for rule, isolate in _shapes(ineq):
                found.append(RuleApplication(rule, m, k, isolate=isolate, origin=member.origin))
            if system.mode is not Mode.TAME:
                certificate = fp_certificate(ineq)
                if certificate is not None:
                    rule = Rule.MU_AR if isinstance(ineq.rhs, MuStar) else Rule.NU_AR
                    found.append(RuleApplication(rule, m, k, certificate=certificate, origin=member.origin))
        for p in sorted({v for ineq in member.antecedent for v in propvars(ineq)}):
            for rule, side in ((Rule.RA, Side.RIGHT), (Rule.LA, Side.LEFT)):
                try:
                    ackermann_partition(member, p, side)
                except SideConditionViolated:
                    continue
                found.append(RuleApplication(rule, m, variable=p, origin=member.origin))
    return found
