"""
Runs of the calculus: preprocessing, starring, first approximation, the
display strategy and Ackermann elimination.

Examples
--------
>>> from mustaralba.parser import parse_inequality
>>> result = run(parse_inequality('<>p & []q <= mu Y.(<>(p & q) & []Y)'), mode='tame')
>>> result.status
'Success'
"""
import logging
from dataclasses import dataclass, field, replace

from mustaralba.classifier import (DependencyOrder, Order, OrderType, classify, critical_leaves,
                                   order_types, signed_tree)
from mustaralba.parser import print_inequality
from mustaralba.rules import (NotApplicable, SideConditionViolated, apply_step, fp_certificate)
from mustaralba.syntax import (Polarity, Bot, Top, PropVar, Nominal, CoNominal, Box, Dia, And, Or,
                               Implies, CoImplies, MuStar, NuStar, Inequality, LanguageTag,
                               MixedBinders, child_polarities, has_binders, is_negative_in, is_positive_in,
                               language_of, propvars, star, substitute, unstar)
from mustaralba.system import Mode, Rule, Side, QuasiSystem, RuleApplication

logger = logging.getLogger(__name__)


class LanguageError(ValueError):pass
class InvariantError(AssertionError):pass


SUCCESS = 'Success'
STUCK = 'Stuck'


@dataclass(frozen=True)
class PreprocessStep:
    rule: str
    before: Inequality
    after: tuple

    def to_json(self):
        return {'rule': self.rule, 'before': print_inequality(self.before),
                'after': [print_inequality(i) for i in self.after]}


def _distribute(f, sign, root):
    if f.children:
        signs = child_polarities(f, sign)
        f = f.rebuild(tuple(_distribute(c, s, root) for c, s in zip(f.children, signs)))
    if sign is not root:
        return f
    rewritten = _DISTRIBUTE[sign](f)
    return f if rewritten is None else _distribute(rewritten, sign, root)


def _distribute_positive(f):
    if isinstance(f, Dia) and isinstance(f.arg, Or):
        return Or(Dia(f.arg.left), Dia(f.arg.right))
    if isinstance(f, And) and isinstance(f.left, Or):
        return Or(And(f.left.left, f.right), And(f.left.right, f.right))
    if isinstance(f, And) and isinstance(f.right, Or):
        return Or(And(f.left, f.right.left), And(f.left, f.right.right))
    return None


def _distribute_negative(f):
    if isinstance(f, Box) and isinstance(f.arg, And):
        return And(Box(f.arg.left), Box(f.arg.right))
    if isinstance(f, Or) and isinstance(f.left, And):
        return And(Or(f.left.left, f.right), Or(f.left.right, f.right))
    if isinstance(f, Or) and isinstance(f.right, And):
        return And(Or(f.left, f.right.left), Or(f.left, f.right.right))
    return None


_DISTRIBUTE = {Polarity.POSITIVE: _distribute_positive, Polarity.NEGATIVE: _distribute_negative}


def distribute(ineq):
    """Distribute the skeleton joins of ``+lhs`` and meets of ``-rhs`` upwards.

    Positive ``<>`` and ``&`` go over positive ``|`` in ``+lhs``; negative
    ``[]`` and ``|`` go over negative ``&`` in ``-rhs``. Nodes of the other
    sign are left alone.
    """
    lhs = _distribute(ineq.lhs, Polarity.POSITIVE, Polarity.POSITIVE)
    rhs = _distribute(ineq.rhs, Polarity.NEGATIVE, Polarity.NEGATIVE)
    return Inequality(lhs, rhs)


def eliminate_monotone(ineq):
    """Apply (Bot) and (Top) for every variable occurring with a uniform polarity.

    Returns the new inequality and the list of ``(rule, variable)`` applied.
    """
    applied = []
    for p in propvars(ineq):
        if is_negative_in(ineq.lhs, p) and is_positive_in(ineq.rhs, p):
            ineq, rule = substitute(ineq, {PropVar(p): Bot()}), 'Bot'
        elif is_positive_in(ineq.lhs, p) and is_negative_in(ineq.rhs, p):
            ineq, rule = substitute(ineq, {PropVar(p): Top()}), 'Top'
        else:
            continue
        applied.append((rule, p))
    return ineq, applied


def preprocess(ineq, trace=None):
    """Exhaustive distribution, splitting and monotone variable elimination.

    Parameters
    ----------
    ineq : Inequality
    trace : list, optional
        Receives one :class:`PreprocessStep` per transformation.

    Returns
    -------
    tuple of Inequality
        Without duplicates, in order of production.
    """
    trace = [] if trace is None else trace
    work, done = [ineq], []
    while work:
        current = work.pop(0)
        distributed = distribute(current)
        if distributed != current:
            trace.append(PreprocessStep('Distribute', current, (distributed,)))
            current = distributed
        if isinstance(current.lhs, Or):
            parts = (Inequality(current.lhs.left, current.rhs), Inequality(current.lhs.right, current.rhs))
            trace.append(PreprocessStep('OrLA', current, parts))
            work[:0] = parts
            continue
        if isinstance(current.rhs, And):
            parts = (Inequality(current.lhs, current.rhs.left), Inequality(current.lhs, current.rhs.right))
            trace.append(PreprocessStep('AndRA', current, parts))
            work[:0] = parts
            continue
        eliminated, applied = eliminate_monotone(current)
        if applied:
            trace.append(PreprocessStep('+'.join('%s(%s)' % a for a in applied), current, (eliminated,)))
            work.insert(0, eliminated)
            continue
        if current not in done:
            done.append(current)
    return tuple(done)


@dataclass
class _Attempt:
    origin: int
    mode: Mode
    epsilon: OrderType
    omega: DependencyOrder
    status: str = None
    reason: str = None

    def to_json(self):
        return {'origin': self.origin, 'mode': self.mode.value, 'epsilon': self.epsilon.to_json(),
                'omega': self.omega.to_json(), 'status': self.status, 'reason': self.reason}


@dataclass
class RunResult:
    status: str
    system: QuasiSystem
    trace: list = field(default_factory=list)
    run_kind: str = None
    mode: Mode = Mode.AUTO
    inequality: Inequality = None
    preprocessed: tuple = ()
    preprocessing: list = field(default_factory=list)
    attempts: list = field(default_factory=list)

    @property
    def success(self):
        return self.status == SUCCESS

    @property
    def pure_system(self):
        return self.system if self.success else None

    def to_json(self, trace=True):
        out = {
            'input': print_inequality(self.inequality) if self.inequality is not None else None,
            'mode': self.mode.value,
            'status': self.status,
            'run_kind': self.run_kind,
            'preprocessed': [print_inequality(i) for i in self.preprocessed],
        }
        if trace:
            out['preprocessing'] = [s.to_json() for s in self.preprocessing]
            out['steps'] = [a.to_json() for a in self.trace]
            out['attempts'] = [a.to_json() for a in self.attempts]
        out['pure_system'] = self.system.to_json() if self.success else None
        out['system'] = self.system.to_text()
        return out


_PRIORITY = {'split': 0, 'approximation': 1, 'fixpoint': 2, 'display': 3}


def _critical(f, sign, epsilon):
    return bool(critical_leaves(signed_tree(f, sign), epsilon))


REGIONS = ('p3', 'p2', 'p1')


class Guide:
    """Regions of the nodes on the critical branches of one witness.

    Each node of a branch decomposition is recorded as outer skeleton
    (``'p3'``), inner skeleton (``'p2'``) or PIA part (``'p1'``), keyed by
    its subformula and sign so that it keeps its region wherever a rule
    moves it. A node shared by several branches takes its outermost region.
    Nodes built by display steps are not recorded and count as PIA nodes.

    Parameters
    ----------
    decompositions : iterable of BranchDecomposition
    """

    def __init__(self, decompositions=()):
        self.regions = {}
        for decomposition in decompositions:
            for region in REGIONS:
                for node, _ in getattr(decomposition, region):
                    key = (node.formula, node.sign)
                    known = self.regions.get(key)
                    if known is None or REGIONS.index(region) < REGIONS.index(known):
                        self.regions[key] = region

    def region(self, f, sign):
        return self.regions.get((unstar(f), sign), 'p1')

    def __len__(self):
        return len(self.regions)


def _outer(ineq, sign):
    lhs, rhs = ineq.lhs, ineq.rhs
    if sign is Polarity.POSITIVE:
        if isinstance(rhs, And):
            return _PRIORITY['split'], Rule.AND_RA, {}
        if isinstance(lhs, Nominal) and isinstance(rhs, Dia):
            return _PRIORITY['approximation'], Rule.DIA_APPR, {}
        if isinstance(lhs, Nominal) and isinstance(rhs, CoImplies):
            return _PRIORITY['approximation'], Rule.MINUS_APPR, {}
        return None
    if isinstance(lhs, Or):
        return _PRIORITY['split'], Rule.OR_LA, {}
    if isinstance(rhs, CoNominal) and isinstance(lhs, Box):
        return _PRIORITY['approximation'], Rule.BOX_APPR, {}
    if isinstance(rhs, CoNominal) and isinstance(lhs, Implies):
        return _PRIORITY['approximation'], Rule.IMP_APPR, {}
    return None


def _inner(ineq, sign, mode, strict=False):
    """The fixed-point rule for a binder heading an inner skeleton.

    With `strict`, a binder that the run cannot approximate makes the
    attempt stuck instead of being left for later steps.
    """
    if sign is Polarity.POSITIVE:
        binder, rule = ineq.rhs, Rule.MU_AR
        ready = isinstance(binder, MuStar) and isinstance(ineq.lhs, Nominal)
    else:
        binder, rule = ineq.lhs, Rule.NU_AR
        ready = isinstance(binder, NuStar) and isinstance(ineq.rhs, CoNominal)
    if not ready:
        return None
    if mode is Mode.TAME:
        if strict:
            raise NotApplicable('%s heads an inner skeleton, which only proper runs approximate' % binder)
        return None
    certificate = fp_certificate(ineq)
    if certificate is None:
        if strict:
            raise NotApplicable('No inner-formula certificate for %s' % binder)
        return None
    return _PRIORITY['fixpoint'], rule, {'certificate': certificate}


def _isolate(f, sign, epsilon, rule):
    left = _critical(f.left, sign, epsilon)
    right = _critical(f.right, sign, epsilon)
    if left == right:
        return None
    return _PRIORITY['display'], rule, {'isolate': Side.LEFT if left else Side.RIGHT}


def _pia(ineq, sign, epsilon):
    lhs, rhs = ineq.lhs, ineq.rhs
    display = _PRIORITY['display']
    if sign is Polarity.POSITIVE:
        if isinstance(rhs, And):
            return display, Rule.AND_RA, {}
        if isinstance(rhs, Box):
            return display, Rule.BOX_RA, {}
        if isinstance(rhs, Implies):
            return display, Rule.IMP_RR, {}
        if isinstance(rhs, Or):
            return _isolate(rhs, sign, epsilon, Rule.OR_RR)
        return None
    if isinstance(lhs, Or):
        return display, Rule.OR_LA, {}
    if isinstance(lhs, Dia):
        return display, Rule.DIA_LA, {}
    if isinstance(lhs, CoImplies):
        return display, Rule.MINUS_LR, {}
    if isinstance(lhs, And):
        return _isolate(lhs, sign, epsilon, Rule.AND_LR)
    return None


def choose_rule(ineq, epsilon, mode, guide=None):
    """The strategic rule for one antecedent inequality, as ``(priority, rule, options)``.

    Occurrences are read in the trees -lhs and +rhs, so that the signs of
    the input inequality carry over through first approximation. With a
    `guide`, the region of the critical node picks the rules: splitting and
    approximation in the outer skeleton, the fixed-point rules at the top of
    an inner skeleton, adjunction and residuation in the PIA part. Without
    one, the main connective alone decides.

    Returns
    -------
    tuple or None
        Lower priorities go first; None when no rule is due.

    Raises
    ------
    NotApplicable
        When a guided attempt meets a binder heading an inner skeleton that
        it cannot approximate.
    """
    if _critical(ineq.rhs, Polarity.POSITIVE, epsilon):
        target, sign = ineq.rhs, Polarity.POSITIVE
    elif _critical(ineq.lhs, Polarity.NEGATIVE, epsilon):
        target, sign = ineq.lhs, Polarity.NEGATIVE
    else:
        return None
    if guide is None:
        return _outer(ineq, sign) or _inner(ineq, sign, mode) or _pia(ineq, sign, epsilon)
    region = guide.region(target, sign)
    if region == 'p3':
        # delta-adjoints left by preprocessing are residuated
        return _outer(ineq, sign) or _pia(ineq, sign, epsilon)
    if region == 'p2':
        return _inner(ineq, sign, mode, strict=True)
    return _pia(ineq, sign, epsilon)


class Engine:
    """Strategy-driven runs.

    Parameters
    ----------
    mode : {'auto', 'tame', 'proper'}, default='auto'
        Tame runs never use the fixed-point approximation rules; proper runs
        may; auto tries tame runs first and proper runs after.
    max_steps : int, default=500
        Bound on the rule applications of one attempt.
    """

    def __init__(self, mode='auto', max_steps=500):
        self.set_mode(mode)
        self.max_steps = max_steps

    def set_mode(self, mode):
        try:
            self.mode = Mode(mode)
        except ValueError:
            raise ValueError('Unknown mode:%s' % mode) from None

    def __repr__(self):
        return 'Engine(mode=%r, max_steps=%d)' % (self.mode.value, self.max_steps)

    def run(self, ineq):
        """Run the calculus on an L1 inequality.

        Raises
        ------
        LanguageError
            When `ineq` is outside L1.
        InvariantError
            When replaying the trace does not reproduce the final system.
        """
        try:
            language = language_of(ineq)
        except MixedBinders as e:
            raise LanguageError(str(e)) from None
        if language not in (LanguageTag.L, LanguageTag.L1):
            raise LanguageError('Runs start from L1 inequalities, got %s: %s' % (language.value, ineq))

        preprocessing = []
        parts = preprocess(ineq, preprocessing)
        logger.debug('preprocessing gave %d inequalities', len(parts))
        system = QuasiSystem(mode=self.mode)
        trace, attempts, fp_outputs = [], [], set()
        status = SUCCESS
        for origin, part in enumerate(parts):
            outcome = self._run_part(system, part, origin, attempts)
            system, steps, outputs, ok = outcome
            trace.extend(steps)
            fp_outputs |= outputs
            if not ok:
                status = STUCK
                break

        system = replace(system, mode=self.mode)
        replayed = replay(trace, self.mode)
        if replayed != system:
            raise InvariantError('Replaying the trace of %s does not reproduce the final system' % ineq)
        if status == SUCCESS and not system.is_pure():
            raise InvariantError('A successful run left propositional variables in %s' % system.to_text())
        return RunResult(status, system, trace, _run_kind(system, trace, fp_outputs), self.mode, ineq,
                         parts, preprocessing, attempts)

    def _plan(self, part):
        """Attempts to make on one preprocessed inequality.

        Returns
        -------
        list of tuple
            ``(mode, epsilon, omega, guide)``; witnesses come first, guided by
            their branch decompositions, then the remaining order-types
            unguided.
        """
        classification = classify(part)
        witnesses = sorted(classification.candidates, key=lambda w: -w.level)
        entries = [(w.epsilon, w.omega, Guide(w.decompositions)) for w in witnesses]
        known = {eps for eps, _, _ in entries}
        entries += [(eps, DependencyOrder(), None) for eps in order_types(propvars(part)) if eps not in known]
        modes = {Mode.TAME: [Mode.TAME], Mode.PROPER: [Mode.PROPER], Mode.AUTO: [Mode.TAME, Mode.PROPER]}
        return [(mode, eps, omega, guide) for mode in modes[self.mode] for eps, omega, guide in entries]

    def _run_part(self, system, part, origin, attempts):
        starred = star(part)
        last = None
        for mode, epsilon, omega, guide in self._plan(part):
            attempt = _Attempt(origin, mode, epsilon, omega)
            attempts.append(attempt)
            if guide is None:
                logger.debug('attempt %s %s runs unguided', mode.value, epsilon)
            progress = _Progress(replace(system, mode=mode))
            progress.apply(RuleApplication(Rule.FA, inequality=starred, origin=origin))
            try:
                self._display(progress, origin, epsilon, guide)
                self._eliminate(progress, origin, epsilon, omega)
            except (NotApplicable, SideConditionViolated) as e:
                attempt.status, attempt.reason = STUCK, str(e)
                logger.debug('attempt %s %s stuck: %s', mode.value, epsilon, e)
                last = (replace(progress.system, mode=system.mode), progress.steps, progress.outputs, False)
                continue
            attempt.status = SUCCESS
            logger.info('origin %d solved by a %s attempt with epsilon %s', origin, mode.value, epsilon)
            return replace(progress.system, mode=system.mode), progress.steps, progress.outputs, True
        if last is None:
            raise InvariantError('No attempt planned for %s' % part)
        return last

    def _display(self, progress, origin, epsilon, guide=None):
        for _ in range(self.max_steps):
            application = self._next(progress.system, origin, epsilon, guide)
            if application is None:
                return
            progress.apply(application)
        raise NotApplicable('No progress after %d steps' % self.max_steps)

    def _next(self, system, origin, epsilon, guide=None):
        best = None
        for m in system.member_indices(origin):
            for k, ineq in enumerate(system.members[m].antecedent):
                choice = choose_rule(ineq, epsilon, system.mode, guide)
                if choice is None:
                    continue
                priority, rule, extra = choice
                key = (priority, m, k)
                if best is None or key < best[0]:
                    best = (key, RuleApplication(rule, m, k, origin=origin, **extra))
        return None if best is None else best[1]

    def _eliminate(self, progress, origin, epsilon, omega):
        """Ackermann elimination, Ω-minimal variables first.

        A variable whose elimination fails in some member is postponed as
        long as another remaining variable can be eliminated.
        """
        while True:
            remaining = _remaining(progress.system, origin)
            if not remaining:
                return
            failure = None
            for p in omega.linear_extension(remaining):
                try:
                    self._eliminate_variable(progress, origin, p, epsilon)
                except SideConditionViolated as e:
                    failure = failure or e
                    continue
                failure = None
                break
            if failure is not None:
                raise failure

    def _eliminate_variable(self, progress, origin, p, epsilon):
        first = Side.LEFT if epsilon.get(p) is Order.DUAL else Side.RIGHT
        sides = (first, Side.RIGHT if first is Side.LEFT else Side.LEFT)
        planned = []
        for m in progress.system.member_indices(origin):
            if not any(p in propvars(ineq) for ineq in progress.system.members[m].antecedent):
                continue
            failure = None
            for side in sides:
                application = RuleApplication(Rule.RA if side is Side.RIGHT else Rule.LA, m, variable=p,
                                              origin=origin)
                try:
                    apply_step(progress.system, application)
                except SideConditionViolated as e:
                    failure = failure or e
                    continue
                planned.append(application)
                failure = None
                break
            if failure is not None:
                raise failure
        for application in planned:
            progress.apply(application)


class _Progress:
    """The system of an attempt together with the steps that produced it."""

    def __init__(self, system):
        self.system = system
        self.steps = []
        self.outputs = set()

    def apply(self, application):
        after = apply_step(self.system, application)
        if application.rule is Rule.FA:
            produced = (len(after.members) - 1,)
        else:
            produced = _produced(self.system, after, application)
        if application.rule.group == 'fixpoint':
            self.outputs.update(after.members[k].antecedent[application.index] for k in produced)
        self.steps.append(replace(application, produced=produced,
                                  result=tuple(after.members[k].to_text() for k in produced)))
        self.system = after


def _remaining(system, origin):
    return sorted({p for m in system.member_indices(origin)
                   for ineq in system.members[m].antecedent for p in propvars(ineq)})


def _produced(before, after, application):
    grown = len(after.members) - len(before.members)
    return tuple(range(application.member, application.member + grown + 1))


def _run_kind(system, trace, fp_outputs):
    if not any(a.rule.group == 'fixpoint' for a in trace):
        return 'TameRun'
    for member in system.members:
        for ineq in member.antecedent:
            if (has_binders(ineq.lhs) or has_binders(ineq.rhs)) and ineq not in fp_outputs:
                return 'Mixed'
    return 'ProperRun'


def replay(trace, mode=Mode.AUTO):
    """Re-apply `trace` from the empty system."""
    system = QuasiSystem(mode=Mode(mode))
    for application in trace:
        system = apply_step(system, application)
    return system


def run(ineq, mode='auto', max_steps=500):
    return Engine(mode, max_steps).run(ineq)
