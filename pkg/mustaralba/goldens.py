"""
Golden cases: inequalities with known classifications, preprocessing
results and pure outputs.

Pure systems are compared after canonical renaming of nominals and
co-nominals, so fresh-name choices never matter.
"""
import time
from dataclasses import dataclass

from mustaralba.classifier import DependencyOrder, Level, OrderType, classify
from mustaralba.engine import Engine, preprocess, replay
from mustaralba.parser import parse_inequality
from mustaralba.system import QuasiInequality, canonical_system

RESTRICTED = '<>(mu X.(<>X | []([]<>q | p))) <= nu Y.(([]((q -> F) & (p -> F)) -> F) & []Y)'
TAME = '<>([]F | p) & []q <= mu Y.(<>(p & q) & []Y)'
INDUCTIVE = '(mu X.(p | <>X)) & (mu X.(q | <>X)) <= mu X.((p & (mu Y.(q | <>Y))) | <>X)'
FREGE = '(p -> (q -> r)) <= ((p -> q) -> (p -> r))'


@dataclass(frozen=True)
class GoldenCase:
    """One expectation.

    `kind` is ``'classify'``, ``'preprocess'`` or ``'run'``. Classification
    cases give the level and the witnesses as ``(epsilon, omega)`` pairs,
    `epsilon` a dict of order values and `omega` a list of pairs; with
    `inclusion` the level is a lower bound and the listed witnesses only
    need to occur among the candidates. Run cases give the status and, on success, the pure
    members as ``(antecedent, consequent)`` texts.
    """
    name: str
    kind: str
    text: str
    level: str = None
    witnesses: tuple = ()
    inclusion: bool = False
    mode: str = 'auto'
    status: str = None
    members: tuple = ()
    parts: tuple = ()


@dataclass
class GoldenOutcome:
    case: GoldenCase
    passed: bool
    detail: str = ''
    seconds: float = 0.0

    def to_json(self):
        return {'name': self.case.name, 'kind': self.case.kind, 'passed': self.passed,
                'detail': self.detail, 'seconds': round(self.seconds, 4)}


CLASSIFY_CASES = (
    GoldenCase('restricted-example', 'classify', RESTRICTED, level='RestrictedInductive',
               witnesses=(({'p': '1', 'q': '∂'}, [('q', 'p')]),)),
    GoldenCase('tame-example', 'classify', TAME, level='TameInductive',
               witnesses=(({'p': '1', 'q': '1'}, []),)),
    GoldenCase('inductive-example', 'classify', INDUCTIVE, level='Inductive',
               witnesses=(({'p': '1', 'q': '1'}, []),
                          ({'p': '1', 'q': '∂'}, [('p', 'q')]),
                          ({'p': '∂', 'q': '1'}, [('q', 'p')]))),
    GoldenCase('sahlqvist-mu', 'classify', '<>p <= [](mu X.(p | <>X))', level='TameInductive',
               witnesses=(({'p': '1'}, []),)),
    GoldenCase('density', 'classify', 'p <= []<>p', level='TameInductive',
               witnesses=(({'p': '1'}, []), ({'p': '∂'}, []))),
    GoldenCase('identity', 'classify', 'p <= p', level='TameInductive',
               witnesses=(({'p': '1'}, []), ({'p': '∂'}, []))),
    GoldenCase('frege', 'classify', FREGE, level='Inductive', inclusion=True,
               witnesses=(({'p': '1', 'q': '1', 'r': '1'}, [('p', 'q'), ('p', 'r'), ('q', 'r')]),)),
)

RUN_CASES = (
    GoldenCase('tame-preprocessing', 'preprocess', TAME,
               parts=('<>[]F & []q <= mu Y.(<>(F & q) & []Y)', '<>p & []q <= mu Y.(<>(p & q) & []Y)')),
    GoldenCase('restricted-proper', 'run', RESTRICTED, mode='proper', status='Success',
               members=((('$i <= <>$j', '$j <= mu* X.(<>X | $k)', 'nu* Y.(($l -> F) & []Y) <= #m',
                          '<b>$l <= ((<b>$k -< []<>(<b>$l -> F)) -> F)'), '$i <= #m'),)),
    GoldenCase('tame-second-part', 'run', '<>p & []q <= mu Y.(<>(p & q) & []Y)', mode='tame', status='Success',
               members=((('$i <= <>$j', 'mu* Y.(<>($j & <b>$i) & []Y) <= #m'), '$i <= #m'),)),
    GoldenCase('tame-example-auto', 'run', TAME, mode='auto', status='Success'),
    GoldenCase('inductive-tame', 'run', INDUCTIVE, mode='tame', status='Stuck'),
)

SUITES = {'classify': CLASSIFY_CASES, 'runs': RUN_CASES, 'all': CLASSIFY_CASES + RUN_CASES}


def golden_suite(name='all'):
    try:
        return list(SUITES[name])
    except KeyError:
        raise ValueError('Unknown golden suite:%s' % name) from None


_LEVELS = {level.label: level for level in Level}


def _witness_key(epsilon, omega):
    if isinstance(epsilon, dict):
        epsilon = OrderType.from_mapping(epsilon)
    if not isinstance(omega, DependencyOrder):
        omega = DependencyOrder(frozenset(tuple(pair) for pair in omega))
    return epsilon, omega.pairs


def _check_classify(case):
    classification = classify(parse_inequality(case.text))
    wanted = _LEVELS[case.level]
    too_low = classification.level < wanted if case.inclusion else classification.level != wanted
    if too_low:
        return False, 'level %s, expected %s' % (classification.level.label, case.level)
    expected = {_witness_key(eps, omega) for eps, omega in case.witnesses}
    if case.inclusion:
        found = {_witness_key(w.epsilon, w.omega) for w in classification.candidates}
        missing = expected - found
        if missing:
            return False, 'missing witnesses %s' % sorted(str(eps) for eps, _ in missing)
        return True, ''
    found = {_witness_key(w.epsilon, w.omega) for w in classification.witnesses}
    if found != expected:
        return False, 'witnesses %s' % sorted('%s %s' % (eps, sorted(omega)) for eps, omega in found)
    return True, ''


def _check_preprocess(case):
    parts = preprocess(parse_inequality(case.text))
    expected = tuple(parse_inequality(text) for text in case.parts)
    if tuple(parts) != expected:
        return False, 'preprocessing gave %s' % ', '.join(str(p) for p in parts)
    return True, ''


def _expected_members(case):
    return tuple(QuasiInequality(tuple(parse_inequality(text) for text in antecedent), parse_inequality(consequent))
                 for antecedent, consequent in case.members)


def _check_run(case):
    result = Engine(case.mode).run(parse_inequality(case.text))
    if replay(result.trace, case.mode) != result.system:
        return False, 'trace does not replay'
    if result.status != case.status:
        return False, 'status %s, expected %s' % (result.status, case.status)
    if case.members:
        found = canonical_system(result.system)
        expected = canonical_system(type(result.system)(_expected_members(case)))
        if found != expected:
            return False, 'pure system differs:\n%s' % result.system.to_text()
    return True, ''


_CHECKS = {'classify': _check_classify, 'preprocess': _check_preprocess, 'run': _check_run}


def check_golden(case):
    """Evaluate one golden case, timing it."""
    start = time.perf_counter()
    passed, detail = _CHECKS[case.kind](case)
    return GoldenOutcome(case, passed, detail, time.perf_counter() - start)


def check_suite(name='all'):
    return [check_golden(case) for case in golden_suite(name)]
