import pytest
from hypothesis import given, settings

from mustaralba import engine
from mustaralba.classifier import OrderType, witnesses_for
from mustaralba.engine import (Engine, Guide, InvariantError, LanguageError, STUCK, SUCCESS, choose_rule,
                               distribute, eliminate_monotone, preprocess, replay, run)
from mustaralba.goldens import INDUCTIVE, RESTRICTED, TAME
from mustaralba.parser import parse_inequality
from mustaralba.rules import NotApplicable
from mustaralba.syntax import Nominal, Polarity
from mustaralba.system import Mode, QuasiSystem, Rule
from mustaralba.tests.strategies import inequalities


def test_distribute():
    assert str(distribute(parse_inequality('<>(p | q) <= r'))) == '<>p | <>q <= r'
    assert str(distribute(parse_inequality('r <= [](p & q)'))) == 'r <= []p & []q'
    assert str(distribute(parse_inequality('(p | q) & r <= s'))) == '(p & r) | (q & r) <= s'


def test_distribute_leaves_residuals_alone():
    for text in ['(p | q) -< r <= s', 's <= p -> (q & r)', '[](p | q) <= r', 'r <= <>(p & q)']:
        ineq = parse_inequality(text)
        assert distribute(ineq) == ineq


def test_eliminate_monotone():
    ineq, applied = eliminate_monotone(parse_inequality('p <= q'))
    assert str(ineq) == 'T <= F'
    assert applied == [('Top', 'p'), ('Bot', 'q')]
    ineq, applied = eliminate_monotone(parse_inequality('p <= <>p'))
    assert applied == []


def test_preprocess():
    trace = []
    parts = preprocess(parse_inequality(TAME), trace)
    assert [str(part) for part in parts] == ['<>[]F & []q <= mu Y.(<>(F & q) & []Y)',
                                             '<>p & []q <= mu Y.(<>(p & q) & []Y)']
    assert [step.rule for step in trace] == ['Distribute', 'OrLA', 'Bot(p)']
    assert trace[1].to_json()['after'] == ['<>[]F & []q <= mu Y.(<>(p & q) & []Y)',
                                           '<>p & []q <= mu Y.(<>(p & q) & []Y)']


def test_preprocess_drops_duplicates():
    parts = preprocess(parse_inequality('p <= <>p & <>p'))
    assert [str(part) for part in parts] == ['p <= <>p']


def test_identity():
    result = run(parse_inequality('p <= p'), mode='tame')
    assert result.success
    assert result.system.to_text() == '[$j1 <= #n2 => $j1 <= #n2]'
    assert result.run_kind == 'TameRun'


def test_density():
    result = run(parse_inequality('p <= []<>p'), mode='tame')
    assert result.status == SUCCESS
    member, = result.system.members
    assert tuple(str(i) for i in member.antecedent) == ('[]<>$j1 <= #n2',)


def test_sahlqvist_with_a_fixed_point():
    result = run(parse_inequality('<>p <= [](mu X.(p | <>X))'), mode='tame')
    assert result.status == SUCCESS
    assert result.run_kind == 'TameRun'
    member, = result.system.members
    assert tuple(str(i) for i in member.antecedent) == ('$j1 <= <>$j3', '[](mu* X.($j3 | <>X)) <= #n2')
    assert member.exists_vars == (Nominal('j3'),)
    assert Rule.DIA_APPR in [step.rule for step in result.trace]


def test_proper_run():
    result = run(parse_inequality(RESTRICTED), mode='proper')
    assert result.success
    assert result.run_kind == 'ProperRun'
    assert {Rule.MU_AR, Rule.NU_AR} <= {step.rule for step in result.trace}
    assert result.system.is_pure()


def test_tame_run_gets_stuck_on_an_inductive_inequality():
    result = run(parse_inequality(INDUCTIVE), mode='tame')
    assert result.status == STUCK
    assert result.pure_system is None
    assert result.attempts
    assert all(a.status == STUCK and a.reason for a in result.attempts)
    assert all(a.mode is Mode.TAME for a in result.attempts)
    assert replay(result.trace, 'tame') == result.system


def test_auto_tries_tame_first():
    result = run(parse_inequality(TAME))
    assert result.success
    assert result.mode is Mode.AUTO
    assert result.attempts[0].mode is Mode.TAME
    assert len(result.preprocessed) == 2
    assert {member.origin for member in result.system.members} == {0, 1}


def test_step_bound():
    result = Engine('tame', max_steps=0).run(parse_inequality('p <= []<>p'))
    assert result.status == STUCK
    assert 'No progress' in result.attempts[-1].reason


def test_pia_meets_are_displayed_not_split():
    ineq = parse_inequality('[](p & q) <= <>(p & q)')
    epsilon = OrderType.from_mapping({'p': '1', 'q': '1'})
    guide = Guide(witnesses_for(ineq, epsilon).decompositions)
    target = parse_inequality('<b>$i <= p & q')
    assert guide.region(target.rhs, Polarity.POSITIVE) == 'p1'
    assert guide.region(parse_inequality('[](p & q) <= r').lhs, Polarity.POSITIVE) == 'p1'

    shape = choose_rule(target, epsilon, Mode.TAME)
    guided = choose_rule(target, epsilon, Mode.TAME, guide)
    assert shape[1] is guided[1] is Rule.AND_RA
    assert shape[0] < guided[0]


def test_inner_skeleton_binders_need_a_proper_run():
    ineq = parse_inequality('mu X.(p | <>X) <= []p')
    epsilon = OrderType.from_mapping({'p': '1'})
    guide = Guide(witnesses_for(ineq, epsilon).decompositions)
    target = parse_inequality('$i <= mu* X.(p | <>X)')
    assert guide.region(target.rhs, Polarity.POSITIVE) == 'p2'

    assert choose_rule(target, epsilon, Mode.TAME) is None
    with pytest.raises(NotApplicable) as info:
        choose_rule(target, epsilon, Mode.TAME, guide)
    assert 'inner skeleton' in str(info.value)
    _, rule, options = choose_rule(target, epsilon, Mode.PROPER, guide)
    assert rule is Rule.MU_AR
    assert options['certificate'].placeholders


def test_outer_skeleton_is_approximated():
    ineq = parse_inequality('<>p <= [](mu X.(p | <>X))')
    epsilon = OrderType.from_mapping({'p': '1'})
    guide = Guide(witnesses_for(ineq, epsilon).decompositions)
    assert len(guide) >= 1
    _, rule, _ = choose_rule(parse_inequality('$i <= <>p'), epsilon, Mode.TAME, guide)
    assert rule is Rule.DIA_APPR


@pytest.mark.parametrize('text', ['mu* X.X <= p', '$j <= <>p'])
def test_runs_start_from_the_plain_language(text):
    with pytest.raises(LanguageError):
        run(parse_inequality(text))


def test_unknown_mode():
    with pytest.raises(ValueError) as info:
        Engine('sloppy')
    assert 'sloppy' in str(info.value)
    assert repr(Engine('proper', 10)) == "Engine(mode='proper', max_steps=10)"


def test_replay_mismatch_is_an_internal_error(monkeypatch):
    monkeypatch.setattr(engine, 'replay', lambda trace, mode: QuasiSystem())
    with pytest.raises(InvariantError):
        run(parse_inequality('p <= p'))


def test_json():
    result = run(parse_inequality('p <= p'), mode='tame')
    out = result.to_json()
    assert out['input'] == 'p <= p'
    assert out['status'] == 'Success'
    assert out['pure_system']['members'][0]['consequent'] == '$j1 <= #n2'
    assert [step['rule'] for step in out['steps']][0] == 'FA'
    assert 'steps' not in result.to_json(trace=False)


@settings(max_examples=30, deadline=None)
@given(inequalities(max_leaves=4))
def test_runs_replay_and_succeed_with_pure_systems(ineq):
    result = run(ineq, mode='tame', max_steps=100)
    assert replay(result.trace, 'tame') == result.system
    if result.success:
        assert result.system.is_pure()
