import pytest

from mustaralba import rules
from mustaralba.parser import parse_formula, parse_inequality
from mustaralba.rules import (NotApplicable, ShapeMismatch, SideConditionViolated, ackermann_partition,
                              applicable, apply_ackermann, apply_adjunction, apply_approximation,
                              apply_fp_approximation, apply_residuation, apply_step, first_approximation,
                              fp_certificate, syntactic_shape)
from mustaralba.syntax import Nominal, CoNominal
from mustaralba.system import Mode, QuasiInequality, QuasiSystem, Rule, RuleApplication, Side


def system_of(*texts, mode=Mode.AUTO):
    """One member with the given antecedent and consequent ``$i <= #m``."""
    member = QuasiInequality(tuple(parse_inequality(t) for t in texts), parse_inequality('$i <= #m'))
    return QuasiSystem((member,), mode=mode)


def antecedent(system, member=0):
    return tuple(str(ineq) for ineq in system.members[member].antecedent)


def test_first_approximation():
    system = first_approximation(parse_inequality('<>p <= []q'))
    member, = system.members
    assert antecedent(system) == ('$j1 <= <>p', '[]q <= #n2')
    assert str(member.consequent) == '$j1 <= #n2'
    assert system.fresh_counter == 2


def test_first_approximation_appends():
    system = first_approximation(parse_inequality('p <= q'))
    system = first_approximation(parse_inequality('q <= p'), system, origin=1)
    assert len(system.members) == 2
    assert system.members[1].origin == 1
    assert antecedent(system, 1) == ('$j3 <= q', 'p <= #n4')


@pytest.mark.parametrize('rule, isolate, text, expected', [
    (Rule.MINUS_LR, None, 'p -< q <= r', 'p <= q | r'),
    (Rule.IMP_RR, None, 'p <= q -> r', 'p & q <= r'),
    (Rule.AND_LR, Side.LEFT, 'p & q <= r', 'p <= q -> r'),
    (Rule.AND_LR, Side.RIGHT, 'p & q <= r', 'q <= p -> r'),
    (Rule.OR_RR, Side.RIGHT, 'p <= q | r', 'p -< q <= r'),
    (Rule.OR_RR, Side.LEFT, 'p <= q | r', 'p -< r <= q'),
])
def test_residuation(rule, isolate, text, expected):
    system = apply_residuation(system_of(text), 0, 0, rule, isolate)
    assert antecedent(system) == (expected,)


@pytest.mark.parametrize('rule, text, expected', [
    (Rule.OR_LA, 'p | q <= r', ('p <= r', 'q <= r')),
    (Rule.AND_RA, 'p <= q & r', ('p <= q', 'p <= r')),
    (Rule.DIA_LA, '<>p <= q', ('p <= [b]q',)),
    (Rule.BOX_RA, 'p <= []q', ('<b>p <= q',)),
])
def test_adjunction(rule, text, expected):
    system = apply_adjunction(system_of('$i <= p', text), 0, 1, rule)
    assert antecedent(system) == ('$i <= p',) + expected


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        apply_adjunction(system_of('p <= q'), 0, 0, Rule.DIA_LA)
    with pytest.raises(ShapeMismatch):
        apply_residuation(system_of('p <= q'), 0, 0, Rule.BOX_RA)


def test_missing_target():
    with pytest.raises(NotApplicable):
        apply_adjunction(system_of('p | q <= r'), 0, 3, Rule.OR_LA)
    with pytest.raises(NotApplicable):
        apply_adjunction(system_of('p | q <= r'), 2, 0, Rule.OR_LA)


def test_diamond_approximation():
    system = apply_approximation(system_of('$i <= <>p'), 0, 0, Rule.DIA_APPR)
    member, = system.members
    assert antecedent(system) == ('$i <= <>$j1', '$j1 <= p')
    assert member.exists_vars == (Nominal('j1'),)


def test_box_approximation():
    system = apply_approximation(system_of('[]p <= #m'), 0, 0, Rule.BOX_APPR)
    assert antecedent(system) == ('[]#n1 <= #m', 'p <= #n1')


def test_implication_approximation():
    system = apply_approximation(system_of('p -> q <= #m'), 0, 0, Rule.IMP_APPR)
    assert antecedent(system) == ('$j1 -> #n2 <= #m', '$j1 <= p', 'q <= #n2')
    assert system.members[0].exists_vars == (Nominal('j1'), CoNominal('n2'))


def test_coimplication_approximation():
    system = apply_approximation(system_of('$i <= p -< q'), 0, 0, Rule.MINUS_APPR)
    assert antecedent(system) == ('$i <= $j1 -< #n2', '$j1 <= p', 'q <= #n2')


def test_fresh_names_avoid_existing_ones():
    system = apply_approximation(system_of('$j1 <= <>p'), 0, 0, Rule.DIA_APPR)
    assert antecedent(system) == ('$j1 <= <>$j2', '$j2 <= p')


def test_mu_approximation():
    system = system_of('$i <= mu* X.(<>X | []([]<>q | p))', mode=Mode.PROPER)
    certificate = fp_certificate(system.members[0].antecedent[0])
    assert certificate is not None
    after = apply_fp_approximation(system, 0, 0, certificate)
    member, = after.members
    assert antecedent(after) == ('$i <= mu* X.(<>X | $j1)', '$j1 <= []([]<>q | p)')
    assert member.exists_vars == (Nominal('j1'),)


def test_nu_approximation_with_a_dual_placeholder():
    system = system_of('nu* Y.(([]((q -> F) & (p -> F)) -> F) & []Y) <= #m', mode=Mode.PROPER)
    after = apply_fp_approximation(system, 0, 0)
    assert antecedent(after) == ('nu* Y.(($j1 -> F) & []Y) <= #m', '$j1 <= []((q -> F) & (p -> F))')


def test_fixpoint_approximation_splits_members():
    system = system_of('$i <= mu* X.(<>X | []p | []q)', mode=Mode.PROPER)
    after = apply_fp_approximation(system, 0, 0)
    assert len(after.members) == 2
    assert antecedent(after, 0) == ('$i <= mu* X.((<>X | $j1) | F)', '$j1 <= []p')
    assert antecedent(after, 1) == ('$i <= mu* X.((<>X | F) | $j2)', '$j2 <= []q')


def test_fixpoint_approximation_is_not_tame():
    system = system_of('$i <= mu* X.(<>X | []p)', mode=Mode.TAME)
    with pytest.raises(NotApplicable):
        apply_fp_approximation(system, 0, 0)


@pytest.mark.parametrize('text', ['$i <= mu* X.(<>X & p)', '$i <= mu* X.<>X', '$i <= <>p'])
def test_no_certificate(text):
    assert fp_certificate(parse_inequality(text)) is None


@pytest.mark.parametrize('text, closed, open_', [
    ('$j', True, False),
    ('#m', False, True),
    ('p', True, True),
    ('<b>$j', True, False),
    ('[b]#m', False, True),
    ('$j -> #m', False, True),
    ('#m -< $j', False, True),
    ('$j -< #m', True, False),
    ('mu X.<>$j', True, False),
    ('nu X.[]#m', False, True),
    ('<b>#m', False, False),
])
def test_syntactic_shape(text, closed, open_):
    shape = syntactic_shape(parse_formula(text))
    assert (shape.closed, shape.open) == (closed, open_)


def test_right_ackermann():
    system = system_of('<>$j <= p', '[]p <= #n')
    after = apply_ackermann(system, 0, 'p', Side.RIGHT)
    assert antecedent(after) == ('[]<>$j <= #n',)


def test_right_ackermann_joins_the_bounds():
    system = system_of('$j <= p', '$k <= p', '[]p <= #n')
    after = apply_ackermann(system, 0, 'p', Side.RIGHT)
    assert antecedent(after) == ('[]($j | $k) <= #n',)


def test_left_ackermann():
    system = system_of('p <= []#n', '$j <= <>p')
    after = apply_ackermann(system, 0, 'p', Side.LEFT)
    assert antecedent(after) == ('$j <= <>[]#n',)


def test_ackermann_side_conditions():
    member = system_of('$j <= p', '(p -> F) <= #n').members[0]
    with pytest.raises(SideConditionViolated) as info:
        ackermann_partition(member, 'p', Side.RIGHT)
    assert info.value.condition == 'beta_positive'
    member = system_of('#n <= p', '[]p <= #m').members[0]
    with pytest.raises(SideConditionViolated) as info:
        ackermann_partition(member, 'p', Side.RIGHT)
    assert info.value.condition == 'alpha_closed'


def test_ackermann_needs_the_variable():
    with pytest.raises(NotApplicable):
        apply_ackermann(system_of('$j <= q'), 0, 'p', Side.RIGHT)


def test_side_conditions_are_looked_up_at_call_time(monkeypatch):
    monkeypatch.setattr(rules, 'check_side_conditions', lambda *args: None)
    member = system_of('$j <= p', '(p -> F) <= #n').members[0]
    assert ackermann_partition(member, 'p', Side.RIGHT) == ([0], [1])


def test_applicable():
    system = first_approximation(parse_inequality('<>p <= []q'))
    found = {(a.rule, a.index) for a in applicable(system)}
    assert (Rule.DIA_APPR, 0) in found
    assert (Rule.BOX_APPR, 1) in found
    assert (Rule.MU_AR, 0) not in found


def test_applicable_lists_fixpoint_rules_outside_tame_runs():
    system = system_of('$i <= mu* X.(<>X | []p)', mode=Mode.PROPER)
    assert Rule.MU_AR in {a.rule for a in applicable(system)}
    tame = system_of('$i <= mu* X.(<>X | []p)', mode=Mode.TAME)
    assert Rule.MU_AR not in {a.rule for a in applicable(tame)}


def test_apply_step_dispatch():
    system = apply_step(QuasiSystem(), RuleApplication(Rule.FA, inequality=parse_inequality('<>p <= q')))
    system = apply_step(system, RuleApplication(Rule.DIA_APPR, 0, 0))
    assert antecedent(system) == ('$j1 <= <>$j3', '$j3 <= p', 'q <= #n2')
