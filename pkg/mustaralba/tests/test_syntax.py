import pytest
from hypothesis import given, settings

from mustaralba.parser import parse_formula, parse_inequality
from mustaralba.syntax import (Polarity, Bot, Top, PropVar, FixVar, PlaceVar, Nominal, CoNominal,
                               Box, Dia, And, Or, Implies, Mu, MuStar, Nu, NuStar, Inequality, LanguageTag,
                               MixedBinders, PolarityError, atoms, big_and, big_or, check_binder_positivity,
                               free_fixvars, from_json, is_constant, is_negative_in, is_positive_in, is_pure,
                               is_sentence, language_of, polarity_of_occurrences, positions, propvars,
                               replace_at, star, substitute, to_json, unstar)
from mustaralba.tests.strategies import inequalities

p, q, r = PropVar('p'), PropVar('q'), PropVar('r')


def test_polarity_of_occurrences():
    f = parse_formula('(p -> q) -< (r & p)')
    assert polarity_of_occurrences(f, 'p') == [Polarity.NEGATIVE, Polarity.NEGATIVE]
    assert polarity_of_occurrences(f, 'q') == [Polarity.POSITIVE]
    assert polarity_of_occurrences(f, 'r') == [Polarity.NEGATIVE]


def test_positive_and_negative():
    f = parse_formula('[](q -> <>p)')
    assert is_positive_in(f, 'p')
    assert is_negative_in(f, 'q')
    assert not is_positive_in(f, 'q')
    # vacuous
    assert is_positive_in(f, 'r') and is_negative_in(f, 'r')


def test_fixvar_occurrences_stop_at_rebinding():
    f = Mu('X', Or(FixVar('X'), Mu('X', Implies(FixVar('X'), Bot()))))
    assert polarity_of_occurrences(f.body, FixVar('X')) == [Polarity.POSITIVE]


def test_binder_positivity():
    with pytest.raises(PolarityError):
        check_binder_positivity(Mu('X', Implies(FixVar('X'), Bot())))
    with pytest.raises(PolarityError):
        parse_formula('nu Y.(p -< Y)')
    f = Mu('X', Implies(Implies(FixVar('X'), Bot()), Bot()))
    assert check_binder_positivity(f) is f


def test_star_and_unstar():
    f = parse_formula('(mu X.(p | <>X)) & (nu Y.[]Y)')
    starred = star(f)
    assert starred == And(MuStar('X', Or(p, Dia(FixVar('X')))), NuStar('Y', Box(FixVar('Y'))))
    assert unstar(starred) == f


@pytest.mark.parametrize('text, language', [
    ('p <= []p', LanguageTag.L),
    ('$j <= <>p', LanguageTag.LPLUS),
    ('<b>p <= q', LanguageTag.LPLUS),
    ('mu X.(p | <>X) <= q', LanguageTag.L1),
    ('mu X.(p | <>X) <= #m', LanguageTag.L1PLUS),
    ('mu* X.(p | <>X) <= q', LanguageTag.LSTAR),
    ('$i <= mu* X.(<>X | $j)', LanguageTag.LSTARPLUS),
])
def test_language_of(text, language):
    assert language_of(parse_inequality(text)) is language


def test_mixed_binders():
    ineq = Inequality(Mu('X', FixVar('X')), MuStar('Y', FixVar('Y')))
    with pytest.raises(MixedBinders):
        language_of(ineq)
    with pytest.raises(MixedBinders):
        star(ineq)


def test_atoms_sorted_by_sort_then_name():
    ineq = parse_inequality('#m & $j <= q | (p & (mu X.X))')
    assert atoms(ineq) == [p, q, Nominal('j'), CoNominal('m')]
    assert propvars(ineq) == ('p', 'q')


def test_traversal_predicates():
    assert is_sentence(parse_formula('mu X.<>X'))
    assert not is_sentence(parse_formula('<>X'))
    assert free_fixvars(parse_formula('<>X & (mu Y.(Y | Z))')) == {'X', 'Z'}
    assert is_pure(parse_formula('$j -> #m'))
    assert not is_pure(parse_formula('$j -> p'))
    assert is_constant(parse_formula('[]F -> <>T'))
    assert not is_constant(parse_formula('[]$j'))


def test_substitute_is_simultaneous():
    f = parse_formula('p & q')
    assert substitute(f, {p: q, q: p}) == And(q, p)


def test_substitute_avoids_capture():
    f = Mu('X', Or(p, Dia(FixVar('X'))))
    result = substitute(f, {p: FixVar('X')})
    assert result.var != 'X'
    assert result.body == Or(FixVar('X'), Dia(FixVar(result.var)))


def test_substitute_placeholders():
    template = Or(Dia(PlaceVar('x1')), FixVar('X'))
    assert substitute(template, {PlaceVar('x1'): Nominal('j')}) == Or(Dia(Nominal('j')), FixVar('X'))


def test_substitute_skips_bound_fixvar():
    f = Nu('X', Box(FixVar('X')))
    assert substitute(f, {FixVar('X'): Top()}) == f


def test_positions_and_replace_at():
    ineq = parse_inequality('p & q <= <>r')
    found = dict(positions(ineq))
    assert found[(0, 1)] == q
    assert found[(1, 0)] == r
    assert replace_at(ineq, (0, 1), Bot()) == Inequality(And(p, Bot()), Dia(r))


def test_big_operators():
    assert big_or([]) == Bot()
    assert big_and([]) == Top()
    assert big_or([p, q, r]) == Or(p, Or(q, r))
    assert big_and([p]) == p


def test_json_tree():
    f = parse_formula('mu X.($j | <>X)')
    assert to_json(f) == {'op': 'Mu', 'args': ['X', {'op': 'Or', 'args': [
        {'op': 'Nominal', 'args': ['j']}, {'op': 'Dia', 'args': [{'op': 'FixVar', 'args': ['X']}]}]}]}
    with pytest.raises(ValueError):
        from_json({'op': 'Sometimes', 'args': []})


@settings(max_examples=50, deadline=None)
@given(inequalities())
def test_json_tree_restores_inequalities(ineq):
    assert from_json(to_json(ineq)) == ineq
