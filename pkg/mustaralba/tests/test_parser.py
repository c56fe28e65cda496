import pytest
from hypothesis import given, settings

from mustaralba.parser import (FormulaSyntaxError, PlaceholderError, parse_formula, parse_inequality,
                               print_formula, print_inequality)
from mustaralba.syntax import (Bot, Top, PropVar, FixVar, PlaceVar, Nominal, CoNominal, Box, Dia, BlackDia,
                               And, Or, Implies, CoImplies, Mu, MuStar, NuStar, Inequality)
from mustaralba.tests.strategies import formulas

p, q, r = PropVar('p'), PropVar('q'), PropVar('r')


@pytest.mark.parametrize('text, expected', [
    ('p&q|r', '(p & q) | r'),
    ('p | q & r', 'p | (q & r)'),
    ('p -> q -> r', 'p -> (q -> r)'),
    ('(p -> q) -> r', '(p -> q) -> r'),
    ('[] <> p', '[]<>p'),
    ('<>p & q', '<>p & q'),
    ('mu X.p | <>X', 'mu X.(p | <>X)'),
    ('<>(mu X.X)', '<>(mu X.X)'),
    ('mu* X.X', 'mu* X.X'),
    ('<b>$j -< #m', '<b>$j -< #m'),
    ('[b]T -> F', '[b]T -> F'),
])
def test_precedence_and_printing(text, expected):
    assert print_formula(parse_formula(text)) == expected


def test_atoms():
    assert parse_formula('T') == Top()
    assert parse_formula('F') == Bot()
    assert parse_formula('foo') == PropVar('foo')
    assert parse_formula("Y'1") == FixVar("Y'1")
    assert parse_formula('$j1 | #m | ?x2') == Or(Or(Nominal('j1'), CoNominal('m')), PlaceVar('x2'))


def test_structure():
    assert parse_formula('<>p & q') == And(Dia(p), q)
    assert parse_formula('p -< q -< r') == CoImplies(p, CoImplies(q, r))
    assert parse_formula('nu* Y.([]Y & p)') == NuStar('Y', And(Box(FixVar('Y')), p))
    assert parse_formula('<b>(mu* X.X)') == BlackDia(MuStar('X', FixVar('X')))
    assert parse_formula('p -> mu X.(q | X)') == Implies(p, Mu('X', Or(q, FixVar('X'))))


def test_binder_is_not_a_unary_operand():
    with pytest.raises(FormulaSyntaxError):
        parse_formula('<>mu X.X')


def test_variable_named_like_a_binder_prefix():
    assert parse_formula('mux') == PropVar('mux')


def test_inequality():
    ineq = parse_inequality('<>p <= []q')
    assert ineq == Inequality(Dia(p), Box(q))
    assert print_inequality(ineq) == '<>p <= []q'
    assert str(ineq) == '<>p <= []q'


@pytest.mark.parametrize('text', ['p <= ', 'p & <= q', '<= p', 'p <= q <= r', 'p <= q)'])
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_inequality(text)
    assert info.value.position is not None
    assert 0 <= info.value.position <= len(text)


def test_placeholders_are_rejected_in_inequalities():
    with pytest.raises(PlaceholderError):
        parse_inequality('?x <= p')
    assert parse_formula('?x1 | p') == Or(PlaceVar('x1'), p)


def test_plus_language_can_be_excluded():
    with pytest.raises(FormulaSyntaxError):
        parse_inequality('$j <= <>p', allow_plus=False)
    assert parse_inequality('p <= <>p', allow_plus=False).rhs == Dia(p)


@settings(max_examples=100, deadline=None)
@given(formulas(('p', 'q', 'r')))
def test_printed_formulas_parse_back(f):
    assert parse_formula(print_formula(f)) == f
