import numpy as np
import pytest
from numpy.testing import assert_array_equal

from mustaralba import semantics
from mustaralba.parser import parse_formula, parse_inequality
from mustaralba.semantics import (Assignment, FixpointMismatch, UnboundVariable, assignment_grid,
                                  check_inequality, check_member, check_quasi_system, evaluate, evaluate_many,
                                  grid_size, term_function)
from mustaralba.syntax import PropVar, FixVar, Nominal, CoNominal, Bot, And, Or, Implies, Mu, Inequality
from mustaralba.system import QuasiInequality, QuasiSystem


def member(antecedent, consequent):
    return QuasiInequality(tuple(parse_inequality(t) for t in antecedent), parse_inequality(consequent))


def test_evaluate(diamond):
    assert evaluate(diamond, parse_formula('p & q'), Assignment(prop={'p': 'a', 'q': 'b'})) == '0'
    assert evaluate(diamond, parse_formula('p | q'), Assignment(prop={'p': 'a', 'q': 'b'})) == '1'
    assert evaluate(diamond, parse_formula('p -> q'), Assignment(prop={'p': 'a', 'q': 'b'})) == 'b'
    assert evaluate(diamond, parse_formula('$j -< q'), Assignment(nom={'j': 'a'}, prop={'q': 'b'})) == 'a'


@pytest.mark.parametrize('text, value, expected', [
    ('mu X.(p | <>X)', 'h', 'h'),
    ('mu X.(p | <>X)', '1', '1'),
    ('nu X.(p & []X)', 'h', 'h'),
    ('mu X.<>X', '1', '0'),
    ('nu X.[]X', '0', '1'),
])
def test_fixed_points(chain3, text, value, expected):
    assert evaluate(chain3, parse_formula(text), Assignment(prop={'p': value})) == expected


def test_starred_binders_evaluate_like_plain_ones(chain3):
    v = Assignment(prop={'p': 'h'})
    assert evaluate(chain3, parse_formula('mu* X.(p | <>X)'), v) == evaluate(chain3, parse_formula('mu X.(p | <>X)'), v)


def test_kleene_iteration_must_stabilise(chain2):
    f = Mu('X', Implies(FixVar('X'), Bot()))
    with pytest.raises(FixpointMismatch):
        evaluate(chain2, f, Assignment())


def spurious_fixpoint():
    """Kleene iteration stops at y on chain4 with p = y; the least pre-fixed point is x."""
    X, p = FixVar('X'), PropVar('p')
    return Mu('X', Or(And(Implies(X, Bot()), p), And(X, p)))


def test_vectorized_binders_check_extremal_fixpoints(chain4):
    f = spurious_fixpoint()
    with pytest.raises(FixpointMismatch):
        evaluate(chain4, f, Assignment(prop={'p': 'y'}))
    assert evaluate(chain4, f, Assignment(prop={'p': 'y'}), check_fixpoints=False) == 'y'

    env = {PropVar('p'): np.array([chain4.element('y')])}
    assert_array_equal(evaluate_many(chain4, f, env, 1, check_fixpoints=False), [chain4.element('y')])
    with pytest.raises(FixpointMismatch) as info:
        evaluate_many(chain4, f, env, 1, check_fixpoints=True)
    assert 'gives y' in str(info.value)

    env = {PropVar('p'): np.array([chain4.element('0'), chain4.element('1')])}
    assert_array_equal(evaluate_many(chain4, parse_formula('mu X.(p | <>X)'), env, 2, check_fixpoints=True),
                       [chain4.element('0'), chain4.element('1')])


def test_fixpoint_check_switch(monkeypatch, chain4):
    ineq = Inequality(spurious_fixpoint(), PropVar('p'))
    assert check_inequality(chain4, ineq).valid
    monkeypatch.setattr(semantics, 'CHECK_FIXPOINTS', True)
    with pytest.raises(FixpointMismatch):
        check_inequality(chain4, ineq)


def test_unbound_variable(diamond):
    with pytest.raises(UnboundVariable):
        evaluate(diamond, parse_formula('p'), Assignment())


def test_nominals_denote_join_irreducibles(diamond):
    with pytest.raises(ValueError):
        evaluate(diamond, parse_formula('$j'), Assignment(nom={'j': '1'}))
    with pytest.raises(ValueError):
        evaluate(diamond, parse_formula('#m'), Assignment(conom={'m': '0'}))


def test_term_function(chain3):
    table = term_function(chain3, parse_formula('p | q'), [PropVar('p'), PropVar('q')])
    assert table.shape == (3, 3)
    assert_array_equal(table, chain3.join_table)


def test_grids(diamond):
    names = [PropVar('p'), Nominal('j'), CoNominal('m')]
    assert grid_size(diamond, names) == 16
    env, size = assignment_grid(diamond, names)
    assert size == 16
    assert set(diamond.names(env[Nominal('j')])) == {'a', 'b'}
    assert assignment_grid(diamond, []) == ({}, 1)


def test_excluded_middle(diamond, chain3):
    ineq = parse_inequality('T <= p | (p -> F)')
    assert check_inequality(diamond, ineq).valid
    report = check_inequality(chain3, ineq)
    assert not report
    assert report.countermodel.prop == {'p': 'h'}
    assert report.to_json()['countermodel']['prop'] == {'p': 'h'}
    assert report.algebra == 'chain3'


def test_density_fails_on_a_chain(chain3):
    assert not check_inequality(chain3, parse_inequality('p <= []<>p'))


def test_members(algebras, chain2):
    transitive = member(['$i <= p', 'p <= #m'], '$i <= #m')
    assert all(check_member(A, transitive).valid for A in algebras)
    bare = member([], '$i <= #m')
    report = check_member(chain2, bare)
    assert not report.valid
    assert report.countermodel.nom == {'i': '1'}
    assert report.countermodel.conom == {'m': '0'}


def test_quasi_system_reports_the_failing_member(chain2):
    system = QuasiSystem((member(['$i <= #m'], '$i <= #m'), member([], '$i <= #m')))
    report = check_quasi_system(chain2, system)
    assert report.member == 1
    assert check_quasi_system(chain2, system.members[0]).valid
    assert check_quasi_system(chain2, [system.members[0]]).valid
