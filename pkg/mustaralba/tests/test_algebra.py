import numpy as np
import pytest
from numpy.testing import assert_array_equal

from mustaralba.algebra import (BATTERY_FILES, BATTERY_SIZE, AlgebraError, BoxNotMeetPreserving,
                                DiaNotJoinPreserving, FiniteAlgebra, NotALattice, NotDistributive, battery,
                                black_box, black_dia, co_imp, heyting_imp, load_algebra, random_algebra)

IDENTITY3 = {'0': '0', 'a': 'a', 'b': 'b'}


def test_chain3(chain3):
    assert chain3.size == 3
    assert chain3.elements[chain3.bottom] == '0'
    assert chain3.elements[chain3.top] == '1'
    assert chain3.names(chain3.join_irreducibles) == ['h', '1']
    assert chain3.names(chain3.meet_irreducibles) == ['0', 'h']
    assert chain3.covers() == [(0, 1), (1, 2)]


def test_kappa(chain3):
    h, one = chain3.element('h'), chain3.element('1')
    assert chain3.kappa == {h: chain3.element('0'), one: h}


def test_kappa_law(algebras):
    for A in algebras:
        for j, m in A.kappa.items():
            assert_array_equal(A.leq[:, m], ~A.leq[j, :], err_msg=A.name)


def test_derived_operations(diamond, chain3):
    assert heyting_imp(diamond, 'a', 'b') == 'b'
    assert co_imp(diamond, '1', 'a') == 'b'
    assert black_box(chain3, '0') == 'h'
    assert black_dia(chain3, '1') == 'h'


def test_adjunction_and_residuation_laws(algebras):
    for A in algebras:
        r = np.arange(A.size)
        a, b, c = np.ix_(r, r, r)
        assert_array_equal(A.leq[A.dia[:, None], r[None, :]], A.leq[r[:, None], A.black_box[None, :]])
        assert_array_equal(A.leq[A.black_dia[:, None], r[None, :]], A.leq[r[:, None], A.box[None, :]])
        assert_array_equal(A.leq[A.meet_table[a, b], c], A.leq[b, A.imp[a, c]])
        assert_array_equal(A.leq[A.coimp[a, b], c], A.leq[a, A.join_table[b, c]])


def test_battery_is_perfect(algebras):
    assert len(algebras) == BATTERY_SIZE
    assert [A.name for A in algebras[:len(BATTERY_FILES)]] == list(BATTERY_FILES)
    assert all(A.is_perfect() for A in algebras)
    assert all(A.size <= 8 for A in algebras)


def test_battery_is_reproducible():
    first = [A.to_json() for A in battery(max_size=4, size=8)]
    second = [A.to_json() for A in battery(max_size=4, size=8)]
    assert first == second
    assert [A.name for A in battery(max_size=3, size=2)] == ['chain2', 'chain3']


def test_random_algebra():
    rng = np.random.default_rng(7)
    A = random_algebra(rng, max_size=6, name='r')
    assert A.size <= 6
    assert A.name == 'r'
    with pytest.raises(ValueError):
        random_algebra(rng, max_size=1)


def test_summary(chain3, diamond):
    assert chain3.summary()['chain']
    assert not chain3.summary()['boolean']
    assert diamond.summary()['boolean']
    assert diamond.summary()['join_irreducibles'] == 'a b'


def test_not_a_lattice():
    with pytest.raises(NotALattice) as info:
        FiniteAlgebra(['0', 'a', 'b'], [('0', 'a'), ('0', 'b')], IDENTITY3, IDENTITY3)
    assert set(info.value.offending) == {'a', 'b'}


def test_not_antisymmetric():
    with pytest.raises(NotALattice):
        FiniteAlgebra(['0', 'a', 'b'], [('0', 'a'), ('a', 'b'), ('b', 'a')], IDENTITY3, IDENTITY3)


def test_not_distributive():
    elements = ['0', 'a', 'c', 'b', '1']
    identity = {e: e for e in elements}
    pairs = [('0', 'a'), ('a', 'c'), ('c', '1'), ('0', 'b'), ('b', '1')]
    with pytest.raises(NotDistributive) as info:
        FiniteAlgebra(elements, pairs, identity, identity, name='pentagon')
    assert len(info.value.offending) == 3


def test_operators_must_preserve_meets_and_joins():
    with pytest.raises(BoxNotMeetPreserving):
        FiniteAlgebra(['0', '1'], [('0', '1')], {'0': '0', '1': '0'}, {'0': '0', '1': '1'})
    with pytest.raises(DiaNotJoinPreserving):
        FiniteAlgebra(['0', '1'], [('0', '1')], {'0': '0', '1': '1'}, {'0': '1', '1': '1'})


def test_diamond_operators_on_the_four_element_lattice():
    elements = ['0', 'a', 'b', '1']
    pairs = [('0', 'a'), ('0', 'b'), ('a', '1'), ('b', '1')]
    identity = {e: e for e in elements}
    with pytest.raises(DiaNotJoinPreserving) as info:
        FiniteAlgebra(elements, pairs, identity, {'0': '0', 'a': 'a', 'b': 'a', '1': '1'})
    assert info.value.offending


def test_bad_descriptions():
    with pytest.raises(AlgebraError):
        FiniteAlgebra.from_json({'elements': ['0'], 'leq': [], 'box': {'0': '0'}})
    with pytest.raises(AlgebraError) as info:
        FiniteAlgebra(['0', '1'], [('0', '2')], {}, {})
    assert info.value.offending == ('2',)
    with pytest.raises(AlgebraError):
        FiniteAlgebra(['0', '1'], [('0', '1')], {'0': '0'}, {'0': '0', '1': '1'})


def test_load_algebra(algebra_file, chain3):
    data = chain3.to_json()
    del data['name']
    A = load_algebra(algebra_file(data, 'three.json'))
    assert A.name == 'three'
    assert_array_equal(A.leq, chain3.leq)
    assert_array_equal(A.box, chain3.box)
