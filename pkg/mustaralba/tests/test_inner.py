import pytest

from mustaralba.classifier import Order, OrderType
from mustaralba.inner import InnerFormulaCertificate, InnerKind, NotInner, recognize_binder, recognize_inner
from mustaralba.parser import parse_formula
from mustaralba import semantics
from mustaralba.semantics import check_preservation
from mustaralba.syntax import PlaceVar, PropVar, And, Nominal, propvars


def certificate_of(text):
    return recognize_binder(parse_formula(text))


def test_diamond_template():
    certificate = certificate_of('mu* X.(<>X | []([]<>q | p))')
    assert certificate.kind is InnerKind.DIA
    assert certificate.template == parse_formula('<>X | ?x1')
    assert certificate.bindings == {'x1': parse_formula('[]([]<>q | p)')}
    assert certificate.tau['x1'] is Order.ONE
    assert certificate.tau['X'] is Order.ONE
    assert certificate.fixvars == ('X',)


def test_box_template():
    certificate = certificate_of('nu* Y.(([]((q -> F) & (p -> F)) -> F) & []Y)')
    assert certificate.kind is InnerKind.BOX
    assert certificate.template == parse_formula('(?x1 -> ?z1) & []Y')
    assert certificate.params == {'z1': parse_formula('F')}
    assert certificate.tau['x1'] is Order.DUAL


def test_constant_parameter_of_a_guarded_clause():
    certificate = certificate_of('mu* X.(<>X -< []F)')
    assert certificate.template == parse_formula('<>X -< ?z1')
    assert certificate.params == {'z1': parse_formula('[]F')}
    assert certificate.placeholders == ()


def test_dual_clause_flips_the_order_type():
    certificate = certificate_of('mu* X.(T -< ((X | p) -> F))')
    assert certificate.template == parse_formula('?z1 -< ((X | ?x1) -> ?z2)')
    assert certificate.tau['x1'] is Order.ONE


def test_instantiate_restores_the_body():
    f = parse_formula('mu* X.(<>(X | <>q) | (q & p))')
    certificate = recognize_binder(f)
    assert certificate.instantiate(certificate.bindings) == f.body
    values = {x: Nominal('j') for x in certificate.placeholders}
    assert propvars(certificate.instantiate(values)) == ()


@pytest.mark.parametrize('text', ['mu* X.(<>X & p)', 'nu* Y.([]Y | p)', 'mu* X.[]X'])
def test_not_inner(text):
    with pytest.raises(NotInner) as info:
        certificate_of(text)
    assert info.value.subterm is not None


def test_wrong_binder_kind():
    with pytest.raises(NotInner):
        recognize_binder(parse_formula('<>p'))
    with pytest.raises(ValueError):
        recognize_inner(parse_formula('p'), 'SomeIF')


@pytest.mark.parametrize('text', [
    'mu* X.(<>X | []([]<>q | p))',
    'nu* Y.(([]((q -> F) & (p -> F)) -> F) & []Y)',
    'mu* X.(<>X | (<>T & p))',
    'mu* X.(<>X | <>(mu* Z.(Z | p)))',
    'mu* X.(T -< ((X | p) -> F))',
])
def test_templates_preserve_joins_or_meets(text, algebras):
    certificate = certificate_of(text)
    for A in algebras:
        report = check_preservation(A, certificate)
        assert report.valid, (A.name, report.countermodel)


def test_meet_of_placeholders_is_not_join_preserving(diamond):
    certificate = InnerFormulaCertificate(And(PlaceVar('x1'), PlaceVar('x2')),
                                          OrderType.from_mapping({'x1': '1', 'x2': '1'}), InnerKind.DIA,
                                          {'x1': PropVar('p'), 'x2': PropVar('q')})
    report = check_preservation(diamond, certificate)
    assert not report.valid
    assert set(report.countermodel) == {'first', 'second'}


def test_preservation_checks_every_pair_in_chunks(monkeypatch, diamond, small_algebras):
    monkeypatch.setattr(semantics, 'PAIR_CHUNK', 7)
    certificate = InnerFormulaCertificate(And(PlaceVar('x1'), PlaceVar('x2')),
                                          OrderType.from_mapping({'x1': '1', 'x2': '1'}), InnerKind.DIA,
                                          {'x1': PropVar('p'), 'x2': PropVar('q')})
    assert not check_preservation(diamond, certificate).valid
    certificate = certificate_of('mu* X.(<>X | <>(mu* Z.(Z | p)))')
    for A in small_algebras:
        assert check_preservation(A, certificate).valid, A.name
