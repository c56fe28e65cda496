"""
Concrete text syntax for formulas and inequalities.

    T, F                 top and bottom
    p, q, foo            propositional variables (lowercase)
    X, Y'1               fixed-point variables (uppercase)
    $j  #m  ?x1          nominals, co-nominals, placeholders
    []  <>  [b]  <b>     box, diamond, black box, black diamond
    &   |   ->  -<       meet, join, implication, co-implication
    mu X.  nu X.  mu* X.  nu* X.
    lhs <= rhs           inequality

Binders bind weakest, then ``->``/``-<`` (right associative), then ``|``,
then ``&``; unary operators bind strongest.
"""
from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, UnexpectedEOF

from mustaralba.syntax import (Bot, Top, PropVar, FixVar, PlaceVar, Nominal, CoNominal,
                               Box, Dia, BlackBox, BlackDia, And, Or, Implies, CoImplies,
                               Mu, Nu, MuStar, NuStar, Atom, Unary, Binary, Binder,
                               Inequality, check_binder_positivity, placeholders, language_of)


class FormulaSyntaxError(ValueError):
    def __init__(self, message, position=None, expected=()):
        super().__init__(message)
        self.position = position
        self.expected = tuple(expected)


class PlaceholderError(FormulaSyntaxError):pass


GRAMMAR = r"""
?formula_start: formula
inequality_start: formula "<=" formula

?formula: BINDER FIXVAR "." formula           -> binder
        | implication

?implication: disjunction
            | disjunction "->" formula        -> implies
            | disjunction "-<" formula        -> coimplies

?disjunction: conjunction
            | disjunction "|" conjunction     -> or_

?conjunction: unary
            | conjunction "&" unary           -> and_

?unary: BOX unary                             -> box
      | DIA unary                             -> dia
      | "[b]" unary                           -> black_box
      | "<b>" unary                           -> black_dia
      | atom

?atom: TOP                                    -> top
     | BOT                                    -> bot
     | PROPVAR                                -> propvar
     | FIXVAR                                 -> fixvar
     | NOMINAL                                -> nominal
     | CONOMINAL                              -> conominal
     | PLACEHOLDER                            -> placeholder
     | "(" formula ")"

BINDER.2: /(?:mu|nu)(?:\*|(?![A-Za-z0-9_']))/
BOX: /\[\s*\]/
DIA: /<\s*>/
TOP: /T(?![A-Za-z0-9_'])/
BOT: /F(?![A-Za-z0-9_'])/
FIXVAR: /(?![TF](?![A-Za-z0-9_']))[A-Z][A-Za-z0-9_']*/
PROPVAR: /[a-z][A-Za-z0-9_']*/
NOMINAL: /\$[A-Za-z0-9_']+/
CONOMINAL: /#[A-Za-z0-9_']+/
PLACEHOLDER: /\?[A-Za-z0-9_']+/

%import common.WS
%ignore WS
"""

_BINDERS = {'mu': Mu, 'nu': Nu, 'mu*': MuStar, 'nu*': NuStar}


@v_args(inline=True)
class _FormulaBuilder(Transformer):

    def binder(self, kind, var, body):
        return _BINDERS[str(kind)](str(var), body)

    def implies(self, left, right):
        return Implies(left, right)

    def coimplies(self, left, right):
        return CoImplies(left, right)

    def or_(self, left, right):
        return Or(left, right)

    def and_(self, left, right):
        return And(left, right)

    def box(self, _, arg):
        return Box(arg)

    def dia(self, _, arg):
        return Dia(arg)

    def black_box(self, arg):
        return BlackBox(arg)

    def black_dia(self, arg):
        return BlackDia(arg)

    def top(self, _):
        return Top()

    def bot(self, _):
        return Bot()

    def propvar(self, token):
        return PropVar(str(token))

    def fixvar(self, token):
        return FixVar(str(token))

    def nominal(self, token):
        return Nominal(str(token)[1:])

    def conominal(self, token):
        return CoNominal(str(token)[1:])

    def placeholder(self, token):
        return PlaceVar(str(token)[1:])

    def inequality_start(self, lhs, rhs):
        return Inequality(lhs, rhs)


_parser = Lark(GRAMMAR, start=['formula_start', 'inequality_start'], parser='lalr',
               transformer=_FormulaBuilder())


def _parse(text, start):
    try:
        return _parser.parse(text, start=start)
    except UnexpectedInput as e:
        expected = getattr(e, 'expected', None) or getattr(e, 'allowed', None) or ()
        position = len(text) if isinstance(e, UnexpectedEOF) else e.pos_in_stream
        if position is None or position < 0:
            position = len(text)
        message = 'Syntax error at position %d in %r, expected one of: %s' % (
            position, text, ', '.join(sorted(expected)))
        raise FormulaSyntaxError(message, position=position, expected=sorted(expected)) from None


def parse_formula(text):
    """Parse a formula and check binder positivity.

    Placeholders are accepted here, since inner-formula templates are
    written with them.

    Examples
    --------
    >>> parse_formula('mu X. X')
    Mu(var='X', body=FixVar(name='X'))
    """
    return check_binder_positivity(_parse(text, 'formula_start'))


def parse_inequality(text, allow_plus=True):
    """Parse ``lhs <= rhs``.

    Parameters
    ----------
    text : str
    allow_plus : bool, default=True
        When False only formulas of the base languages (no nominals,
        co-nominals, black box or black diamond) are accepted.
    """
    ineq = _parse(text, 'inequality_start')
    check_binder_positivity(ineq.lhs)
    check_binder_positivity(ineq.rhs)
    if placeholders(ineq):
        raise PlaceholderError('Placeholders are not allowed in inequalities: %s' % text,
                               position=text.find('?'))
    if not allow_plus and language_of(ineq).plus:
        raise FormulaSyntaxError('Nominals, co-nominals and black modalities are not allowed here: %s' % text)
    return ineq


_UNARY = {Box: '[]', Dia: '<>', BlackBox: '[b]', BlackDia: '<b>'}
_BINARY = {And: ' & ', Or: ' | ', Implies: ' -> ', CoImplies: ' -< '}
_BINDER = {Mu: 'mu', Nu: 'nu', MuStar: 'mu*', NuStar: 'nu*'}
_SIGIL = {PropVar: '', FixVar: '', PlaceVar: '?', Nominal: '$', CoNominal: '#'}


def _operand(f):
    if isinstance(f, (Binary, Binder)):
        return '(%s)' % print_formula(f)
    return print_formula(f)


def print_formula(f):
    if isinstance(f, Bot):
        return 'F'
    if isinstance(f, Top):
        return 'T'
    if isinstance(f, Atom):
        return _SIGIL[type(f)] + f.name
    if isinstance(f, Unary):
        return _UNARY[type(f)] + _operand(f.arg)
    if isinstance(f, Binary):
        return _operand(f.left) + _BINARY[type(f)] + _operand(f.right)
    if isinstance(f, Binder):
        return '%s %s.%s' % (_BINDER[type(f)], f.var, _operand(f.body))
    raise TypeError('Not a formula:%r' % (f,))


def print_inequality(ineq):
    return '%s <= %s' % (print_formula(ineq.lhs), print_formula(ineq.rhs))
