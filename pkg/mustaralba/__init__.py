from .parser import parse_formula, parse_inequality, print_formula, print_inequality
from .classifier import classify
from .engine import Engine, preprocess, run
from .algebra import FiniteAlgebra, battery, load_algebra
from .semantics import check_inequality, check_quasi_system
from .oracle import SoundnessOracle, AckermannOracle, verify

from ._version import __version__

__all__ = ['parse_formula', 'parse_inequality', 'print_formula', 'print_inequality', 'classify', 'Engine',
           'preprocess', 'run', 'FiniteAlgebra', 'battery', 'load_algebra', 'check_inequality',
           'check_quasi_system', 'SoundnessOracle', 'AckermannOracle', 'verify', '__version__']

