"""Exact arithmetic for modular linear differential operators."""

from .errors import MldoError
from .modform import DELTA, E2, E4, E6, Form
from .operators import Mldo, exact_div
from .merore import MerForm, MerMldo, gcrd, lclm
from .parsing import parse, parse_form, parse_operator
from .qseries import QSeries, apply_mldo

__all__ = [
    "MldoError", "Form", "E2", "E4", "E6", "DELTA", "Mldo", "exact_div",
    "MerForm", "MerMldo", "gcrd", "lclm", "parse", "parse_form",
    "parse_operator", "QSeries", "apply_mldo",
]

__version__ = "0.1.0"
