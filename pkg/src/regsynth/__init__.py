"""Register transducer synthesis from register-automata specifications."""

from .core import (
    D0, BOT, TOP, And, Eq, Kind, MalformedAutomaton, Neq, Not, Or, RegisterAutomaton,
    RegisterTransducer, Rule, Semantics, Transition, alpha, eval_test, explicit_tests,
    is_complete_inputs, is_deterministic, is_ido, is_test_free, next_valuation, shift_colors,
    transducer_as_dra,
)
from .lasso import Lasso, LassoDataWord, format_lasso, parse_lasso

__version__ = "0.1.0"

__all__ = [
    "D0", "BOT", "TOP", "And", "Eq", "Kind", "MalformedAutomaton", "Neq", "Not", "Or",
    "RegisterAutomaton", "RegisterTransducer", "Rule", "Semantics", "Transition", "alpha",
    "eval_test", "explicit_tests", "is_complete_inputs", "is_deterministic", "is_ido",
    "is_test_free", "next_valuation", "shift_colors", "transducer_as_dra", "Lasso",
    "LassoDataWord", "format_lasso", "parse_lasso",
]
