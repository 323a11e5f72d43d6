"""Rational transductions modulo resynchronizers: deciders and synthesis."""

from .automata import Dfa, Nfa
from .config import LIMITS, CapExceeded
from .drat import DetTransducer, drat_uniformize
from .formats import load, load_builtin, parse, to_text
from .games import seq_s_uniformizable, solve_safety
from .resync import UNIVERSAL, Resynchronizer, build_dk, identity_resync, k_equivalent, k_included
from .transducer import Transducer
from .words import delay, lag

__all__ = [
    "CapExceeded",
    "DetTransducer",
    "Dfa",
    "LIMITS",
    "Nfa",
    "Resynchronizer",
    "Transducer",
    "UNIVERSAL",
    "build_dk",
    "delay",
    "drat_uniformize",
    "identity_resync",
    "k_equivalent",
    "k_included",
    "lag",
    "load",
    "load_builtin",
    "parse",
    "seq_s_uniformizable",
    "solve_safety",
    "to_text",
]
