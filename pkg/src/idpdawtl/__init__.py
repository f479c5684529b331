"""Input-driven pushdown automata with translucent letters."""

from .model import ACCEPT, Automaton, Signature, ValidationError, dumps, load, parse, validate
from .engine import accepts, enumerate_language, run_deterministic

__all__ = [
    "ACCEPT", "Automaton", "Signature", "ValidationError",
    "dumps", "load", "parse", "validate",
    "accepts", "enumerate_language", "run_deterministic",
]
__version__ = "0.1.0"
