"""Goal-directed answer set programming for predicate programs."""

from .errors import (
    AtomBoundExceeded,
    DepthLimitExceeded,
    DivisionByZero,
    IllegalDisunification,
    NonGroundArithmetic,
    ParseError,
    SaspError,
    UniverseTooLarge,
)
from .format import format_model
from .solver import Engine, PartialModel, SolverConfig, solve
from .syntax import parse_program, parse_query
from .transform import transform

__all__ = [
    "AtomBoundExceeded", "DepthLimitExceeded", "DivisionByZero", "IllegalDisunification",
    "NonGroundArithmetic", "ParseError", "SaspError", "UniverseTooLarge", "format_model",
    "Engine", "PartialModel", "SolverConfig", "solve", "parse_program", "parse_query", "transform",
]
