"""Ground reference semantics used to check goal-directed answers."""

from .ground import FALSE, GroundProgram, ground, make_universe, program_constants
from .stable import (
    StableModelSet,
    enumerate_by_subsets,
    enumerate_stable_models,
    gl_reduct,
    is_stable,
    is_stable_minimal,
    least_model,
)
from .verify import Verdict, oracle_query, prepare, verify_partial_model

__all__ = [
    "FALSE", "GroundProgram", "ground", "make_universe", "program_constants",
    "StableModelSet", "enumerate_by_subsets", "enumerate_stable_models", "gl_reduct",
    "is_stable", "is_stable_minimal", "least_model", "Verdict", "oracle_query",
    "prepare", "verify_partial_model",
]
