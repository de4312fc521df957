"""Concurrent multiagent planning by compilation to classical planning."""

from __future__ import annotations

__version__ = "0.1.0"

from .model import (  # noqa: E402
    ActionId,
    Atom,
    ConcurrentPlan,
    IllDefinedError,
    JointAction,
    Literal,
    LiteralSet,
    MapProblem,
    PlanningError,
    State,
)
from .compiler import CompileOptions, compile_map, expected_sizes  # noqa: E402
from .codec import decode, encode  # noqa: E402
from .grounding import ground  # noqa: E402
from .semantics import validate_concurrent  # noqa: E402

__all__ = [
    "ActionId", "Atom", "CompileOptions", "ConcurrentPlan", "IllDefinedError", "JointAction", "Literal",
    "LiteralSet", "MapProblem", "PlanningError", "State", "compile_map", "decode", "encode", "expected_sizes",
    "ground", "validate_concurrent", "__version__",
]
