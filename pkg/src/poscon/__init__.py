"""Controllable subsets of single-input discrete-time linear positive systems."""

__version__ = "0.1.0"

from .errors import PosconError  # noqa: E402
from .posmat import NonnegMatrix, NonnegVector  # noqa: E402
from .controllability import (  # noqa: E402
    SystemSI,
    Tolerances,
    analyze,
    check_target,
    make_system,
)

__all__ = [
    "NonnegMatrix",
    "NonnegVector",
    "PosconError",
    "SystemSI",
    "Tolerances",
    "analyze",
    "check_target",
    "make_system",
]
