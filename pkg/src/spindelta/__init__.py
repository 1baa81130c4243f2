"""Integrability and bound states of N-body systems with spin-coupled delta interactions."""

__version__ = "0.1.0"

from .boundary import BoundaryCondition, SymmetryClass, classify, pt_transform
from .errors import (
    DegenerateMomenta,
    DimensionMismatch,
    GridTooCoarse,
    IndexOutOfRange,
    NoConvergence,
    NoSimultaneousEigenvector,
    OnContactPlane,
    ParseError,
    PathInconsistency,
    SingularMatrix,
)
from .spinspace import ManyBodyModel, SpinHalfParams, Statistics, build_spin_half_h

__all__ = [
    "BoundaryCondition",
    "DegenerateMomenta",
    "DimensionMismatch",
    "GridTooCoarse",
    "IndexOutOfRange",
    "ManyBodyModel",
    "NoConvergence",
    "NoSimultaneousEigenvector",
    "OnContactPlane",
    "ParseError",
    "PathInconsistency",
    "SingularMatrix",
    "SpinHalfParams",
    "Statistics",
    "SymmetryClass",
    "build_spin_half_h",
    "classify",
    "pt_transform",
]
