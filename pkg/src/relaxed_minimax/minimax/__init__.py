"""Relaxed minimax inequalities for simplex-affine bifunctions."""

from .classify import Classification, classify, classify_A0, classify_A1
from .duality import DualityReport, dual_value, dual_value_grid, simplex_duality
from .family import BifunctionFamily, BifunctionGrid, SimplexPoint
from .marginal import MarginalReport, marginal_check
from .monotone import FunctionSequence, MonotoneReport, monotone_minimax
from .verify import (
    MinimaxReport,
    interior_equality,
    lhs_value,
    rhs_value,
    verify_localized,
    verify_mm1,
    verify_mmb,
)

__all__ = [
    "BifunctionFamily",
    "BifunctionGrid",
    "Classification",
    "DualityReport",
    "FunctionSequence",
    "MarginalReport",
    "MinimaxReport",
    "MonotoneReport",
    "SimplexPoint",
    "classify",
    "classify_A0",
    "classify_A1",
    "dual_value",
    "dual_value_grid",
    "interior_equality",
    "lhs_value",
    "marginal_check",
    "monotone_minimax",
    "rhs_value",
    "simplex_duality",
    "verify_localized",
    "verify_mm1",
    "verify_mmb",
]
