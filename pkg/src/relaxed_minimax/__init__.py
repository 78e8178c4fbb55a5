"""Exact piecewise-linear convex analysis on the extended real line, and
verifiers for relaxed minimax inequalities over the simplex."""

from . import conjugate, extreal, grid, lp, minimax, pwl, subdiff
from .extreal import INF, NINF, ExtReal
from .grid import GridFunction
from .pwl import PwlFunction

__version__ = "0.1.0"

__all__ = [
    "ExtReal",
    "GridFunction",
    "INF",
    "NINF",
    "PwlFunction",
    "conjugate",
    "extreal",
    "grid",
    "lp",
    "minimax",
    "pwl",
    "subdiff",
]
