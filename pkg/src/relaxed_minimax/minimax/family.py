"""Bifunctions that are affine in the simplex variable."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .. import extreal as er
from .. import pwl
from ..extreal import ExtReal
from ..pwl import Interval, PwlFunction

__all__ = ["SimplexPoint", "BifunctionFamily", "BifunctionGrid", "restriction_from_dict", "restriction_to_dict"]

_SUM_TOL = 1e-12


@dataclass(frozen=True)
class SimplexPoint:
    weights: tuple

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        if not w:
            raise ValueError("a simplex point needs at least one weight")
        if any(v < 0 or not math.isfinite(v) for v in w):
            raise ValueError("simplex weights must be finite and nonnegative")
        if abs(sum(w) - 1.0) > _SUM_TOL * len(w):
            raise ValueError(f"simplex weights must sum to 1, got {sum(w)!r}")
        object.__setattr__(self, "weights", w)

    @classmethod
    def clean(cls, raw: Sequence[float]) -> "SimplexPoint":
        """Project LP or mesh output onto the simplex (clip tiny negatives, renormalise)."""
        w = np.clip(np.asarray(raw, dtype=float), 0.0, None)
        total = w.sum()
        if total <= 0:
            raise ValueError("cannot normalise a zero weight vector")
        return cls(tuple(w / total))

    @property
    def support(self) -> tuple:
        return tuple(k for k, v in enumerate(self.weights) if v > 0)

    def __len__(self) -> int:
        return len(self.weights)


def restriction_to_dict(b: Optional[Interval]):
    if b is None:
        return None
    return {"lo": er.to_json(b.lo), "hi": er.to_json(b.hi), "lo_closed": b.lo_closed, "hi_closed": b.hi_closed}


def restriction_from_dict(d) -> Optional[Interval]:
    if d is None:
        return None
    return Interval(
        float(er.from_json(d["lo"])),
        float(er.from_json(d["hi"])),
        bool(d.get("lo_closed", True)),
        bool(d.get("hi_closed", True)),
    )


@dataclass(frozen=True, eq=False)
class BifunctionFamily:
    """``f(λ, y) = Σ_k λ_k g_k(y)`` on ``Δₙ × ℝ``, optionally with ``y`` restricted to ``B``."""

    generators: tuple
    y_restriction: Optional[Interval] = None

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("a family needs at least one generator")
        object.__setattr__(self, "generators", gens)
        if self.y_restriction is not None:
            object.__setattr__(self, "y_restriction", Interval(*self.y_restriction))

    @property
    def n(self) -> int:
        return len(self.generators)

    def restriction_indicator(self) -> Optional[PwlFunction]:
        b = self.y_restriction
        if b is None:
            return None
        return pwl.indicator(b.lo, b.hi, b.lo_closed, b.hi_closed)

    def section(self, lam, restricted: bool = False) -> PwlFunction:
        """``f(λ, ·)``, plus the indicator of ``B`` when ``restricted``."""
        w = lam.weights if isinstance(lam, SimplexPoint) else lam
        f = pwl.weighted_sum(w, list(self.generators))
        ind = self.restriction_indicator() if restricted else None
        return pwl.add_functions(f, ind) if ind is not None else f

    def value(self, lam, y: float) -> ExtReal:
        w = lam.weights if isinstance(lam, SimplexPoint) else lam
        acc = ExtReal(0.0)
        for t, g in zip(w, self.generators):
            acc = er.add(acc, er.scale(t, g(y)))
        return acc

    def to_dict(self) -> dict:
        return {
            "generators": [g.to_dict() for g in self.generators],
            "y_restriction": restriction_to_dict(self.y_restriction),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BifunctionFamily":
        gens = tuple(PwlFunction.from_dict(g) for g in d["generators"])
        return cls(gens, restriction_from_dict(d.get("y_restriction")))


@dataclass(frozen=True, eq=False)
class BifunctionGrid:
    """A bifunction tabulated on finite node sets; rows are indexed by ``x``.

    Every function on a finite set is lsc, so this mode cannot tell A₀ from A₁:
    both are the rows that are proper and discretely convex in ``y``.
    """

    x_nodes: tuple
    y_nodes: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y_nodes, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if v.shape != (len(self.x_nodes), y.size):
            raise ValueError("values must have shape (len(x_nodes), len(y_nodes))")
        if np.any(np.diff(y) <= 0):
            raise ValueError("y nodes must be strictly increasing")
        if np.any(np.isnan(v)):
            raise ValueError("NaN is not an extended real")
        object.__setattr__(self, "x_nodes", tuple(self.x_nodes))
        object.__setattr__(self, "y_nodes", y)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_family(cls, fam: BifunctionFamily, lambdas, y_nodes) -> "BifunctionGrid":
        y_nodes = np.asarray(sorted(set(float(y) for y in y_nodes)))
        vals = np.array([[float(fam.value(lam, y)) for y in y_nodes] for lam in lambdas])
        return cls(tuple(tuple(l) for l in lambdas), y_nodes, vals)

    def member_rows(self) -> list:
        from ..grid import GridFunction, grid_convexity_check

        rows = []
        for i, row in enumerate(self.values):
            proper = bool(np.all(row > -np.inf) and np.any(row < np.inf))
            if proper and grid_convexity_check(GridFunction((self.y_nodes,), row)):
                rows.append(i)
        return rows

    def lhs(self, rows=None) -> ExtReal:
        """``min_y max_{x in rows} f(x, y)`` with the empty max equal to ``-inf``."""
        rows = range(len(self.x_nodes)) if rows is None else list(rows)
        if not rows:
            return ExtReal(er.NINF)
        return er.fold_inf(self.values[list(rows)].max(axis=0))

    def rhs(self):
        """``max_x min_y f(x, y)`` and the maximising node."""
        inner = self.values.min(axis=1)
        i = int(np.argmax(inner))
        return ExtReal(inner[i]), self.x_nodes[i]
