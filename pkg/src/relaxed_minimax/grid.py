"""Extended-real functions sampled on rectangular grids in one or two dimensions.

These are deliberately dumb: every operation is an exhaustive scan, which is
what makes them useful as oracles for the exact piecewise-linear code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import extreal as er
from .extreal import ExtReal

__all__ = [
    "GridFunction",
    "grid_eval",
    "grid_inf",
    "grid_sup",
    "grid_convexity_check",
    "sample",
]


@dataclass(frozen=True, eq=False)
class GridFunction:
    axes: tuple
    values: np.ndarray

    def __post_init__(self):
        axes = tuple(np.asarray(a, dtype=float) for a in self.axes)
        if len(axes) not in (1, 2):
            raise ValueError("only 1-D and 2-D grids are supported")
        for a in axes:
            if a.ndim != 1 or a.size == 0:
                raise ValueError("each axis must be a nonempty 1-D array")
            if not np.all(np.isfinite(a)):
                raise ValueError("grid coordinates must be finite")
            if np.any(np.diff(a) <= 0):
                raise ValueError("grid axes must be strictly increasing")
        vals = np.asarray(self.values, dtype=float)
        shape = tuple(a.size for a in axes)
        if vals.shape != shape:
            raise ValueError(f"values have shape {vals.shape}, grid has shape {shape}")
        if np.any(np.isnan(vals)):
            raise ValueError("NaN is not an extended real")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "values", vals)

    @property
    def ndim(self) -> int:
        return len(self.axes)

    def node_index(self, point) -> tuple:
        point = np.atleast_1d(np.asarray(point, dtype=float))
        if point.size != self.ndim:
            raise ValueError("point dimension does not match the grid")
        idx = []
        for a, p in zip(self.axes, point):
            j = int(np.searchsorted(a, p))
            hits = [k for k in (j - 1, j) if 0 <= k < a.size and abs(a[k] - p) <= 1e-12 * max(1.0, abs(p))]
            if not hits:
                raise KeyError(f"{float(p)} is not a grid node")
            idx.append(min(hits, key=lambda k: abs(a[k] - p)))
        return tuple(idx)

    def to_dict(self) -> dict:
        return {
            "axes": [a.tolist() for a in self.axes],
            "values": [er.to_json(v) for v in self.values.ravel()],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GridFunction":
        axes = [np.asarray(a, dtype=float) for a in d["axes"]]
        flat = [float(er.from_json(v)) for v in d["values"]]
        shape = tuple(a.size for a in axes)
        if len(flat) != int(np.prod(shape)):
            raise ValueError("number of values does not match the grid")
        return cls(tuple(axes), np.asarray(flat).reshape(shape))


def grid_eval(g: GridFunction, point) -> ExtReal:
    return ExtReal(g.values[g.node_index(point)])


def grid_inf(g: GridFunction) -> ExtReal:
    return er.fold_inf(g.values.ravel())


def grid_sup(g: GridFunction) -> ExtReal:
    return er.fold_sup(g.values.ravel())


def _midpoint_ok(mid: float, a: float, b: float, tol: float) -> bool:
    # mid <= a/2 + b/2 with (+inf) + (-inf) = +inf
    rhs = er.add(er.scale(0.5, a), er.scale(0.5, b))
    if rhs == er.INF or mid == er.NINF:
        return True
    if mid == er.INF or rhs == er.NINF:
        return False
    return mid <= rhs + tol * max(1.0, abs(rhs))


def grid_convexity_check(g: GridFunction, tol: float = 1e-9) -> bool:
    """Discrete midpoint convexity along every axis-parallel equally spaced triple."""
    for axis, coords in enumerate(g.axes):
        n = coords.size
        lines = np.moveaxis(g.values, axis, -1).reshape(-1, n)
        for i in range(1, n - 1):
            for k in range(1, min(i, n - 1 - i) + 1):
                left, right = coords[i] - coords[i - k], coords[i + k] - coords[i]
                if abs(left - right) > 1e-9 * max(1.0, abs(left)):
                    continue
                for row in lines:
                    if not _midpoint_ok(row[i], row[i - k], row[i + k], tol):
                        return False
    return True


def sample(f, axis: Sequence[float]) -> GridFunction:
    """Sample a callable (for instance a ``PwlFunction``) on a 1-D axis."""
    axis = np.asarray(sorted(set(float(x) for x in axis)))
    return GridFunction((axis,), np.array([float(f(x)) for x in axis]))
