"""Arithmetic on the extended real line with inf-addition conventions.

Values are floats restricted to ``R ∪ {-inf, +inf}``; NaN is never produced.
The conventions are::

    (+inf) + (-inf) = (-inf) + (+inf) = +inf
    0 * (+inf) = +inf
    0 * (-inf) = 0

Only nonnegative multipliers are supported by :func:`scale`; products with a
negative factor never arise from simplex weights and are rejected.
"""

from __future__ import annotations

import math
from typing import Iterable, Union

__all__ = [
    "ExtReal",
    "INF",
    "NINF",
    "add",
    "scale",
    "fold_inf",
    "fold_sup",
    "to_json",
    "from_json",
    "is_finite",
    "isclose",
]

Number = Union[int, float]

INF = math.inf
NINF = -math.inf


class ExtReal(float):
    """A float that is never NaN and adds with the ``inf + (-inf) = +inf`` rule."""

    __slots__ = ()

    def __new__(cls, value: Number = 0.0) -> "ExtReal":
        if isinstance(value, str):
            value = _parse_str(value)
        v = float(value)
        if math.isnan(v):
            raise ValueError("NaN is not an extended real")
        return super().__new__(cls, v)

    def __add__(self, other):
        if not isinstance(other, (int, float)):
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (int, float)):
            return NotImplemented
        return add(self, -float(other))

    def __rsub__(self, other):
        if not isinstance(other, (int, float)):
            return NotImplemented
        return add(other, -float(self))

    def __neg__(self) -> "ExtReal":
        return ExtReal(-float(self))

    def __mul__(self, other):
        if not isinstance(other, (int, float)):
            return NotImplemented
        return scale(other, self)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        if self == INF:
            return "ExtReal('inf')"
        if self == NINF:
            return "ExtReal('-inf')"
        return f"ExtReal({float(self)!r})"

    @property
    def finite(self) -> bool:
        return math.isfinite(self)


def _parse_str(s: str) -> float:
    key = s.strip().lower()
    if key in ("inf", "+inf", "infinity", "+infinity"):
        return INF
    if key in ("-inf", "-infinity"):
        return NINF
    raise ValueError(f"not an extended real literal: {s!r}")


def _check(a: Number) -> float:
    v = float(a)
    if math.isnan(v):
        raise ValueError("NaN is not an extended real")
    return v


def add(a: Number, b: Number) -> ExtReal:
    """Sum with ``+inf`` absorbing everything, ``-inf`` absorbing finite values."""
    x, y = _check(a), _check(b)
    if x == INF or y == INF:
        return ExtReal(INF)
    if x == NINF or y == NINF:
        return ExtReal(NINF)
    return ExtReal(x + y)


def scale(t: Number, a: Number) -> ExtReal:
    """Multiply ``a`` by ``t >= 0``; ``0 * inf = inf`` and ``0 * (-inf) = 0``."""
    t = _check(t)
    if t < 0:
        raise ValueError(f"negative multiplier {t} is outside the supported conventions")
    if math.isinf(t):
        raise ValueError("multiplier must be finite")
    x = _check(a)
    if t == 0.0:
        return ExtReal(INF) if x == INF else ExtReal(0.0)
    return ExtReal(t * x)


def fold_inf(values: Iterable[Number]) -> ExtReal:
    """Infimum under the total order; the empty infimum is ``+inf``."""
    out = INF
    for v in values:
        v = _check(v)
        if v < out:
            out = v
    return ExtReal(out)


def fold_sup(values: Iterable[Number]) -> ExtReal:
    """Supremum under the total order; the empty supremum is ``-inf``."""
    out = NINF
    for v in values:
        v = _check(v)
        if v > out:
            out = v
    return ExtReal(out)


def is_finite(a: Number) -> bool:
    return math.isfinite(a)


def isclose(a: Number, b: Number, tol: float = 1e-9) -> bool:
    """Equality within ``tol`` (absolute and relative); infinities match exactly."""
    a, b = float(a), float(b)
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def to_json(a: Number):
    """Finite values as JSON numbers, infinities as ``"inf"`` / ``"-inf"``."""
    v = _check(a)
    if v == INF:
        return "inf"
    if v == NINF:
        return "-inf"
    return v


def from_json(obj) -> ExtReal:
    if isinstance(obj, bool):
        raise ValueError("booleans are not extended reals")
    if isinstance(obj, (int, float, str)):
        return ExtReal(obj)
    raise ValueError(f"cannot decode extended real from {obj!r}")
