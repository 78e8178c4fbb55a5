"""ε-subdifferentials of one-dimensional convex piecewise-linear functions.

The exact routine uses the conjugate characterisation

    s ∈ ∂_ε f(x)  ⇔  f*(s) - s*x <= ε - f(x),

i.e. a sublevel set of a convex piecewise-linear function of ``s``, which is a
closed interval.  The max-rule check compares ``∂_ε(max_k f_k)(x)`` with the
union over simplex weights of shifted ε-subdifferentials of the mixtures.
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import extreal as er
from . import pwl
from .conjugate import conjugate
from .extreal import INF, NINF
from .grid import GridFunction
from .pwl import PwlFunction

__all__ = [
    "SubdiffInterval",
    "EMPTY",
    "eps_subdifferential",
    "eps_subdiff_oracle",
    "sublevel_interval",
    "simplex_mesh",
    "max_rule",
    "MaxRuleReport",
]


@dataclass(frozen=True)
class SubdiffInterval:
    lo: float = INF
    hi: float = NINF
    empty: bool = True

    def __post_init__(self):
        if not self.empty and not self.lo <= self.hi:
            raise ValueError("a nonempty interval needs lo <= hi")

    @classmethod
    def closed(cls, lo: float, hi: float) -> "SubdiffInterval":
        return cls(float(lo), float(hi), False)

    def contains(self, s: float, tol: float = 0.0) -> bool:
        return not self.empty and self.lo - tol <= s <= self.hi + tol

    def subset_of(self, other: "SubdiffInterval", tol: float = 0.0) -> bool:
        if self.empty:
            return True
        if other.empty:
            return False
        return other.lo - tol <= self.lo and self.hi <= other.hi + tol

    def to_json(self):
        if self.empty:
            return None
        return [er.to_json(self.lo), er.to_json(self.hi)]


# shifts this close to zero are rounding noise in f_λ(x) - f(x)
_SHIFT_TOL = 1e-12
# extra ε used only when confirming that the dual optimiser attains an endpoint
_ATTAIN_SLACK = 1e-9

EMPTY = SubdiffInterval()
WHOLE_LINE = SubdiffInterval(NINF, INF, False)


def sublevel_interval(phi: PwlFunction, c: float) -> SubdiffInterval:
    """Closure of ``{s : phi(s) <= c}`` for a convex ``phi`` (an interval)."""
    lo, hi = INF, NINF

    def take(a, b):
        nonlocal lo, hi
        lo, hi = min(lo, a), max(hi, b)

    for x, v in zip(phi.xs, phi.values):
        if v <= c:
            take(x, x)
    m = phi.m
    for j, p in enumerate(phi.pieces):
        a = NINF if j == 0 else phi.xs[j - 1]
        b = INF if j == m else phi.xs[j]
        if p.value == NINF:
            take(a, b)
            continue
        if p.value == INF:
            continue
        anchor = phi.anchor(j)
        # p.value + p.slope * (s - anchor) <= c
        if p.slope == 0.0:
            if p.value <= c:
                take(a, b)
            continue
        root = anchor + (c - p.value) / p.slope
        if p.slope > 0:
            ra, rb = a, min(b, root)
        else:
            ra, rb = max(a, root), b
        if ra <= rb:
            take(ra, rb)
    if lo > hi:
        return EMPTY
    return SubdiffInterval.closed(lo, hi)


def eps_subdifferential(f: PwlFunction, x: float, eps: float, tol: float = 1e-12) -> SubdiffInterval:
    if not pwl.is_convex(f):
        raise ValueError("eps_subdifferential needs a convex function")
    if eps < 0:
        return EMPTY
    fx = float(f(x))
    if fx == INF:
        return EMPTY
    if fx == NINF:
        return WHOLE_LINE
    fstar = conjugate(f)
    phi = pwl.add_functions(fstar, pwl.affine(-float(x), 0.0))
    c = eps - fx
    # widen the level slightly so flat pieces and singletons survive rounding,
    # then move each endpoint back: onto a nearby breakpoint, or else onto the
    # exact crossing with the unwidened level
    out = sublevel_interval(phi, c + tol * max(1.0, abs(c)))
    if out.empty:
        return out
    lo, hi = _snap(out.lo, phi, c), _snap(out.hi, phi, c)
    if lo > hi:
        # the level sits on the minimum up to rounding: keep the widened ends
        lo, hi = _snap(out.lo, phi, None), _snap(out.hi, phi, None)
    return SubdiffInterval.closed(lo, hi)


def _snap(s: float, phi: PwlFunction, level: Optional[float], rel: float = 1e-9) -> float:
    if not math.isfinite(s):
        return s
    for k in phi.xs:
        if abs(s - k) <= rel * max(1.0, abs(k)):
            return k
    if level is None:
        return s
    j = bisect_left(phi.xs, s)
    p = phi.pieces[j]
    if p.finite and p.slope != 0.0:
        exact = phi.anchor(j) + (level - p.value) / p.slope
        if abs(exact - s) <= 1e-6 * max(1.0, abs(s)):
            return exact
    return s


def eps_subdiff_oracle(g: GridFunction, x: float, eps: float, slope_probes: Sequence[float], atol: float = 0.0) -> list:
    """Probe slopes satisfying the defining inequality at every grid node, up to ``atol``."""
    if g.ndim != 1:
        raise ValueError("the oracle works on 1-D grids")
    if eps < 0:
        return []
    fx = float(g.values[g.node_index(x)])
    if fx == INF:
        return []
    ys, vs = g.axes[0], g.values
    out = []
    for s in slope_probes:
        if fx == NINF:
            out.append(float(s))
            continue
        bound = fx + s * (ys - x) - eps - atol
        if np.all(vs >= bound):
            out.append(float(s))
    return out


def simplex_mesh(n: int, density: int) -> list:
    """Barycentric grid of Δₙ with ``density`` subdivisions per edge."""
    if n == 1:
        return [(1.0,)]
    pts = []
    for combo in itertools.combinations(range(density + n - 1), n - 1):
        parts, prev = [], -1
        for c in combo:
            parts.append(c - prev - 1)
            prev = c
        parts.append(density + n - 2 - prev)
        pts.append(tuple(p / density for p in parts))
    return pts


@dataclass
class MaxRuleReport:
    x: float
    eps: float
    lhs: SubdiffInterval
    rhs_cover: list
    inclusion_ok: Optional[bool]
    endpoint_gap: Optional[float]
    hypotheses: dict
    attained_by: dict
    message: str = ""
    tol: float = 1e-6

    @property
    def passed(self) -> Optional[bool]:
        if self.inclusion_ok is None:
            return None
        return self.inclusion_ok and self.endpoint_gap is not None and self.endpoint_gap <= self.tol

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "eps": self.eps,
            "lhs": self.lhs.to_json(),
            "rhs_cover": [iv.to_json() for iv in self.rhs_cover],
            "inclusion_ok": self.inclusion_ok,
            "endpoint_gap": None if self.endpoint_gap is None else er.to_json(self.endpoint_gap),
            "hypotheses": self.hypotheses,
            "attained_by": self.attained_by,
            "message": self.message,
        }


def _member(funcs, lam, x, eps, fx):
    f_lam = pwl.weighted_sum(lam, funcs)
    shift = er.add(eps, er.add(f_lam(x), -fx))
    if shift < -_SHIFT_TOL * max(1.0, abs(fx)):
        return EMPTY
    return eps_subdifferential(f_lam, x, max(0.0, float(shift)))


def _endpoint_distance(target: float, cover) -> float:
    best = INF
    for iv in cover:
        if iv.empty:
            continue
        if math.isinf(target):
            if (target > 0 and iv.hi == INF) or (target < 0 and iv.lo == NINF):
                return 0.0
            continue
        if iv.contains(target):
            return 0.0
        best = min(best, abs(iv.lo - target), abs(iv.hi - target))
    return best


def max_rule(
    funcs: Sequence[PwlFunction],
    x: float,
    eps: float,
    density: int = 8,
    max_density: int = 256,
    tol: float = 1e-6,
) -> MaxRuleReport:
    """Check ``∂_ε f(x) = ⋃_λ ∂_{ε + f_λ(x) - f(x)} f_λ(x)`` for ``f = max_k f_k``."""
    from .minimax.duality import dual_value  # local import: minimax builds on this module

    funcs = list(funcs)
    n = len(funcs)
    f = pwl.pointwise_max(funcs)
    hyp = {
        "convex": all(pwl.is_convex(g) for g in funcs),
        "all_proper": all(pwl.is_proper(g) for g in funcs),
        "all_lsc": all(pwl.is_lsc(g) for g in funcs),
        "dom_nonempty": bool(pwl.domain_components(f)),
    }
    hyp_ok = hyp["convex"] and (hyp["all_proper"] or hyp["all_lsc"]) and hyp["dom_nonempty"]
    fx = float(f(x))
    lhs = eps_subdifferential(f, x, eps) if hyp["convex"] else EMPTY
    if not hyp_ok:
        return MaxRuleReport(x, eps, lhs, [], None, None, hyp, {}, "hypothesis failed")
    if not math.isfinite(fx):
        return MaxRuleReport(x, eps, lhs, [], None, None, hyp, {}, "formula vacuous at x")

    samples = {}
    d = density
    for lam in simplex_mesh(n, d):
        samples[lam] = _member(funcs, lam, x, eps, fx)
    inclusion = all(iv.subset_of(lhs, 1e-9) for iv in samples.values())

    attained: dict = {}
    gap = 0.0
    if not lhs.empty:
        for name, target in (("lo", lhs.lo), ("hi", lhs.hi)):
            dist = _endpoint_distance(target, samples.values())
            if dist > tol and math.isfinite(target):
                # the max over the simplex of the tilted family attains the endpoint
                tilted = [pwl.add_functions(g, pwl.affine(-target, 0.0)) for g in funcs]
                _, lam_bar = dual_value(tilted)
                if lam_bar is not None:
                    lam_bar = tuple(float(v) for v in lam_bar)
                    iv = _member(funcs, lam_bar, x, eps, fx)
                    samples[lam_bar] = iv
                    inclusion = inclusion and iv.subset_of(lhs, 1e-9)
                    if not iv.contains(target, tol):
                        # at the optimum the member is often a single point that
                        # rounding in the dual value can drop; retry with a tiny slack
                        slack = _ATTAIN_SLACK * max(1.0, abs(fx))
                        iv = _member(funcs, lam_bar, x, eps + slack, fx)
                    if iv.contains(target, tol):
                        dist = _endpoint_distance(target, [iv])
                        attained[name] = list(lam_bar)
            while dist > tol and d < max_density:
                d *= 2
                for lam in simplex_mesh(n, d):
                    if lam not in samples:
                        samples[lam] = _member(funcs, lam, x, eps, fx)
                        inclusion = inclusion and samples[lam].subset_of(lhs, 1e-9)
                dist = _endpoint_distance(target, samples.values())
            if name not in attained:
                for lam, iv in samples.items():
                    if _endpoint_distance(target, [iv]) == dist:
                        attained[name] = list(lam)
                        break
            gap = max(gap, dist)
    cover = _merge_cover(samples.values())
    return MaxRuleReport(x, eps, lhs, cover, inclusion, gap, hyp, attained, tol=tol)


def _merge_cover(intervals) -> list:
    ivs = sorted((iv for iv in intervals if not iv.empty), key=lambda iv: (iv.lo, iv.hi))
    out: list = []
    for iv in ivs:
        if out and iv.lo <= out[-1].hi + 1e-12:
            last = out[-1]
            out[-1] = SubdiffInterval.closed(last.lo, max(last.hi, iv.hi))
        else:
            out.append(iv)
    return out
