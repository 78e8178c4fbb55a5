"""Legendre-Fenchel conjugation of piecewise-linear functions.

The exact transform works on the closed graph of ``f``: for a function without
``-inf`` values, ``f*(s)`` is the upper envelope of the lines
``s -> x_p * s - y_p`` over the closure points ``(x_p, y_p)``, cut down to the
interval of slopes allowed by the tails.  That envelope is built with a
slope-sorted line stack, which is a different algorithm from the monotone-chain
lower hull used by :func:`~relaxed_minimax.pwl.convex_hull`, so comparing the
two gives a meaningful cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import extreal as er
from . import pwl
from .extreal import INF, NINF, ExtReal
from .grid import GridFunction
from .pwl import Piece, PwlFunction

__all__ = [
    "IdentityReport",
    "conjugate",
    "conjugate_grid",
    "biconjugate",
    "check_biconjugate",
    "check_hull_conjugate",
    "check_hull_infimum",
    "conj_of_inf",
    "conj_of_sup",
    "lipschitz_envelope",
]


@dataclass
class IdentityReport:
    identity: str
    hypothesis_ok: bool
    holds: Optional[bool]
    lhs: object = None
    rhs: object = None
    max_discrepancy: Optional[float] = None
    witnesses: dict = field(default_factory=dict)
    message: str = ""

    def to_dict(self) -> dict:
        def enc(v):
            if isinstance(v, PwlFunction):
                return v.to_dict()
            if isinstance(v, float):
                return er.to_json(v)
            return v

        return {
            "identity": self.identity,
            "hypothesis_ok": self.hypothesis_ok,
            "holds": self.holds,
            "lhs": enc(self.lhs),
            "rhs": enc(self.rhs),
            "max_discrepancy": None if self.max_discrepancy is None else er.to_json(self.max_discrepancy),
            "witnesses": self.witnesses,
            "message": self.message,
        }


def _takes_ninf(f: PwlFunction) -> bool:
    return any(v == NINF for v in f.values) or any(p.value == NINF for p in f.pieces)


def _upper_envelope(lines):
    """Upper envelope of ``s -> a*s + b`` as a list of lines with their switch points."""
    best = {}
    for a, b in lines:
        if a not in best or b > best[a]:
            best[a] = b
    ordered = sorted(best.items())
    stack: list = []
    for a, b in ordered:
        while stack:
            a1, b1 = stack[-1]
            x_new = (b1 - b) / (a - a1)
            if len(stack) >= 2:
                a0, b0 = stack[-2]
                x_old = (b0 - b1) / (a1 - a0)
                if x_new <= x_old:
                    stack.pop()
                    continue
            break
        stack.append((a, b))
    switches = [(b0 - b1) / (a1 - a0) for (a0, b0), (a1, b1) in zip(stack, stack[1:])]
    return stack, switches


def conjugate(f: PwlFunction) -> PwlFunction:
    """Exact ``f*(s) = sup_x (s*x - f(x))`` under the extended-real conventions."""
    if _takes_ninf(f):
        return pwl.constant(INF)
    if not pwl.domain_components(f):
        return pwl.constant(NINF)
    pts, sl, sr = pwl.closure_points(f)
    if sl is not None and sr is not None and sl > sr:
        return pwl.constant(INF)
    stack, switches = _upper_envelope([(x, -y) for x, y in pts])
    if switches:
        xs = switches
        vals = [a * s + b for (a, b), s in zip(stack, switches)]
        pieces = [Piece(vals[0], stack[0][0])]
        for (a, b), s in zip(stack[1:], switches):
            pieces.append(Piece(a * s + b, a))
        env = PwlFunction(tuple(xs), tuple(vals), tuple(pieces))
    else:
        a, b = stack[0]
        env = pwl.affine(a, b)
    lo = NINF if sl is None else sl
    hi = INF if sr is None else sr
    if math.isinf(lo) and math.isinf(hi):
        return env.simplify()
    return pwl.add_functions(env, pwl.indicator(lo, hi))


def conjugate_grid(g: GridFunction, dual_axis: Sequence[float]) -> GridFunction:
    """Brute-force conjugate of a 1-D grid function, evaluated on ``dual_axis``."""
    if g.ndim != 1:
        raise ValueError("conjugate_grid needs a 1-D grid")
    s = np.asarray(sorted(float(v) for v in dual_axis))
    x = g.axes[0]
    v = g.values
    # s*x - v: v=+inf gives -inf and v=-inf gives +inf, both without NaN
    with np.errstate(invalid="ignore"):
        table = s[:, None] * x[None, :] - v[None, :]
    out = table.max(axis=1) if x.size else np.full(s.size, NINF)
    return GridFunction((s,), out)


def biconjugate(f: PwlFunction) -> PwlFunction:
    return conjugate(conjugate(f))


def check_biconjugate(f: PwlFunction, tol: float = 1e-9) -> IdentityReport:
    """``f** = cl co f`` whenever the closed convex hull is proper; ``f** = f`` on Γ₀."""
    fss = biconjugate(f)
    hull = pwl.closed_convex_hull(f)
    gamma0 = pwl.is_gamma0(f)
    if not pwl.is_proper(hull):
        return IdentityReport(
            "biconjugate",
            False,
            None,
            fss,
            hull,
            witnesses={"gamma0": gamma0},
            message="improper hull: biconjugation hypothesis violated",
        )
    gap = pwl.max_discrepancy(fss, hull)
    holds = gap <= tol
    witnesses = {"gamma0": gamma0}
    if gamma0:
        witnesses["structural_equality"] = pwl.same_structure(fss, f, tol)
        holds = holds and witnesses["structural_equality"]
    return IdentityReport("biconjugate", True, holds, fss, hull, gap, witnesses)


def check_hull_conjugate(f: PwlFunction, tol: float = 1e-9) -> IdentityReport:
    """``f* = (co f)* = (cl co f)*``."""
    c0 = conjugate(f)
    c1 = conjugate(pwl.convex_hull(f))
    c2 = conjugate(pwl.closed_convex_hull(f))
    gap = max(pwl.max_discrepancy(c0, c1), pwl.max_discrepancy(c0, c2))
    return IdentityReport("hull_conjugate", True, gap <= tol, c0, c2, gap)


def check_hull_infimum(f: PwlFunction, tol: float = 1e-9) -> IdentityReport:
    """The infimum is invariant under the lsc, convex and closed convex hulls."""
    infs = {
        "f": pwl.infimum(f)[0],
        "lsc": pwl.infimum(pwl.lsc_hull(f))[0],
        "co": pwl.infimum(pwl.convex_hull(f))[0],
        "clco": pwl.infimum(pwl.closed_convex_hull(f))[0],
    }
    ref = infs["f"]
    gap = 0.0
    for v in infs.values():
        if not er.isclose(v, ref, tol):
            gap = INF if (math.isinf(v) or math.isinf(ref)) else max(gap, abs(v - ref))
    return IdentityReport(
        "hull_infimum",
        True,
        gap <= tol,
        float(ref),
        float(infs["clco"]),
        gap,
        witnesses={k: er.to_json(v) for k, v in infs.items()},
    )


def conj_of_inf(family: Sequence[PwlFunction], tol: float = 1e-9) -> IdentityReport:
    """``(inf_t f_t)* = sup_t f_t*``, which holds for every family."""
    if not family:
        raise ValueError("family must be nonempty")
    lhs = conjugate(pwl.pointwise_min(list(family)))
    rhs = pwl.pointwise_max([conjugate(f) for f in family])
    gap = pwl.max_discrepancy(lhs, rhs)
    return IdentityReport("inf_rule", True, gap <= tol, lhs, rhs, gap)


def conj_of_sup(family: Sequence[PwlFunction], tol: float = 1e-9) -> IdentityReport:
    """``(sup_t f_t)* = cl co (inf_t f_t*)`` when every member and the sup are in Γ₀."""
    if not family:
        raise ValueError("family must be nonempty")
    sup = pwl.pointwise_max(list(family))
    members_ok = [pwl.is_gamma0(f) for f in family]
    ok = all(members_ok) and pwl.is_gamma0(sup)
    if not ok:
        return IdentityReport(
            "sup_rule",
            False,
            None,
            witnesses={"members_gamma0": members_ok, "sup_gamma0": pwl.is_gamma0(sup)},
            message="hypothesis failed",
        )
    lhs = conjugate(sup)
    rhs = pwl.closed_convex_hull(pwl.pointwise_min([conjugate(f) for f in family]))
    gap = pwl.max_discrepancy(lhs, rhs)
    return IdentityReport("sup_rule", True, gap <= tol, lhs, rhs, gap)


def lipschitz_envelope(f: Union[PwlFunction, GridFunction], R: float, x0) -> ExtReal:
    """``inf_x R*|x0 - x| + f(x)``; increases to the lsc hull of ``f`` at ``x0`` as ``R`` grows."""
    if not R > 0:
        raise ValueError("R must be positive")
    if isinstance(f, PwlFunction):
        return _envelope_pwl(f, float(R), float(x0))
    pts = np.meshgrid(*f.axes, indexing="ij")
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    dist = np.sqrt(sum((p - c) ** 2 for p, c in zip(pts, x0)))
    return er.fold_inf((R * dist + f.values).ravel())


def _envelope_pwl(f: PwlFunction, R: float, x0: float) -> ExtReal:
    # x -> R|x - x0| + f(x) is affine between x0 and the breakpoints of f, so the
    # infimum is a value or one-sided limit at one of those points, or a tail limit
    cands = [float(f(x0))]
    m = f.m
    for i, x in enumerate(f.xs):
        d = R * abs(x - x0)
        cands += [er.add(d, f.values[i]), er.add(d, f.left_limit(i)), er.add(d, f.right_limit(i))]
    if any(p.value == NINF for p in f.pieces):
        return ExtReal(NINF)
    left, right = f.pieces[0], f.pieces[-1]
    if left.finite and left.slope > R:
        return ExtReal(NINF)
    if right.finite and right.slope < -R:
        return ExtReal(NINF)
    return er.fold_inf(cands)
