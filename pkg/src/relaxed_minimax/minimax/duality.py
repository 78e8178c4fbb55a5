"""The dual side ``max_{λ∈Δₙ} inf_y Σ_k λ_k g_k(y)`` computed exactly or by refinement.

Zero weights keep domain restrictions, so every mixture has the same domain
``D = ∩ dom g_k``.  On ``D`` the concave function
``g(λ) = inf_y f_λ(y)`` is the minimum of finitely many linear functions of
``λ`` (values at merged breakpoints and one-sided limits), subject to
recession conditions on unbounded tails, and it is ``-inf`` as soon as ``λ``
puts weight on a generator that is ``-inf`` somewhere in ``D``.  That gives a
small linear program, solved with :mod:`relaxed_minimax.lp`.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .. import extreal as er
from .. import pwl
from ..extreal import INF, NINF, ExtReal
from ..lp import linprog_max
from ..pwl import PwlFunction
from ..subdiff import simplex_mesh

__all__ = [
    "dual_structure",
    "dual_value",
    "dual_value_grid",
    "DualityReport",
    "simplex_duality",
]

_T_CAP = 1e12


@dataclass
class DualStructure:
    rows: list  # per-element value vectors over the generators (may hold -inf)
    rec_left: Optional[list]  # tail slopes where the left tail lies in D
    rec_right: Optional[list]


def dual_structure(funcs: Sequence[PwlFunction], restriction: Optional[PwlFunction] = None) -> DualStructure:
    n = len(funcs)
    allf = list(funcs) + ([restriction] if restriction is not None else [])
    M = pwl.merged_breakpoints(allf)
    rows: list = []
    rec_left = rec_right = None
    for x in M:
        vals = [pwl.value_near(g, x) for g in allf]
        if all(v < INF for v in vals):
            rows.append(vals[:n])
    for lo, hi in pwl.regions(M):
        lines = [pwl.line_on(g, lo, hi) for g in allf]
        if any(p.value == INF for p in lines):
            continue
        lines = lines[:n]
        if lo is None:
            rows.append([p.value for p in lines])
            rec_left = [p.slope if p.finite else 0.0 for p in lines]
        elif hi is None:
            rows.append([p.value for p in lines])
            rec_right = [p.slope if p.finite else 0.0 for p in lines]
        else:
            rows.append([p.value for p in lines])
            rows.append([p.at(lo, hi) for p in lines])
    return DualStructure(rows, rec_left, rec_right)


def _uniform(idx: Sequence[int], n: int) -> tuple:
    w = [0.0] * n
    for k in idx:
        w[k] = 1.0 / len(idx)
    return tuple(w)


def _solve_master(n, rows, feas_zero, rec_le, rec_ge, cap=None):
    """max t s.t. t <= λ·r for r in rows, λ·a <= 0 (rec_le), λ·a >= 0 (rec_ge), λ ∈ Δ, λ_k = 0 on feas_zero."""
    free = [k for k in range(n) if k not in feas_zero]
    if not free:
        return "infeasible", None, None
    p = len(free)
    A, b = [], []
    for r in rows:
        A.append([-r[k] for k in free] + [1.0, -1.0])
        b.append(0.0)
    for a in rec_le:
        A.append([a[k] for k in free] + [0.0, 0.0])
        b.append(0.0)
    for a in rec_ge:
        A.append([-a[k] for k in free] + [0.0, 0.0])
        b.append(0.0)
    if cap is not None:
        A.append([0.0] * p + [1.0, -1.0])
        b.append(cap)
    c = [0.0] * p + [1.0, -1.0]
    res = linprog_max(c, A or None, b or None, [[1.0] * p + [0.0, 0.0]], [1.0])
    if res.status != "optimal":
        return res.status, None, None
    lam = np.zeros(n)
    lam[free] = res.x[:p]
    lam = np.clip(lam, 0.0, None)
    lam /= lam.sum()
    return "optimal", float(res.value), tuple(float(v) for v in lam)


def dual_value(funcs: Sequence[PwlFunction], restriction: Optional[PwlFunction] = None):
    """Exact ``max_λ inf_y f_λ(y)`` (``y`` restricted by ``restriction``) and a maximiser."""
    n = len(funcs)
    st = dual_structure(funcs, restriction)
    if not st.rows:
        return ExtReal(INF), _uniform(range(n), n)
    bad = {k for k in range(n) if any(r[k] == NINF for r in st.rows)}
    good = [k for k in range(n) if k not in bad]
    if not good:
        return ExtReal(NINF), _uniform(range(n), n)
    rec_le = [st.rec_left] if st.rec_left is not None else []
    rec_ge = [st.rec_right] if st.rec_right is not None else []
    # rows restricted to the admissible face have only finite entries
    rows = {tuple(0.0 if k in bad else r[k] for k in range(n)) for r in st.rows}
    status, val, lam = _solve_master(n, sorted(rows), bad, rec_le, rec_ge)
    if status != "optimal":
        return ExtReal(NINF), _uniform(good, n)
    return ExtReal(val), lam


# -- refinement mode ---------------------------------------------------------


def _side_limit(g: PwlFunction, x: float, side: str) -> float:
    j = bisect_right(g.xs, x) if side == "right" else bisect_left(g.xs, x)
    return g.piece_value(j, x)


def _cuts_from_witness(funcs, f_lam: PwlFunction, wit) -> list:
    """Translate an infimum witness of ``f_λ`` into cuts on ``λ``.

    Cuts are ``("value", vector)``, ``("zero", set_of_k)``, ``("le", a)`` or ``("ge", a)``.
    """
    if wit.kind == "point":
        vec = [float(g(wit.x)) for g in funcs]
    elif wit.kind == "limit":
        j = wit.j
        if j == 0:
            side = "left"
        elif j == f_lam.m:
            side = "right"
        else:
            side = "right" if wit.x == f_lam.xs[j - 1] else "left"
        vec = [_side_limit(g, wit.x, side) for g in funcs]
    elif wit.kind == "piece":
        return [("zero", {k for k, g in enumerate(funcs) if g(wit.x) == NINF})]
    else:  # an affine tail running off to -inf
        slopes = []
        for g in funcs:
            p = g.pieces[0] if wit.j == 0 else g.pieces[-1]
            slopes.append(p.slope if p.finite else 0.0)
        return [("le" if wit.j == 0 else "ge", slopes)]
    bad = {k for k, v in enumerate(vec) if v == NINF}
    cuts = [("value", [0.0 if k in bad else v for k, v in enumerate(vec)])]
    if bad:
        # weight on a generator that is -inf here sends the infimum to -inf
        cuts.append(("zero", bad))
    return cuts


def _g(funcs, lam, restriction):
    f = pwl.weighted_sum(lam, list(funcs))
    if restriction is not None:
        f = pwl.add_functions(f, restriction)
    return f


def dual_value_grid(
    funcs: Sequence[PwlFunction],
    restriction: Optional[PwlFunction] = None,
    density: int = 8,
    tol: float = 1e-9,
    max_iter: int = 200,
):
    """Mesh search over Δₙ followed by cutting-plane refinement.

    Each probe ``λ`` is evaluated with :func:`pwl.infimum`; its witness yields a
    supergradient cut (or a feasibility cut when the infimum is ``-inf``).  The
    master LP gives an upper bound, so the returned value comes with a
    certified gap.
    """
    funcs = list(funcs)
    n = len(funcs)
    best_val, best_lam = NINF, None
    rows, zero, le, ge = [], set(), [], []
    seen = set()

    def probe(lam):
        nonlocal best_val, best_lam
        f = _g(funcs, lam, restriction)
        val, _, _, wit = pwl.infimum_witness(f, slope_tol=1e-10)
        if best_lam is None or val > best_val:
            best_val, best_lam = float(val), tuple(lam)
        if val == INF:
            return False
        fresh = False
        for kind, data in _cuts_from_witness(funcs + ([restriction] if restriction else []), f, wit):
            if kind == "zero":
                data = {k for k in data if k < n}
                key = (kind, tuple(sorted(data)))
            else:
                data = data[:n]
                key = (kind, tuple(round(v, 12) for v in data))
            if key in seen:
                continue
            seen.add(key)
            fresh = True
            if kind == "value":
                rows.append(data)
            elif kind == "zero":
                zero.update(data)
            elif kind == "le":
                le.append(data)
            else:
                ge.append(data)
        return fresh

    for lam in simplex_mesh(n, density):
        probe(lam)
    if best_val == INF:
        return ExtReal(INF), best_lam, 0.0
    upper = INF
    for _ in range(max_iter):
        status, t, lam = _solve_master(n, rows, zero, le, ge, cap=_T_CAP)
        if status != "optimal":
            # no λ keeps the infimum finite
            return ExtReal(best_val), best_lam, 0.0
        upper = t
        if math.isfinite(best_val) and upper - best_val <= tol * max(1.0, abs(best_val)):
            break
        if not probe(lam):
            break
    gap = upper - best_val if math.isfinite(best_val) else INF
    return ExtReal(best_val), best_lam, gap


# -- equality check ------------------------------------------------------------


@dataclass
class DualityReport:
    hypotheses: dict
    primal: float
    dual: float
    lambda_star: Optional[tuple]
    mode: str
    gap: Optional[float]
    holds: Optional[bool]
    message: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "theorem": "simplex_duality",
            "hypotheses": self.hypotheses,
            "lhs": er.to_json(self.primal),
            "rhs": er.to_json(self.dual),
            "gap": None if self.gap is None else er.to_json(self.gap),
            "lambda_star": None if self.lambda_star is None else list(self.lambda_star),
            "mode": self.mode,
            "holds": self.holds,
            "message": self.message,
            **self.extra,
        }


def simplex_duality(funcs: Sequence[PwlFunction], mode: str = "auto", tol: Optional[float] = None) -> DualityReport:
    """``inf max_k f_k = max_λ inf Σ λ_k f_k`` for convex ``f_k`` that are all proper or all lsc."""
    funcs = list(funcs)
    fmax = pwl.pointwise_max(funcs)
    hyp = {
        "convex": all(pwl.is_convex(g) for g in funcs),
        "all_proper": all(pwl.is_proper(g) for g in funcs),
        "all_lsc": all(pwl.is_lsc(g) for g in funcs),
        "dom_nonempty": bool(pwl.domain_components(fmax)),
    }
    if mode == "auto":
        mode = "lp" if hyp["all_proper"] and hyp["all_lsc"] else "grid"
    if mode not in ("lp", "grid"):
        raise ValueError(f"unknown mode {mode!r}")
    if tol is None:
        tol = 1e-9 if mode == "lp" else 1e-6
    primal = float(pwl.infimum(fmax)[0])
    extra = {}
    if mode == "lp":
        dual, lam = dual_value(funcs)
    else:
        dual, lam, cert = dual_value_grid(funcs)
        extra["certificate_gap"] = er.to_json(cert)
    dual = float(dual)
    ok = hyp["convex"] and hyp["dom_nonempty"] and (hyp["all_proper"] or hyp["all_lsc"])
    if math.isinf(primal) or math.isinf(dual):
        gap = 0.0 if primal == dual else INF
    else:
        gap = abs(primal - dual)
    if not ok:
        msg = "dom f is empty" if not hyp["dom_nonempty"] else "hypothesis failed"
        return DualityReport(hyp, primal, dual, lam, mode, gap, None, msg, extra)
    return DualityReport(hyp, primal, dual, lam, mode, gap, gap <= tol, "", extra)
