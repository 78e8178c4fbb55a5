"""Dense two-phase simplex method with Bland's anti-cycling rule.

Solves ``max c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq`` and
``x >= 0``.  The problems built elsewhere in the package have at most a few
dozen variables and a few hundred rows, so a dense tableau is plenty.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = ["LPResult", "linprog_max"]


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: Optional[np.ndarray]
    value: float


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    for i in range(T.shape[0]):
        if i != row and T[i, col] != 0.0:
            T[i] -= T[i, col] * T[row]


def _simplex(T, basis, cost, allowed, tol, max_iter):
    """Run primal simplex on tableau ``T`` (last column is the rhs).

    ``cost`` holds the objective coefficients (maximisation).  Returns
    ``"optimal"`` or ``"unbounded"``.
    """
    m = T.shape[0]
    for _ in range(max_iter):
        cb = cost[basis]
        reduced = cost[:-1] - cb @ T[:, :-1]
        entering = -1
        for j in np.flatnonzero(allowed):
            if reduced[j] > tol:
                entering = int(j)
                break
        if entering < 0:
            return "optimal"
        col = T[:, entering]
        best_ratio, leave = None, -1
        for i in range(m):
            if col[i] > tol:
                ratio = T[i, -1] / col[i]
                if (
                    best_ratio is None
                    or ratio < best_ratio - tol
                    or (abs(ratio - best_ratio) <= tol and basis[i] < basis[leave])
                ):
                    best_ratio, leave = ratio, i
        if leave < 0:
            return "unbounded"
        _pivot(T, leave, entering)
        basis[leave] = entering
    raise RuntimeError("simplex iteration limit reached")


def linprog_max(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, tol: float = 1e-10, max_iter: int = 50_000) -> LPResult:
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.atleast_2d(np.asarray(A_ub, dtype=float))
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).ravel()
    A_eq = np.zeros((0, n)) if A_eq is None else np.atleast_2d(np.asarray(A_eq, dtype=float))
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).ravel()
    m1, m2 = A_ub.shape[0], A_eq.shape[0]
    m = m1 + m2

    # columns: original | slacks | artificials | rhs
    needs_art = [b_ub[i] < 0 for i in range(m1)] + [True] * m2
    n_art = sum(needs_art)
    N = n + m1 + n_art
    T = np.zeros((m, N + 1))
    basis = np.zeros(m, dtype=int)
    art = n + m1
    for i in range(m1):
        sign = -1.0 if b_ub[i] < 0 else 1.0
        T[i, :n] = sign * A_ub[i]
        T[i, n + i] = sign
        T[i, -1] = sign * b_ub[i]
    for r in range(m2):
        i = m1 + r
        sign = -1.0 if b_eq[r] < 0 else 1.0
        T[i, :n] = sign * A_eq[r]
        T[i, -1] = sign * b_eq[r]
    for i in range(m):
        if needs_art[i]:
            T[i, art] = 1.0
            basis[i] = art
            art += 1
        else:
            basis[i] = n + i

    allowed = np.ones(N, dtype=bool)
    if n_art:
        cost1 = np.zeros(N + 1)
        cost1[n + m1 : N] = -1.0
        _simplex(T, basis, cost1, allowed, tol, max_iter)
        infeas = -cost1[basis] @ T[:, -1]
        if infeas > 1e-8 * max(1.0, np.abs(T[:, -1]).max(initial=0.0)):
            return LPResult("infeasible", None, float("nan"))
        # drive remaining artificials out of the basis
        keep_rows = []
        for i in range(m):
            if basis[i] >= n + m1:
                cands = np.flatnonzero(np.abs(T[i, : n + m1]) > 1e-9)
                if cands.size:
                    _pivot(T, i, int(cands[0]))
                    basis[i] = int(cands[0])
                    keep_rows.append(i)
            else:
                keep_rows.append(i)
        T = T[keep_rows]
        basis = basis[keep_rows]
        allowed[n + m1 :] = False

    cost2 = np.zeros(N + 1)
    cost2[:n] = c
    status = _simplex(T, basis, cost2, allowed, tol, max_iter)
    if status == "unbounded":
        return LPResult("unbounded", None, float("inf"))
    x = np.zeros(N)
    x[basis] = T[:, -1]
    x = np.maximum(x[:n], 0.0)
    return LPResult("optimal", x, float(c @ x))
