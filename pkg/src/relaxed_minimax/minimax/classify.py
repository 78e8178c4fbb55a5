"""Which simplex weights make ``f(λ, ·)`` convex (A₁) or a member of Γ₀ (A₀).

Three strategies, chosen automatically:

``faces``
    All generators convex.  Every mixture then has domain ``D = ∩ dom g_k``;
    properness depends only on the support of ``λ`` and every jump sits at an
    endpoint of ``D`` with a nonnegative size, so lower semicontinuity is
    decided by the support too.  Membership is therefore constant on the
    relative interior of each face and one barycenter per face decides it.

``polytope``
    Proper generators, at most four of them.  Convexity and lsc of
    ``Σ λ_k g_k + I_D`` are homogeneous linear conditions on ``λ``
    (continuity, slope increase, jump signs), so the member set is a polytope
    whose vertices are enumerated directly.

``sampled``
    Everything else: a barycentric mesh of Δₙ.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .. import pwl
from ..extreal import INF, NINF
from ..subdiff import simplex_mesh
from .family import BifunctionFamily

__all__ = ["Classification", "classify", "classify_A0", "classify_A1", "linear_conditions"]

_EXACT_MAX_N = 4


@dataclass
class Classification:
    subset: str  # "A0" or "A1"
    mode: str  # "faces", "polytope" or "sampled"
    n: int
    mesh_members: list
    mesh_size: int
    faces: dict = field(default_factory=dict)  # support tuple -> member?
    vertices: list = field(default_factory=list)

    @property
    def empty(self) -> bool:
        if self.mode == "faces":
            return not any(self.faces.values())
        if self.mode == "polytope":
            return not self.vertices
        return not self.mesh_members

    @property
    def is_whole_simplex(self) -> bool:
        if self.mode == "faces":
            return all(self.faces.values())
        if self.mode == "polytope":
            corners = {tuple(float(k == j) for k in range(self.n)) for j in range(self.n)}
            have = {tuple(round(v, 9) for v in p) for p in self.vertices}
            return corners <= have
        return len(self.mesh_members) == self.mesh_size

    @property
    def size(self) -> int:
        if self.mode == "faces":
            return sum(self.faces.values())
        if self.mode == "polytope":
            return len(self.vertices)
        return len(self.mesh_members)

    def to_dict(self) -> dict:
        return {
            "subset": self.subset,
            "mode": self.mode,
            "size": self.size,
            "empty": self.empty,
            "whole_simplex": self.is_whole_simplex,
            "member_faces": [list(s) for s, ok in self.faces.items() if ok],
            "vertices": [list(v) for v in self.vertices],
            "mesh_members": len(self.mesh_members),
            "mesh_size": self.mesh_size,
        }


def _predicate(subset: str):
    if subset == "A0":
        return pwl.is_gamma0
    if subset == "A1":
        return pwl.is_convex
    raise ValueError(f"unknown subset {subset!r}")


def _barycenter(support, n):
    return tuple(1.0 / len(support) if k in support else 0.0 for k in range(n))


def _has_ninf(g) -> bool:
    return any(v == NINF for v in g.values) or any(p.value == NINF for p in g.pieces)


def linear_conditions(gens, restriction=None, subset: str = "A1"):
    """Homogeneous linear conditions on ``λ`` for membership, for proper generators.

    Returns ``(equalities, inequalities)`` as lists of coefficient vectors
    (``a·λ = 0`` and ``a·λ >= 0``), or ``None`` when the member set is empty
    whatever ``λ`` is.
    """
    n = len(gens)
    allf = list(gens) + ([restriction] if restriction is not None else [])
    M = pwl.merged_breakpoints(allf)
    pts_in = [all(pwl.value_near(g, x) < INF for g in allf) for x in M]
    regs = list(pwl.regions(M))
    reg_in = [all(pwl.line_on(g, lo, hi).value < INF for g in allf) for lo, hi in regs]
    # D as an alternating sequence of regions and points
    seq = [reg_in[0]]
    for i in range(len(M)):
        seq += [pts_in[i], reg_in[i + 1]]
    runs, in_run = 0, False
    for flag in seq:
        if flag and not in_run:
            runs += 1
        in_run = flag
    if runs == 0:
        # f(λ, ·) ≡ +inf: convex but never proper
        return None if subset == "A0" else ([], [])
    if runs > 1:
        return None
    eqs, ineqs = [], []

    def vec(fn):
        return [fn(g) for g in gens]

    for i, x in enumerate(M):
        left_in, right_in = reg_in[i], reg_in[i + 1]
        lo_l, hi_l = regs[i]
        lo_r, hi_r = regs[i + 1]
        lim_l = vec(lambda g: pwl.line_on(g, lo_l, hi_l).at(hi_l if lo_l is None else lo_l, x))
        lim_r = vec(lambda g: pwl.line_on(g, lo_r, hi_r).value)
        slope_l = vec(lambda g: pwl.line_on(g, lo_l, hi_l).slope)
        slope_r = vec(lambda g: pwl.line_on(g, lo_r, hi_r).slope)
        if not pts_in[i]:
            if subset == "A0" and (left_in or right_in):
                return None  # finite limit next to a +inf value: never lsc
            continue
        val = vec(lambda g: pwl.value_near(g, x))
        if left_in and right_in:
            eqs.append([v - a for v, a in zip(val, lim_l)])
            eqs.append([v - a for v, a in zip(val, lim_r)])
            ineqs.append([b - a for a, b in zip(slope_l, slope_r)])
        elif right_in:
            ineqs.append([v - a for v, a in zip(val, lim_r)])
            if subset == "A0":
                ineqs.append([a - v for v, a in zip(val, lim_r)])
        elif left_in:
            ineqs.append([v - a for v, a in zip(val, lim_l)])
            if subset == "A0":
                ineqs.append([a - v for v, a in zip(val, lim_l)])
    return eqs, ineqs


def _normalise(rows):
    out = []
    for r in rows:
        r = np.asarray(r, dtype=float)
        scale = np.abs(r).max()
        if scale <= 1e-12:
            continue
        r = r / scale
        if not any(np.allclose(r, q, atol=1e-12) for q in out):
            out.append(r)
    return out


def enumerate_vertices(n: int, eqs, ineqs, tol: float = 1e-9) -> list:
    """Vertices of ``{λ ∈ Δₙ : a·λ = 0 (eqs), a·λ >= 0 (ineqs)}``."""
    E = _normalise(eqs)
    eq_rows = [np.ones(n)] + [np.asarray(e) for e in E]
    eq_rhs = [1.0] + [0.0] * len(E)
    ineq_rows = [np.eye(n)[k] for k in range(n)] + _normalise(ineqs)
    Ea = np.array(eq_rows)
    r = np.linalg.matrix_rank(Ea, tol=1e-10)
    need = n - r
    verts: list = []
    for combo in itertools.combinations(range(len(ineq_rows)), need):
        A = np.vstack([Ea] + [ineq_rows[i] for i in combo]) if combo else Ea
        b = np.array(eq_rhs + [0.0] * len(combo))
        if np.linalg.matrix_rank(A, tol=1e-10) < n:
            continue
        lam, *_ = np.linalg.lstsq(A, b, rcond=None)
        if np.abs(A @ lam - b).max() > 1e-8:
            continue
        if any(row @ lam < -tol for row in ineq_rows):
            continue
        if np.abs(Ea @ lam - np.array(eq_rhs)).max() > 1e-8:
            continue
        lam = np.clip(lam, 0.0, None)
        lam /= lam.sum()
        key = tuple(np.round(lam, 9))
        if not any(np.allclose(key, v, atol=1e-9) for v in verts):
            verts.append(key)
    return sorted(tuple(float(v) for v in p) for p in verts)


def classify(fam: BifunctionFamily, subset: str, density: int = 8, restricted: Optional[bool] = None) -> Classification:
    """Classify ``Δₙ`` into members and non-members.

    ``restricted`` adds the indicator of ``B`` before testing (the localized
    A₀); by default it is on for A₀ and off for A₁, matching the definitions.
    """
    pred = _predicate(subset)
    n = fam.n
    if restricted is None:
        restricted = subset == "A0"
    mesh = simplex_mesh(n, density)
    members = [lam for lam in mesh if pred(fam.section(lam, restricted))]
    gens = list(fam.generators)
    restriction = fam.restriction_indicator() if restricted else None
    if all(pwl.is_convex(g) for g in gens):
        faces = {}
        for r in range(1, n + 1):
            for support in itertools.combinations(range(n), r):
                faces[support] = bool(pred(fam.section(_barycenter(support, n), restricted)))
        return Classification(subset, "faces", n, members, len(mesh), faces=faces)
    if n <= _EXACT_MAX_N and not any(_has_ninf(g) for g in gens):
        cond = linear_conditions(gens, restriction, subset)
        verts = [] if cond is None else enumerate_vertices(n, *cond)
        return Classification(subset, "polytope", n, members, len(mesh), vertices=verts)
    return Classification(subset, "sampled", n, members, len(mesh))


def classify_A0(fam: BifunctionFamily, density: int = 8) -> Classification:
    return classify(fam, "A0", density)


def classify_A1(fam: BifunctionFamily, density: int = 8) -> Classification:
    return classify(fam, "A1", density)
