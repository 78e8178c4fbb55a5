"""Both sides of the relaxed minimax inequalities, and the verifiers built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .. import extreal as er
from .. import pwl
from ..extreal import INF, NINF, ExtReal
from ..pwl import PwlFunction
from .classify import Classification, classify
from .duality import dual_value, dual_value_grid
from .family import BifunctionFamily

__all__ = [
    "MinimaxReport",
    "face_sup",
    "lhs_value",
    "rhs_value",
    "verify_mm1",
    "verify_mmb",
    "verify_localized",
    "interior_equality",
]


@dataclass
class MinimaxReport:
    theorem: str
    hypotheses: dict
    lhs: float
    rhs: float
    subset_size: int
    lambda_star: Optional[tuple]
    mode: str
    holds: Optional[bool]
    message: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def gap(self) -> float:
        """``rhs - lhs`` (the inequality asks for ``gap >= -tol``)."""
        if self.lhs == self.rhs:
            return 0.0
        if self.lhs == NINF or self.rhs == INF:
            return INF
        if self.lhs == INF or self.rhs == NINF:
            return NINF
        return self.rhs - self.lhs

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "hypotheses": self.hypotheses,
            "lhs": er.to_json(self.lhs),
            "rhs": er.to_json(self.rhs),
            "gap": er.to_json(self.gap),
            "subset_size": self.subset_size,
            "lambda_star": None if self.lambda_star is None else list(self.lambda_star),
            "mode": self.mode,
            "holds": self.holds,
            "message": self.message,
            **self.extra,
        }


def face_sup(gens, support, restriction: Optional[PwlFunction] = None) -> PwlFunction:
    """``y -> sup`` of ``f(λ, y)`` over the relative interior of the face spanned by ``support``.

    Off the common domain this is ``+inf``; where a supported generator is
    ``-inf`` it is ``-inf``; elsewhere it is the largest supported generator.
    """
    allf = list(gens) + ([restriction] if restriction is not None else [])
    sup = list(support)

    def point_op(vals):
        if any(v == INF for v in vals):
            return INF
        chosen = [vals[k] for k in sup]
        return NINF if any(v == NINF for v in chosen) else max(chosen)

    def line_op(lines, dt):
        if any(p.value == INF for p in lines):
            return pwl.Piece(INF, 0.0)
        chosen = [lines[k] for k in sup]
        if any(p.value == NINF for p in chosen):
            return pwl.Piece(NINF, 0.0)
        return max(chosen, key=lambda p: (p.value + p.slope * dt, p.slope))

    return pwl.combine(allf, point_op, line_op, crossings=True)


def lhs_value(
    fam: BifunctionFamily,
    cls: Optional[Classification],
    restricted: bool = False,
) -> ExtReal:
    """``inf_y sup_{λ ∈ subset} f(λ, y)``; ``cls=None`` means the whole simplex.

    With ``restricted`` the infimum runs over ``y ∈ B`` only.
    """
    gens = list(fam.generators)
    restriction = fam.restriction_indicator() if restricted else None
    if cls is None:
        top = pwl.pointwise_max(gens)
        if restriction is not None:
            top = pwl.add_functions(top, restriction)
        return pwl.infimum(top)[0]
    if cls.empty:
        return ExtReal(NINF)
    if cls.mode == "faces":
        parts = [face_sup(gens, s, restriction) for s, ok in cls.faces.items() if ok]
    else:
        pts = cls.vertices if cls.mode == "polytope" else cls.mesh_members
        parts = [fam.section(lam, restricted) for lam in pts]
    return pwl.infimum(_incremental_max(parts))[0]


def _incremental_max(parts):
    acc = parts[0]
    for p in parts[1:]:
        acc = pwl.pointwise_max([acc, p])
    return acc


def rhs_value(fam: BifunctionFamily, restricted: bool = False, mode: str = "exact"):
    """``max_λ inf_y f(λ, y)`` and a maximiser."""
    restriction = fam.restriction_indicator() if restricted else None
    if mode == "exact":
        return dual_value(list(fam.generators), restriction)
    if mode == "grid":
        val, lam, _ = dual_value_grid(list(fam.generators), restriction)
        return val, lam
    raise ValueError(f"unknown mode {mode!r}")


def _compare(lhs: float, rhs: float, tol: float) -> bool:
    if lhs == NINF or rhs == INF:
        return True
    if lhs == INF or rhs == NINF:
        return False
    return lhs <= rhs + tol


def _common_domain_empty(gens, restriction=None) -> bool:
    allf = list(gens) + ([restriction] if restriction is not None else [])
    return not pwl.domain_components(pwl.weighted_sum([1.0] * len(allf), allf))


def verify_mm1(fam: BifunctionFamily, tol: float = 1e-9, density: int = 8, restricted: bool = False) -> MinimaxReport:
    """``inf_y sup_{A₀} f <= max_A inf_y f``."""
    cls = classify(fam, "A0", density, restricted=restricted)
    lhs = float(lhs_value(fam, cls, restricted))
    rhs, lam = rhs_value(fam, restricted)
    rhs = float(rhs)
    restriction = fam.restriction_indicator() if restricted else None
    # sup over the whole simplex is +inf at every y exactly when the common domain is empty
    sup_infinite = _common_domain_empty(fam.generators, restriction)
    hyp = {
        "A0_empty": cls.empty,
        "A0_whole_simplex": cls.is_whole_simplex,
        "sup_identically_inf": sup_infinite,
    }
    holds = _compare(lhs, rhs, tol)
    if sup_infinite:
        holds = holds and rhs == INF
    name = "localized" if restricted else "mm1"
    return MinimaxReport(name, hyp, lhs, rhs, cls.size, lam, cls.mode, holds, extra={"classification": cls.to_dict()})


def verify_localized(fam: BifunctionFamily, tol: float = 1e-9, density: int = 8) -> MinimaxReport:
    """The localized version: A₀ uses ``f + I_B`` and both sides run over ``y ∈ B``."""
    if fam.y_restriction is None:
        raise ValueError("the localized check needs a y restriction")
    return verify_mm1(fam, tol, density, restricted=True)


def finite_on_product(fam: BifunctionFamily) -> bool:
    """Is ``f`` finite on ``Δₙ × B``?  Equivalently every generator is finite on ``B``."""
    ind = fam.restriction_indicator() or pwl.constant(0.0)
    target = pwl.domain_components(ind)
    for g in fam.generators:
        h = pwl.add_functions(g, ind)
        if any(v == NINF for v in h.values) or any(p.value == NINF for p in h.pieces):
            return False
        if pwl.domain_components(h) != target:
            return False
    return True


def verify_mmb(fam: BifunctionFamily, tol: float = 1e-9, density: int = 8) -> MinimaxReport:
    """``inf_{y∈B} sup_{A₁} f <= max_A inf_{y∈B} f`` when ``f`` is finite on ``Δₙ × B``."""
    finite = finite_on_product(fam)
    cls = classify(fam, "A1", density, restricted=False)
    restricted = fam.y_restriction is not None
    lhs = float(lhs_value(fam, cls, restricted))
    rhs, lam = rhs_value(fam, restricted)
    rhs = float(rhs)
    hyp = {"finite_on_AxB": finite, "A1_empty": cls.empty, "A1_whole_simplex": cls.is_whole_simplex}
    holds = _compare(lhs, rhs, tol) if finite else None
    msg = "" if finite else "hypothesis failed: f is not finite on the product"
    return MinimaxReport("mmb", hyp, lhs, rhs, cls.size, lam, cls.mode, holds, msg, {"classification": cls.to_dict()})


def interior_equality(fam: BifunctionFamily, tol: float = 1e-9, density: int = 8) -> MinimaxReport:
    """Full minimax equality when mixtures with full support are in Γ₀ and never ``-inf``."""
    gens = list(fam.generators)
    restricted = fam.y_restriction is not None
    restriction = fam.restriction_indicator() if restricted else None
    n = fam.n
    # some interior λ has f(λ, y) > -inf, i.e. no generator is -inf inside the common domain
    allf = gens + ([restriction] if restriction is not None else [])
    total = pwl.weighted_sum([1.0] * len(allf), allf)
    cond_finite = not (any(v == NINF for v in total.values) or any(p.value == NINF for p in total.pieces))
    # interior points belong to A₀
    cls = classify(fam, "A0", density, restricted=restricted)
    if cls.mode == "faces":
        cond_interior = cls.faces[tuple(range(n))]
    elif cls.mode == "polytope":
        cond_interior = cls.is_whole_simplex
    else:
        interior = [lam for lam in cls.mesh_members if min(lam) > 0]
        total_interior = sum(1 for lam in _interior_mesh(n, density))
        cond_interior = len(interior) == total_interior
    lhs = float(lhs_value(fam, None, restricted))
    rhs, lam = rhs_value(fam, restricted)
    rhs = float(rhs)
    hyp = {"finite_somewhere_inside": cond_finite, "interior_gamma0": bool(cond_interior)}
    if not (cond_finite and cond_interior):
        failed = [k for k, v in hyp.items() if not v]
        return MinimaxReport("interior_equality", hyp, lhs, rhs, cls.size, lam, cls.mode, None, "hypothesis failed: " + ", ".join(failed))
    if math.isinf(lhs) or math.isinf(rhs):
        holds = lhs == rhs
    else:
        holds = abs(lhs - rhs) <= tol * max(1.0, abs(lhs))
    return MinimaxReport("interior_equality", hyp, lhs, rhs, cls.size, lam, cls.mode, holds)


def _interior_mesh(n, density):
    from ..subdiff import simplex_mesh

    return [lam for lam in simplex_mesh(n, density) if min(lam) > 0]
