"""The marginal function ``g(s) = inf_λ (f(λ, ·))*(s)`` is convex.

The check tabulates ``g`` on a dual grid as the minimum of exact conjugates
over a λ-mesh and runs the discrete midpoint test.  The mesh minimum only
bounds ``g`` from above, so if the test fails the offending nodes are replaced
by the exact value ``g(s) = -max_λ inf_y (f(λ, y) - s y)``, computed with the
dual linear program on the tilted family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .. import extreal as er
from .. import pwl
from ..conjugate import conjugate
from ..grid import GridFunction, grid_convexity_check
from ..subdiff import simplex_mesh
from .duality import dual_value
from .family import BifunctionFamily

__all__ = ["MarginalReport", "marginal_check", "marginal_exact"]


@dataclass
class MarginalReport:
    convex: bool
    refined: bool
    mesh_convex: bool
    dual_axis: list
    values: list
    mesh_size: int
    lsc_note: str = "lsc is automatic on a finite grid"
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "theorem": "marginal",
            "holds": self.convex,
            "mesh_convex": self.mesh_convex,
            "refined": self.refined,
            "mesh_size": self.mesh_size,
            "dual_axis": self.dual_axis,
            "values": [er.to_json(v) for v in self.values],
            "note": self.lsc_note,
        }


def marginal_exact(fam: BifunctionFamily, s: float) -> float:
    tilted = [pwl.add_functions(g, pwl.affine(-s, 0.0)) for g in fam.generators]
    val, _ = dual_value(tilted)
    return -float(val)


def marginal_check(
    fam: BifunctionFamily,
    dual_axis: Optional[Sequence[float]] = None,
    density: int = 8,
    tol: float = 1e-9,
) -> MarginalReport:
    if dual_axis is None:
        dual_axis = np.linspace(-6.0, 6.0, 49)
    axis = np.asarray(sorted(float(s) for s in dual_axis))
    mesh = simplex_mesh(fam.n, density)
    g = np.full(axis.size, np.inf)
    for lam in mesh:
        conj = conjugate(fam.section(lam))
        g = np.minimum(g, [float(conj(s)) for s in axis])
    mesh_ok = grid_convexity_check(GridFunction((axis,), g), tol)
    refined = False
    if not mesh_ok:
        g = np.array([marginal_exact(fam, s) for s in axis])
        refined = True
    ok = mesh_ok or grid_convexity_check(GridFunction((axis,), g), tol)
    return MarginalReport(ok, refined, mesh_ok, axis.tolist(), g.tolist(), len(mesh))
