"""Minimax identities for sequences of functions on a finite grid.

On a finite set every function is continuous, so the closure in the general
statement is the identity and the identities become exact finite equalities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import extreal as er
from ..grid import GridFunction

__all__ = ["FunctionSequence", "MonotoneReport", "monotone_minimax", "tail_infima"]


@dataclass(frozen=True, eq=False)
class FunctionSequence:
    terms: tuple

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise ValueError("a sequence needs at least one term")
        ref = terms[0].axes
        for t in terms[1:]:
            if len(t.axes) != len(ref) or any(a.shape != b.shape or np.any(a != b) for a, b in zip(t.axes, ref)):
                raise ValueError("all terms must live on the same grid")
        object.__setattr__(self, "terms", terms)

    @property
    def stack(self) -> np.ndarray:
        return np.stack([t.values for t in self.terms])

    def is_nondecreasing(self) -> bool:
        s = self.stack
        return bool(np.all(s[1:] >= s[:-1]))

    def to_dict(self) -> dict:
        return {"terms": [t.to_dict() for t in self.terms]}

    @classmethod
    def from_dict(cls, d: dict) -> "FunctionSequence":
        return cls(tuple(GridFunction.from_dict(t) for t in d["terms"]))


def tail_infima(stack: np.ndarray) -> np.ndarray:
    """``ψ_i = min_{j >= i} φ_j`` for every ``i`` (reverse running minimum)."""
    return np.minimum.accumulate(stack[::-1], axis=0)[::-1]


def _sides(stack: np.ndarray):
    flat = stack.reshape(stack.shape[0], -1)
    lhs = er.fold_inf(flat.max(axis=0))  # min_x sup_i
    rhs = er.fold_sup(flat.min(axis=1))  # sup_i min_x
    return float(lhs), float(rhs)


@dataclass
class MonotoneReport:
    lhs: float
    rhs: float
    holds: bool
    nondecreasing: bool
    plain_lhs: float = None
    plain_rhs: float = None
    plain_holds: bool = None
    truncation_values: list = field(default_factory=list)
    truncation_monotone: bool = None

    def to_dict(self) -> dict:
        enc = lambda v: None if v is None else er.to_json(v)
        return {
            "theorem": "monotone",
            "lhs": enc(self.lhs),
            "rhs": enc(self.rhs),
            "holds": self.holds,
            "nondecreasing": self.nondecreasing,
            "plain_lhs": enc(self.plain_lhs),
            "plain_rhs": enc(self.plain_rhs),
            "plain_holds": self.plain_holds,
            "truncation_values": [enc(v) for v in self.truncation_values],
            "truncation_monotone": self.truncation_monotone,
        }


def monotone_minimax(seq: FunctionSequence) -> MonotoneReport:
    phi = seq.stack
    lhs, rhs = _sides(tail_infima(phi))
    report = MonotoneReport(lhs, rhs, lhs == rhs, seq.is_nondecreasing())
    # value of the identity for every truncation φ_1..φ_L
    trace = [_sides(tail_infima(phi[:L]))[1] for L in range(1, phi.shape[0] + 1)]
    report.truncation_values = trace
    if report.nondecreasing:
        plhs, prhs = _sides(phi)
        report.plain_lhs, report.plain_rhs = plhs, prhs
        report.plain_holds = plhs == prhs
        report.truncation_monotone = all(a <= b for a, b in zip(trace, trace[1:]))
    return report
