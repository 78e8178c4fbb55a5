"""Write the golden suite shipped with the package.

Expected values are closed-form results worked out by hand for small
examples; ``tests/test_golden.py`` re-derives them with brute-force grid
oracles, independently of the exact code paths.
"""

import json
from pathlib import Path

from relaxed_minimax import pwl
from relaxed_minimax.extreal import INF, NINF
from relaxed_minimax.grid import GridFunction
from relaxed_minimax.harness.scenarios import dump_json, parse_suite

OUT = Path(__file__).resolve().parents[1] / "src" / "relaxed_minimax" / "data" / "golden_suite.json"

y = pwl.affine(1.0, 0.0)
neg_y = pwl.affine(-1.0, 0.0)
absx = pwl.abs_shift(0.0)


def fam(gens, b=None):
    return {"generators": [g.to_dict() for g in gens], "y_restriction": b}


scenarios = [
    {
        "id": "conj-open-interval-indicator",
        "kind": "conjugacy",
        "payload": {
            "function": pwl.indicator(0.0, 1.0, False, False).to_dict(),
            "checks": ["biconjugate", "hull_conjugate", "hull_infimum"],
            # sup over (0, 1) of s*x
            "expected": {"conjugate": pwl.from_points([0.0], [0.0], 0.0, 1.0).to_dict()},
        },
    },
    {
        "id": "conj-abs",
        "kind": "conjugacy",
        "payload": {
            "function": absx.to_dict(),
            "checks": ["biconjugate", "oracle"],
            "expected": {"conjugate": pwl.indicator(-1.0, 1.0).to_dict()},
        },
    },
    {
        "id": "maxrule-kink",
        "kind": "subdiff",
        "payload": {
            "generators": [y.to_dict(), neg_y.to_dict()],
            "x": 0.0,
            "eps": 0.0,
            "oracle": True,
            "expected": {"lhs": [-1.0, 1.0]},
        },
    },
    {
        "id": "mm1-open-domain",
        "kind": "mm1",
        # no mixture is lsc, so A0 is empty; every mixture has infimum 0 on (0, 1]
        "payload": {**fam([pwl.indicator(0.0, 1.0, False, True), y]), "expected": {"lhs": "-inf", "rhs": 0.0}},
    },
    {
        "id": "mm1-improper-member",
        "kind": "mm1",
        # only the vertex (1, 0) is in A0
        "payload": {
            **fam([pwl.indicator(0.0, 1.0), pwl.constant(NINF)]),
            "expected": {"lhs": 0.0, "rhs": 0.0},
        },
    },
    {
        "id": "mmb-convex-concave",
        "kind": "mmb",
        # (l1 - l2)|y - 1| is convex iff l1 >= l2
        "payload": {
            **fam(
                [
                    pwl.add_functions(pwl.abs_shift(1.0), pwl.indicator(-1.0, 3.0)),
                    pwl.add_functions(pwl.abs_shift(1.0, -1.0), pwl.indicator(-1.0, 3.0)),
                ],
                {"lo": 0.0, "hi": 2.0, "lo_closed": True, "hi_closed": True},
            ),
            "expected": {"lhs": 0.0, "rhs": 0.0},
        },
    },
    {
        "id": "localized-shifted-window",
        "kind": "localized",
        # inf over [1, 3] of |y| is 1; max over l of inf over [1, 3] of (l1 - l2) y is 1
        "payload": {
            **fam([y, neg_y], {"lo": 1.0, "hi": 3.0, "lo_closed": True, "hi_closed": True}),
            "expected": {"lhs": 1.0, "rhs": 1.0},
        },
    },
    {
        "id": "duality-opposite-lines",
        "kind": "simplex_duality",
        "payload": {"generators": [y.to_dict(), neg_y.to_dict()], "mode": "lp", "expected": {"lhs": 0.0, "rhs": 0.0}},
    },
    {
        "id": "interior-opposite-lines",
        "kind": "interior_equality",
        "payload": {**fam([y, neg_y]), "expected": {"lhs": 0.0, "rhs": 0.0}},
    },
    {
        "id": "monotone-two-terms",
        "kind": "monotone",
        "payload": {
            "terms": [
                GridFunction((([0.0, 1.0]),), [0.0, 1.0]).to_dict(),
                GridFunction((([0.0, 1.0]),), [1.0, 1.0]).to_dict(),
            ],
            "expected": {"lhs": 1.0, "rhs": 1.0},
        },
    },
    {
        "id": "envelope-slope-two",
        "kind": "envelope",
        # minimise R(1 - x) + 2x over [0, 1]: R below 2, then 2
        "payload": {
            "function": pwl.add_functions(pwl.affine(2.0, 0.0), pwl.indicator(0.0, 1.0)).to_dict(),
            "x0": 1.0,
            "radii": [1.0, 1.5, 2.0, 3.0, 10.0],
            "expected": {"values": [1.0, 1.5, 2.0, 2.0, 2.0]},
        },
    },
    {
        "id": "marginal-two-kinks",
        "kind": "marginal",
        "payload": fam([pwl.abs_shift(0.0), pwl.abs_shift(1.0)]),
    },
]

if __name__ == "__main__":
    doc = {"suite": "golden", "scenarios": scenarios}
    text = dump_json(doc)
    parse_suite(json.loads(text))
    OUT.write_text(text, encoding="utf-8")
    print(f"wrote {len(scenarios)} scenarios to {OUT}")
