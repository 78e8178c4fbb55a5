"""Re-derive the bundled golden values with dense brute-force sampling.

Only pointwise evaluation of the stored functions is borrowed from the
package; every sup, inf, conjugate and envelope below is a plain numpy
reduction over a fine grid.
"""

import json
from importlib import resources

import numpy as np
import pytest

from relaxed_minimax.extreal import from_json
from relaxed_minimax.pwl import PwlFunction

Y = np.union1d(np.linspace(-20.0, 20.0, 40001), [-1.0, 0.0, 1.0, 2.0, 3.0])
LAMS = np.linspace(0.0, 1.0, 201)


def scenarios():
    data = json.loads((resources.files("relaxed_minimax") / "data" / "golden_suite.json").read_text())
    return {s["id"]: s for s in data["scenarios"]}


GOLDEN = scenarios()


def sample(d, ys=Y):
    f = PwlFunction.from_dict(d)
    return np.array([float(f(y)) for y in ys])


def scale(lam, vals):
    """``lam * vals`` with 0*inf = inf and 0*(-inf) = 0."""
    if lam > 0:
        return lam * vals
    return np.where(vals == np.inf, np.inf, 0.0)


def add(a, b):
    """Sum with inf + (-inf) = inf."""
    with np.errstate(invalid="ignore"):
        out = a + b
    return np.where(np.isnan(out), np.inf, out)


def combo(lam, f1, f2):
    return add(scale(lam, f1), scale(1.0 - lam, f2))


def window(restriction):
    lo, hi = restriction["lo"], restriction["hi"]
    return (Y >= lo) & (Y <= hi)


def test_golden_file_has_every_case():
    assert len(GOLDEN) == 12


@pytest.mark.parametrize("sid", ["conj-open-interval-indicator", "conj-abs"])
def test_conjugates(sid):
    p = GOLDEN[sid]["payload"]
    fv = sample(p["function"])
    expected = PwlFunction.from_dict(p["expected"]["conjugate"])
    for s in np.linspace(-3.0, 3.0, 25):
        brute = float(np.max(s * Y - fv))
        want = float(expected(s))
        if np.isinf(want):
            # an infinite value shows up as growth with the sampling window
            inner = np.abs(Y) <= 10.0
            assert brute > float(np.max(s * Y[inner] - fv[inner])) + 1.0
        else:
            # open domain ends are approached, never sampled: allow one grid step
            assert brute == pytest.approx(want, abs=1e-3 * abs(s) + 1e-9)


def test_maxrule_kink():
    p = GOLDEN["maxrule-kink"]["payload"]
    fmax = np.maximum(sample(p["generators"][0]), sample(p["generators"][1]))
    ok = [s for s in np.linspace(-2, 2, 81) if np.all(fmax >= s * Y - 1e-12)]
    assert (min(ok), max(ok)) == tuple(p["expected"]["lhs"])


def brute_rhs(f1, f2, mask=None):
    mask = np.ones_like(f1, dtype=bool) if mask is None else mask
    return max(float(np.min(combo(l, f1, f2)[mask])) for l in LAMS)


def test_mm1_open_domain():
    p = GOLDEN["mm1-open-domain"]["payload"]
    f1, f2 = (sample(g) for g in p["generators"])
    # no mixture attains its infimum over y at a point where the indicator
    # part is closed off, so the lower side is an empty supremum
    assert brute_rhs(f1, f2) == pytest.approx(from_json(p["expected"]["rhs"]), abs=2e-3)  # grid spacing
    assert from_json(p["expected"]["lhs"]) == -np.inf


def test_mm1_improper_member():
    p = GOLDEN["mm1-improper-member"]["payload"]
    f1, f2 = (sample(g) for g in p["generators"])
    assert brute_rhs(f1, f2) == from_json(p["expected"]["rhs"])
    # only the vertex putting all weight on the indicator qualifies
    assert float(np.min(f1)) == from_json(p["expected"]["lhs"])


@pytest.mark.parametrize("sid", ["mmb-convex-concave", "localized-shifted-window"])
def test_restricted_families(sid):
    p = GOLDEN[sid]["payload"]
    f1, f2 = (sample(g) for g in p["generators"])
    m = window(p["y_restriction"])
    lhs = float(np.min(np.maximum(f1, f2)[m]))
    rhs = brute_rhs(f1, f2, m)
    assert lhs == pytest.approx(from_json(p["expected"]["lhs"]), abs=1e-9)
    assert rhs == pytest.approx(from_json(p["expected"]["rhs"]), abs=1e-9)


@pytest.mark.parametrize("sid", ["duality-opposite-lines", "interior-opposite-lines"])
def test_opposite_lines(sid):
    p = GOLDEN[sid]["payload"]
    f1, f2 = (sample(g) for g in p["generators"])
    assert float(np.min(np.maximum(f1, f2))) == from_json(p["expected"]["lhs"])
    assert brute_rhs(f1, f2) == pytest.approx(from_json(p["expected"]["rhs"]), abs=1e-9)


def test_monotone_two_terms():
    p = GOLDEN["monotone-two-terms"]["payload"]
    t = [np.array(term["values"], dtype=float) for term in p["terms"]]
    psi = [np.minimum.reduce(t[i:]) for i in range(len(t))]
    assert float(np.min(np.maximum.reduce(psi))) == p["expected"]["lhs"]
    assert max(float(np.min(q)) for q in psi) == p["expected"]["rhs"]


def test_envelope_slope_two():
    p = GOLDEN["envelope-slope-two"]["payload"]
    fv = sample(p["function"])
    got = [float(np.min(fv + R * np.abs(Y - p["x0"]))) for R in p["radii"]]
    assert got == pytest.approx(p["expected"]["values"], abs=1e-9)


def test_marginal_two_kinks_is_convex():
    p = GOLDEN["marginal-two-kinks"]["payload"]
    f1, f2 = (sample(g) for g in p["generators"])
    s = np.linspace(-0.9, 0.9, 37)
    g = np.array([min(float(np.max(si * Y - combo(l, f1, f2))) for l in LAMS) for si in s])
    assert np.all(g[:-2] + g[2:] - 2.0 * g[1:-1] >= -1e-9)
