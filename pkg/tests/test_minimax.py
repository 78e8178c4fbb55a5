import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from relaxed_minimax import pwl
from relaxed_minimax.extreal import INF, NINF
from relaxed_minimax.grid import GridFunction
from relaxed_minimax.harness import generators as gen
from relaxed_minimax.minimax import (
    BifunctionFamily,
    BifunctionGrid,
    FunctionSequence,
    SimplexPoint,
    classify,
    classify_A0,
    classify_A1,
    dual_value,
    dual_value_grid,
    interior_equality,
    lhs_value,
    marginal_check,
    monotone_minimax,
    rhs_value,
    simplex_duality,
    verify_localized,
    verify_mm1,
    verify_mmb,
)
from relaxed_minimax.pwl import Interval

from conftest import seeds

y = pwl.affine(1.0, 0.0)
neg_y = pwl.affine(-1.0, 0.0)
unit = pwl.indicator(0.0, 1.0)
minus = pwl.constant(NINF)


def test_simplex_point_validation():
    assert SimplexPoint((0.25, 0.75)).support == (0, 1)
    with pytest.raises(ValueError):
        SimplexPoint((0.5, 0.6))
    with pytest.raises(ValueError):
        SimplexPoint((-0.1, 1.1))
    assert SimplexPoint.clean((1e-17, -1e-15, 2.0)).weights == (pytest.approx(0.0), 0.0, 1.0)


def test_family_round_trip():
    fam = BifunctionFamily((unit, y), Interval(0.0, 2.0, True, False))
    back = BifunctionFamily.from_dict(fam.to_dict())
    assert back.y_restriction == fam.y_restriction
    assert back.value((0.5, 0.5), 0.5) == pytest.approx(0.25)
    assert fam.value((1.0, 0.0), 2.0) == INF


def test_classification_examples():
    assert classify_A1(BifunctionFamily((y, neg_y, pwl.abs_shift(0.0)))).is_whole_simplex
    assert classify_A1(BifunctionFamily((unit, minus))).is_whole_simplex
    a0 = classify_A0(BifunctionFamily((unit, minus)))
    assert a0.faces == {(0,): True, (1,): False, (0, 1): False}
    assert classify_A0(BifunctionFamily((pwl.indicator(0.0, 1.0, False, True), y))).empty


def test_grid_mode_drops_nonconvex_rows():
    fam = BifunctionFamily((pwl.abs_shift(0.0), pwl.abs_shift(0.0, -1.0)))
    grid = BifunctionGrid.from_family(fam, [(1.0, 0.0), (0.0, 1.0), (0.5, 0.5)], np.linspace(-2, 2, 9))
    assert grid.member_rows() == [0, 2]


def test_polytope_classification_for_nonconvex_generators():
    # (l1 - l2)|y| is convex exactly when l1 >= l2
    fam = BifunctionFamily((pwl.abs_shift(0.0), pwl.abs_shift(0.0, -1.0)))
    cls = classify_A1(fam)
    assert cls.mode == "polytope"
    assert cls.vertices == [(0.5, 0.5), (1.0, 0.0)]


def test_lhs_and_rhs_examples():
    fam = BifunctionFamily((y, neg_y))
    val, lam = rhs_value(fam)
    assert val == 0.0 and lam == pytest.approx((0.5, 0.5))
    assert lhs_value(fam, None) == 0.0
    fam2 = BifunctionFamily((unit, minus))
    assert lhs_value(fam2, classify_A0(fam2)) == 0.0
    empty = classify_A0(BifunctionFamily((pwl.indicator(0.0, 1.0, False, True), y)))
    assert lhs_value(fam2, empty) == NINF


def test_duality_examples_in_both_modes():
    for funcs in ([y, neg_y], [unit, minus], [pwl.abs_shift(1.0), pwl.abs_shift(-1.0)]):
        for mode in ("lp", "grid"):
            rep = simplex_duality(funcs, mode)
            assert rep.holds, (funcs, mode, rep)
    rep = simplex_duality([pwl.indicator(0.0, 1.0), pwl.indicator(2.0, 3.0)])
    assert rep.holds is None and rep.message == "dom f is empty"


def test_mm1_open_domain_example():
    rep = verify_mm1(BifunctionFamily((pwl.indicator(0.0, 1.0, False, True), y)))
    assert rep.hypotheses["A0_empty"] and rep.lhs == NINF and rep.rhs == 0.0 and rep.holds


def test_mm1_disjoint_domains_force_infinite_rhs():
    rep = verify_mm1(BifunctionFamily((pwl.indicator(0.0, 1.0), pwl.indicator(2.0, 3.0))))
    assert rep.hypotheses["sup_identically_inf"] and rep.rhs == INF and rep.holds


def test_mmb_reports_failed_hypothesis():
    fam = BifunctionFamily((pwl.indicator(0.5, INF), y), Interval(0.0, 1.0, True, True))
    rep = verify_mmb(fam)
    assert rep.holds is None and rep.message.startswith("hypothesis failed")


def test_localized_example():
    fam = BifunctionFamily((y, neg_y), Interval(1.0, 3.0, True, True))
    rep = verify_localized(fam)
    assert rep.lhs == 1.0 and rep.rhs == 1.0 and rep.holds
    with pytest.raises(ValueError):
        verify_localized(BifunctionFamily((y, neg_y)))


def test_interior_equality_examples():
    rep = interior_equality(BifunctionFamily((unit, minus)))
    assert rep.holds is None and not rep.hypotheses["finite_somewhere_inside"]
    rep = interior_equality(BifunctionFamily((y, neg_y)))
    assert rep.holds and rep.lhs == rep.rhs == 0.0


def test_monotone_examples():
    ax = (np.array([0.0, 1.0]),)
    seq = FunctionSequence((GridFunction(ax, np.array([0.0, 1.0])), GridFunction(ax, np.array([1.0, 1.0]))))
    rep = monotone_minimax(seq)
    assert rep.lhs == rep.rhs == 1.0 and rep.plain_holds
    seq = FunctionSequence((GridFunction(ax, np.array([3.0, 0.0])), GridFunction(ax, np.array([0.0, 3.0]))))
    rep = monotone_minimax(seq)
    assert rep.holds and rep.lhs == 0.0 and not rep.nondecreasing


def brute_sides(stack):
    """Direct loops over the definitions, for comparison with the vectorised code."""
    L = len(stack)
    flat = [np.ravel(t) for t in stack]
    psi = [[min(flat[j][p] for j in range(i, L)) for p in range(flat[0].size)] for i in range(L)]
    lhs = min(max(psi[i][p] for i in range(L)) for p in range(flat[0].size))
    rhs = max(min(psi[i]) for i in range(L))
    return lhs, rhs


@given(seeds)
def test_monotone_identities_match_brute_force(seed):
    sc = gen.generate("monotone", seed % 10_000)
    seq = FunctionSequence.from_dict(sc["payload"])
    rep = monotone_minimax(seq)
    lhs, rhs = brute_sides([t.values for t in seq.terms])
    assert (rep.lhs, rep.rhs) == (lhs, rhs) and rep.holds


def test_marginal_examples():
    assert marginal_check(BifunctionFamily((y, neg_y))).convex
    assert marginal_check(BifunctionFamily((pwl.abs_shift(0.0), pwl.abs_shift(1.0)))).convex


def scipy_inf_of_max(funcs):
    """``inf_y max_k f_k(y)`` for Γ₀ generators via an epigraph LP in (y, t)."""
    A, b = [], []
    lo, hi = -np.inf, np.inf
    for f in funcs:
        c = pwl.domain_components(f)[0]
        lo, hi = max(lo, c.lo), min(hi, c.hi)
        for j, p in enumerate(f.pieces):
            if not p.finite:
                continue
            anchor = f.anchor(j)
            # t >= p.value + p.slope * (y - anchor)
            A.append([p.slope, -1.0])
            b.append(p.slope * anchor - p.value)
    if lo > hi:
        return INF
    res = linprog([0.0, 1.0], A_ub=A, b_ub=b, bounds=[(None if math.isinf(lo) else lo, None if math.isinf(hi) else hi), (None, None)], method="highs", options={"presolve": False})
    if res.status == 3:
        return NINF
    assert res.status == 0
    return res.fun


@settings(max_examples=40)
@given(seeds, st.integers(2, 5))
def test_strong_duality_against_scipy(seed, n):
    rng = np.random.default_rng(seed)
    funcs = [gen.random_convex(rng) for _ in range(n)]
    primal = scipy_inf_of_max(funcs)
    dual, lam = dual_value(funcs)
    if math.isinf(primal):
        assert dual == primal
    else:
        assert dual == pytest.approx(primal, abs=1e-7)
        assert sum(lam) == pytest.approx(1.0)


@settings(max_examples=30)
@given(seeds)
def test_weak_duality_for_arbitrary_generators(seed):
    rng = np.random.default_rng(seed)
    funcs = [gen.random_general(rng) for _ in range(3)]
    primal = pwl.infimum(pwl.pointwise_max(funcs))[0]
    dual, _ = dual_value(funcs)
    assert dual <= primal + 1e-9


@settings(max_examples=15)
@given(seeds)
def test_grid_mode_agrees_with_exact_dual(seed):
    rng = np.random.default_rng(seed)
    funcs = [gen.random_convex(rng) for _ in range(3)]
    exact, _ = dual_value(funcs)
    approx, _, cert = dual_value_grid(funcs)
    assert approx <= exact + 1e-9
    if math.isfinite(exact):
        assert exact - approx <= 1e-6


@settings(max_examples=25)
@given(seeds)
def test_classification_matches_mesh_membership(seed):
    sc = gen.generate("mm1", seed % 10_000, {"variant": "mixed"})
    fam = BifunctionFamily.from_dict(sc["payload"])
    cls = classify(fam, "A0")
    if cls.mode != "faces":
        return
    for lam in cls.mesh_members:
        support = tuple(k for k, v in enumerate(lam) if v > 0)
        assert cls.faces[support]
