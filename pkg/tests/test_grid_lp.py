import numpy as np
import pytest
from scipy.optimize import linprog

from relaxed_minimax import pwl
from relaxed_minimax.extreal import INF, NINF
from relaxed_minimax.grid import GridFunction, grid_convexity_check, grid_eval, grid_inf, grid_sup, sample
from relaxed_minimax.lp import linprog_max


def test_grid_examples():
    g = GridFunction((np.array([0.0, 1.0, 2.0]),), np.array([3.0, 1.0, 2.0]))
    assert grid_inf(g) == 1.0
    assert grid_eval(g, 2.0) == 2.0
    assert not grid_convexity_check(GridFunction((np.array([0.0, 1.0, 2.0]),), np.array([0.0, 2.0, 3.0])))
    assert grid_sup(GridFunction((np.array([0.0, 1.0]),), np.array([NINF, NINF]))) == NINF


def test_grid_convexity_with_infinities():
    axis = np.arange(5.0)
    assert grid_convexity_check(GridFunction((axis,), np.array([INF, 1.0, 0.0, 1.0, INF])))
    assert not grid_convexity_check(GridFunction((axis,), np.array([0.0, INF, 0.0, 1.0, 2.0])))


def test_two_dimensional_grid_checks_both_axes():
    a = np.arange(3.0)
    xx, yy = np.meshgrid(a, a, indexing="ij")
    assert grid_convexity_check(GridFunction((a, a), xx**2 + yy))
    assert not grid_convexity_check(GridFunction((a, a), xx - yy**2))


def test_grid_rejects_bad_shapes_and_nan():
    with pytest.raises(ValueError):
        GridFunction((np.arange(3.0),), np.zeros(4))
    with pytest.raises(ValueError):
        GridFunction((np.arange(2.0),), np.array([0.0, np.nan]))


def test_grid_json_round_trip():
    g = sample(pwl.indicator(0.0, 1.0), [-1.0, 0.0, 0.5, 1.0, 2.0])
    h = GridFunction.from_dict(g.to_dict())
    assert np.array_equal(h.values, g.values)
    assert g.to_dict()["values"][0] == "inf"


def test_simplex_matches_scipy_on_random_programs():
    rng = np.random.default_rng(2024)
    for _ in range(150):
        n, m = int(rng.integers(2, 6)), int(rng.integers(1, 6))
        c = rng.normal(size=n)
        A = rng.normal(size=(m, n))
        b = rng.uniform(-1, 3, size=m)
        eq = rng.random() < 0.4
        Ae = np.ones((1, n)) if eq else None
        be = np.ones(1) if eq else None
        ours = linprog_max(c, A, b, Ae, be)
        ref = linprog(-c, A_ub=A, b_ub=b, A_eq=Ae, b_eq=be, bounds=[(0, None)] * n, method="highs", options={"presolve": False})
        expected = {0: "optimal", 2: "infeasible", 3: "unbounded"}[ref.status]
        assert ours.status == expected
        if expected == "optimal":
            assert ours.value == pytest.approx(-ref.fun, abs=1e-7)
            assert np.all(ours.x >= -1e-9)


def test_simplex_degenerate_program_terminates():
    # a classic cycling example for Dantzig's rule
    c = np.array([10.0, -57.0, -9.0, -24.0])
    A = np.array([[0.5, -5.5, -2.5, 9.0], [0.5, -1.5, -0.5, 1.0], [1.0, 0.0, 0.0, 0.0]])
    b = np.array([0.0, 0.0, 1.0])
    res = linprog_max(c, A, b)
    assert res.status == "optimal"
    assert res.value == pytest.approx(1.0)


def test_node_lookup_prefers_the_nearest_node():
    x = -3.62
    axis = np.array([x - 0.1, x - 8.9e-16, x, x + 0.1])
    g = GridFunction((axis,), np.array([INF, INF, 6.58, 7.0]))
    assert g.node_index(x) == (2,)
    assert grid_eval(g, x) == 6.58
