import math

import numpy as np
import pytest
from hypothesis import given, settings

from relaxed_minimax import extreal as er
from relaxed_minimax import pwl
from relaxed_minimax.conjugate import (
    biconjugate,
    check_hull_infimum,
    check_biconjugate,
    check_hull_conjugate,
    conj_of_inf,
    conj_of_sup,
    conjugate,
    conjugate_grid,
    lipschitz_envelope,
)
from relaxed_minimax.extreal import INF, NINF
from relaxed_minimax.grid import GridFunction, sample
from relaxed_minimax.harness import generators as gen

from conftest import convex_from_seed, general_from_seed, probe_points, seeds


def brute_conjugate(f, s, lo=-60.0, hi=60.0, n=2001):
    """Dense-sample sup of s*x - f(x); independent of the exact code path."""
    xs = np.union1d(np.linspace(lo, hi, n), np.array(f.xs))
    xs = np.union1d(xs, np.array(f.xs) + 1e-9)
    xs = np.union1d(xs, np.array(f.xs) - 1e-9)
    vals = np.array([float(f(x)) for x in xs])
    return float(np.max(s * xs - vals))


def test_conjugate_examples():
    assert pwl.pwl_equal(conjugate(pwl.abs_shift(0.0)), pwl.indicator(-1.0, 1.0))
    c = conjugate(pwl.affine(2.5, 0.0))
    assert c(2.5) == 0.0 and c(2.4) == INF
    c = conjugate(pwl.indicator(0.0, 1.0))
    for s in (-2.0, 0.0, 0.7, 3.0):
        assert c(s) == pytest.approx(max(s, 0.0))


def test_conjugate_of_improper_and_empty():
    assert pwl.pwl_equal(conjugate(pwl.constant(NINF)), pwl.constant(INF))
    assert pwl.pwl_equal(conjugate(pwl.constant(INF)), pwl.constant(NINF))


def test_grid_conjugate_examples():
    axis = np.linspace(-5, 5, 1001)
    g = sample(pwl.abs_shift(0.0), axis)
    out = conjugate_grid(g, [0.0, 2.0])
    assert out.values[0] == pytest.approx(0.0)
    assert out.values[1] == pytest.approx(5.0)
    empty = GridFunction((axis,), np.full(axis.size, INF))
    assert np.all(conjugate_grid(empty, [0.0, 1.0]).values == NINF)


def test_biconjugate_examples():
    assert pwl.pwl_equal(biconjugate(pwl.indicator(0.0, 1.0, False, False)), pwl.indicator(0.0, 1.0))
    rep = check_biconjugate(pwl.abs_shift(0.0))
    assert rep.holds and rep.witnesses["structural_equality"]
    bad = pwl.weighted_sum([1.0, 1.0], [pwl.indicator(0.0, 1.0), pwl.constant(NINF)])
    rep = check_biconjugate(bad)
    assert rep.holds is None and "biconjugation hypothesis violated" in rep.message
    assert pwl.pwl_equal(biconjugate(bad), pwl.constant(NINF))


def test_conj_of_sup_gate():
    rep = conj_of_sup([pwl.indicator(0.0, 1.0, False, True), pwl.affine(1.0, 0.0)])
    assert rep.holds is None and rep.message == "hypothesis failed"


def test_envelope_examples():
    f = pwl.abs_shift(2.0)
    for R in (0.5, 1.0, 7.0):
        assert lipschitz_envelope(f, R, 2.0) == 0.0
    g = pwl.add_functions(pwl.affine(2.0, 0.0), pwl.indicator(0.0, 1.0))
    assert lipschitz_envelope(g, 1.0, 1.0) == pytest.approx(1.0)
    assert lipschitz_envelope(g, 5.0, 1.0) == pytest.approx(2.0)
    point = pwl.indicator(1.0, 1.0)
    for R in (1.0, 10.0, 1e6):
        assert lipschitz_envelope(point, R, 0.0) == pytest.approx(R)
    with pytest.raises(ValueError):
        lipschitz_envelope(f, 0.0, 1.0)


def test_envelope_on_grid():
    g = sample(pwl.abs_shift(0.0), np.linspace(-2, 2, 9))
    assert lipschitz_envelope(g, 3.0, 1.0) == pytest.approx(1.0)


@settings(max_examples=25)
@given(seeds)
def test_conjugate_matches_dense_brute_force(seed):
    f = gen.random_general(np.random.default_rng(seed), p_hole=0.0)
    c = conjugate(f)
    lo = f.pieces[0].slope if f.pieces[0].finite else -8.0
    hi = f.pieces[-1].slope if f.pieces[-1].finite else 8.0
    if hi - lo < 0.2:
        return
    for s in np.linspace(lo + 0.05, hi - 0.05, 7):
        assert c(s) == pytest.approx(brute_conjugate(f, s), abs=1e-6)


@given(seeds)
def test_conjugate_is_closed_convex_and_fenchel_young_holds(seed):
    f = general_from_seed(seed)
    c = conjugate(f)
    assert pwl.is_convex(c) and pwl.is_lsc(c)
    for x in probe_points(f)[::4]:
        for s in probe_points(c)[::4]:
            fx, cs = f(x), c(s)
            if math.isinf(fx) or math.isinf(cs):
                continue
            assert fx + cs >= s * x - 1e-7 * max(1.0, abs(s * x))


@given(seeds)
def test_biconjugate_is_a_minorant_and_equals_closed_hull(seed):
    f = general_from_seed(seed)
    rep = check_biconjugate(f)
    assert rep.holds in (True, None)
    fss = biconjugate(f)
    for x in probe_points(f):
        assert fss(x) <= f(x) + 1e-7


@given(seeds)
def test_gamma0_functions_are_fixed_points(seed):
    f = convex_from_seed(seed)
    rep = check_biconjugate(f)
    assert rep.holds and rep.witnesses["structural_equality"]


@given(seeds)
def test_hull_identities(seed):
    f = general_from_seed(seed)
    assert check_hull_conjugate(f).holds
    assert check_hull_infimum(f).holds


@given(seeds, seeds)
def test_inf_and_sup_rules(s1, s2):
    fam = [general_from_seed(s1), general_from_seed(s2)]
    assert conj_of_inf(fam).holds
    cvx = [convex_from_seed(s1), convex_from_seed(s2)]
    rep = conj_of_sup(cvx)
    assert rep.holds in (True, None)
    if pwl.is_gamma0(pwl.pointwise_max(cvx)):
        assert rep.holds


def test_envelope_is_monotone_and_bounded_on_random_probes(rng):
    for _ in range(20):
        f = gen.random_convex(rng)
        c = pwl.domain_components(f)[0]
        x0 = float(np.clip(rng.uniform(-10, 10), max(c.lo, -10), min(c.hi, 10)))
        vals = [float(lipschitz_envelope(f, R, x0)) for R in (0.1, 1, 10, 100, 1e4, 1e7)]
        assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))
        assert all(v <= float(f(x0)) + 1e-9 for v in vals)
        assert er.isclose(vals[-1], f(x0), 1e-6)
