import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relaxed_minimax import extreal as er
from relaxed_minimax import pwl
from relaxed_minimax.extreal import INF, NINF
from relaxed_minimax.pwl import Piece, PwlFunction

from conftest import convex_from_seed, general_from_seed, probe_points, seeds

y = pwl.affine(1.0, 0.0)
absx = pwl.abs_shift(0.0)
half_open = pwl.indicator(0.0, 1.0, lo_closed=False)


def test_evaluation_examples():
    assert half_open(0.0) == INF
    assert half_open(1.0) == 0.0
    assert half_open(0.5) == 0.0
    assert absx(-2.0) == 2.0


def test_zero_weight_keeps_the_domain():
    f = pwl.weighted_sum([0.0, 1.0], [half_open, y])
    assert pwl.pwl_equal(f, pwl.add_functions(y, half_open))
    assert f(0.0) == INF and f(0.5) == 0.5 and f(2.0) == INF


def test_opposite_lines_average_to_zero():
    f = pwl.weighted_sum([0.5, 0.5], [y, pwl.affine(-1.0, 0.0)])
    assert pwl.pwl_equal(f, pwl.constant(0.0))


def test_indicator_plus_minus_infinity():
    f = pwl.weighted_sum([0.5, 0.5], [pwl.indicator(0.0, 1.0), pwl.constant(NINF)])
    assert f(0.0) == NINF and f(1.0) == NINF and f(0.3) == NINF
    assert f(-0.1) == INF and f(1.5) == INF


def test_negative_weight_rejected():
    with pytest.raises(ValueError):
        pwl.weighted_sum([-0.5, 1.5], [y, absx])


def test_predicates_examples():
    assert pwl.is_proper(half_open) and pwl.is_convex(half_open) and not pwl.is_lsc(half_open)
    minus = pwl.constant(NINF)
    assert not pwl.is_proper(minus) and pwl.is_convex(minus) and pwl.is_lsc(minus)
    assert pwl.is_gamma0(absx)
    assert not pwl.is_convex(pwl.pointwise_min([absx, pwl.abs_shift(2.0)]))


def test_hull_examples():
    assert pwl.pwl_equal(pwl.lsc_hull(half_open), pwl.indicator(0.0, 1.0))
    hull = pwl.convex_hull(pwl.pointwise_min([absx, pwl.abs_shift(2.0)]))
    for x, v in [(-1.0, 1.0), (0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 1.0)]:
        assert hull(x) == pytest.approx(v)
    assert pwl.is_convex(hull)


def test_hull_of_function_with_minus_infinity():
    f = pwl.weighted_sum([1.0, 1.0], [pwl.indicator(0.0, 2.0), PwlFunction((0.5, 1.0), (NINF, NINF), (Piece(0.0), Piece(NINF), Piece(0.0)))])
    clco = pwl.closed_convex_hull(f)
    assert clco(0.0) == NINF and clco(2.0) == NINF and clco(2.5) == INF
    co = pwl.convex_hull(f)
    assert co(1.5) == NINF and co(0.0) == 0.0


def test_max_and_infimum_examples():
    assert pwl.pwl_equal(pwl.pointwise_max([y, pwl.affine(-1.0, 0.0)]), absx)
    val, arg = pwl.infimum(absx)
    assert val == 0.0 and arg == 0.0
    val, arg = pwl.infimum(pwl.add_functions(y, half_open))
    assert val == 0.0 and arg is None


def test_unbounded_infimum():
    assert pwl.infimum(y)[0] == NINF
    assert pwl.infimum(pwl.constant(INF))[0] == INF


def test_json_round_trip_and_schema_shape():
    f = PwlFunction((0.0, 1.0), (INF, 2.0), (Piece(INF), Piece(1.0, 3.0), Piece(2.0, -1.0)))
    d = f.to_dict()
    assert d["segments"] == [{"left": 1.0, "right": 4.0}]
    assert d["left_tail"] == "inf"
    g = PwlFunction.from_dict(json.loads(json.dumps(d)))
    assert pwl.same_structure(f, g)


def test_construction_validation():
    with pytest.raises(ValueError):
        PwlFunction((1.0, 0.0), (0.0, 0.0), (Piece(0.0), Piece(0.0), Piece(0.0)))
    with pytest.raises(ValueError):
        PwlFunction((0.0,), (0.0,), (Piece(0.0),))


@given(seeds, seeds, st.floats(0.0, 1.0))
def test_weighted_sum_matches_pointwise(s1, s2, t):
    f, g = general_from_seed(s1), general_from_seed(s2)
    h = pwl.weighted_sum([t, 1.0 - t], [f, g])
    for x in probe_points(f, g):
        want = er.add(er.scale(t, f(x)), er.scale(1.0 - t, g(x)))
        assert er.isclose(h(x), want, 1e-9)


@given(seeds, seeds)
def test_max_and_min_match_pointwise(s1, s2):
    f, g = general_from_seed(s1), general_from_seed(s2)
    hi, lo = pwl.pointwise_max([f, g]), pwl.pointwise_min([f, g])
    for x in probe_points(f, g):
        assert er.isclose(hi(x), max(f(x), g(x)), 1e-9)
        assert er.isclose(lo(x), min(f(x), g(x)), 1e-9)


@given(seeds)
def test_infimum_bounds_every_value(seed):
    f = general_from_seed(seed)
    val, arg = pwl.infimum(f)
    vals = [float(f(x)) for x in probe_points(f)]
    assert val <= min(vals) + 1e-9
    if arg is not None:
        assert er.isclose(f(arg), val, 1e-9)


@given(seeds)
def test_hulls_are_ordered_minorants(seed):
    f = general_from_seed(seed)
    co, clco, lsc = pwl.convex_hull(f), pwl.closed_convex_hull(f), pwl.lsc_hull(f)
    assert pwl.is_convex(co) and pwl.is_convex(clco)
    assert pwl.is_lsc(clco) and pwl.is_lsc(lsc)
    for x in probe_points(f, co, clco):
        assert clco(x) <= co(x) + 1e-9
        assert co(x) <= f(x) + 1e-9
        assert lsc(x) <= f(x) + 1e-9


@given(seeds)
def test_convex_generator_is_fixed_by_hulls(seed):
    f = convex_from_seed(seed)
    assert pwl.is_gamma0(f)
    assert pwl.pwl_equal(pwl.closed_convex_hull(f), f)
    assert pwl.pwl_equal(pwl.convex_hull(f), f)


@given(seeds)
def test_convexity_predicate_agrees_with_chords(seed):
    f = general_from_seed(seed)
    pts = probe_points(f)
    if pwl.is_convex(f):
        for a in pts[::3]:
            for b in pts[::5]:
                fa, fb = f(a), f(b)
                if math.isinf(fa) or math.isinf(fb):
                    continue
                m = f(0.5 * (a + b))
                assert m <= 0.5 * (fa + fb) + 1e-7


@given(seeds)
def test_simplify_is_canonical(seed):
    f = general_from_seed(seed)
    g = f.simplify()
    assert pwl.same_structure(g, g.simplify())
    for x in probe_points(f):
        assert er.isclose(f(x), g(x), 1e-9)


def test_domain_components():
    f = pwl.pointwise_min([pwl.indicator(0.0, 1.0, False, True), pwl.indicator(2.0, 3.0)])
    comps = pwl.domain_components(f)
    assert [(c.lo, c.hi, c.lo_closed, c.hi_closed) for c in comps] == [(0.0, 1.0, False, True), (2.0, 3.0, True, True)]
    assert comps[0].contains(1.0) and not comps[0].contains(0.0)


def test_numpy_floats_accepted():
    f = pwl.abs_shift(np.float64(1.0))
    assert f(np.float64(3.0)) == 2.0
