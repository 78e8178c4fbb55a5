import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relaxed_minimax import pwl
from relaxed_minimax.extreal import INF, NINF
from relaxed_minimax.grid import sample
from relaxed_minimax.subdiff import (
    EMPTY,
    SubdiffInterval,
    eps_subdiff_oracle,
    eps_subdifferential,
    max_rule,
    simplex_mesh,
)

from conftest import convex_from_seed, seeds

absx = pwl.abs_shift(0.0)
y = pwl.affine(1.0, 0.0)
neg_y = pwl.affine(-1.0, 0.0)


def test_exact_examples():
    assert eps_subdifferential(absx, 0.0, 0.0) == SubdiffInterval.closed(-1.0, 1.0)
    assert eps_subdifferential(absx, 1.0, 0.0) == SubdiffInterval.closed(1.0, 1.0)
    assert eps_subdifferential(absx, 1.0, -0.1).empty
    assert eps_subdifferential(pwl.indicator(0.0, 1.0), 2.0, 1.0).empty


def test_positive_eps_widens():
    # by hand: |y| >= 1 + s*(y - 1) - 0.5 for all y  <=>  1/2 <= s <= 1
    assert eps_subdifferential(absx, 1.0, 0.5) == SubdiffInterval.closed(0.5, 1.0)
    # and at the kink with eps = 1 the interval is still clipped by the slopes
    assert eps_subdifferential(absx, 0.0, 1.0) == SubdiffInterval.closed(-1.0, 1.0)


def test_indicator_at_endpoint_has_unbounded_subdifferential():
    iv = eps_subdifferential(pwl.indicator(0.0, 1.0), 1.0, 0.0)
    assert iv.lo == 0.0 and iv.hi == INF


def test_nonconvex_rejected():
    with pytest.raises(ValueError):
        eps_subdifferential(pwl.pointwise_min([absx, pwl.abs_shift(2.0)]), 1.0, 0.0)


def test_grid_oracle_examples():
    g = sample(absx, np.linspace(-3, 3, 13))
    assert eps_subdiff_oracle(g, 0.0, 0.0, [-2, -1, 0, 1, 2]) == [-1, 0, 1]
    assert eps_subdiff_oracle(g, 0.0, 100.0, [-2, -1, 0, 1, 2]) == [-2, -1, 0, 1, 2]
    assert eps_subdiff_oracle(sample(pwl.indicator(0.0, 1.0), [-1.0, 0.0, 1.0]), -1.0, 0.0, [0.0]) == []


def test_max_rule_examples():
    rep = max_rule([y, neg_y], 0.0, 0.0)
    assert rep.lhs == SubdiffInterval.closed(-1.0, 1.0)
    # the sampled union is {l1 - l2} over the mesh: it stays inside [-1, 1] and reaches both ends
    cover = [iv.to_json() for iv in rep.rhs_cover]
    assert rep.passed and cover[0] == [-1.0, -1.0] and cover[-1] == [1.0, 1.0]
    assert all(-1.0 <= lo <= hi <= 1.0 for lo, hi in cover)
    rep = max_rule([y, neg_y], 2.0, 0.0)
    assert rep.lhs == SubdiffInterval.closed(1.0, 1.0)
    assert rep.passed and rep.attained_by["lo"] == [1.0, 0.0]


def test_max_rule_singleton_family():
    rep = max_rule([absx], 0.3, 0.2)
    assert rep.passed
    assert rep.rhs_cover == [rep.lhs]


def test_max_rule_reports_instead_of_asserting():
    rep = max_rule([pwl.indicator(0.0, 1.0), y], 2.0, 0.0)
    assert rep.passed is None and rep.message == "formula vacuous at x"
    rep = max_rule([pwl.pointwise_min([absx, pwl.abs_shift(2.0)]), y], 0.0, 0.0)
    assert rep.passed is None and rep.message == "hypothesis failed"


def test_simplex_mesh():
    mesh = simplex_mesh(3, 4)
    assert len(mesh) == 15
    assert all(abs(sum(p) - 1.0) < 1e-12 and min(p) >= 0 for p in mesh)
    assert simplex_mesh(1, 8) == [(1.0,)]


@given(seeds, st.sampled_from([0.0, 0.1, 1.0]), st.floats(-9, 9))
def test_exact_subdifferential_matches_definition(seed, eps, x):
    f = convex_from_seed(seed)
    iv = eps_subdifferential(f, x, eps)
    if f(x) == INF:
        assert iv.empty
        return
    pts = np.union1d(np.array(f.xs), np.linspace(-30, 30, 601))
    vals = np.array([float(f(t)) for t in pts])
    fx = float(f(x))
    for s in np.linspace(-8, 8, 65):
        inside = bool(np.all(vals >= fx + s * (pts - x) - eps - 1e-9))
        tails_ok = (not f.pieces[0].finite or s >= f.pieces[0].slope - 1e-12) and (
            not f.pieces[-1].finite or s <= f.pieces[-1].slope + 1e-12
        )
        near_edge = not iv.empty and min(abs(s - iv.lo), abs(s - iv.hi)) < 1e-6
        if not near_edge:
            assert iv.contains(s) == (inside and tails_ok)


@given(seeds, seeds, st.sampled_from([0.0, 0.1, 1.0]))
def test_max_rule_on_random_pairs(s1, s2, eps):
    funcs = [convex_from_seed(s1), convex_from_seed(s2)]
    f = pwl.pointwise_max(funcs)
    comps = pwl.domain_components(f)
    if not comps:
        return
    c = comps[0]
    x = float(np.clip(0.37, c.lo, c.hi))
    rep = max_rule(funcs, x, eps)
    assert rep.passed, rep.to_dict()


def test_empty_interval_helpers():
    assert EMPTY.empty and EMPTY.to_json() is None
    assert EMPTY.subset_of(SubdiffInterval.closed(0.0, 1.0))
    assert not SubdiffInterval.closed(-1.0, 2.0).subset_of(SubdiffInterval.closed(0.0, 1.0))
