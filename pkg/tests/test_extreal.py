import itertools
import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from relaxed_minimax import extreal as er
from relaxed_minimax.extreal import INF, NINF, ExtReal

SAMPLES = [NINF, -3.5, 0.0, 2.0, INF]
ext = st.one_of(st.sampled_from([INF, NINF]), st.floats(-1e6, 1e6, allow_nan=False))


def test_add_conventions():
    assert er.add(INF, NINF) == INF
    assert er.add(NINF, INF) == INF
    assert er.add(3, NINF) == NINF
    assert er.add(2, 5) == 7


def test_scale_conventions():
    assert er.scale(0, INF) == INF
    assert er.scale(0, NINF) == 0
    assert er.scale(2, NINF) == NINF
    assert er.scale(0, 4.2) == 0
    assert er.scale(0.5, 3.0) == 1.5


def test_negative_multiplier_rejected():
    with pytest.raises(ValueError):
        er.scale(-1, 2.0)


def test_nan_rejected():
    with pytest.raises(ValueError):
        ExtReal(float("nan"))
    with pytest.raises(ValueError):
        er.add(math.nan, 1.0)


def test_folds():
    assert er.fold_sup([]) == NINF
    assert er.fold_inf([]) == INF
    assert er.fold_inf([3, NINF, 7]) == NINF
    assert er.fold_sup([NINF, 0]) == 0


def test_addition_is_commutative_and_associative_on_all_triples():
    for a, b, c in itertools.product(SAMPLES, repeat=3):
        assert er.add(a, b) == er.add(b, a)
        assert er.add(er.add(a, b), c) == er.add(a, er.add(b, c))


def test_scale_distributes_over_addition_for_positive_t():
    for a, b in itertools.product(SAMPLES, repeat=2):
        for t in (0.5, 1.0, 3.0):
            assert er.scale(t, er.add(a, b)) == er.add(er.scale(t, a), er.scale(t, b))


@given(ext, ext)
def test_operators_match_functions(a, b):
    assert ExtReal(a) + b == er.add(a, b)
    assert ExtReal(a) - b == er.add(a, -b)


@given(ext)
def test_json_round_trip(a):
    text = json.dumps(er.to_json(a))
    assert er.from_json(json.loads(text)) == a


def test_json_encoding_of_infinities():
    assert er.to_json(INF) == "inf"
    assert er.to_json(NINF) == "-inf"
    assert er.from_json("-inf") == NINF
    with pytest.raises(ValueError):
        er.from_json(True)


def test_isclose():
    assert er.isclose(1.0, 1.0 + 1e-12)
    assert not er.isclose(1.0, 1.1)
    assert er.isclose(INF, INF)
    assert not er.isclose(INF, 1e300)
