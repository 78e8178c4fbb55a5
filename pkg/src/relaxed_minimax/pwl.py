"""Exact one-dimensional piecewise-linear extended-real functions.

A :class:`PwlFunction` is stored as breakpoints ``x_1 < ... < x_m``, the value
at every breakpoint, and ``m + 1`` pieces: the left tail ``(-inf, x_1)``, the
open segments ``(x_i, x_{i+1})`` and the right tail ``(x_m, +inf)``.  A piece
is either an affine function or a constant ``+inf`` / ``-inf``.  Breakpoint
values are free to disagree with the neighbouring piece limits, which is how
indicators of half-open intervals and other non-lsc functions are encoded.

Affine pieces are anchored at a breakpoint: the left tail at ``x_1`` and every
other piece at its left endpoint.  ``Piece.value`` is the limit of the piece at
its anchor.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Optional, Sequence

from . import extreal as er
from .extreal import INF, NINF, ExtReal

__all__ = [
    "MERGE_TOL",
    "Piece",
    "Interval",
    "PwlFunction",
    "constant",
    "affine",
    "indicator",
    "from_points",
    "abs_shift",
    "evaluate",
    "weighted_sum",
    "add_functions",
    "pointwise_max",
    "pointwise_min",
    "infimum",
    "infimum_witness",
    "domain_components",
    "is_proper",
    "is_convex",
    "is_lsc",
    "is_gamma0",
    "lsc_hull",
    "convex_hull",
    "closed_convex_hull",
    "closure_points",
    "pwl_equal",
    "max_discrepancy",
    "same_structure",
    "merged_breakpoints",
    "value_near",
    "line_on",
    "regions",
    "combine",
    "Witness",
]

# breakpoints closer than this are treated as one
MERGE_TOL = 1e-12
# tolerance used when deciding whether adjacent lines coincide
_LINE_TOL = 1e-12


class Piece(NamedTuple):
    value: float
    slope: float = 0.0

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    def at(self, anchor: float, x: float) -> float:
        if not math.isfinite(self.value):
            return self.value
        return self.value + self.slope * (x - anchor)


class Interval(NamedTuple):
    lo: float
    hi: float
    lo_closed: bool
    hi_closed: bool

    def contains(self, x: float) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True


_POS = Piece(INF, 0.0)
_NEG = Piece(NINF, 0.0)


def _inf_piece(v: float) -> Piece:
    return _POS if v > 0 else _NEG


@dataclass(frozen=True, eq=False)
class PwlFunction:
    xs: tuple
    values: tuple
    pieces: tuple

    def __post_init__(self):
        xs = tuple(float(x) for x in self.xs)
        vals = tuple(float(v) for v in self.values)
        pcs = []
        for p in self.pieces:
            v, s = float(p[0]), float(p[1])
            if math.isnan(v) or math.isnan(s):
                raise ValueError("NaN in piece")
            if math.isinf(v):
                pcs.append(_inf_piece(v))
            else:
                if not math.isfinite(s):
                    raise ValueError("affine piece needs a finite slope")
                pcs.append(Piece(v, s))
        if not xs:
            raise ValueError("at least one breakpoint is required")
        if len(vals) != len(xs) or len(pcs) != len(xs) + 1:
            raise ValueError("need one value per breakpoint and len(xs)+1 pieces")
        for x in xs:
            if not math.isfinite(x):
                raise ValueError("breakpoints must be finite")
        for a, b in zip(xs, xs[1:]):
            if not a < b:
                raise ValueError("breakpoints must be strictly increasing")
        for v in vals:
            if math.isnan(v):
                raise ValueError("NaN breakpoint value")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "pieces", tuple(pcs))

    # -- structure -----------------------------------------------------
    @property
    def m(self) -> int:
        return len(self.xs)

    def anchor(self, j: int) -> float:
        return self.xs[0] if j == 0 else self.xs[j - 1]

    def piece_value(self, j: int, x: float) -> float:
        return self.pieces[j].at(self.anchor(j), x)

    def left_limit(self, i: int) -> float:
        """Limit of ``f(t)`` as ``t -> x_i`` from the left."""
        return self.piece_value(i, self.xs[i])

    def right_limit(self, i: int) -> float:
        return self.pieces[i + 1].value

    def piece_index(self, x: float) -> int:
        return bisect_left(self.xs, x)

    def __call__(self, x: float) -> ExtReal:
        return evaluate(self, x)

    def __repr__(self) -> str:
        return f"PwlFunction(xs={self.xs}, values={self.values}, pieces={self.pieces})"

    # -- canonical form --------------------------------------------------
    def simplify(self) -> "PwlFunction":
        """Drop breakpoints across which nothing changes."""
        keep = []
        for i in range(self.m):
            left, right = self.pieces[i], self.pieces[i + 1]
            v = self.values[i]
            if not _same_line_across(self, i, left, right, v):
                keep.append(i)
        if len(keep) == self.m:
            return self
        if not keep:
            x0 = 0.0
            v0 = evaluate(self, x0) if self.m else 0.0
            p = self.pieces[0]
            line = p if not p.finite else Piece(self.piece_value(0, x0), p.slope)
            return PwlFunction((x0,), (float(v0),), (line, line))
        xs = [self.xs[i] for i in keep]
        vals = [self.values[i] for i in keep]
        first = keep[0]
        p0 = self.pieces[first]
        left = p0 if not p0.finite else Piece(self.left_limit(first), p0.slope)
        pieces = [left]
        for i in keep:
            pieces.append(self.pieces[i + 1])
        return PwlFunction(tuple(xs), tuple(vals), tuple(pieces))

    # -- serialization -------------------------------------------------
    def to_dict(self) -> dict:
        segs = []
        for j in range(1, self.m):
            p = self.pieces[j]
            if p.finite:
                segs.append({"left": p.value, "right": self.piece_value(j, self.xs[j])})
            else:
                segs.append(er.to_json(p.value))
        return {
            "breakpoints": list(self.xs),
            "values": [er.to_json(v) for v in self.values],
            "segments": segs,
            "left_tail": _tail_to_json(self.pieces[0]),
            "right_tail": _tail_to_json(self.pieces[-1]),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PwlFunction":
        xs = [float(x) for x in d["breakpoints"]]
        vals = [float(er.from_json(v)) for v in d["values"]]
        if len(vals) != len(xs):
            raise ValueError("values must match breakpoints")
        segs = d.get("segments")
        if segs is None:
            segs = ["affine"] * (len(xs) - 1)
        if len(segs) != len(xs) - 1:
            raise ValueError("need len(breakpoints) - 1 segments")
        pieces = [_tail_from_json(d.get("left_tail", "inf"), vals[0])]
        for j, s in enumerate(segs):
            a, b = xs[j], xs[j + 1]
            if isinstance(s, dict):
                lv, rv = float(er.from_json(s["left"])), float(er.from_json(s["right"]))
            elif s == "affine":
                lv, rv = vals[j], vals[j + 1]
            else:
                v = float(er.from_json(s))
                if math.isfinite(v):
                    raise ValueError("a constant segment must be 'inf' or '-inf'")
                pieces.append(_inf_piece(v))
                continue
            if not (math.isfinite(lv) and math.isfinite(rv)):
                raise ValueError(f"affine segment ({a}, {b}) needs finite end limits")
            pieces.append(Piece(lv, (rv - lv) / (b - a)))
        pieces.append(_tail_from_json(d.get("right_tail", "inf"), vals[-1]))
        return cls(tuple(xs), tuple(vals), tuple(pieces))


def _tail_to_json(p: Piece):
    if not p.finite:
        return er.to_json(p.value)
    return {"slope": p.slope, "value": p.value}


def _tail_from_json(obj, default_value: float) -> Piece:
    if isinstance(obj, dict):
        v = float(er.from_json(obj["value"])) if "value" in obj else default_value
        if not math.isfinite(v):
            raise ValueError("affine tail needs a finite anchor value")
        return Piece(v, float(obj["slope"]))
    v = float(er.from_json(obj))
    if math.isfinite(v):
        raise ValueError("a constant tail must be 'inf' or '-inf'")
    return _inf_piece(v)


def _close(a: float, b: float, tol: float = _LINE_TOL) -> bool:
    return er.isclose(a, b, tol)


def _same_line_across(f: PwlFunction, i: int, left: Piece, right: Piece, v: float) -> bool:
    if left.finite != right.finite:
        return False
    if not left.finite:
        return left.value == right.value and v == left.value
    lim_l = f.left_limit(i)
    return (
        _close(left.slope, right.slope)
        and _close(lim_l, right.value)
        and math.isfinite(v)
        and _close(v, right.value)
    )


# -- constructors --------------------------------------------------------


def constant(c: float) -> PwlFunction:
    c = float(er.ExtReal(c))
    p = _inf_piece(c) if math.isinf(c) else Piece(c, 0.0)
    return PwlFunction((0.0,), (c,), (p, p))


def affine(slope: float, intercept: float = 0.0) -> PwlFunction:
    p = Piece(float(intercept), float(slope))
    return PwlFunction((0.0,), (float(intercept),), (p, p))


def indicator(lo: float, hi: float, lo_closed: bool = True, hi_closed: bool = True) -> PwlFunction:
    """Indicator of an interval with finite or infinite ends."""
    lo, hi = float(lo), float(hi)
    if lo > hi:
        raise ValueError("empty interval")
    if lo == hi:
        if not (lo_closed and hi_closed) or math.isinf(lo):
            raise ValueError("a degenerate interval must be a closed finite point")
        return PwlFunction((lo,), (0.0,), (_POS, _POS))
    if math.isinf(lo) and math.isinf(hi):
        return constant(0.0)
    if math.isinf(lo):
        return PwlFunction((hi,), (0.0 if hi_closed else INF,), (Piece(0.0, 0.0), _POS))
    if math.isinf(hi):
        return PwlFunction((lo,), (0.0 if lo_closed else INF,), (_POS, Piece(0.0, 0.0)))
    return PwlFunction(
        (lo, hi),
        (0.0 if lo_closed else INF, 0.0 if hi_closed else INF),
        (_POS, Piece(0.0, 0.0), _POS),
    )


def from_points(
    xs: Sequence[float],
    ys: Sequence[float],
    left_slope: Optional[float] = None,
    right_slope: Optional[float] = None,
) -> PwlFunction:
    """Continuous interpolant of finite data; a missing tail slope means ``+inf`` there."""
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    pieces = [Piece(ys[0], left_slope) if left_slope is not None else _POS]
    for j in range(len(xs) - 1):
        pieces.append(Piece(ys[j], (ys[j + 1] - ys[j]) / (xs[j + 1] - xs[j])))
    pieces.append(Piece(ys[-1], right_slope) if right_slope is not None else _POS)
    return PwlFunction(tuple(xs), tuple(ys), tuple(pieces))


def abs_shift(center: float = 0.0, scale_: float = 1.0) -> PwlFunction:
    """``x -> scale_ * |x - center|``."""
    return from_points([center], [0.0], -scale_, scale_)


# -- evaluation ------------------------------------------------------------


def evaluate(f: PwlFunction, x: float) -> ExtReal:
    x = float(x)
    j = bisect_left(f.xs, x)
    if j < f.m and f.xs[j] == x:
        return ExtReal(f.values[j])
    return ExtReal(f.piece_value(j, x))


def value_near(f: PwlFunction, x: float) -> float:
    j = bisect_left(f.xs, x - MERGE_TOL)
    if j < f.m and abs(f.xs[j] - x) <= MERGE_TOL:
        return f.values[j]
    return f.piece_value(bisect_left(f.xs, x), x)


def merged_breakpoints(funcs: Iterable[PwlFunction], extra: Iterable[float] = ()) -> list:
    pts = sorted({x for f in funcs for x in f.xs} | {float(x) for x in extra})
    out: list = []
    for x in pts:
        if out and x - out[-1] <= MERGE_TOL:
            continue
        out.append(x)
    return out


def regions(M: Sequence[float]):
    """Open regions between merged breakpoints as ``(lo, hi)`` with ``None`` for infinite ends."""
    yield (None, M[0])
    for a, b in zip(M, M[1:]):
        yield (a, b)
    yield (M[-1], None)


def _sample_point(lo, hi) -> float:
    if lo is None:
        return hi - 1.0
    if hi is None:
        return lo + 1.0
    return 0.5 * (lo + hi)


def line_on(f: PwlFunction, lo, hi) -> Piece:
    """The piece of ``f`` on a region, re-anchored at the region's anchor."""
    t = _sample_point(lo, hi)
    j = bisect_left(f.xs, t)
    p = f.pieces[j]
    if not p.finite:
        return p
    new_anchor = hi if lo is None else lo
    return Piece(p.at(f.anchor(j), new_anchor), p.slope)


def _region_lines(funcs: Sequence[PwlFunction], M: list) -> list:
    """``[line_on(f, lo, hi) for f in funcs]`` for every region, in one sweep."""
    out = []
    idx = [0] * len(funcs)
    for lo, hi in regions(M):
        t = _sample_point(lo, hi)
        new_anchor = hi if lo is None else lo
        lines = []
        for k, f in enumerate(funcs):
            j = idx[k]
            while j < f.m and f.xs[j] < t:
                j += 1
            idx[k] = j
            p = f.pieces[j]
            lines.append(p if not p.finite else Piece(p.at(f.anchor(j), new_anchor), p.slope))
        out.append(lines)
    return out


def _crossings(funcs: Sequence[PwlFunction], M: list) -> list:
    extra = []
    for (lo, hi), lines in zip(regions(M), _region_lines(funcs, M)):
        fin = [p for p in lines if p.finite]
        anchor = hi if lo is None else lo
        for a in range(len(fin)):
            for b in range(a + 1, len(fin)):
                pa, pb = fin[a], fin[b]
                ds = pa.slope - pb.slope
                if ds == 0.0:
                    continue
                t = anchor + (pb.value - pa.value) / ds
                if (lo is None or t > lo + MERGE_TOL) and (hi is None or t < hi - MERGE_TOL):
                    extra.append(t)
    return extra


def combine(
    funcs: Sequence[PwlFunction],
    point_op: Callable[[list], float],
    line_op: Callable[[list, float], Piece],
    crossings: bool = False,
) -> PwlFunction:
    M = merged_breakpoints(funcs)
    if crossings:
        extra = _crossings(funcs, M)
        if extra:
            M = merged_breakpoints(funcs, extra)
    values = [float(point_op([value_near(f, x) for f in funcs])) for x in M]
    pieces = []
    for (lo, hi), lines in zip(regions(M), _region_lines(funcs, M)):
        anchor = hi if lo is None else lo
        pieces.append(line_op(lines, _sample_point(lo, hi) - anchor))
    return PwlFunction(tuple(M), tuple(values), tuple(pieces)).simplify()


def weighted_sum(weights: Sequence[float], funcs: Sequence[PwlFunction]) -> PwlFunction:
    """Pointwise ``sum_k w_k f_k`` under the extended-real conventions."""
    weights = [float(w) for w in weights]
    if len(weights) != len(funcs):
        raise ValueError("weights and funcs must have the same length")
    if not funcs:
        raise ValueError("need at least one function")
    for w in weights:
        if w < 0 or not math.isfinite(w):
            raise ValueError(f"weights must be finite and nonnegative, got {w}")

    def point_op(vals):
        # same conventions as er.add / er.scale, on plain floats
        if INF in vals:
            return INF
        acc = 0.0
        for w, v in zip(weights, vals):
            if w > 0:
                if v == NINF:
                    return NINF
                acc += w * v
        return acc

    def line_op(lines, _dt):
        if any(p.value == INF for p in lines):
            return _POS
        if any(p.value == NINF and w > 0 for w, p in zip(weights, lines)):
            return _NEG
        v = s = 0.0
        for w, p in zip(weights, lines):
            if p.finite and w > 0:
                v += w * p.value
                s += w * p.slope
        return Piece(v, s)

    return combine(funcs, point_op, line_op)


def add_functions(*funcs: PwlFunction) -> PwlFunction:
    return weighted_sum([1.0] * len(funcs), list(funcs))


def _pick(lines: list, dt: float, better) -> Piece:
    best = None
    best_v = None
    for p in lines:
        v = p.value if not p.finite else p.value + p.slope * dt
        if best is None or better(v, best_v):
            best, best_v = p, v
    return best


def pointwise_max(funcs: Sequence[PwlFunction]) -> PwlFunction:
    if not funcs:
        raise ValueError("pointwise_max needs at least one function")
    if len(funcs) == 1:
        return funcs[0]
    return combine(
        funcs,
        lambda vals: max(vals),
        lambda lines, dt: _pick(lines, dt, lambda a, b: a > b),
        crossings=True,
    )


def pointwise_min(funcs: Sequence[PwlFunction]) -> PwlFunction:
    if not funcs:
        raise ValueError("pointwise_min needs at least one function")
    if len(funcs) == 1:
        return funcs[0]
    return combine(
        funcs,
        lambda vals: min(vals),
        lambda lines, dt: _pick(lines, dt, lambda a, b: a < b),
        crossings=True,
    )


# -- infimum -----------------------------------------------------------------


class Witness(NamedTuple):
    """Where an infimum is realised.

    ``kind`` is ``"point"`` (value at ``x``), ``"limit"`` (limit of piece ``j``
    at ``x``), ``"tail"`` (a tail running to ``-inf``; ``x`` is the tail anchor,
    ``j`` the tail's piece index) or ``"piece"`` (a constant ``-inf`` piece).
    """

    kind: str
    x: float
    j: int = -1


def infimum_witness(f: PwlFunction, slope_tol: float = 0.0):
    """Return ``(inf f, attained, argmin_or_None, witness)``.

    Tails whose slope is within ``slope_tol`` of zero are treated as flat.
    """
    cands = []  # (value, attained, x, witness)
    for i, (x, v) in enumerate(zip(f.xs, f.values)):
        cands.append((v, True, x, Witness("point", x, i)))
    m = f.m
    for j, p in enumerate(f.pieces):
        if p.value == INF:
            continue
        if p.value == NINF:
            lo = None if j == 0 else f.xs[j - 1]
            hi = None if j == m else f.xs[j]
            t = _sample_point(lo, hi)
            cands.append((NINF, True, t, Witness("piece", t, j)))
            continue
        if j == 0:
            x1 = f.xs[0]
            if p.slope > slope_tol:
                cands.append((NINF, False, None, Witness("tail", x1, 0)))
            elif p.slope >= -slope_tol:
                cands.append((p.value, True, x1 - 1.0, Witness("limit", x1, 0)))
            else:
                cands.append((p.value, False, None, Witness("limit", x1, 0)))
        elif j == m:
            xm = f.xs[-1]
            if p.slope < -slope_tol:
                cands.append((NINF, False, None, Witness("tail", xm, m)))
            elif p.slope <= slope_tol:
                cands.append((p.value, True, xm + 1.0, Witness("limit", xm, m)))
            else:
                cands.append((p.value, False, None, Witness("limit", xm, m)))
        else:
            a, b = f.xs[j - 1], f.xs[j]
            va, vb = p.value, p.at(a, b)
            if p.slope == 0:
                cands.append((va, True, 0.5 * (a + b), Witness("limit", a, j)))
            elif va <= vb:
                cands.append((va, False, None, Witness("limit", a, j)))
            else:
                cands.append((vb, False, None, Witness("limit", b, j)))
    best = min(c[0] for c in cands)
    attained = [c for c in cands if c[1] and er.isclose(c[0], best, 1e-12)]
    if attained:
        c = attained[0]
        return ExtReal(best), True, c[2], c[3]
    c = next(c for c in cands if c[0] == best)
    return ExtReal(best), False, None, c[3]


def infimum(f: PwlFunction):
    """Exact infimum and a minimiser, or ``None`` when the infimum is not attained."""
    val, attained, arg, _ = infimum_witness(f)
    return val, (arg if attained else None)


# -- domain and predicates --------------------------------------------------


def _elements(f: PwlFunction):
    """Pieces and points in left-to-right order as ``(kind, index)``."""
    out = [("piece", 0)]
    for i in range(f.m):
        out.append(("point", i))
        out.append(("piece", i + 1))
    return out


def _element_value(f: PwlFunction, el) -> float:
    kind, i = el
    return f.values[i] if kind == "point" else f.pieces[i].value


def _component_runs(f: PwlFunction):
    runs, cur = [], []
    for el in _elements(f):
        if _element_value(f, el) < INF:
            cur.append(el)
        elif cur:
            runs.append(cur)
            cur = []
    if cur:
        runs.append(cur)
    return runs


def _run_interval(f: PwlFunction, run) -> Interval:
    kind, i = run[0]
    if kind == "point":
        lo, lo_c = f.xs[i], True
    else:
        lo, lo_c = (NINF if i == 0 else f.xs[i - 1]), False
    kind, i = run[-1]
    if kind == "point":
        hi, hi_c = f.xs[i], True
    else:
        hi, hi_c = (INF if i == f.m else f.xs[i]), False
    return Interval(lo, hi, lo_c, hi_c)


def domain_components(f: PwlFunction) -> list:
    """``dom f`` as a list of disjoint intervals, left to right."""
    return [_run_interval(f, r) for r in _component_runs(f)]


def is_proper(f: PwlFunction) -> bool:
    if any(v == NINF for v in f.values) or any(p.value == NINF for p in f.pieces):
        return False
    return bool(domain_components(f))


def is_lsc(f: PwlFunction, tol: float = 1e-9) -> bool:
    for i, v in enumerate(f.values):
        lim = min(f.left_limit(i), f.right_limit(i))
        if v == lim or math.isinf(lim) and lim < 0 and v == NINF:
            continue
        if lim == NINF or v == INF:
            return False
        if v > lim + tol * max(1.0, abs(lim)):
            return False
    return True


def is_convex(f: PwlFunction, tol: float = 1e-9) -> bool:
    runs = _component_runs(f)
    if not runs:
        return True
    if len(runs) > 1:
        return False
    run = runs[0]
    if len(run) == 1:
        return True
    vals = [_element_value(f, el) for el in run]
    if any(v == NINF for v in vals):
        # a convex function equal to -inf somewhere is -inf on the interior of its domain
        for k, el in enumerate(run):
            interior = 0 < k < len(run) - 1 or el[0] == "piece"
            if interior and vals[k] != NINF:
                return False
        return True
    for k, (kind, i) in enumerate(run):
        if kind != "point":
            continue
        v = f.values[i]
        lim_l, lim_r = f.left_limit(i), f.right_limit(i)
        scale_ = tol * max(1.0, abs(v))
        if k == 0:
            if v < lim_r - scale_:
                return False
        elif k == len(run) - 1:
            if v < lim_l - scale_:
                return False
        else:
            if abs(v - lim_l) > scale_ or abs(v - lim_r) > scale_:
                return False
            if f.pieces[i + 1].slope < f.pieces[i].slope - tol * max(1.0, abs(f.pieces[i].slope)):
                return False
    return True


def is_gamma0(f: PwlFunction, tol: float = 1e-9) -> bool:
    return is_proper(f) and is_convex(f, tol) and is_lsc(f, tol)


# -- hulls -------------------------------------------------------------------


def lsc_hull(f: PwlFunction) -> PwlFunction:
    vals = tuple(min(v, f.left_limit(i), f.right_limit(i)) for i, v in enumerate(f.values))
    return PwlFunction(f.xs, vals, f.pieces).simplify()


def closure_points(f: PwlFunction):
    """Points of the closed graph of a function without ``-inf`` values.

    Returns ``(points, left_slope, right_slope)`` where a slope is ``None`` when
    the corresponding tail is ``+inf``.
    """
    pts = []
    for x, v in zip(f.xs, f.values):
        if math.isfinite(v):
            pts.append((x, v))
    m = f.m
    for j, p in enumerate(f.pieces):
        if not p.finite:
            continue
        if j == 0:
            pts.append((f.xs[0], p.value))
        elif j == m:
            pts.append((f.xs[-1], p.value))
        else:
            pts.append((f.xs[j - 1], p.value))
            pts.append((f.xs[j], p.at(f.xs[j - 1], f.xs[j])))
    p0, pm = f.pieces[0], f.pieces[-1]
    sl = p0.slope if p0.finite else None
    sr = pm.slope if pm.finite else None
    return pts, sl, sr


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _slope(a, b) -> float:
    return (b[1] - a[1]) / (b[0] - a[0])


def _lower_chain(points):
    pts = sorted(points)
    uniq = []
    for p in pts:
        if uniq and abs(p[0] - uniq[-1][0]) <= MERGE_TOL:
            continue
        uniq.append(p)
    hull: list = []
    for p in uniq:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    return hull


def _closed_hull_finite(f: PwlFunction) -> Optional[PwlFunction]:
    """Greatest lsc convex minorant of a function with no ``-inf`` values.

    Returns ``None`` when that minorant is identically ``-inf``.
    """
    pts, sl, sr = closure_points(f)
    if sl is not None and sr is not None and sl > sr:
        return None
    hull = _lower_chain(pts)
    if sr is not None:
        while len(hull) >= 2 and _slope(hull[-2], hull[-1]) >= sr:
            hull.pop()
    if sl is not None:
        while len(hull) >= 2 and _slope(hull[0], hull[1]) <= sl:
            hull.pop(0)
    xs = tuple(p[0] for p in hull)
    ys = tuple(p[1] for p in hull)
    pieces = [Piece(ys[0], sl) if sl is not None else _POS]
    for a, b in zip(hull, hull[1:]):
        pieces.append(Piece(a[1], _slope(a, b)))
    pieces.append(Piece(ys[-1], sr) if sr is not None else _POS)
    return PwlFunction(xs, ys, tuple(pieces))


def convex_hull(f: PwlFunction) -> PwlFunction:
    """Greatest convex minorant (not necessarily lsc)."""
    comps = domain_components(f)
    if not comps:
        return constant(INF)
    lo, lo_c = comps[0].lo, comps[0].lo_closed
    hi, hi_c = comps[-1].hi, comps[-1].hi_closed
    if lo == hi:
        return PwlFunction((lo,), (float(evaluate(f, lo)),), (_POS, _POS))
    lo_val = float(evaluate(f, lo)) if lo_c else INF
    hi_val = float(evaluate(f, hi)) if hi_c else INF
    has_ninf = any(v == NINF for v in f.values) or any(p.value == NINF for p in f.pieces)
    if has_ninf:
        # a convex minorant that is -inf somewhere is -inf on the whole interior
        xs, vals = [], []
        if math.isfinite(lo):
            xs.append(lo)
            vals.append(lo_val)
        if math.isfinite(hi):
            xs.append(hi)
            vals.append(hi_val)
        if not xs:
            return constant(NINF)
        pieces = [_POS if math.isfinite(lo) else _NEG]
        pieces += [_NEG] * (len(xs) - 1)
        pieces.append(_POS if math.isfinite(hi) else _NEG)
        return PwlFunction(tuple(xs), tuple(vals), tuple(pieces)).simplify()
    h = _closed_hull_finite(f)
    if h is None:
        return constant(NINF)
    vals = list(h.values)
    if math.isfinite(lo):
        vals[0] = lo_val
    if math.isfinite(hi):
        vals[-1] = hi_val
    return PwlFunction(h.xs, tuple(vals), h.pieces).simplify()


def closed_convex_hull(f: PwlFunction) -> PwlFunction:
    return lsc_hull(convex_hull(f))


# -- comparison --------------------------------------------------------------


def _diff(a: float, b: float) -> float:
    if math.isinf(a) or math.isinf(b):
        return 0.0 if a == b else INF
    return abs(a - b) / max(1.0, abs(a), abs(b))


def max_discrepancy(f: PwlFunction, g: PwlFunction) -> float:
    """Largest (scaled) gap between ``f`` and ``g`` over all breakpoints and pieces."""
    M = merged_breakpoints([f, g])
    worst = 0.0
    for x in M:
        worst = max(worst, _diff(value_near(f, x), value_near(g, x)))
    for lo, hi in regions(M):
        pf, pg = line_on(f, lo, hi), line_on(g, lo, hi)
        if pf.finite != pg.finite:
            return INF
        if not pf.finite:
            if pf.value != pg.value:
                return INF
            continue
        worst = max(worst, _diff(pf.value, pg.value))
        if lo is None or hi is None:
            worst = max(worst, _diff(pf.slope, pg.slope))
        else:
            worst = max(worst, _diff(pf.at(lo, hi), pg.at(lo, hi)))
    return worst


def pwl_equal(f: PwlFunction, g: PwlFunction, tol: float = 1e-9) -> bool:
    return max_discrepancy(f, g) <= tol


def same_structure(f: PwlFunction, g: PwlFunction, tol: float = 1e-9) -> bool:
    """Equal as functions and with the same essential breakpoints."""
    fs, gs = f.simplify(), g.simplify()
    if fs.m != gs.m:
        return False
    if any(abs(a - b) > tol * max(1.0, abs(a)) for a, b in zip(fs.xs, gs.xs)):
        return False
    return pwl_equal(fs, gs, tol)
