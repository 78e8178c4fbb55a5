"""Seeded random functions and scenarios.

All random coordinates are rounded to two decimals so that generated
scenarios serialise identically on every platform.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .. import pwl
from ..extreal import INF, NINF
from ..grid import GridFunction
from ..pwl import Piece, PwlFunction

__all__ = [
    "random_convex",
    "random_general",
    "corrupt_nonlsc",
    "improper_lsc",
    "improper_open",
    "improper_plateau",
    "random_nonconvex_shared",
    "generate",
    "KINDS",
]

KINDS = (
    "conjugacy",
    "subdiff",
    "mm1",
    "mmb",
    "localized",
    "simplex_duality",
    "interior_equality",
    "monotone",
    "envelope",
    "marginal",
)


def _r(x) -> float:
    return float(np.round(x, 2))


def _breaks(rng, k: int, lo: float = -10.0, hi: float = 10.0) -> list:
    pts: set = set()
    while len(pts) < k:
        pts.add(_r(rng.uniform(lo, hi)))
    return sorted(pts)


def random_convex(
    rng: np.random.Generator,
    max_breaks: int = 5,
    p_bounded: float = 0.4,
    bounded: Optional[tuple] = None,
) -> PwlFunction:
    """A random function in Γ₀(ℝ): sorted slopes, optionally cut to a closed interval.

    ``bounded`` forces ``(left_bounded, right_bounded)``.
    """
    k = int(rng.integers(1, max_breaks + 1))
    xs = _breaks(rng, k)
    slopes = sorted(_r(s) for s in rng.uniform(-5, 5, size=k + 1))
    ys = [_r(rng.uniform(-5, 5))]
    for j in range(1, k):
        ys.append(ys[-1] + slopes[j] * (xs[j] - xs[j - 1]))
    f = pwl.from_points(xs, ys, slopes[0], slopes[-1])
    if bounded is None:
        bounded = (rng.random() < p_bounded, rng.random() < p_bounded)
    lo = _r(rng.uniform(-10, -1)) if bounded[0] else NINF
    hi = _r(rng.uniform(1, 10)) if bounded[1] else INF
    if bounded[0] or bounded[1]:
        f = pwl.add_functions(f, pwl.indicator(lo, hi))
    return f


def _finite_ends(f: PwlFunction):
    comps = pwl.domain_components(f)
    ends = []
    if comps:
        c = comps[0]
        if math.isfinite(c.lo) and c.lo_closed:
            ends.append(c.lo)
        c = comps[-1]
        if math.isfinite(c.hi) and c.hi_closed:
            ends.append(c.hi)
    return ends


def _set_value(f: PwlFunction, x: float, v: float) -> PwlFunction:
    i = f.xs.index(x)
    vals = list(f.values)
    vals[i] = v
    return PwlFunction(f.xs, tuple(vals), f.pieces)


def corrupt_nonlsc(rng: np.random.Generator, f: PwlFunction, keep_convex: bool = True) -> PwlFunction:
    """Raise one breakpoint value above the neighbouring limits.

    With ``keep_convex`` only a closed domain endpoint is raised (by a finite
    amount or to ``+inf``), which keeps the function convex; the function must
    then have a closed finite endpoint.
    """
    ends = _finite_ends(f)
    if ends:
        x = ends[int(rng.integers(len(ends)))]
        bump = INF if rng.random() < 0.5 else _r(rng.uniform(0.5, 3.0))
        return _set_value(f, x, f.values[f.xs.index(x)] + bump)
    if keep_convex:
        raise ValueError("no closed finite endpoint to raise")
    i = int(rng.integers(f.m))
    return _set_value(f, f.xs[i], f.values[i] + _r(rng.uniform(0.5, 3.0)))


def improper_lsc(rng: np.random.Generator) -> PwlFunction:
    """``-inf`` on a closed interval (or everywhere), ``+inf`` elsewhere: convex, lsc, improper."""
    if rng.random() < 0.15:
        return pwl.constant(NINF)
    a = _r(rng.uniform(-10, 0))
    b = _r(rng.uniform(a + 0.5, 10)) if a + 0.5 < 10 else a
    return pwl.weighted_sum([1.0, 1.0], [pwl.indicator(a, b), pwl.constant(NINF)])


def improper_open(rng: np.random.Generator) -> PwlFunction:
    """``-inf`` on an open interval with finite endpoint values: convex, improper, not lsc."""
    a = _r(rng.uniform(-10, -0.5))
    b = _r(rng.uniform(0.5, 10))
    return PwlFunction((a, b), (_r(rng.uniform(-3, 3)), _r(rng.uniform(-3, 3))), (Piece(INF), Piece(NINF), Piece(INF)))


def improper_plateau(rng: np.random.Generator, f: PwlFunction, within: Optional[tuple] = None) -> PwlFunction:
    """Overwrite a sub-interval of ``dom f`` (or of ``within``) with ``-inf`` (usually non-convex)."""
    c = pwl.domain_components(f)[0]
    lo, hi = within if within is not None else (max(c.lo, -8.0), min(c.hi, 8.0))
    if hi < lo:  # the domain lies beyond the sampling window
        lo = hi = c.lo if math.isfinite(c.lo) else c.hi
    a = _r(rng.uniform(lo, hi))
    b = _r(rng.uniform(min(a, hi), hi))
    if b <= a:
        b = a + 0.5
    plateau = PwlFunction((a, b), (NINF, NINF), (Piece(0.0), Piece(NINF), Piece(0.0)))
    return pwl.weighted_sum([1.0, 1.0], [f, plateau])


def random_general(
    rng: np.random.Generator, max_breaks: int = 6, p_jump: float = 0.3, p_hole: float = 0.1, minorized: bool = False
) -> PwlFunction:
    """A proper but otherwise arbitrary PWL function (non-convex, possibly non-lsc).

    With ``minorized`` the tail slopes are ordered so that an affine minorant
    exists, which keeps the closed convex hull proper.
    """
    k = int(rng.integers(1, max_breaks + 1))
    xs = _breaks(rng, k)
    vals = [_r(v) for v in rng.uniform(-5, 5, size=k)]
    pieces = []
    left = rng.random()
    pieces.append(Piece(INF) if left < 0.3 else Piece(vals[0], _r(rng.uniform(-5, 5))))
    for j in range(k - 1):
        a = vals[j] if rng.random() > p_jump else _r(rng.uniform(-5, 5))
        b = vals[j + 1] if rng.random() > p_jump else _r(rng.uniform(-5, 5))
        if rng.random() < 0.1:
            pieces.append(Piece(INF))
        else:
            pieces.append(Piece(a, (b - a) / (xs[j + 1] - xs[j])))
    right_v = vals[-1] if rng.random() > p_jump else _r(rng.uniform(-5, 5))
    pieces.append(Piece(INF) if rng.random() < 0.3 else Piece(right_v, _r(rng.uniform(-5, 5))))
    if minorized and pieces[0].finite and pieces[-1].finite:
        lo_s, hi_s = sorted((pieces[0].slope, pieces[-1].slope))
        if hi_s - lo_s < 0.5:
            hi_s = _r(lo_s + 1.0)
        pieces[0], pieces[-1] = Piece(pieces[0].value, lo_s), Piece(pieces[-1].value, hi_s)
    for j in range(k):
        if rng.random() < p_hole:
            vals[j] = INF
    f = PwlFunction(tuple(xs), tuple(vals), tuple(pieces))
    if not pwl.domain_components(f):
        return random_general(rng, max_breaks, p_jump, p_hole, minorized)
    return f


def random_nonconvex_shared(rng: np.random.Generator, pool, lo: float, hi: float) -> PwlFunction:
    """Continuous PWL on a closed interval with kinks from a shared pool; slopes unsorted."""
    xs = sorted({lo, hi} | {x for x in pool if lo < x < hi})
    ys = [_r(rng.uniform(-5, 5))]
    for a, b in zip(xs, xs[1:]):
        ys.append(ys[-1] + _r(rng.uniform(-3, 3)) * (b - a))
    f = pwl.from_points(xs, ys)
    return f


# -- scenario builders -------------------------------------------------------


def _scenario(kind, seed, params, payload, metadata=None) -> dict:
    return {
        "id": f"{kind}-{seed}" + ("-" + "-".join(f"{k}={params[k]}" for k in sorted(params)) if params else ""),
        "kind": kind,
        "seed": int(seed),
        "params": dict(params),
        "payload": payload,
        "metadata": metadata or {},
    }


def _family_payload(gens, restriction=None) -> dict:
    from ..minimax.family import restriction_to_dict

    return {"generators": [g.to_dict() for g in gens], "y_restriction": restriction_to_dict(restriction)}


def _flags(gens, **extra) -> dict:
    """Metadata describing which pathologies a generated family contains."""
    meta = dict(extra)
    meta["improper"] = any(not pwl.is_proper(g) for g in gens)
    meta["nonlsc"] = any(not pwl.is_lsc(g) for g in gens)
    meta["nonconvex"] = any(not pwl.is_convex(g) for g in gens)
    return meta


def _member(rng, variant: str) -> PwlFunction:
    if variant == "gamma0":
        return random_convex(rng)
    if variant == "nonlsc":
        return corrupt_nonlsc(rng, random_convex(rng, bounded=(rng.random() < 0.5, True)))
    if variant == "improper":
        return improper_lsc(rng) if rng.random() < 0.6 else improper_open(rng)
    if variant == "plateau":
        return improper_plateau(rng, random_convex(rng))
    if variant == "nonconvex":
        return random_general(rng, p_hole=0.0)
    raise ValueError(f"unknown member variant {variant!r}")


def _mm1_family(rng, variant, n):
    if variant == "gamma0":
        return [random_convex(rng) for _ in range(n)], None
    if variant in ("nonlsc", "improper", "plateau", "nonconvex"):
        gens = [random_convex(rng) for _ in range(n)]
        bad = int(rng.integers(1, n + 1))
        for k in rng.choice(n, size=bad, replace=False):
            gens[int(k)] = _member(rng, variant)
        return gens, None
    if variant == "mixed":
        kinds = ["gamma0", "nonlsc", "improper", "plateau", "nonconvex"]
        return [_member(rng, kinds[int(rng.integers(len(kinds)))]) for _ in range(n)], None
    if variant == "empty_A0":
        # a common domain that is open at one end: no mixture is lsc
        a = _r(rng.uniform(-5, 0))
        b = _r(rng.uniform(1, 6))
        open_ind = pwl.indicator(a, b, lo_closed=False, hi_closed=True)
        gens = [pwl.add_functions(random_convex(rng, p_bounded=0.0), open_ind)]
        gens += [random_convex(rng, p_bounded=0.0) for _ in range(n - 1)]
        return gens, None
    if variant == "sup_inf":
        # generators with disjoint domains: sup over the simplex is +inf everywhere
        edges = sorted(_breaks(rng, 2 * n, -9, 9))
        gens = []
        for k in range(n):
            lo, hi = edges[2 * k], edges[2 * k + 1]
            gens.append(pwl.add_functions(random_convex(rng, p_bounded=0.0), pwl.indicator(lo, hi)))
        return gens, None
    raise ValueError(f"unknown mm1 variant {variant!r}")


def _interval(rng):
    from ..pwl import Interval

    lo = _r(rng.uniform(-6, 0))
    hi = _r(rng.uniform(lo + 1, 7))
    return Interval(lo, hi, True, True)


def generate(kind: str, seed: int, params: Optional[dict] = None) -> dict:
    """Build a reproducible scenario of the given kind."""
    if kind not in KINDS:
        raise ValueError(f"unknown scenario kind {kind!r}")
    params = dict(params or {})
    rng = np.random.default_rng([int(seed), KINDS.index(kind)])
    builder = _BUILDERS[kind]
    payload, meta = builder(rng, params)
    return _scenario(kind, seed, params, payload, meta)


def _gen_conjugacy(rng, params):
    variant = params.get("variant", "convex")
    if variant == "convex":
        f = random_convex(rng)
        return {"function": f.to_dict(), "checks": ["biconjugate", "hull_conjugate", "hull_infimum", "oracle"]}, {"class": "gamma0"}
    if variant in ("general", "minorized"):
        f = random_general(rng, minorized=variant == "minorized")
        return {"function": f.to_dict(), "checks": ["biconjugate", "hull_conjugate", "hull_infimum", "oracle"]}, {"class": variant}
    if variant == "improper":
        f = improper_plateau(rng, random_general(rng, p_hole=0.0)) if rng.random() < 0.5 else _member(rng, "improper")
        return {"function": f.to_dict(), "checks": ["biconjugate", "hull_conjugate", "hull_infimum"]}, {"class": "improper", "improper": True}
    if variant == "family":
        n = int(params.get("n", rng.integers(1, 4)))
        fam = [random_general(rng) for _ in range(n)]
        return {"family": [f.to_dict() for f in fam], "checks": ["inf_rule"]}, {}
    if variant == "gamma0_family":
        n = int(params.get("n", rng.integers(1, 4)))
        fam = [random_convex(rng) for _ in range(n)]
        # an empty common domain would put the sup outside Γ₀
        while not pwl.is_gamma0(pwl.pointwise_max(fam)):
            fam = [random_convex(rng) for _ in range(n)]
        return {"family": [f.to_dict() for f in fam], "checks": ["sup_rule"]}, {}
    raise ValueError(f"unknown conjugacy variant {variant!r}")


def _gen_subdiff(rng, params):
    n = int(params.get("n", rng.integers(1, 4)))
    eps = float(params.get("eps", [0.0, 0.1, 1.0][int(rng.integers(3))]))
    while True:
        gens = [random_convex(rng) for _ in range(n)]
        f = pwl.pointwise_max(gens)
        comps = pwl.domain_components(f)
        if comps:
            break
    c = comps[0]
    kinks = [x for x in f.xs if c.contains(x)]
    if kinks and rng.random() < 0.5:
        x = kinks[int(rng.integers(len(kinks)))]
    else:
        lo = max(c.lo, -10.0)
        hi = min(c.hi, 10.0)
        x = _r(rng.uniform(lo, hi)) if hi > lo else lo
        if not c.contains(x):
            x = lo if c.contains(lo) else hi
    return {"generators": [g.to_dict() for g in gens], "x": x, "eps": eps, "oracle": True}, {}


def _gen_mm1(rng, params):
    variant = params.get("variant", "mixed")
    n = int(params.get("n", rng.integers(2, 5)))
    gens, b = _mm1_family(rng, variant, n)
    return _family_payload(gens, b), _flags(gens, variant=variant)


def _gen_localized(rng, params):
    variant = params.get("variant", "mixed")
    n = int(params.get("n", rng.integers(2, 5)))
    gens, _ = _mm1_family(rng, variant, n)
    b = _interval(rng)
    if params.get("open_end"):
        b = b._replace(hi_closed=False)
    return _family_payload(gens, b), _flags(gens, variant=variant)


def _gen_mmb(rng, params):
    variant = params.get("variant", "finite")
    n = int(params.get("n", rng.integers(2, 5)))
    b = _interval(rng)
    pool = _breaks(rng, 4, b.lo, b.hi)
    lo, hi = _r(b.lo - rng.uniform(0, 3)), _r(b.hi + rng.uniform(0, 3))
    gens = []
    for _ in range(n):
        if rng.random() < 0.3:
            gens.append(pwl.add_functions(random_convex(rng, p_bounded=0.0), pwl.indicator(lo, hi)))
        else:
            gens.append(random_nonconvex_shared(rng, pool, lo, hi))
    if variant == "violated":
        k = int(rng.integers(n))
        mid = _r(0.5 * (b.lo + b.hi))
        if rng.random() < 0.5:
            # a hole inside B
            gens[k] = pwl.add_functions(gens[k], pwl.indicator(mid, INF))
        else:
            gens[k] = improper_plateau(rng, gens[k], within=(b.lo, b.hi))
    return _family_payload(gens, b), _flags(gens, variant=variant)


def _gen_duality(rng, params):
    variant = params.get("variant", "lp")
    n = int(params.get("n", rng.integers(2, 7) if variant == "lp" else rng.integers(2, 5)))
    while True:
        if variant == "lp":
            gens = [random_convex(rng) for _ in range(n)]
        elif variant == "improper_member":
            gens = [random_convex(rng) for _ in range(n)]
            k = int(rng.integers(1, n))
            for j in rng.choice(n, size=k, replace=False):
                gens[int(j)] = improper_lsc(rng)
        elif variant == "nonlsc":
            gens = [random_convex(rng) for _ in range(n)]
            k = int(rng.integers(1, n + 1))
            for j in rng.choice(n, size=k, replace=False):
                gens[int(j)] = corrupt_nonlsc(rng, random_convex(rng, bounded=(rng.random() < 0.5, True)))
        else:
            raise ValueError(f"unknown simplex_duality variant {variant!r}")
        if pwl.domain_components(pwl.pointwise_max(gens)):
            break
    return {"generators": [g.to_dict() for g in gens], "mode": "lp" if variant == "lp" else "grid"}, _flags(
        gens, variant=variant
    )


def _gen_interior(rng, params):
    variant = params.get("variant", "gamma0")
    n = int(params.get("n", rng.integers(2, 5)))
    gens, _ = _mm1_family(rng, variant if variant != "gamma0" else "gamma0", n)
    return _family_payload(gens), _flags(gens, variant=variant)


def _gen_monotone(rng, params):
    variant = params.get("variant", "random")
    dims = int(params.get("dims", rng.integers(1, 3)))
    nodes = int(params.get("nodes", 64))
    length = int(params.get("length", rng.integers(1, 9)))
    if dims == 1:
        axes = [np.round(np.sort(rng.choice(np.arange(-50, 51), size=int(rng.integers(2, nodes + 1)), replace=False)) / 5, 2)]
    else:
        side = int(math.isqrt(nodes))
        axes = [np.arange(int(rng.integers(1, side + 1)), dtype=float) for _ in range(2)]
    shape = tuple(a.size for a in axes)
    terms = []
    prev = None
    for _ in range(length):
        vals = np.round(rng.uniform(-5, 5, size=shape), 2)
        if variant == "nondecreasing" and prev is not None:
            vals = prev + np.round(rng.uniform(0, 2, size=shape), 2) * (rng.random(shape) < 0.7)
        mask = rng.random(shape)
        vals = np.where(mask < 0.05, INF, vals)
        if variant != "nondecreasing":
            vals = np.where(mask > 0.97, NINF, vals)
        terms.append(GridFunction(tuple(axes), vals).to_dict())
        prev = vals
    return {"terms": terms}, {"variant": variant}


def _gen_envelope(rng, params):
    variant = params.get("variant", "gamma0")
    if variant == "gamma0":
        f = random_convex(rng)
        c = pwl.domain_components(f)[0]
        lo, hi = max(c.lo, -10.0), min(c.hi, 10.0)
        x0 = _r(rng.uniform(lo, hi))
        x0 = min(max(x0, lo), hi)
    elif variant == "outside":
        f = random_convex(rng, bounded=(True, True))
        c = pwl.domain_components(f)[0]
        x0 = _r(c.hi + rng.uniform(0.5, 5)) if rng.random() < 0.5 else _r(c.lo - rng.uniform(0.5, 5))
    else:
        raise ValueError(f"unknown envelope variant {variant!r}")
    return {"function": f.to_dict(), "x0": x0}, {"variant": variant}


def _gen_marginal(rng, params):
    variant = params.get("variant", "mixed")
    n = int(params.get("n", rng.integers(2, 4)))
    gens, _ = _mm1_family(rng, variant, n)
    return _family_payload(gens), _flags(gens, variant=variant)


_BUILDERS = {
    "conjugacy": _gen_conjugacy,
    "subdiff": _gen_subdiff,
    "mm1": _gen_mm1,
    "mmb": _gen_mmb,
    "localized": _gen_localized,
    "simplex_duality": _gen_duality,
    "interior_equality": _gen_interior,
    "monotone": _gen_monotone,
    "envelope": _gen_envelope,
    "marginal": _gen_marginal,
}
