"""Dispatch scenarios to their verifiers and collect reports."""

from __future__ import annotations

import math
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .. import extreal as er
from .. import pwl
from ..conjugate import (
    check_hull_infimum,
    check_biconjugate,
    check_hull_conjugate,
    conj_of_inf,
    conj_of_sup,
    conjugate,
    conjugate_grid,
    lipschitz_envelope,
)
from ..extreal import INF, NINF
from ..grid import GridFunction
from ..minimax import (
    BifunctionFamily,
    FunctionSequence,
    interior_equality,
    marginal_check,
    monotone_minimax,
    simplex_duality,
    verify_localized,
    verify_mm1,
    verify_mmb,
)
from ..pwl import PwlFunction
from ..subdiff import eps_subdiff_oracle, eps_subdifferential, max_rule
from .scenarios import Scenario

__all__ = ["Report", "Outcome", "run_scenario", "run_suite", "summarize", "STATUSES"]

STATUSES = ("pass", "fail", "vacuous", "error")


@dataclass
class Outcome:
    """What a verifier found; ``holds=None`` means nothing was asserted."""

    holds: Optional[bool]
    hypotheses: dict = field(default_factory=dict)
    lhs: object = None
    rhs: object = None
    gap: object = None
    witnesses: dict = field(default_factory=dict)
    message: str = ""


@dataclass
class Report:
    id: str
    kind: str
    status: str
    hypotheses: dict
    lhs: object
    rhs: object
    gap: object
    witnesses: dict
    message: str
    wall_time: float = 0.0

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "id": self.id,
            "kind": self.kind,
            "status": self.status,
            "hypotheses": _enc(self.hypotheses),
            "lhs": _enc(self.lhs),
            "rhs": _enc(self.rhs),
            "gap": _enc(self.gap),
            "witnesses": _enc(self.witnesses),
            "message": self.message,
        }
        if timing:
            d["wall_time"] = round(self.wall_time, 6)
        return d


def _enc(v):
    """Plain JSON data: numpy scalars unwrapped, infinities as strings, containers walked."""
    if isinstance(v, np.generic):
        v = v.item()
    if v is None or isinstance(v, (bool, str, int)):
        return v
    if isinstance(v, float):
        return er.to_json(v)
    if isinstance(v, dict):
        return {str(k): _enc(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_enc(x) for x in v]
    return v


def _gap(lhs: float, rhs: float) -> float:
    if lhs == rhs:
        return 0.0
    if lhs == NINF or rhs == INF:
        return INF
    if lhs == INF or rhs == NINF:
        return NINF
    return rhs - lhs


def _fault_shift(lhs: float, rhs: float) -> float:
    """A perturbation of ``lhs`` that pushes it strictly above ``rhs``."""
    if math.isfinite(lhs) and math.isfinite(rhs):
        return lhs + abs(rhs - lhs) + 1.0
    return INF if rhs != INF else lhs


def _expected(outcome: Outcome, payload: dict, tol: float) -> Outcome:
    exp = payload.get("expected") or {}
    bad = []
    for side in ("lhs", "rhs"):
        if side in exp:
            want = float(er.from_json(exp[side]))
            got = getattr(outcome, side)
            if got is None or not er.isclose(float(got), want, tol):
                bad.append(f"{side}={er.to_json(got) if got is not None else None} expected {er.to_json(want)}")
    if bad:
        outcome.holds = False
        outcome.message = "; ".join(filter(None, [outcome.message, "golden mismatch: " + ", ".join(bad)]))
    return outcome


# -- per-kind verifiers ------------------------------------------------------


def _oracle_conjugate(f: PwlFunction, tol: float) -> dict:
    """Compare the exact conjugate with a brute-force transform of samples of ``f``."""
    fin = [p.slope for p in f.pieces if p.finite]
    comps = pwl.domain_components(f)
    lo_s = f.pieces[0].slope if f.pieces[0].finite else (min(fin) - 5 if fin else -5.0)
    hi_s = f.pieces[-1].slope if f.pieces[-1].finite else (max(fin) + 5 if fin else 5.0)
    delta = 0.05 * max(hi_s - lo_s, 1.0)
    if not comps or hi_s - lo_s <= 3 * delta:
        return {"skipped": "no interior dual points"}
    probes = np.linspace(lo_s + delta, hi_s - delta, 101)
    x_lo, x_hi = f.xs[0] - 20.0, f.xs[-1] + 20.0
    nodes = set(np.linspace(x_lo, x_hi, 2001).tolist())
    for x in f.xs:
        nodes.update((x, x - 1e-10, x + 1e-10))
    axis = np.array(sorted(nodes))
    g = GridFunction((axis,), np.array([float(f(x)) for x in axis]))
    brute = conjugate_grid(g, probes).values
    exact = conjugate(f)
    worst = 0.0
    for s, b in zip(probes, brute):
        e = float(exact(s))
        if math.isinf(e) or math.isinf(b):
            d = 0.0 if e == b else INF
        else:
            d = abs(e - b)
        worst = max(worst, d)
    return {"max_discrepancy": worst, "probes": len(probes), "holds": worst <= tol}


def _run_conjugacy(sc: Scenario, fault: bool) -> Outcome:
    p = sc.payload
    tol = sc.tolerance("exact")
    results = {}
    hyp = {}
    if "function" in p:
        f = PwlFunction.from_dict(p["function"])
        hyp = {"proper": pwl.is_proper(f), "convex": pwl.is_convex(f), "lsc": pwl.is_lsc(f)}
        for name in p["checks"]:
            if name == "biconjugate":
                results[name] = check_biconjugate(f, tol).to_dict()
            elif name == "hull_conjugate":
                results[name] = check_hull_conjugate(f, tol).to_dict()
            elif name == "hull_infimum":
                results[name] = check_hull_infimum(f, tol).to_dict()
            elif name == "oracle":
                r = _oracle_conjugate(f, sc.tolerance("grid"))
                results[name] = {"identity": "oracle", "hypothesis_ok": "holds" in r, "holds": r.pop("holds", None), **r}
            else:
                raise ValueError(f"check {name!r} needs a family payload")
    else:
        fam = [PwlFunction.from_dict(g) for g in p["family"]]
        for name in p["checks"]:
            if name == "inf_rule":
                results[name] = conj_of_inf(fam, tol).to_dict()
            elif name == "sup_rule":
                results[name] = conj_of_sup(fam, tol).to_dict()
            else:
                raise ValueError(f"check {name!r} needs a single function payload")
        if "conjugate" in p.get("expected", {}):
            want = PwlFunction.from_dict(p["expected"]["conjugate"])
            got = conjugate(f)
            results["golden"] = {
                "identity": "golden_conjugate",
                "hypothesis_ok": True,
                "holds": pwl.pwl_equal(got, want, tol),
                "max_discrepancy": er.to_json(pwl.max_discrepancy(got, want)),
            }
    asserted = {k: r["holds"] for k, r in results.items() if r["holds"] is not None}
    if fault and asserted:
        asserted[next(iter(asserted))] = False
    worst = 0.0
    for r in results.values():
        d = r.get("max_discrepancy")
        if d is not None:
            worst = max(worst, float(er.from_json(d)))
    witnesses = {
        k: {kk: vv for kk, vv in r.items() if kk not in ("lhs", "rhs")} for k, r in results.items()
    }
    if not asserted:
        msgs = sorted({r.get("message", "") for r in results.values()} - {""})
        return Outcome(None, hyp, gap=worst, witnesses=witnesses, message="; ".join(msgs) or "nothing asserted")
    failed = [k for k, v in asserted.items() if not v]
    return Outcome(not failed, hyp, gap=worst, witnesses=witnesses, message=("failed: " + ", ".join(failed)) if failed else "")


def _subdiff_oracle(f: PwlFunction, x: float, eps: float) -> dict:
    exact = eps_subdifferential(f, x, eps)
    if exact.empty:
        lo, hi = -5.0, 5.0
    else:
        lo = exact.lo if math.isfinite(exact.lo) else exact.hi - 10.0
        hi = exact.hi if math.isfinite(exact.hi) else exact.lo + 10.0
        if not (math.isfinite(lo) and math.isfinite(hi)):
            lo, hi = -10.0, 10.0
    probes = [s for s in np.linspace(lo - 2.0, hi + 2.0, 81) if min(abs(s - lo), abs(s - hi)) > 1e-3]
    far = 1e5
    nodes = set(np.linspace(f.xs[0] - 20.0, f.xs[-1] + 20.0, 401).tolist())
    nodes.update((f.xs[0] - far, f.xs[-1] + far, float(x)))
    for b in f.xs:
        # neighbours must stay resolvable in floating point next to large values
        h = 1e-7 * max(1.0, abs(b), abs(float(f(b))) if math.isfinite(float(f(b))) else 1.0)
        nodes.update((b, b - h, b + h))
    axis = np.array(sorted(nodes))
    g = GridFunction((axis,), np.array([float(f(t)) for t in axis]))
    fx = float(f(x))
    atol = 1e-12 * max(1.0, abs(fx) if math.isfinite(fx) else 1.0)
    brute = set(eps_subdiff_oracle(g, x, eps, probes, atol))
    mismatch = [float(s) for s in probes if exact.contains(s) != (s in brute)]
    return {"exact": exact.to_json(), "probes": len(probes), "mismatches": mismatch[:5], "agree": not mismatch}


def _run_subdiff(sc: Scenario, fault: bool) -> Outcome:
    p = sc.payload
    funcs = [PwlFunction.from_dict(g) for g in p["generators"]]
    x, eps = float(p["x"]), float(p["eps"])
    rep = max_rule(funcs, x, eps, tol=sc.tolerance("grid"))
    d = rep.to_dict()
    witnesses = {"rhs_cover": d["rhs_cover"], "attained_by": d["attained_by"], "inclusion_ok": d["inclusion_ok"]}
    holds = rep.passed
    msg = rep.message
    if p.get("oracle") and holds is not None:
        f = pwl.pointwise_max(funcs)
        orc = _subdiff_oracle(f, x, eps)
        witnesses["oracle"] = orc
        holds = holds and orc["agree"]
        if not orc["agree"]:
            msg = "grid oracle disagrees"
    if "expected" in p and "lhs" in p["expected"] and holds is not None:
        want = [float(er.from_json(v)) for v in p["expected"]["lhs"]]
        got = [float(er.from_json(v)) for v in (d["lhs"] or [])]
        if want != got and not (len(want) == len(got) and all(er.isclose(a, b, 1e-9) for a, b in zip(want, got))):
            holds = False
            msg = f"golden mismatch: lhs {got} expected {want}"
    if fault and holds is not None:
        holds, msg = False, "injected fault"
    return Outcome(holds, d["hypotheses"], d["lhs"], d["rhs_cover"], d["endpoint_gap"], witnesses, msg)


def _minimax_outcome(rep, fault: bool) -> Outcome:
    d = rep.to_dict()
    lhs, rhs = float(rep.lhs), float(rep.rhs)
    holds = rep.holds
    msg = rep.message
    if fault and holds is not None:
        lhs = _fault_shift(lhs, rhs)
        holds, msg = False, "injected fault"
    witnesses = {k: d[k] for k in ("subset_size", "lambda_star", "mode") if k in d}
    for k in ("classification", "certificate_gap"):
        if k in d:
            witnesses[k] = d[k]
    return Outcome(holds, d["hypotheses"], lhs, rhs, _gap(lhs, rhs), witnesses, msg)


def _family(sc: Scenario) -> BifunctionFamily:
    return BifunctionFamily.from_dict(sc.payload)


def _run_mm1(sc, fault):
    fam = _family(sc)
    rep = verify_mm1(fam, sc.tolerance("exact"), sc.payload.get("density", 8))
    return _expected(_minimax_outcome(rep, fault), sc.payload, sc.tolerance("exact"))


def _run_localized(sc, fault):
    fam = _family(sc)
    rep = verify_localized(fam, sc.tolerance("exact"), sc.payload.get("density", 8))
    return _expected(_minimax_outcome(rep, fault), sc.payload, sc.tolerance("exact"))


def _run_mmb(sc, fault):
    fam = _family(sc)
    rep = verify_mmb(fam, sc.tolerance("exact"), sc.payload.get("density", 8))
    return _expected(_minimax_outcome(rep, fault), sc.payload, sc.tolerance("exact"))


def _run_interior(sc, fault):
    fam = _family(sc)
    rep = interior_equality(fam, sc.tolerance("exact"), sc.payload.get("density", 8))
    return _expected(_minimax_outcome(rep, fault), sc.payload, sc.tolerance("exact"))


def _run_duality(sc, fault):
    funcs = [PwlFunction.from_dict(g) for g in sc.payload["generators"]]
    mode = sc.payload.get("mode", "auto")
    if mode == "auto":
        exact_ok = all(pwl.is_proper(g) and pwl.is_lsc(g) for g in funcs)
        mode = "lp" if exact_ok else "grid"
    tol = sc.tolerance("exact" if mode == "lp" else "grid")
    rep = simplex_duality(funcs, mode, tol)
    d = rep.to_dict()
    primal, dual = float(rep.primal), float(rep.dual)
    holds, msg = rep.holds, rep.message
    if fault and holds is not None:
        primal = _fault_shift(primal, dual)
        holds, msg = False, "injected fault"
    witnesses = {"lambda_star": d["lambda_star"], "mode": d["mode"]}
    if "certificate_gap" in d:
        witnesses["certificate_gap"] = d["certificate_gap"]
    gap = rep.gap if not fault else _gap(primal, dual)
    out = Outcome(holds, d["hypotheses"], primal, dual, gap, witnesses, msg)
    return _expected(out, sc.payload, tol)


def _run_monotone(sc, fault):
    seq = FunctionSequence(tuple(GridFunction.from_dict(t) for t in sc.payload["terms"]))
    rep = monotone_minimax(seq)
    d = rep.to_dict()
    lhs, rhs = float(rep.lhs), float(rep.rhs)
    holds = rep.holds
    if rep.nondecreasing:
        holds = holds and rep.plain_holds and rep.truncation_monotone
    msg = ""
    if fault:
        lhs = _fault_shift(lhs, rhs)
        holds, msg = False, "injected fault"
    hyp = {"nondecreasing": rep.nondecreasing}
    wit = {k: d[k] for k in ("plain_lhs", "plain_rhs", "plain_holds", "truncation_values", "truncation_monotone")}
    return _expected(Outcome(holds, hyp, lhs, rhs, _gap(lhs, rhs), wit, msg), sc.payload, 0.0)


def default_radii(f: PwlFunction) -> list:
    slopes = [abs(p.slope) for p in f.pieces if p.finite]
    bound = max(slopes, default=0.0)
    return [1.0, 10.0, 100.0, 1e3, 1e4, 1e5, 1e6 * (1.0 + bound)]


def _run_envelope(sc, fault):
    p = sc.payload
    f = PwlFunction.from_dict(p["function"])
    x0 = float(p["x0"])
    radii = sorted(float(r) for r in p.get("radii") or default_radii(f))
    tol = sc.tolerance("envelope")
    hyp = {"proper": pwl.is_proper(f), "gamma0": pwl.is_gamma0(f)}
    vals = [float(lipschitz_envelope(f, r, x0)) for r in radii]
    fx = float(f(x0))
    target = float(pwl.lsc_hull(f)(x0))
    wit = {"radii": radii, "values": [er.to_json(v) for v in vals], "f_x0": er.to_json(fx)}
    if not hyp["proper"]:
        return Outcome(None, hyp, vals[-1], target, None, wit, "hypothesis failed: f is not proper")
    mono = all(b >= a - tol for a, b in zip(vals, vals[1:]))
    below = all(v <= fx + tol for v in vals)
    if target == INF:
        comps = pwl.domain_components(f)
        dist = min(min(abs(x0 - c.lo), abs(x0 - c.hi)) for c in comps)
        converged = vals[-1] >= 0.5 * radii[-1] * dist
        wit["distance_to_domain"] = dist
        gap = INF
    else:
        gap = abs(target - vals[-1])
        converged = gap <= tol
    if fault:
        converged = False
    wit.update({"nondecreasing": mono, "below_f": below, "converged": converged})
    holds = mono and below and converged
    if "expected" in p and "values" in p["expected"]:
        want = [float(er.from_json(v)) for v in p["expected"]["values"]]
        if len(want) != len(vals) or not all(er.isclose(a, b, 1e-9) for a, b in zip(vals, want)):
            holds = False
            wit["golden_mismatch"] = True
    msg = "" if holds else "failed: " + ", ".join(k for k in ("nondecreasing", "below_f", "converged") if not wit[k])
    if fault:
        msg = "injected fault"
    return Outcome(holds, hyp, vals[-1], target, gap, wit, msg.rstrip(": "))


def _run_marginal(sc, fault):
    fam = _family(sc)
    rep = marginal_check(fam, density=sc.payload.get("density", 8), tol=sc.tolerance("grid"))
    holds = rep.convex and not fault
    wit = {"mesh_convex": rep.mesh_convex, "refined": rep.refined, "mesh_size": rep.mesh_size}
    msg = "injected fault" if fault else ("" if holds else "marginal not discretely convex")
    return Outcome(holds, {"lsc_on_grid": "automatic"}, None, None, None, wit, msg)


_RUNNERS = {
    "conjugacy": _run_conjugacy,
    "subdiff": _run_subdiff,
    "mm1": _run_mm1,
    "mmb": _run_mmb,
    "localized": _run_localized,
    "simplex_duality": _run_duality,
    "interior_equality": _run_interior,
    "monotone": _run_monotone,
    "envelope": _run_envelope,
    "marginal": _run_marginal,
}


def _status(holds: Optional[bool]) -> str:
    if holds is None:
        return "vacuous"
    return "pass" if holds else "fail"


def run_scenario(sc: Scenario, tol: Optional[float] = None) -> Report:
    """Verify one scenario; exceptions become an ``error`` report."""
    if tol is not None:
        sc = Scenario(**{**sc.__dict__, "tolerances": {**{k: tol for k in ("exact", "grid", "envelope")}, **sc.tolerances}})
    t0 = time.perf_counter()
    try:
        out = _RUNNERS[sc.kind](sc, sc.inject_fault)
        exp_status = (sc.payload.get("expected") or {}).get("status")
        status = _status(out.holds)
        if exp_status is not None and exp_status != status and not sc.inject_fault:
            out.message = "; ".join(filter(None, [out.message, f"status {status} expected {exp_status}"]))
            status = "fail"
        rep = Report(sc.id, sc.kind, status, out.hypotheses, out.lhs, out.rhs, out.gap, out.witnesses, out.message)
    except Exception as exc:  # isolate any failure inside one scenario
        tb = traceback.format_exception_only(type(exc), exc)[-1].strip()
        rep = Report(sc.id, sc.kind, "error", {}, None, None, None, {}, tb)
    rep.wall_time = time.perf_counter() - t0
    return rep


def _run_one(args):
    sc, tol = args
    return run_scenario(sc, tol)


def run_suite(scenarios: Sequence[Scenario], jobs: int = 1, tol: Optional[float] = None):
    """Run every scenario, in parallel when ``jobs > 1``; reports keep input order."""
    scenarios = list(scenarios)
    if jobs <= 1 or len(scenarios) <= 1:
        reports = [run_scenario(sc, tol) for sc in scenarios]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_one, [(sc, tol) for sc in scenarios], chunksize=max(1, len(scenarios) // (4 * jobs))))
    return reports, summarize(reports)


def summarize(reports) -> dict:
    counts = {s: 0 for s in STATUSES}
    for r in reports:
        counts[r.status] += 1
    counts["total"] = len(reports)
    return counts
