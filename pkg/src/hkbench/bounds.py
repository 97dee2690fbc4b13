"""Hypothesis-gated checks of Hilbert-Kunz inequalities on computed profiles.

Every check is written as lhs <= rhs with slack = rhs - lhs.  Uncertain
inputs (extrapolated e_HK, s) carry tolerances; the slack tolerance is the
largest change of the slack over the corners of the input box.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .invariants import (
    HKSeries,
    InvariantProfile,
    ProfileConfig,
    RadicalExtensionSpec,
    RingPresentation,
    hk_series,
)
from .hilbert import colength

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped-hypotheses"
INCONCLUSIVE = "inconclusive-tolerance"

EPS = 1e-9


@dataclass
class BoundVerdict:
    check: str
    statement: str
    hypotheses: dict[str, bool] = field(default_factory=dict)
    failed: list[str] = field(default_factory=list)
    lhs: float | None = None
    rhs: float | None = None
    slack: float | None = None
    tolerance: float = 0.0
    status: str = SKIPPED
    within_tolerance: bool = False
    equality: bool = False
    inputs: dict = field(default_factory=dict)
    observations: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        for k in ("lhs", "rhs", "slack", "tolerance"):
            if isinstance(d[k], float) and math.isinf(d[k]):
                d[k] = "inf"
        return d


def _verdict(check, statement, hyps, quantities, fn, kind="le", observations=None) -> BoundVerdict:
    """Evaluate lhs <= rhs (kind 'le') or lhs == rhs (kind 'eq').

    ``quantities`` maps names to (value, tolerance); ``fn`` maps a dict of
    values to (lhs, rhs).
    """
    v = BoundVerdict(check, statement, dict(hyps))
    v.failed = [h for h, ok in hyps.items() if not ok]
    v.observations = list(observations or [])
    if v.failed:
        v.status = SKIPPED
        return v
    missing = [k for k, (val, _) in quantities.items() if val is None]
    if missing:
        v.failed = [f"missing {k}" for k in missing]
        v.status = SKIPPED
        return v
    point = {k: val for k, (val, _) in quantities.items()}
    v.inputs = {k: [_num(val), _num(tol)] for k, (val, tol) in quantities.items()}
    lhs, rhs = fn(point)
    slack = _slack(lhs, rhs, kind)
    tol = 0.0
    uncertain = [k for k, (_, t) in quantities.items() if t]
    if any(math.isinf(quantities[k][1]) for k in uncertain):
        tol = math.inf
    elif uncertain:
        for signs in itertools.product((-1, 1), repeat=len(uncertain)):
            pt = dict(point)
            for k, s in zip(uncertain, signs):
                pt[k] = point[k] + s * quantities[k][1]
            try:
                cl, cr = fn(pt)
            except ZeroDivisionError:
                tol = math.inf
                break
            tol = max(tol, abs(_slack(cl, cr, kind) - slack))
    v.lhs, v.rhs, v.slack, v.tolerance = float(lhs), float(rhs), float(slack), tol
    if slack >= -EPS:
        v.status = PASS
    elif math.isinf(tol):
        v.status = INCONCLUSIVE
    elif -slack <= tol + EPS:
        v.status = PASS
        v.within_tolerance = True
    else:
        v.status = FAIL
    v.equality = abs(float(lhs) - float(rhs)) <= (tol if not math.isinf(tol) else 0.0) + EPS
    return v


def _slack(lhs, rhs, kind):
    if kind == "eq":
        return -abs(rhs - lhs)
    return rhs - lhs


def _num(x):
    if isinstance(x, Fraction):
        return float(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def _flag(prof: InvariantProfile, name: str) -> bool:
    return name in prof.flags


def _ehk(prof):
    return (prof.e_hk, prof.e_hk_tol)


def _s(prof):
    return (prof.s, prof.s_tol)


# ---------------------------------------------------------------------------


def check_sandwich(prof: InvariantProfile) -> list[BoundVerdict]:
    out = []
    exact = lambda x: (x, 0.0)  # noqa: E731
    q = {"e": exact(prof.e), "d": exact(prof.d), "e_hk": _ehk(prof)}
    out.append(_verdict(
        "sandwich-lower", "max{e/d!, 1} <= e_HK", {"d >= 1": (prof.d or 0) >= 1}, q,
        lambda v: (max(Fraction(v["e"], math.factorial(v["d"])), 1), v["e_hk"])))
    out.append(_verdict(
        "sandwich-upper", "e_HK <= e", {"d >= 1": (prof.d or 0) >= 1}, q,
        lambda v: (v["e_hk"], v["e"])))
    qs = dict(q, s=_s(prof))
    out.append(_verdict(
        "hl-upper", "e_HK - 1 <= (e - 1)(1 - s)", {"reduced": _flag(prof, "reduced")}, qs,
        lambda v: (v["e_hk"] - 1, (v["e"] - 1) * (1 - v["s"]))))
    s_below_one = prof.s is not None and prof.s < 1 - prof.s_tol - EPS
    qr = dict(qs, mu=exact(prof.mu_hat))
    out.append(_verdict(
        "ratio-lower", "mu/(e - mu) <= (e_HK - 1)/(1 - s)",
        {"gorenstein": _flag(prof, "gorenstein"), "reduction verified": prof.reduction_status == "verified",
         "s < 1": s_below_one, "mu < e": prof.mu_hat is not None and prof.e is not None and prof.mu_hat < prof.e},
        qr, lambda v: (Fraction(v["mu"], v["e"] - v["mu"]), (v["e_hk"] - 1) / (1 - v["s"]))))
    out.append(_verdict(
        "ratio-upper", "(e_HK - 1)/(1 - s) <= e - 1",
        {"reduced": _flag(prof, "reduced"), "s < 1": s_below_one}, qs,
        lambda v: ((v["e_hk"] - 1) / (1 - v["s"]), v["e"] - 1)))
    return out


def check_gorenstein_lower(prof: InvariantProfile, per_ideal: Sequence[tuple[str, int]] | None = None) -> list[BoundVerdict]:
    """e_HK >= (e - s mu)/(e - mu) for ideals I containing (x), mu = μ(I/(x)),
    plus the embedding-dimension form with mu = v - d."""
    if per_ideal is None:
        per_ideal = [("m", prof.mu_reduction)]
    hyps = {"gorenstein": _flag(prof, "gorenstein"), "reduced": _flag(prof, "reduced"),
            "reduction verified": prof.reduction_status == "verified"}
    out = []
    s_zero = prof.s is not None and prof.s <= prof.s_tol + EPS
    cases = [(f"gorenstein-lower[{name}]", mu) for name, mu in per_ideal]
    cases.append(("gorenstein-embedding", None if prof.v is None or prof.d is None else prof.v - prof.d))
    for check, mu in cases:
        h = dict(hyps)
        h["mu < e"] = mu is not None and prof.e is not None and mu < prof.e
        q = {"e": (prof.e, 0.0), "mu": (mu, 0.0), "s": _s(prof), "e_hk": _ehk(prof)}
        out.append(_verdict(check, "(e - s mu)/(e - mu) <= e_HK", h, q,
                            lambda v: ((v["e"] - v["s"] * v["mu"]) / (v["e"] - v["mu"]), v["e_hk"])))
        if s_zero:
            q0 = {"e": (prof.e, 0.0), "mu": (mu, 0.0), "e_hk": _ehk(prof)}
            out.append(_verdict(check + "-s0", "e/(e - mu) <= e_HK when s = 0", h, q0,
                                lambda v: (Fraction(v["e"], v["e"] - v["mu"]), v["e_hk"])))
    return out


def main_floor(d: int, e: int, mu: int, t: int) -> Fraction:
    """1 + min{1/d!, (mu/(e - mu)) / ceil(d/t)^d}."""
    c = -(-d // t)
    return 1 + min(Fraction(1, math.factorial(d)), Fraction(mu, e - mu) / c**d)


def ae_floor(d: int) -> Fraction:
    """1 + 1/(d (d!(d-1) + 1)^d)."""
    return 1 + Fraction(1, d * (math.factorial(d) * (d - 1) + 1) ** d)


def check_main_lower(prof: InvariantProfile) -> list[BoundVerdict]:
    t_used = prof.t if prof.t is not None else prof.r
    nonreg = prof.regular is False
    base = {"unmixed": _flag(prof, "unmixed"), "non-regular": nonreg, "d >= 2": (prof.d or 0) >= 2}
    obs = []
    if prof.e_hk is not None and prof.d is not None and prof.d >= 1:
        be = 1 + 1 / math.factorial(prof.d)
        obs.append(f"e_HK {'<' if prof.e_hk < be else '>='} 1 + 1/d! = {be:.6f}")
        if prof.t is None:
            obs.append("t unavailable; r used in its place")
    h = dict(base)
    h["reduction verified"] = prof.reduction_status == "verified"
    h["r >= 1"] = (t_used or 0) >= 1
    h["mu < e"] = prof.mu_hat is not None and prof.e is not None and prof.mu_hat < prof.e
    q = {"d": (prof.d, 0.0), "e": (prof.e, 0.0), "mu": (prof.mu_hat, 0.0), "t": (t_used, 0.0), "e_hk": _ehk(prof)}
    out = [_verdict("main-lower", "1 + min{1/d!, (mu/(e-mu)) / ceil(d/t)^d} <= e_HK", h, q,
                    lambda v: (main_floor(v["d"], v["e"], v["mu"], v["t"]), v["e_hk"]), observations=obs)]
    qa = {"d": (prof.d, 0.0), "e_hk": _ehk(prof)}
    out.append(_verdict("ae-lower", "1 + 1/(d (d!(d-1)+1)^d) <= e_HK", base, qa,
                        lambda v: (ae_floor(v["d"]), v["e_hk"])))
    return out


# ---------------------------------------------------------------------------


@dataclass
class ModuleAsIdeal:
    """An ideal K regarded as a rank-one module, or a free module of given rank."""

    exps: list[tuple[int, ...]] | None = None
    rank: int = 1

    @classmethod
    def free(cls, rank: int) -> ModuleAsIdeal:
        return cls(None, rank)


def _monomial_colength(exps, n):
    from .hilbert import Staircase

    return Staircase.of(exps, n).count()


def _prod(A, B):
    return [tuple(a + b for a, b in zip(x, y)) for x in A for y in B]


def rank_inequality(J, I, K: ModuleAsIdeal, chain_length: int, n: int) -> BoundVerdict:
    """ℓ(IK/JK) >= chain_length * rank K for monomial J ⊆ I in a polynomial ring."""
    if K.exps is None:
        lhs = K.rank * (_monomial_colength(J, n) - _monomial_colength(I, n))
    else:
        lhs = _monomial_colength(_prod(J, K.exps), n) - _monomial_colength(_prod(I, K.exps), n)
    q = {"len": (lhs, 0.0), "chain": (chain_length, 0.0), "rank": (K.rank, 0.0)}
    return _verdict("rank-inequality", "chain length * rank K <= ℓ(IK/JK)",
                    {"J integrally closed": True}, q, lambda v: (v["chain"] * v["rank"], v["len"]))


def check_integrally_closed(prof: InvariantProfile, ideal_name: str, colength_I: int, series_I: HKSeries,
                            closed: bool, rank_witnesses: Sequence[BoundVerdict] = ()) -> list[BoundVerdict]:
    """e_HK(I) >= ℓ(R/I) + e_HK(R) - 1 for integrally closed m-primary I; also e_HK(I) >= ℓ(R/I)."""
    hyps = {"normal": _flag(prof, "normal"), "I integrally closed": bool(closed)}
    q = {"len": (colength_I, 0.0), "e_hk": _ehk(prof), "e_hk_I": (series_I.e_hk, series_I.tolerance)}
    out = [
        _verdict(f"closed-additive[{ideal_name}]", "ℓ(R/I) + e_HK(R) - 1 <= e_HK(I)", hyps, q,
                 lambda v: (v["len"] + v["e_hk"] - 1, v["e_hk_I"])),
        _verdict(f"closed-length[{ideal_name}]", "ℓ(R/I) <= e_HK(I)", hyps,
                 {"len": (colength_I, 0.0), "e_hk_I": (series_I.e_hk, series_I.tolerance)},
                 lambda v: (v["len"], v["e_hk_I"]),
                 observations=[] if prof.regular else ["equality would force regularity"]),
    ]
    out.extend(rank_witnesses)
    return out


def check_radical_descent(R: RingPresentation, prof: InvariantProfile, spec: RadicalExtensionSpec,
                          config: ProfileConfig | None = None, cache=None, mapper: Callable = map) -> tuple[list[BoundVerdict], dict]:
    """Builds S = R[x^(1/n)] and checks descent of e_HK - 1 and e_HK(mS) = n e_HK(R)."""
    cfg = config or ProfileConfig()
    in_red = bool(R.reduction) and any(_same(spec.x, g) for g in R.reduction)
    hyps = {"cm": _flag(prof, "cm"), "normal": _flag(prof, "normal"),
            "reduction verified": prof.reduction_status == "verified",
            "x in reduction": in_red, "x not in m^2": spec.x_not_in_m2}
    data: dict = {"n": spec.n, "S": spec.S.name}
    if not all(hyps.values()):
        return [
            _verdict("radical-descent", "(e_HK(S) - 1)/n <= e_HK(R) - 1", hyps, {}, lambda v: (0, 0)),
            _verdict("extension-multiplicity", "e_HK(mS) = n e_HK(R)", hyps, {}, lambda v: (0, 0)),
            _verdict("radical-fibre-length", "ℓ(S/mS) = n", hyps, {}, lambda v: (0, 0)),
        ], data
    S = spec.S
    qmax = cfg.qmax
    hs_S = hk_series(S, None, qmax, engine=cfg.engine, cache=cache, mem_cap=cfg.mem_cap, mapper=mapper)
    hs_mS = hk_series(S, spec.mS, qmax, engine=cfg.engine, cache=cache, mem_cap=cfg.mem_cap, mapper=mapper)
    fibre = colength(S.ideal(spec.mS.generators))
    data.update({"hk_S": hs_S.to_dict(), "hk_mS": hs_mS.to_dict(), "length_S_mS": fibre})
    n = spec.n
    e_S = (hs_S.e_hk, hs_S.tolerance) if hs_S.fit else (None, 0.0)
    e_mS = (hs_mS.e_hk, hs_mS.tolerance) if hs_mS.fit else (None, 0.0)
    out = [
        _verdict("radical-descent", "(e_HK(S) - 1)/n <= e_HK(R) - 1", hyps,
                 {"e_S": e_S, "e_R": _ehk(prof), "n": (n, 0.0)},
                 lambda v: ((v["e_S"] - 1) / v["n"], v["e_R"] - 1)),
        _verdict("extension-multiplicity", "e_HK(mS) = n e_HK(R)", hyps,
                 {"e_mS": e_mS, "e_R": _ehk(prof), "n": (n, 0.0)},
                 lambda v: (v["e_mS"], v["n"] * v["e_R"]), kind="eq"),
        _verdict("radical-fibre-length", "ℓ(S/mS) = n", hyps, {"len": (fibre, 0.0), "n": (n, 0.0)},
                 lambda v: (v["len"], v["n"]), kind="eq"),
    ]
    return out, data


def _same(x, g) -> bool:
    from .invariants import _same_up_to_unit

    return _same_up_to_unit(g, x)


__all__ = [
    "BoundVerdict", "ModuleAsIdeal", "PASS", "FAIL", "SKIPPED", "INCONCLUSIVE",
    "check_sandwich", "check_gorenstein_lower", "check_main_lower", "check_integrally_closed",
    "check_radical_descent", "rank_inequality", "main_floor", "ae_floor",
]
