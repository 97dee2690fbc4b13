"""Corpus runner: profiles, verdicts and report emission."""

from __future__ import annotations

import csv
import json
import logging
import math
import platform
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .. import __version__
from ..bounds import (
    FAIL,
    BoundVerdict,
    ModuleAsIdeal,
    check_gorenstein_lower,
    check_integrally_closed,
    check_main_lower,
    check_radical_descent,
    check_sandwich,
    rank_inequality,
)
from ..closure import closed_chain_length, is_integrally_closed
from ..hilbert import DEFAULT_MEM_CAP, colength
from ..invariants import (
    IdealSpec,
    InvariantProfile,
    ProfileConfig,
    RingPresentation,
    _contained,
    compute_profile,
    generator_count,
    hk_series,
    maximal_spec,
    radical_extension,
    spec_toric_exps,
)
from ..kernels import BACKEND
from ..toric import closure_colength
from ..zigzag import zigzag_numbers
from .cache import CrossEngineDisagreement, LengthCache
from .ringfile import CHECK_NAMES, RingFile, RingFileError, load_ring_file

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
SCHEMA_PATH = Path(__file__).with_name("report_schema.json")

ASSUMPTIONS = [
    "Lengths are graded lengths of (weighted-)homogeneous quotients; the local statements are "
    "applied through their graded analogues over the finite prime field.",
    "e_HK and s are two-parameter extrapolations from finitely many q; tolerances come from fit residuals.",
    "mu_hat is a lower bound for the Dilworth number obtained by a seeded scan.",
]


@dataclass
class CorpusEntry:
    path: str
    checks: list[str] | None = None
    overrides: dict = field(default_factory=dict)


@dataclass
class SuiteConfig:
    seed: int = 0
    qmax: int | None = None
    qmax_cap: int = 5**3
    engine: str = "auto"
    mem_cap: int = DEFAULT_MEM_CAP
    workers: int = 1
    zigzag_dmax: int = 12
    radical_n: tuple[int, ...] = (2,)

    def to_dict(self) -> dict:
        return {"seed": self.seed, "qmax": self.qmax, "qmax_cap": self.qmax_cap, "engine": self.engine,
                "mem_cap": self.mem_cap, "zigzag_dmax": self.zigzag_dmax, "radical_n": list(self.radical_n)}


def discover(directory) -> list[CorpusEntry]:
    return [CorpusEntry(str(p)) for p in sorted(Path(directory).glob("*.ring"))]


def make_mapper(workers: int) -> tuple[Callable, ThreadPoolExecutor | None]:
    if workers <= 1:
        return map, None
    pool = ThreadPoolExecutor(max_workers=workers)
    return pool.map, pool


# ---------------------------------------------------------------------------
# per-entry work


def _closedness(R: RingPresentation, I: IdealSpec) -> tuple[bool | None, str]:
    """Whether I is integrally closed, and how that was decided (None: unknown)."""
    if I.key() == maximal_spec(R).key():
        return True, "maximal ideal"
    if not R.relations and all(len(g.terms) == 1 for g in I.generators):
        return is_integrally_closed([next(iter(g.terms)) for g in I.generators]), "Newton region"
    exps = spec_toric_exps(R, I)
    if exps is not None and "normal" in R.flags:
        pts = [R.toric.point(e) for e in exps]
        return R.toric.colength(pts) == closure_colength(R.toric, pts), "toric closure count"
    return None, "no closure test for this presentation"


def _closed_checks(R, prof, rf, pc, cache, mapper, ctx) -> list[BoundVerdict]:
    out = []
    ideals = {"m": maximal_spec(R)}
    ideals.update(rf.ideals)
    for name in sorted(ideals):
        I = ideals[name]
        closed, how = _closedness(R, I)
        if closed is None:
            v = check_integrally_closed(prof, name, 0, _empty_series(prof), False)
            for x in v:
                x.observations.append(how)
            out.extend(v)
            continue
        L = colength(R.ideal(I.generators))
        if name == "m" and prof.hk_series is not None:
            series = prof.hk_series
        else:
            series = hk_series(R, I, pc.qmax, engine=pc.engine, cache=cache, mem_cap=pc.mem_cap, mapper=mapper)
        ctx["series"].append(series)
        witnesses = []
        if name == "m" and not R.relations and R.n >= 1:
            witnesses = _rank_witnesses(R.n)
        v = check_integrally_closed(prof, name, L, series, closed, witnesses)
        for x in v:
            x.observations.append(f"closedness: {how}")
        out.extend(v)
    return out


def _empty_series(prof):
    from ..invariants import HKSeries

    return HKSeries("?", prof.d or 0, [], [])


def _rank_witnesses(n: int) -> list[BoundVerdict]:
    """ℓ(IK/JK) >= chain length * rank K for J = m^2, I = m in n variables."""
    ring_exps = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    m2 = [tuple(a + b for a, b in zip(x, y)) for x in ring_exps for y in ring_exps]
    cert = closed_chain_length(m2, ring_exps)
    out = []
    for K, label in ((ModuleAsIdeal(ring_exps, 1), "K=m"), (ModuleAsIdeal.free(2), "K=R^2")):
        v = rank_inequality(m2, ring_exps, K, cert.length, n)
        v.check = f"rank-inequality[{label}]"
        out.append(v)
    return out


def _gorenstein_ideals(R: RingPresentation, prof: InvariantProfile, rf: RingFile):
    per = [("m", prof.mu_reduction)]
    if prof.reduction_status != "verified":
        return per
    A_gens = R.ideal(R.reduction).generators
    for name in sorted(rf.ideals):
        I = rf.ideals[name].generators
        if _contained(R, R.reduction, I):
            per.append((name, generator_count(A_gens, I, R.ambient)))
    return per


def _radical_checks(R, prof, rf, pc, cache, mapper, cfg, ctx) -> list[BoundVerdict]:
    out = []
    ns = rf.run.get("radical_n", list(cfg.radical_n))
    if "radical_x" in rf.run:
        x = R.ambient.parse(rf.run["radical_x"])
    elif R.reduction:
        x = R.reduction[0]
    else:
        x = R.ambient.gen(0)
    for n in ns:
        spec = radical_extension(R, x, n)
        vs, data = check_radical_descent(R, prof, spec, pc, cache, mapper)
        for v in vs:
            v.check = f"{v.check}[n={n}]"
        out.extend(vs)
        ctx["radical"].append(data)
    return out


def _apply_corruption(prof: InvariantProfile, corrupt: dict) -> dict:
    applied = {}
    for k, v in sorted(corrupt.items()):
        if not hasattr(prof, k):
            raise RingFileError(f"cannot corrupt unknown profile field {k!r}")
        applied[k] = {"computed": getattr(prof, k), "used": v}
        setattr(prof, k, v)
    return applied


def run_entry(entry: CorpusEntry, cfg: SuiteConfig, cache: LengthCache | None, mapper: Callable = map) -> dict:
    rec: dict = {"file": Path(entry.path).name, "errors": []}
    try:
        rf = load_ring_file(entry.path)
    except RingFileError as exc:
        rec["errors"].append(str(exc))
        rec.update(name=Path(entry.path).stem, verdicts=[], unexpected_failures=[], expected_failures=[])
        return rec
    R = rf.ring
    run = dict(rf.run)
    run.update(entry.overrides)
    checks = entry.checks or run.get("checks") or list(CHECK_NAMES)
    qmax = run.get("qmax") or cfg.qmax
    if qmax is not None:
        qmax = min(qmax, cfg.qmax_cap)
    pc = ProfileConfig(qmax=qmax, engine=run.get("engine", cfg.engine), fsig_qmax=run.get("fsig_qmax"),
                       seed=cfg.seed, mem_cap=cfg.mem_cap)
    rec.update(name=R.name, ring_key=R.key(), checks=list(checks), run=_jsonable(run))
    t0 = time.perf_counter()
    ctx: dict = {"series": [], "radical": []}
    verdicts: list[BoundVerdict] = []
    try:
        prof = compute_profile(R, pc, cache, mapper)
        rec["corrupted"] = _apply_corruption(prof, run.get("corrupt", {}))
        if "sandwich" in checks:
            verdicts += check_sandwich(prof)
        if "gorenstein" in checks:
            verdicts += check_gorenstein_lower(prof, _gorenstein_ideals(R, prof, rf))
        if "main" in checks:
            verdicts += check_main_lower(prof)
        if "closed" in checks:
            verdicts += _closed_checks(R, prof, rf, pc, cache, mapper, ctx)
        if "radical" in checks:
            verdicts += _radical_checks(R, prof, rf, pc, cache, mapper, cfg, ctx)
    except CrossEngineDisagreement:
        raise
    except Exception as exc:  # noqa: BLE001 - aggregated per entry
        log.exception("entry %s failed", entry.path)
        rec["errors"].append(f"{exc.__class__.__name__}: {exc}")
        prof = None
    rec["elapsed_s"] = round(time.perf_counter() - t0, 3)
    rec["profile"] = prof.to_dict() if prof is not None else None
    rec["series"] = [s.to_dict() for s in ctx["series"] if s.fit is not None]
    rec["radical"] = ctx["radical"]
    rec["verdicts"] = [_jsonable(v.to_dict()) for v in verdicts]
    expected = set(run.get("expect_fail", []))
    failed = {v.check for v in verdicts if v.status == FAIL}
    rec["expected_failures"] = sorted(failed & expected)
    rec["unexpected_failures"] = sorted(failed - expected)
    rec["missing_expected_failures"] = sorted(expected - failed)
    return rec


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    return x


# ---------------------------------------------------------------------------


def environment() -> dict:
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "platform": platform.platform(),
        "rank_backend": BACKEND,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }


def run_suite(corpus: Sequence[CorpusEntry], config: SuiteConfig | None = None,
              cache: LengthCache | None = None) -> dict:
    """Run every entry and assemble the report document."""
    cfg = config or SuiteConfig()
    cache = cache if cache is not None else LengthCache()
    mapper, pool = make_mapper(cfg.workers)
    try:
        entries = [run_entry(e, cfg, cache, mapper) for e in corpus]
    finally:
        if pool is not None:
            pool.shutdown()
    ds = [e["profile"]["d"] for e in entries if e.get("profile")]
    dmax = max([cfg.zigzag_dmax] + ds)
    summary = {
        "entries": len(entries),
        "errors": sum(bool(e["errors"]) for e in entries),
        "verdicts": sum(len(e["verdicts"]) for e in entries),
        "status_counts": _status_counts(entries),
        "unexpected_failures": sum(len(e["unexpected_failures"]) for e in entries),
        "missing_expected_failures": sum(len(e.get("missing_expected_failures", [])) for e in entries),
    }
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "hkbench", "version": __version__},
        "config": cfg.to_dict(),
        "assumptions": list(ASSUMPTIONS),
        "entries": entries,
        "zigzag": zigzag_numbers(dmax).to_dict(),
        "summary": summary,
        "cache": {"hits": cache.stats.hits, "computed": cache.stats.computed,
                  "corrupt_offsets": [c.offset for c in cache.stats.corrupt]},
        "environment": environment(),
    }


def _status_counts(entries) -> dict:
    out: dict[str, int] = {}
    for e in entries:
        for v in e["verdicts"]:
            out[v["status"]] = out.get(v["status"], 0) + 1
    return dict(sorted(out.items()))


def report_ok(report: dict) -> bool:
    s = report["summary"]
    return s["unexpected_failures"] == 0 and s["missing_expected_failures"] == 0 and s["errors"] == 0


def strip_volatile(report: dict) -> dict:
    """Copy without timestamps, timings and cache counters, for determinism checks."""
    r = json.loads(json.dumps(report))
    r.pop("environment", None)
    r.pop("cache", None)
    for e in r["entries"]:
        e.pop("elapsed_s", None)
    return r


def write_report(report: dict, path) -> None:
    Path(path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


def csv_rows(report: dict) -> list[tuple]:
    rows = []
    for e in report["entries"]:
        prof = e.get("profile") or {}
        series = []
        if prof.get("hk_series"):
            series.append(prof["hk_series"])
        series += [s for s in e.get("series", []) if s["ideal"] != "m"]
        for s in series:
            d = s["d"]
            for q, L in s["samples"]:
                rows.append((e["name"], s["ideal"], q, L, L / q**d))
    return rows


def write_csv(report: dict, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["ring", "ideal", "q", "length", "ratio"])
        for name, ideal, q, L, r in csv_rows(report):
            w.writerow([name, ideal, q, L, f"{r:.12g}"])


def verdict_table(report: dict) -> str:
    lines = [f"{'ring':<14} {'check':<34} {'status':<24} {'lhs':>12} {'rhs':>12} {'tol':>10}"]
    for e in report["entries"]:
        for err in e["errors"]:
            lines.append(f"{e['name']:<14} ERROR {err}")
        for v in e["verdicts"]:
            st = v["status"] + (" (tol)" if v["within_tolerance"] else "")
            if v["check"] in e["expected_failures"]:
                st += " [expected]"
            lines.append(f"{e['name']:<14} {v['check']:<34} {st:<24} {_fmt(v['lhs']):>12} {_fmt(v['rhs']):>12} "
                         f"{_fmt(v['tolerance']):>10}")
    return "\n".join(lines)


def _fmt(x):
    if x is None:
        return "-"
    if isinstance(x, str):
        return x
    return f"{x:.6g}"
