"""Command line interface: ``hkbench <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from ..hilbert import DEFAULT_MEM_CAP
from ..invariants import (
    ENGINES,
    EngineError,
    IdealSpec,
    fsig_estimate,
    hk_series,
    hs_multiplicity,
    maximal_spec,
    verify_reduction,
)
from ..zigzag import MAX_D, zigzag_numbers
from .cache import CrossEngineDisagreement, LengthCache
from .ringfile import CHECK_NAMES, RingFileError, _tokenize, load_ring_file
from .suite import (
    CorpusEntry,
    SuiteConfig,
    discover,
    make_mapper,
    report_ok,
    run_suite,
    verdict_table,
    write_csv,
    write_report,
)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hkbench", description="Hilbert-Kunz and F-signature workbench")
    ap.add_argument("--cache", help="append-only length cache file")
    ap.add_argument("--workers", type=int, default=1, help="worker threads for q samples")
    ap.add_argument("--mem-cap", type=int, default=DEFAULT_MEM_CAP, help="largest matrix side for rank computations")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hk", help="Hilbert-Kunz function and multiplicity estimate")
    p.add_argument("ring")
    p.add_argument("--ideal", default="m", help="ideal name from the ring file, or a file of generators")
    p.add_argument("--qmax", type=int)
    p.add_argument("--engine", choices=ENGINES, default="auto")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("fsig", help="splitting numbers and F-signature estimate")
    p.add_argument("ring")
    p.add_argument("--qmax", type=int)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("mult", help="Hilbert-Samuel multiplicity")
    p.add_argument("ring")

    p = sub.add_parser("bounds", help="run bound checks on one ring")
    p.add_argument("ring")
    p.add_argument("--suite", choices=CHECK_NAMES + ("all",), default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("zigzag", help="zigzag numbers and the floors 1 + c_d/d!")
    p.add_argument("--dmax", type=int, default=12)

    p = sub.add_parser("corpus", help="corpus operations")
    csub = p.add_subparsers(dest="corpus_command", required=True)
    r = csub.add_parser("run", help="run every *.ring file in a directory")
    r.add_argument("dir")
    r.add_argument("--out", required=True, help="report JSON path")
    r.add_argument("--csv", help="plot data CSV path (default: next to the report)")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--qmax", type=int, help="global q cap")
    return ap


def _ideal(rf, arg: str) -> IdealSpec:
    R = rf.ring
    if arg == "m":
        return maximal_spec(R)
    if arg in rf.ideals:
        return rf.ideals[arg]
    path = Path(arg)
    if path.is_file():
        gens = []
        for ln, line in enumerate(path.read_text().splitlines(), start=1):
            if line.strip() and not line.lstrip().startswith("#"):
                gens += [R.ambient.parse(t.text) for t in _tokenize(line, ln, 0, arg)]
        return IdealSpec(gens, path.stem)
    raise RingFileError(f"unknown ideal {arg!r}", rf.path)


def _cmd_hk(args, cache, mapper) -> int:
    rf = load_ring_file(args.ring)
    I = _ideal(rf, args.ideal)
    hs = hk_series(rf.ring, I, args.qmax, engine=args.engine, cache=cache, mem_cap=args.mem_cap, mapper=mapper)
    if args.json:
        print(json.dumps(hs.to_dict(), indent=2))
        return 0
    print(f"{'q':>6} {'length':>12} {'length/q^d':>14} engine")
    for (q, L), eng in zip(hs.samples, hs.engines):
        print(f"{q:>6} {L:>12} {L / q**hs.d:>14.8f} {eng}")
    if hs.fit is not None:
        print(f"e_HK ~ {hs.e_hk:.8f} (exact fit {hs.fit.e_hk}), beta ~ {hs.beta:.6f}, tolerance {hs.tolerance:.3g}")
    return 0


def _cmd_fsig(args, cache, mapper) -> int:
    rf = load_ring_file(args.ring)
    fs = fsig_estimate(rf.ring, args.qmax, cache=cache, mem_cap=args.mem_cap, mapper=mapper)
    if args.json:
        print(json.dumps(fs.to_dict(), indent=2))
        return 0
    d = rf.ring.dimension()
    print(f"{'q':>6} {'a_q':>12} {'a_q/q^d':>14}")
    for q, a in fs.samples:
        print(f"{q:>6} {a:>12} {a / q**d:>14.8f}")
    print(f"s ~ {fs.s:.8f}, tolerance {fs.tolerance:.3g}")
    return 0


def _cmd_mult(args) -> int:
    rf = load_ring_file(args.ring)
    R = rf.ring
    red = []
    if R.reduction:
        res = verify_reduction(R, R.reduction)
        print(f"reduction: {res.status}" + (f" (n0 = {res.n0})" if res.n0 is not None else f" ({res.message})"))
        if res.status == "verified":
            red = R.reduction
    m = hs_multiplicity(R, red)
    line = f"d = {m.d}, e = {m.e}, Hilbert series numerator {list(m.numerator)}"
    if m.cm_check is not None:
        line += f", e = length(R/(x)): {m.cm_check}"
    print(line)
    return 0


def _cmd_bounds(args, cache) -> int:
    checks = list(CHECK_NAMES) if args.suite == "all" else [args.suite]
    cfg = SuiteConfig(seed=args.seed, mem_cap=args.mem_cap, workers=args.workers)
    report = run_suite([CorpusEntry(args.ring, checks)], cfg, cache)
    if args.json:
        print(json.dumps(report["entries"][0], indent=2, sort_keys=True))
    else:
        print(verdict_table(report))
    return 0 if report_ok(report) else 1


def _cmd_zigzag(args) -> int:
    if not 0 <= args.dmax <= MAX_D:
        print(f"error: --dmax must be in [0, {MAX_D}]", file=sys.stderr)
        return 2
    t = zigzag_numbers(args.dmax)
    print(f"{'d':>3} {'c_d':>24} {'1 + c_d/d!':>28}")
    for d, (c, f) in enumerate(zip(t.c, t.floors)):
        print(f"{d:>3} {c:>24} {str(f):>28}  ({float(f):.10f})")
    return 0


def _cmd_corpus(args, cache) -> int:
    entries = discover(args.dir)
    cfg = SuiteConfig(seed=args.seed, qmax=args.qmax, mem_cap=args.mem_cap, workers=args.workers)
    report = run_suite(entries, cfg, cache)
    write_report(report, args.out)
    csv_path = args.csv or str(Path(args.out).with_suffix(".csv"))
    write_csv(report, csv_path)
    print(verdict_table(report))
    s = report["summary"]
    print(f"\n{s['entries']} rings, {s['verdicts']} verdicts, {s['status_counts']}; "
          f"unexpected failures: {s['unexpected_failures']}, missing expected failures: "
          f"{s['missing_expected_failures']}, entry errors: {s['errors']}")
    print(f"report: {args.out}\nplot data: {csv_path}")
    return 0 if report_ok(report) else 1


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    cache = LengthCache(args.cache) if args.cache else LengthCache()
    mapper, pool = make_mapper(args.workers)
    try:
        if args.command == "hk":
            return _cmd_hk(args, cache, mapper)
        if args.command == "fsig":
            return _cmd_fsig(args, cache, mapper)
        if args.command == "mult":
            return _cmd_mult(args)
        if args.command == "bounds":
            return _cmd_bounds(args, cache)
        if args.command == "zigzag":
            return _cmd_zigzag(args)
        if args.command == "corpus":
            return _cmd_corpus(args, cache)
    except (RingFileError, EngineError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CrossEngineDisagreement as exc:
        print(f"abort: cross-engine disagreement: {exc}", file=sys.stderr)
        return 3
    finally:
        if pool is not None:
            pool.shutdown()
    return 2  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
