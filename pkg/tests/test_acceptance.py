"""Acceptance criteria, one test per criterion.

Each test records a pass/fail line in ``conftest.ACCEPTANCE``; the lines are
printed in the terminal summary.  Run directly with
``python tests/test_acceptance.py`` for the same lines without pytest.
"""

import itertools
import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import ACCEPTANCE, CORPUS  # noqa: E402

from hkbench.bounds import FAIL, PASS, SKIPPED, check_radical_descent, check_sandwich  # noqa: E402
from hkbench.closure import (  # noqa: E402
    closed_chain_length,
    closure_exponents,
    in_closure_bruteforce,
    is_integrally_closed,
)
from hkbench.ffpoly import PolyRing  # noqa: E402
from hkbench.invariants import (  # noqa: E402
    ProfileConfig,
    RingPresentation,
    compute_profile,
    fsig_estimate,
    hk_series,
    hk_value,
    radical_extension,
    splitting_number,
)
from hkbench.workbench.ringfile import load_ring_file  # noqa: E402
from hkbench.workbench.suite import SuiteConfig, discover, run_suite  # noqa: E402
from hkbench.zigzag import boustrophedon, series_coefficients, zigzag_numbers  # noqa: E402


def record(k: int, ok: bool, msg: str):
    ACCEPTANCE[k] = (bool(ok), msg)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {msg}")
    assert ok, msg


def a1():
    return load_ring_file(CORPUS / "quadric2_p5.ring").ring


def test_criterion_1_regular_baseline():
    t0 = time.perf_counter()
    bad = []
    for p, d in itertools.product((2, 3, 5), (1, 2, 3)):
        R = RingPresentation(PolyRing(p, [f"x{i}" for i in range(d)]), [])
        qmax = max(p**k for k in range(8) if p**k <= 125)
        hs = hk_series(R, None, qmax)
        bad += [(p, d, q, L) for q, L in hs.samples if L != q**d]
        fs = fsig_estimate(R, qmax)
        bad += [(p, d, "fsig", fs.s)] if fs.s != 1 else []
        prof = compute_profile(R, ProfileConfig(qmax=qmax))
        for v in check_sandwich(prof)[:2]:
            if v.status != PASS or not v.equality:
                bad.append((p, d, v.check, v.status))
    dt = time.perf_counter() - t0
    record(1, not bad and dt < 10, f"regular q^d, fsig 1, sandwich equality; {dt:.2f} s; problems {bad[:3]}")


def test_criterion_2_a1_closed_form():
    t0 = time.perf_counter()
    R = a1()
    bad = []
    for q in (5, 25, 125):
        for eng in ("toric", "linalg", "groebner"):
            L = hk_value(R, None, q=q, engine=eng)[0]
            if 2 * L != 3 * q * q - 1:
                bad.append((q, eng, L))
    hs = hk_series(R, None, 125)
    dt = time.perf_counter() - t0
    ok = not bad and abs(hs.e_hk - 1.5) <= 0.01 and abs(hs.beta) <= 0.05 and dt < 60
    record(2, ok, f"e_HK {hs.e_hk:.6f}, beta {hs.beta:.4f}, {dt:.1f} s, engine mismatches {bad}")


def test_criterion_3_quadric3_p3():
    t0 = time.perf_counter()
    R = load_ring_file(CORPUS / "quadric3_p3.ring").ring
    hs = hk_series(R, None, 27, engine="linalg")
    dt = time.perf_counter() - t0
    ok = abs(hs.e_hk - 4 / 3) <= 0.06 and set(hs.engines) == {"linalg"} and dt < 600
    record(3, ok, f"e_HK {hs.e_hk:.5f} (target 4/3 +- 0.06), samples {hs.samples}, {dt:.1f} s")


def test_criterion_4_zigzag():
    t = zigzag_numbers(40)
    ratios = [Fraction(t.c[d], math.factorial(d)) for d in range(2, 6)]
    expect = [Fraction(1, 2), Fraction(1, 3), Fraction(5, 24), Fraction(2, 15)]
    agree = boustrophedon(40) == series_coefficients(40)
    record(4, ratios == expect and agree, f"c_d/d! for d=2..5 = {[str(r) for r in ratios]}, algorithms agree to 40: {agree}")


def test_criterion_5_fsignature():
    bad = []
    for p, d in itertools.product((2, 3, 5), (1, 2, 3)):
        R = RingPresentation(PolyRing(p, [f"x{i}" for i in range(d)]), [])
        for q in (p, p * p):
            a = splitting_number(R, q)
            if a != q**d:
                bad.append((p, d, q, a))
    prof = compute_profile(a1(), ProfileConfig())
    mid = (prof.e_hk - 1) / (1 - prof.s)
    lo = prof.mu_hat / (prof.e - prof.mu_hat)
    hi = prof.e - 1
    sandwich = lo <= mid + prof.e_hk_tol and mid <= hi + prof.e_hk_tol and abs(mid - lo) <= 0.05 and abs(hi - mid) <= 0.05
    zero = []
    for p in (2, 3, 5):
        S = PolyRing(p, ["x", "y"])
        R = RingPresentation(S, [S.parse("x^2")])
        zero += [splitting_number(R, q) for q in (p, p * p)]
    ok = not bad and 0.45 <= prof.s <= 0.55 and sandwich and not any(zero)
    record(5, ok, f"regular a_q problems {bad}; s {prof.s:.5f}; {lo} <= {mid:.5f} <= {hi}; x^2 a_q {zero}")


DOCUMENTED_SKIPS = {
    "regular": {"ratio-lower", "ratio-upper", "main-lower", "ae-lower"},
    "non-gorenstein": {"ratio-lower", "gorenstein-lower[m]", "gorenstein-embedding"},
}


def test_criterion_6_bound_suite():
    report = run_suite(discover(CORPUS), SuiteConfig(seed=0))
    problems = []
    names = [e["name"] for e in report["entries"]]
    for e in report["entries"]:
        prof = e["profile"]
        if e["errors"]:
            problems.append((e["name"], e["errors"]))
            continue
        st = {v["check"]: v["status"] for v in e["verdicts"]}
        skipped = {k for k, s in st.items() if s == SKIPPED}
        failed = {k for k, s in st.items() if s == FAIL}
        want_fail = set(e["run"].get("expect_fail", []))
        if failed != want_fail:
            problems.append((e["name"], "failed", sorted(failed)))
        if prof["regular"]:
            want_skip = DOCUMENTED_SKIPS["regular"]
        elif "gorenstein" not in prof["flags"]:
            want_skip = DOCUMENTED_SKIPS["non-gorenstein"]
        else:
            want_skip = set()
        if skipped != want_skip:
            problems.append((e["name"], "skipped", sorted(skipped)))
        if not prof["regular"] and not (st.get("main-lower") == PASS and st.get("ae-lower") == PASS):
            problems.append((e["name"], "main floors"))
    corrupted = [e for e in report["entries"] if e["corrupted"]]
    ok = len(names) >= 10 and len(corrupted) == 1 and not problems
    record(6, ok, f"{len(names)} rings, status counts {report['summary']['status_counts']}, problems {problems}")


def test_criterion_7_oracle_equivalence():
    rnd = random.Random(7)
    mismatches = []
    cases = 0
    while cases < 50:
        p = rnd.choice((2, 3, 5))
        n = rnd.choice((2, 3))
        qs = [p**k for k in range(1, 7) if p ** (k * n) <= 4096]
        q = rnd.choice(qs)
        S = PolyRing(p, [f"x{i}" for i in range(n)])
        deg = rnd.randint(1, 3)
        mons = [m for m in itertools.product(range(deg + 1), repeat=n) if sum(m) == deg]
        f = S.zero()
        for m in rnd.sample(mons, rnd.randint(1, len(mons))):
            f = f + S.monomial(m, rnd.randrange(1, p))
        R = RingPresentation(S, [f])
        g = hk_value(R, None, q=q, engine="groebner")[0]
        lin = hk_value(R, None, q=q, engine="linalg")[0]
        cases += 1
        if g != lin:
            mismatches.append((p, f.to_str(), q, g, lin))
    record(7, not mismatches, f"{cases} hypersurfaces, mismatches {mismatches}")


def test_criterion_8_closure():
    rnd = random.Random(8)
    problems = 0
    for _ in range(100):
        n = rnd.randint(1, 3)
        gens = [tuple(rnd.randint(0, 4) for _ in range(n)) for _ in range(rnd.randint(1, 4))]
        gens = [g for g in gens if any(g)] or [(1,) * n]
        extra = tuple(rnd.randint(0, 2) for _ in range(n))
        C = closure_exponents(gens)
        if sorted(closure_exponents(C)) != sorted(C):
            problems += 1
        bigger = closure_exponents(gens + [extra]) if any(extra) else C
        if not all(any(all(a <= b for a, b in zip(h, g)) for h in bigger) for g in C):
            problems += 1
        if not is_integrally_closed(C):
            problems += 1
        # every closure element in a small box is confirmed by the power-membership oracle
        for u in itertools.product(range(5), repeat=n):
            in_c = any(all(a <= b for a, b in zip(g, u)) for g in C)
            if in_c and not in_closure_bruteforce(u, gens, max_power=12):
                problems += 1
    cert = closed_chain_length(closure_exponents([(3, 0), (0, 3)]), [(1, 0), (0, 1)])
    ok = problems == 0 and cert.validate() and cert.index == 4
    record(8, ok, f"closure problems {problems}; (m^3, m) chain index {cert.index} (inclusions {cert.length})")


def test_criterion_9_radical_descent():
    R = a1()
    prof = compute_profile(R, ProfileConfig())
    x = R.ambient.parse("y")
    lines = []
    ok = True
    for n in (2, 3):
        vs, data = check_radical_descent(R, prof, radical_extension(R, x, n))
        st = {v.check: v.status for v in vs}
        ok &= all(s == PASS for s in st.values()) and data["length_S_mS"] == n
        lines.append(f"n={n}: {st}, e_HK(mS) {data['hk_mS']['e_hk']:.4f}, length {data['length_S_mS']}")
    record(9, ok, "; ".join(lines))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
