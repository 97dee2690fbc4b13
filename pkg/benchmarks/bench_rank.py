"""Time the compiled rank kernel against the numpy fallback.

    python benchmarks/bench_rank.py [--sizes 100 200 400] [--p 5] [--repeat 3]
"""

import argparse
import time

import numpy as np

from hkbench import _rank_py
from hkbench.ffpoly import PolyRing
from hkbench.hilbert import multiplication_matrix

try:
    from hkbench import _rank
except ImportError:  # pragma: no cover
    _rank = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 200, 400])
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _rank is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`")
        return 1
    rng = np.random.default_rng(args.seed)
    print(f"{'matrix':>22} {'rank':>6} {'compiled s':>11} {'numpy s':>9} {'speedup':>8}")
    cases = []
    for n in args.sizes:
        # rank-deficient random matrix: product of n x k and k x n
        k = n * 3 // 4
        M = (rng.integers(0, args.p, (n, k)) @ rng.integers(0, args.p, (k, n))) % args.p
        cases.append((f"random {n}x{n}", M))
    S = PolyRing(args.p, ["x", "y", "z"])
    f = S.parse("x^2 + y^2 + z^2")
    cases.append((f"quadric mult q={args.p}", multiplication_matrix(f, args.p)))
    for label, M in cases:
        tc, rc = best_of(lambda: _rank.rank_mod_p(M, args.p), args.repeat)
        tp, rp = best_of(lambda: _rank_py.rank_mod_p(M, args.p), args.repeat)
        assert rc == rp, (label, rc, rp)
        print(f"{label:>22} {rc:>6} {tc:>11.4f} {tp:>9.4f} {tp / tc:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
