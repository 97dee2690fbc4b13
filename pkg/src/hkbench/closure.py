"""Integral closure of monomial ideals, socles, and chains of integrally
closed monomial ideals."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

import numpy as np

from .ffpoly import Polynomial, PolyRing
from .groebner import Ideal, colon_by_ideal, maximal_ideal, normal_form
from .hilbert import NotZeroDimensional, Staircase


class ClosureError(ValueError):
    pass


def _det(rows) -> int:
    """Exact integer determinant (Bareiss)."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _normal_vector(diffs: list[list[int]], m: int):
    """Integer vector orthogonal to m-1 vectors in Z^m via cofactors."""
    out = []
    for j in range(m):
        minor = [[d[c] for c in range(m) if c != j] for d in diffs]
        out.append((-1) ** j * _det(minor))
    return out


def _as_exponents(I) -> tuple[list[tuple[int, ...]], int]:
    if isinstance(I, Ideal):
        if not I.is_monomial():
            raise ClosureError("monomial ideal required")
        exps = [next(iter(g.terms)) for g in I.generators if g]
        return exps, I.ring.nvars
    exps = [tuple(e) for e in I]
    if not exps:
        raise ClosureError("empty generator list")
    return exps, len(exps[0])


def _minimalize(exps):
    exps = sorted(set(map(tuple, exps)), key=lambda e: (sum(e), e))
    out = []
    for e in exps:
        if not any(all(a <= b for a, b in zip(o, e)) for o in out):
            out.append(e)
    return sorted(out)


@dataclass(frozen=True)
class NewtonRegion:
    """conv(exponents) + nonnegative orthant, as integer facet inequalities a.u >= b."""

    generators: tuple[tuple[int, ...], ...]
    facets: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def of(cls, exps: Sequence[Sequence[int]]) -> NewtonRegion:
        V = _minimalize(exps)
        n = len(V[0])
        if n == 0:
            return cls(tuple(V), ())
        if any(not any(v) for v in V):
            return cls(tuple(V), ())
        facets = set()
        for z in range(n):
            for Z in itertools.combinations(range(n), z):
                free = [i for i in range(n) if i not in Z]
                m = len(free)
                for pts in itertools.combinations(V, m):
                    base = pts[0]
                    diffs = [[p[i] - base[i] for i in free] for p in pts[1:]]
                    a_free = _normal_vector(diffs, m)
                    if not any(a_free):
                        continue
                    if all(x <= 0 for x in a_free):
                        a_free = [-x for x in a_free]
                    if any(x < 0 for x in a_free):
                        continue
                    a = [0] * n
                    for i, x in zip(free, a_free):
                        a[i] = x
                    g = 0
                    for x in a:
                        g = gcd(g, x)
                    a = [x // g for x in a]
                    b = sum(x * y for x, y in zip(a, base))
                    if all(sum(x * y for x, y in zip(a, v)) >= b for v in V):
                        facets.add((tuple(a), b))
        # drop inequalities implied by a single other one with the same normal
        best = {}
        for a, b in facets:
            best[a] = max(best.get(a, b), b)
        return cls(tuple(V), tuple(sorted(best.items())))

    def contains(self, u: Sequence[int]) -> bool:
        if any(x < 0 for x in u):
            return False
        return all(sum(x * y for x, y in zip(a, u)) >= b for a, b in self.facets)

    def contains_many(self, U: np.ndarray) -> np.ndarray:
        if not self.facets:
            return np.ones(len(U), dtype=bool)
        A = np.array([a for a, _ in self.facets], dtype=np.int64)
        b = np.array([b for _, b in self.facets], dtype=np.int64)
        return np.all(U @ A.T >= b, axis=1)


def closure_exponents(exps: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Minimal generators of the integral closure of the ideal with these exponents."""
    region = NewtonRegion.of(exps)
    V = region.generators
    n = len(V[0])
    hi = [max(v[i] for v in V) for i in range(n)]
    # minimal generators of the closure lie in the box [0, hi]
    U = np.indices([h + 1 for h in hi], dtype=np.int64).reshape(n, -1).T
    inside = U[region.contains_many(U)]
    return _minimalize([tuple(int(x) for x in u) for u in inside])


def _ideal_of(exps, ring: PolyRing) -> Ideal:
    return Ideal([ring.monomial(e) for e in exps], ring)


def monomial_closure(I: Ideal) -> Ideal:
    exps, _ = _as_exponents(I)
    return _ideal_of(closure_exponents(exps), I.ring)


def is_integrally_closed(I) -> bool:
    exps, _ = _as_exponents(I)
    return closure_exponents(exps) == _minimalize(exps)


def in_closure_bruteforce(v: Sequence[int], exps: Sequence[Sequence[int]], max_power: int = 12) -> bool:
    """Is x^v integral over the ideal, witnessed by some l <= max_power with
    l*v dominating a sum of l generator exponents?"""
    V = _minimalize(exps)
    sums = [tuple([0] * len(v))]
    for l in range(1, max_power + 1):
        # componentwise-minimal l-fold sums; larger sums never help
        sums = _minimalize([tuple(a + b for a, b in zip(s, g)) for s in sums for g in V])
        target = [l * x for x in v]
        if any(all(a <= b for a, b in zip(s, target)) for s in sums):
            return True
    return False


@dataclass(frozen=True)
class SocleData:
    representatives: tuple[Polynomial, ...]
    dimension: int


def socle_ideal(I: Ideal) -> SocleData:
    """Representatives of a basis of (I : m)/I."""
    ring = I.ring
    st = Staircase.from_ideal(I)
    if not st.is_zero_dimensional():
        raise NotZeroDimensional("quotient is not zero-dimensional")
    if I.is_monomial():
        reps = [ring.monomial(u) for u in st.standard_monomials()
                if all(st.contains(tuple(x + (i == k) for k, x in enumerate(u))) for i in range(ring.nvars))]
        return SocleData(tuple(reps), len(reps))
    J = colon_by_ideal(I, maximal_ideal(ring))
    B = I.basis()
    cands = [normal_form(g, B) for g in J.basis().elements]
    cands = [c for c in cands if c]
    # pick a linearly independent subset of the normal forms
    mons = sorted({e for c in cands for e in c.terms})
    col = {e: i for i, e in enumerate(mons)}
    p = ring.p
    rows: list[list[int]] = []
    pivots: list[int] = []
    reps = []
    for c in cands:
        v = [0] * len(mons)
        for e, a in c.terms.items():
            v[col[e]] = a
        for r, pc in zip(rows, pivots):
            if v[pc]:
                f = v[pc]
                v = [(x - f * y) % p for x, y in zip(v, r)]
        nz = next((i for i, x in enumerate(v) if x), None)
        if nz is None:
            continue
        inv = pow(v[nz], -1, p)
        rows.append([x * inv % p for x in v])
        pivots.append(nz)
        reps.append(c)
    return SocleData(tuple(reps), len(reps))


@dataclass
class ChainCertificate:
    """A chain J = K_0 < K_1 < ... < K_m = I of integrally closed monomial ideals.

    ``length`` is the number of strict inclusions m.  ``index`` is m - 1, the
    n in the indexing J = K_0 < ... < K_n < I where the last step into I is
    not counted separately.
    """

    chain: list[list[tuple[int, ...]]]
    witnesses: list[tuple[int, ...]]
    colengths: list[int]
    length: int = 0
    index: int = 0
    checks: dict = field(default_factory=dict)

    def validate(self) -> bool:
        ok_closed = all(is_integrally_closed(K) for K in self.chain)
        ok_strict = all(a > b for a, b in zip(self.colengths, self.colengths[1:]))
        ok_incl = all(_contains(K1, K0) for K0, K1 in zip(self.chain, self.chain[1:]))
        ok_wit = True
        for K0, K1, u in zip(self.chain, self.chain[1:], self.witnesses):
            n = len(u)
            in_k1 = any(all(a <= b for a, b in zip(g, u)) for g in K1)
            in_k0 = any(all(a <= b for a, b in zip(g, u)) for g in K0)
            soc = all(any(all(a <= b for a, b in zip(g, tuple(x + (i == k) for k, x in enumerate(u)))) for g in K0)
                      for i in range(n))
            ok_wit &= in_k1 and not in_k0 and soc
        self.checks = {"closed": ok_closed, "strict": ok_strict, "inclusions": ok_incl, "witnesses": ok_wit}
        return all(self.checks.values())


def _contains(big, small) -> bool:
    return all(any(all(a <= b for a, b in zip(g, s)) for g in big) for s in small)


def _colength(exps, n):
    return Staircase.of(exps, n).count()


def closed_chain_length(J, I) -> ChainCertificate:
    """Greedy chain of integrally closed ideals from J up to I.

    At each step every socle monomial u of K inside I is tried and the
    closure of K + (u) with the smallest colength drop is kept, so the
    realized length is a lower bound for the longest such chain.
    """
    Je, n = _as_exponents(J)
    Ie, _ = _as_exponents(I)
    Je, Ie = _minimalize(Je), _minimalize(Ie)
    if not is_integrally_closed(Je) or not is_integrally_closed(Ie):
        raise ClosureError("both ideals must be integrally closed")
    if not _contains(Ie, Je):
        raise ClosureError("J is not contained in I")
    st = Staircase.of(Je, n)
    if not st.is_zero_dimensional():
        raise ClosureError("I/J must have finite length")
    chain = [Je]
    witnesses = []
    K = Je
    cur = _colength(K, n)
    target = _colength(Ie, n)
    while cur > target:
        sk = Staircase.of(K, n)
        best = None
        for u in sk.standard_monomials():
            if not any(all(a <= b for a, b in zip(g, u)) for g in Ie):
                continue
            if not all(sk.contains(tuple(x + (i == k) for k, x in enumerate(u))) for i in range(n)):
                continue
            K2 = closure_exponents(K + [u])
            c2 = _colength(K2, n)
            key = (cur - c2, u)
            if best is None or key < best[0]:
                best = (key, u, K2, c2)
        if best is None:  # pragma: no cover - I/K has a nonzero socle
            raise ClosureError("no socle witness found")
        _, u, K, cur = best
        chain.append(K)
        witnesses.append(u)
    cols = [_colength(K, n) for K in chain]
    m = len(chain) - 1
    cert = ChainCertificate(chain, witnesses, cols, m, max(m - 1, 0))
    cert.validate()
    return cert
