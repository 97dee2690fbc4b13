"""Buchberger's algorithm over F_p and the ideal operations built on it.

Internally a polynomial is a list of ``(key, packed, coeff)`` triples sorted
by decreasing ``key``.  ``packed`` stores the exponent vector in 21-bit
fields (one guard bit each) so that monomial multiplication is integer
addition and divisibility is a single masked subtraction.  ``key`` is a
linear functional of the exponents that realizes the monomial order, so it
is additive as well.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

from .ffpoly import (
    GREVLEX,
    MonomialOrder,
    PolyRing,
    Polynomial,
    PolynomialError,
    elimination_order,
    exact_divide,
    is_power_of,
)

_FIELD = 21
_EXP_LIMIT = 1 << 18
_KEY_BASE = 1 << 26


class WorkLimitExceeded(RuntimeError):
    pass


@dataclass
class WorkLimits:
    max_pairs: int = 500_000
    max_basis: int = 50_000


DEFAULT_LIMITS = WorkLimits()


@dataclass
class BasisStats:
    pairs_created: int = 0
    pairs_reduced: int = 0
    zero_reductions: int = 0
    pairs_pruned: int = 0
    max_basis: int = 0


class _Engine:
    """Packed-monomial arithmetic for one (variable count, order, p)."""

    _cache: dict = {}

    def __init__(self, n: int, order: MonomialOrder, p: int):
        self.n = n
        self.p = p
        self.order = order
        W = order.matrix(n)
        self.kvec = [sum(W[j][i] * _KEY_BASE ** (n - 1 - j) for j in range(n)) for i in range(n)]
        self.pvec = [1 << (_FIELD * i) for i in range(n)]
        self.guard = sum(1 << (_FIELD * i + _FIELD - 1) for i in range(n))
        self.fmask = (1 << _FIELD) - 1

    @classmethod
    def get(cls, n, order, p):
        k = (n, order, p)
        e = cls._cache.get(k)
        if e is None:
            e = cls._cache[k] = cls(n, order, p)
        return e

    def key(self, e):
        return sum(a * b for a, b in zip(e, self.kvec))

    def pack(self, e):
        return sum(a * b for a, b in zip(e, self.pvec))

    def unpack(self, pk):
        m = self.fmask
        out = []
        for _ in range(self.n):
            out.append(pk & m)
            pk >>= _FIELD
        return tuple(out)

    def divides(self, a, b):
        g = self.guard
        return ((b | g) - a) & g == g

    def to_internal(self, f: Polynomial):
        out = []
        for e, c in f.terms.items():
            if e and max(e) >= _EXP_LIMIT:
                raise PolynomialError("exponent too large for the Groebner engine")
            out.append((self.key(e), self.pack(e), c))
        out.sort(reverse=True)
        return out

    def to_poly(self, ring: PolyRing, terms) -> Polynomial:
        return Polynomial(ring, {self.unpack(pk): c for _, pk, c in terms}, _clean=True)

    def monic(self, terms):
        c = terms[0][2]
        if c == 1:
            return terms
        inv = pow(c, -1, self.p)
        p = self.p
        return [(k, pk, v * inv % p) for k, pk, v in terms]

    def reduce(self, terms, leads, full=True):
        """Remainder of ``terms`` on division by prepared monic reducers.

        ``leads`` holds ``(lead key, lead packed, tail)`` triples, see
        :func:`_prep`.
        """
        if not terms or not leads:
            return list(terms)
        p = self.p
        g = self.guard
        acc = {k: [pk, c] for k, pk, c in terms}
        heap = [-k for k, _, _ in terms]
        heapq.heapify(heap)
        rem = []
        pop = heapq.heappop
        push = heapq.heappush
        while heap:
            k = -pop(heap)
            ent = acc.pop(k, None)
            if ent is None:
                continue
            pk, c = ent
            for lk, lpk, tail in leads:
                if ((pk | g) - lpk) & g == g:
                    break
            else:
                rem.append((k, pk, c))
                if not full:
                    rest = sorted(((kk, v[0], v[1]) for kk, v in acc.items()), reverse=True)
                    return rem + rest
                continue
            tk = k - lk
            tpk = pk - lpk
            m = p - c
            for rk, rpk, rc in tail:
                nk = rk + tk
                e = acc.get(nk)
                if e is None:
                    acc[nk] = [rpk + tpk, m * rc % p]
                    push(heap, -nk)
                else:
                    v = (e[1] + m * rc) % p
                    if v:
                        e[1] = v
                    else:
                        del acc[nk]
        return rem

    def spoly(self, f, g):
        ef = self.unpack(f[0][1])
        eg = self.unpack(g[0][1])
        lcm = tuple(max(a, b) for a, b in zip(ef, eg))
        tf = tuple(a - b for a, b in zip(lcm, ef))
        tg = tuple(a - b for a, b in zip(lcm, eg))
        kf, pf = self.key(tf), self.pack(tf)
        kg, pg = self.key(tg), self.pack(tg)
        p = self.p
        acc = {}
        for k, pk, c in f[1:]:
            acc[k + kf] = [pk + pf, c]
        for k, pk, c in g[1:]:
            nk = k + kg
            e = acc.get(nk)
            if e is None:
                acc[nk] = [pk + pg, p - c]
            else:
                v = (e[1] - c) % p
                if v:
                    e[1] = v
                else:
                    del acc[nk]
        return sorted(((k, v[0], v[1]) for k, v in acc.items()), reverse=True)


def _prep(terms):
    return (terms[0][0], terms[0][1], terms[1:])


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _buchberger(engine: _Engine, polys, limits: WorkLimits, stats: BasisStats):
    G: list = []
    Gp: list = []
    leads: list = []
    P: dict = {}
    heap: list = []

    def lcm_key(L):
        return engine.key(L)

    def add(h):
        G.append(h)
        Gp.append(_prep(h))
        eh = engine.unpack(h[0][1])
        leads.append(eh)
        hi = len(G) - 1
        if hi + 1 > limits.max_basis:
            raise WorkLimitExceeded(f"basis size exceeded {limits.max_basis}")
        stats.max_basis = max(stats.max_basis, hi + 1)
        # Gebauer-Moeller: drop old pairs made redundant by h
        for (i, j), L in list(P.items()):
            if _divides(eh, L) and _lcm(leads[i], eh) != L and _lcm(leads[j], eh) != L:
                del P[(i, j)]
                stats.pairs_pruned += 1
        groups: dict = {}
        for i in range(hi):
            groups.setdefault(_lcm(leads[i], eh), []).append(i)
        minimal = []
        for L in sorted(groups, key=lcm_key):
            if all(not _divides(M, L) for M in minimal):
                minimal.append(L)
            else:
                stats.pairs_pruned += len(groups[L])
        for L in minimal:
            idx = groups[L]
            coprime = any(
                all(a + b == c for a, b, c in zip(leads[i], eh, L)) for i in idx
            )
            if coprime:
                stats.pairs_pruned += len(idx)
                continue
            pair = (min(idx), hi)
            P[pair] = L
            stats.pairs_created += 1
            heapq.heappush(heap, (engine.key(L), pair))

    for f in polys:
        r = engine.reduce(f, Gp)
        if r:
            add(engine.monic(r))
    while P:
        while True:
            _, pair = heapq.heappop(heap)
            if pair in P:
                break
        del P[pair]
        stats.pairs_reduced += 1
        if stats.pairs_reduced > limits.max_pairs:
            raise WorkLimitExceeded(f"pair budget exceeded {limits.max_pairs}")
        i, j = pair
        s = engine.spoly(G[i], G[j])
        r = engine.reduce(s, Gp)
        if r:
            add(engine.monic(r))
        else:
            stats.zero_reductions += 1
    return G


def _reduce_basis(engine: _Engine, G):
    G = sorted(G, key=lambda g: g[0][0])
    minimal = []
    for g in G:
        if not any(engine.divides(h[0][1], g[0][1]) for h in minimal):
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = [_prep(h) for h in minimal[:i] + minimal[i + 1 :]]
        tail = engine.reduce(g[1:], others)
        out.append(engine.monic([g[0]] + tail))
    out.sort(key=lambda g: g[0][0])
    return out


# ---------------------------------------------------------------------------
# public types


class Ideal:
    """An ideal of a polynomial ring given by generators."""

    def __init__(self, generators: Sequence[Polynomial], ring: PolyRing | None = None,
                 homogeneous: bool = False, weights: Sequence[int] | None = None):
        gens = [g for g in generators if g]
        if ring is None:
            if not generators:
                raise PolynomialError("ring required for an empty generator list")
            ring = generators[0].ring
        for g in gens:
            if g.ring.p != ring.p or g.ring.nvars != ring.nvars:
                raise PolynomialError("generator from a different ring")
        if homogeneous and not all(g.is_homogeneous(weights) for g in gens):
            raise PolynomialError("generators not homogeneous")
        self.ring = ring
        self.generators = tuple(Polynomial(ring, g.terms, _clean=True) for g in gens)
        self.homogeneous = homogeneous
        self._bases: dict = {}

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]})"

    def __contains__(self, f: Polynomial) -> bool:
        return not normal_form(f, self.basis())

    def basis(self, order: MonomialOrder = GREVLEX, limits: WorkLimits | None = None) -> ReducedBasis:
        b = self._bases.get(order)
        if b is None:
            b = self._bases[order] = groebner_basis(self, order, limits)
        return b

    def is_monomial(self) -> bool:
        return all(g.is_monomial() for g in self.generators)

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.basis().elements)

    def leading_exponents(self, order: MonomialOrder = GREVLEX) -> list[tuple[int, ...]]:
        return [g.leading(order)[0] for g in self.basis(order).elements]

    def equals(self, other: Ideal) -> bool:
        return self.basis().elements == other.basis().elements

    def contains_ideal(self, other: Ideal) -> bool:
        B = self.basis()
        return all(not normal_form(g, B) for g in other.generators)

    def __add__(self, other: Ideal) -> Ideal:
        return ideal_combine("sum", self, other)

    def __mul__(self, other: Ideal) -> Ideal:
        return ideal_combine("product", self, other)


@dataclass
class ReducedBasis:
    elements: list[Polynomial]
    order: MonomialOrder
    source: Ideal
    stats: BasisStats = field(default_factory=BasisStats)

    @property
    def ring(self) -> PolyRing:
        return self.source.ring

    def leading_exponents(self) -> list[tuple[int, ...]]:
        return [g.leading(self.order)[0] for g in self.elements]

    def _internal(self):
        eng = _Engine.get(self.ring.nvars, self.order, self.ring.p)
        cached = getattr(self, "_int", None)
        if cached is None:
            cached = self._int = [eng.to_internal(g) for g in self.elements]
        prepped = getattr(self, "_prepped", None)
        if prepped is None:
            prepped = self._prepped = [_prep(g) for g in cached]
        return eng, cached, prepped


def _monomial_basis(I: Ideal) -> list[Polynomial]:
    exps = sorted({next(iter(g.terms)) for g in I.generators})
    minimal = [e for e in exps if not any(o != e and _divides(o, e) for o in exps)]
    return [I.ring.monomial(e) for e in minimal]


def groebner_basis(I: Ideal, order: MonomialOrder = GREVLEX, limits: WorkLimits | None = None) -> ReducedBasis:
    """Reduced Groebner basis of I (monic, interreduced, sorted by leading term)."""
    limits = limits or DEFAULT_LIMITS
    ring = I.ring
    eng = _Engine.get(ring.nvars, order, ring.p)
    stats = BasisStats()
    if I.is_monomial():
        elems = _monomial_basis(I)
        key = order.sort_key(ring.nvars)
        elems.sort(key=lambda g: key(next(iter(g.terms))))
        return ReducedBasis(elems, order, I, stats)
    polys = sorted((eng.to_internal(g) for g in I.generators), key=lambda t: t[0][0])
    G = _buchberger(eng, polys, limits, stats)
    G = _reduce_basis(eng, G)
    rb = ReducedBasis([eng.to_poly(ring, g) for g in G], order, I, stats)
    rb._int = G
    return rb


def normal_form(f: Polynomial, B: ReducedBasis) -> Polynomial:
    eng, _, Gp = B._internal()
    r = eng.reduce(eng.to_internal(f), Gp)
    return eng.to_poly(f.ring, r)


def audit_basis(B: ReducedBasis) -> bool:
    """Check that every S-polynomial of B reduces to zero."""
    eng, G, Gp = B._internal()
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if eng.reduce(eng.spoly(G[i], G[j]), Gp):
                return False
    return True


# ---------------------------------------------------------------------------
# ideal operations


def ideal_combine(kind: str, I: Ideal, J: Ideal, limits: WorkLimits | None = None) -> Ideal:
    if I.ring != J.ring:
        raise PolynomialError("ideals from different rings")
    if kind == "sum":
        return Ideal(list(I.generators) + list(J.generators), I.ring)
    if kind == "product":
        return Ideal([f * g for f in I.generators for g in J.generators], I.ring)
    if kind == "intersection":
        return intersection(I, J, limits)
    raise ValueError(f"unknown combination {kind!r}")


def intersection(I: Ideal, J: Ideal, limits: WorkLimits | None = None) -> Ideal:
    """I ∩ J by eliminating a tag variable t from t·I + (1-t)·J."""
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal([], ring)
    if I.is_monomial() and J.is_monomial():
        gens = []
        for f in I.generators:
            for g in J.generators:
                e = _lcm(next(iter(f.terms)), next(iter(g.terms)))
                gens.append(ring.monomial(e))
        return Ideal(gens, ring)
    tag = "_t"
    while tag in ring.names:
        tag += "_"
    big = ring.extend([tag], front=True)
    shift = list(range(1, ring.nvars + 1))
    t = big.gen(0)
    gens = [t * f.change_ring(big, shift) for f in I.generators]
    gens += [(1 - t) * g.change_ring(big, shift) for g in J.generators]
    B = groebner_basis(Ideal(gens, big), elimination_order(1), limits)
    back = []
    for g in B.elements:
        if all(e[0] == 0 for e in g.terms):
            back.append(Polynomial(ring, {e[1:]: c for e, c in g.terms.items()}, _clean=True))
    return Ideal(back, ring)


def colon_ideal(I: Ideal, f: Polynomial, limits: WorkLimits | None = None) -> Ideal:
    """(I : f), computed as (I ∩ (f)) / f."""
    if not f:
        raise PolynomialError("colon by the zero polynomial")
    ring = I.ring
    if f.is_constant():
        return Ideal(list(I.generators), ring)
    if I.is_monomial() and f.is_monomial():
        ef = next(iter(f.terms))
        gens = []
        for g in I.generators:
            eg = next(iter(g.terms))
            gens.append(ring.monomial(tuple(max(a - b, 0) for a, b in zip(eg, ef))))
        return Ideal(gens, ring)
    inter = intersection(I, Ideal([f], ring), limits)
    return Ideal([exact_divide(g, f) for g in inter.generators], ring)


def colon_by_ideal(I: Ideal, J: Ideal, limits: WorkLimits | None = None) -> Ideal:
    """(I : J) as the intersection of (I : g) over generators g of J."""
    out = None
    for g in J.generators:
        c = colon_ideal(I, g, limits)
        out = c if out is None else intersection(out, c, limits)
    if out is None:
        return Ideal([I.ring.one()], I.ring)
    return out


def bracket_power(I: Ideal, q: int) -> Ideal:
    """I^[q]: the ideal generated by q-th powers of the generators."""
    p = I.ring.p
    if not is_power_of(q, p):
        raise PolynomialError(f"q={q} is not a power of p={p}")
    return Ideal([g.frobenius(q) for g in I.generators], I.ring)


def maximal_ideal(ring: PolyRing) -> Ideal:
    return Ideal(ring.gens(), ring)


def power_of_ideal(I: Ideal, k: int) -> Ideal:
    if k == 0:
        return Ideal([I.ring.one()], I.ring)
    out = I
    for _ in range(k - 1):
        gens = {f * g for f in out.generators for g in I.generators}
        out = Ideal(sorted(gens, key=str), I.ring)
        if out.is_monomial():
            out = Ideal(_monomial_basis(out), I.ring)
    return out
