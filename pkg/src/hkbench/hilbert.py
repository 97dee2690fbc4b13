"""Dimension, colength and Hilbert series from staircases, plus the
linear-algebra colength engine for hypersurface quotients."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import kernels
from .ffpoly import GREVLEX, MonomialOrder, Polynomial, PolynomialError, is_power_of
from .groebner import Ideal, WorkLimits


class NotZeroDimensional(ValueError):
    pass


class MemoryCapExceeded(RuntimeError):
    pass


DEFAULT_MEM_CAP = 1 << 19
DEFAULT_ENTRY_CAP = 1 << 25


def _minimalize(exps):
    exps = sorted(set(map(tuple, exps)), key=sum)
    out = []
    for e in exps:
        if not any(all(a <= b for a, b in zip(o, e)) for o in out):
            out.append(e)
    return out


@dataclass(frozen=True)
class Staircase:
    """Minimal generators of a monomial ideal in ``n`` variables."""

    generators: tuple[tuple[int, ...], ...]
    n: int

    @classmethod
    def of(cls, exps, n: int) -> Staircase:
        return cls(tuple(sorted(_minimalize(exps))), n)

    @classmethod
    def from_ideal(cls, I: Ideal, order: MonomialOrder = GREVLEX, limits: WorkLimits | None = None) -> Staircase:
        B = I.basis(order, limits)
        return cls.of([g.leading(order)[0] for g in B.elements], I.ring.nvars)

    def pure_powers(self) -> list[int | None]:
        out: list[int | None] = [None] * self.n
        for g in self.generators:
            supp = [i for i, k in enumerate(g) if k]
            if len(supp) == 1:
                i = supp[0]
                out[i] = g[i] if out[i] is None else min(out[i], g[i])
            elif not supp:
                return [0] * self.n
        return out

    def is_zero_dimensional(self) -> bool:
        return all(k is not None for k in self.pure_powers())

    def contains(self, e) -> bool:
        return any(all(a <= b for a, b in zip(g, e)) for g in self.generators)

    def count(self) -> int:
        """Number of standard monomials (lattice points under the staircase)."""
        if not self.is_zero_dimensional():
            raise NotZeroDimensional("quotient is not zero-dimensional")
        return _count(self.generators, self.n)

    def standard_monomials(self) -> list[tuple[int, ...]]:
        bounds = self.pure_powers()
        if any(b is None for b in bounds):
            raise NotZeroDimensional("quotient is not zero-dimensional")
        return [e for e in itertools.product(*(range(b) for b in bounds)) if not self.contains(e)]


@lru_cache(maxsize=4096)
def _count(gens: tuple, n: int) -> int:
    if any(not any(g) for g in gens):
        return 0
    if n == 1:
        return min(g[0] for g in gens)
    # slice along the last variable
    levels = sorted({g[-1] for g in gens})
    total = 0
    for lo, hi in zip(levels, levels[1:] + [None]):
        if hi is None:
            break
        sub = tuple(sorted(_minimalize([g[:-1] for g in gens if g[-1] <= lo])))
        total += (hi - lo) * _count(sub, n - 1)
    return total


@dataclass(frozen=True)
class HilbertData:
    """Hilbert series N(T)/(1-T)^n of S/M with its dimension and multiplicity."""

    numerator: tuple[int, ...]
    n: int
    krull_dim: int
    multiplicity: int
    h_vector: tuple[int, ...] = ()  # numerator after cancelling (1-T)^(n-d)

    def hilbert_function(self, k: int) -> int:
        # coefficient of T^k in N(T)/(1-T)^n
        total = 0
        for i, a in enumerate(self.numerator):
            if i > k:
                break
            total += a * _binom(k - i + self.n - 1, self.n - 1)
        return total


def _binom(a, b):
    if b < 0 or a < b:
        return 0
    from math import comb

    return comb(a, b)


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_add(a, b):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return out


@lru_cache(maxsize=8192)
def _numerator(gens: tuple) -> tuple:
    if not gens:
        return (1,)
    supports = [frozenset(i for i, k in enumerate(g) if k) for g in gens]
    disjoint = all(not (a & b) for a, b in itertools.combinations(supports, 2))
    if disjoint:
        out = [1]
        for g in gens:
            d = sum(g)
            out = _poly_mul(out, [1] + [0] * (d - 1) + [-1])
        return tuple(out)
    # pivot x_v^a with a taken from a mixed generator, so the pivot is not in I
    n = len(gens[0])
    mixed = [g for g in gens if sum(1 for k in g if k) > 1]
    counts = [sum(1 for g in gens if g[i]) for i in range(n)]
    v = max((i for i in range(n) if any(g[i] for g in mixed)), key=lambda i: counts[i])
    exps = sorted(g[v] for g in mixed if g[v])
    a = exps[len(exps) // 2]
    piv = tuple(a if i == v else 0 for i in range(n))
    left = tuple(sorted(_minimalize(list(gens) + [piv])))
    right = tuple(sorted(_minimalize([tuple(max(x - y, 0) for x, y in zip(g, piv)) for g in gens])))
    nl = _numerator(left)
    nr = _numerator(right)
    return tuple(_strip(_poly_add(nl, [0] * a + list(nr))))


def _strip(c):
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def hilbert_series_numerator(M: Staircase) -> HilbertData:
    num = _strip(_numerator(M.generators))
    n = M.n
    q = list(num)
    order = 0
    while order < n and q and sum(q) == 0:
        # divide by (1 - T)
        out = []
        acc = 0
        for c in q[:-1]:
            acc += c
            out.append(acc)
        q = out or [0]
        order += 1
    e = sum(q)
    return HilbertData(tuple(num), n, n - order, e, tuple(q))


def krull_dimension(I: Ideal, limits: WorkLimits | None = None) -> int:
    """dim S/I: the largest set of variables carrying no leading monomial."""
    st = Staircase.from_ideal(I, limits=limits)
    n = st.n
    if any(not any(g) for g in st.generators):
        return -1
    supports = [frozenset(i for i, k in enumerate(g) if k) for g in st.generators]
    for size in range(n, -1, -1):
        for S in itertools.combinations(range(n), size):
            S = frozenset(S)
            if all(not s <= S for s in supports):
                return size
    return 0


def colength(I: Ideal, limits: WorkLimits | None = None) -> int:
    """ℓ(S/I) as the number of standard monomials."""
    return Staircase.from_ideal(I, limits=limits).count()


# ---------------------------------------------------------------------------
# linear-algebra colength


def _box_monomials(box):
    m = len(box)
    if m == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.indices(box, dtype=np.int64).reshape(m, -1).T.copy()


def _terms_array(terms, m):
    if not terms:
        return np.zeros((0, m), dtype=np.int64), np.zeros(0, dtype=np.int64)
    E = np.array([e for e, _ in terms], dtype=np.int64).reshape(len(terms), m)
    C = np.array([c for _, c in terms], dtype=np.int64)
    return E, C


def _module_rank(box, blocks_terms, sshift, tshift, weights, p, graded, mem_cap, entry_cap, stats):
    """Rank over F_p of a B-linear map B^k -> B^k with B = F_p[u]/(u_i^{box_i}).

    ``blocks_terms[j][i]`` lists the terms of the (i, j) matrix entry.
    Source generator j has degree ``sshift[j]``, target generator i has
    degree ``tshift[i]``.  With ``graded`` the map is split into graded
    pieces, each ranked separately.
    """
    box = tuple(int(b) for b in box)
    k = len(sshift)
    U = _box_monomials(box)
    L = U.shape[0]
    if graded:
        deg = U @ np.asarray(weights, dtype=np.int64) if box else np.zeros(1, dtype=np.int64)
    else:
        deg = np.zeros(L, dtype=np.int64)
        sshift = [0] * k
        tshift = [0] * k
    order = np.argsort(deg, kind="stable")
    sdeg = deg[order]
    uniq, starts = np.unique(sdeg, return_index=True)
    ends = list(starts[1:]) + [L]
    classes = {int(d): order[s:e] for d, s, e in zip(uniq, starts, ends)}
    pos = np.empty(L, dtype=np.int64)
    for d, idx in classes.items():
        pos[idx] = np.arange(len(idx))
    term_arrays = [[_terms_array(blocks_terms[j][i], len(box)) for i in range(k)] for j in range(k)]
    total_degs = sorted({d + s for d in classes for s in sshift})
    boxarr = np.asarray(box, dtype=np.int64)
    rank = 0
    for T in total_degs:
        src = [classes.get(T - sshift[j]) for j in range(k)]
        tgt = [classes.get(T - tshift[i]) for i in range(k)]
        ncols_each = [0 if s is None else len(s) for s in src]
        nrows_each = [0 if t is None else len(t) for t in tgt]
        ncols, nrows = sum(ncols_each), sum(nrows_each)
        if ncols == 0 or nrows == 0:
            continue
        if max(ncols, nrows) > mem_cap or ncols * nrows > entry_cap:
            raise MemoryCapExceeded(f"graded block {nrows}x{ncols} exceeds memory cap")
        M = np.zeros((nrows, ncols), dtype=np.int64)
        coff = np.cumsum([0] + ncols_each)
        roff = np.cumsum([0] + nrows_each)
        for j in range(k):
            if src[j] is None:
                continue
            Us = U[src[j]]
            cols = np.arange(len(src[j])) + coff[j]
            for i in range(k):
                if tgt[i] is None:
                    continue
                E, C = term_arrays[j][i]
                if len(C) == 0:
                    continue
                if len(C) > len(tgt[i]):
                    # dense polynomial: look up the coefficient of u' - u directly
                    M[roff[i]:roff[i + 1], coff[j]:coff[j + 1]] = _lookup_block(U[tgt[i]], Us, E, C)
                    continue
                tg = Us[:, None, :] + E[None, :, :]
                ok = np.all(tg < boxarr, axis=2)
                si, ti = np.nonzero(ok)
                if si.size == 0:
                    continue
                lin = np.ravel_multi_index(tuple(tg[si, ti].T), box) if box else np.zeros(si.size, dtype=np.int64)
                rows = pos[lin] + roff[i]
                np.add.at(M, (rows, cols[si]), C[ti])
        M %= p
        stats["blocks"] = stats.get("blocks", 0) + 1
        stats["max_block"] = max(stats.get("max_block", 0), max(nrows, ncols))
        rank += kernels.rank_mod_p(M, p)
    return rank


def _lookup_block(Ut, Us, E, C):
    """Matrix (coeff of u_t - u_s in the polynomial with terms E, C)."""
    m = E.shape[1]
    mx = E.max(axis=0) if len(C) else np.zeros(m, dtype=np.int64)
    G = np.zeros(tuple(int(k) + 1 for k in mx), dtype=np.int64)
    G[tuple(E.T)] = C
    ok = np.ones((len(Ut), len(Us)), dtype=bool)
    lin = np.zeros((len(Ut), len(Us)), dtype=np.int64)
    for k in range(m):
        d = Ut[:, k][:, None] - Us[:, k][None, :]
        ok &= (d >= 0) & (d <= mx[k])
        lin = lin * (int(mx[k]) + 1) + np.clip(d, 0, mx[k])
    return np.where(ok, G.ravel()[lin], 0)


def _companion_variable(f: Polynomial, box):
    """A variable in which f is monic (up to a unit), minimizing matrix size."""
    n = f.ring.nvars
    best = None
    for v in range(n):
        kmax = max(e[v] for e in f.terms)
        if kmax == 0:
            continue
        top = [e for e in f.terms if e[v] == kmax]
        if len(top) != 1 or any(top[0][i] for i in range(n) if i != v):
            continue
        size = kmax * int(np.prod([box[i] for i in range(n) if i != v], dtype=object))
        if best is None or size < best[0]:
            best = (size, v, kmax)
    return best


def _shift_mul(a, e, c, p):
    """(monomial c*u^e) * a in the truncated ring, a dense array."""
    out = np.zeros_like(a)
    sl_src = tuple(slice(0, s - k) if k < s else slice(0, 0) for s, k in zip(a.shape, e))
    sl_dst = tuple(slice(k, s) if k < s else slice(0, 0) for s, k in zip(a.shape, e))
    out[sl_dst] = a[sl_src] * c % p
    return out


def _companion_columns(f: Polynomial, v: int, k: int, b: int, box_rest, p: int):
    """Coefficient vectors of x^(b+j) mod f, j < k, over B = F_p[rest]/(box)."""
    n = f.ring.nvars
    inv = pow(f.terms[tuple(k if i == v else 0 for i in range(n))], -1, p)
    # g[j] = coefficient of x^j in f / lc, as list of (exp_rest, coeff)
    g = [[] for _ in range(k)]
    for e, c in f.terms.items():
        if e[v] < k:
            g[e[v]].append((tuple(x for i, x in enumerate(e) if i != v), c * inv % p))
    shape = tuple(box_rest)
    zero = np.zeros(shape, dtype=np.int64)
    vec = [zero.copy() for _ in range(k)]
    one = zero.copy()
    one[(0,) * len(shape)] = 1
    vec[0] = one
    cols = []
    power = 0
    target = b + k - 1
    while True:
        if power >= b:
            cols.append([x.copy() for x in vec])
        if power == target:
            break
        top = vec[-1]
        new = [zero.copy()] + vec[:-1]
        if top.any():
            for j in range(k):
                for e, c in g[j]:
                    new[j] = (new[j] - _shift_mul(top, e, c, p)) % p
        vec = new
        power += 1
    return cols


def _array_terms(a):
    idx = np.nonzero(a)
    return [(tuple(int(x) for x in t), int(c)) for t, c in zip(zip(*idx), a[idx])]


def colength_linalg(
    f: Polynomial,
    q: int,
    *,
    scales: Sequence[int] | None = None,
    weights: Sequence[int] | None = None,
    method: str = "auto",
    mem_cap: int = DEFAULT_MEM_CAP,
    entry_cap: int = DEFAULT_ENTRY_CAP,
    stats: dict | None = None,
) -> int:
    """ℓ(S/(x_1^{c_1 q}, ..., x_n^{c_n q}, f)) by exact rank computations mod p.

    With the default ``scales`` this is ℓ(S/(m^[q] + (f))).  Methods:

    ``dense``
        one matrix for multiplication by f on the q^n monomials of S/m^[q].
    ``graded``
        the same map split into graded pieces (f homogeneous).
    ``companion``
        f is monic in some variable x of degree k, so S/(f) is free over
        the remaining variables with basis 1, x, ..., x^(k-1) and only the
        images of x^b, ..., x^(b+k-1) need ranking; graded when f is.
    ``auto``
        companion when possible, else graded, else dense.
    """
    ring = f.ring
    p = ring.p
    n = ring.nvars
    if not f:
        raise PolynomialError("colength_linalg needs f != 0")
    if not is_power_of(q, p):
        raise PolynomialError(f"q={q} is not a power of p={p}")
    scales = tuple(scales) if scales is not None else (1,) * n
    box = tuple(c * q for c in scales)
    total = int(np.prod(box, dtype=object))
    weights = tuple(weights) if weights is not None else (1,) * n
    stats = {} if stats is None else stats
    if f.constant_coeff():
        return 0
    homog = f.is_homogeneous(weights)
    comp = _companion_variable(f, box)
    if method == "auto":
        # the companion reduction only shrinks the problem when deg_x f < box_x
        useful = comp is not None and comp[2] < box[comp[1]]
        method = "companion" if useful else ("graded" if homog else "dense")
    stats["method"] = method
    if method in ("dense", "graded"):
        if method == "graded" and not homog:
            raise PolynomialError("graded method needs a homogeneous f")
        if method == "dense" and total > mem_cap:
            raise MemoryCapExceeded(f"{total} basis monomials exceed memory cap")
        D = f.degree(weights)
        r = _module_rank(box, [[list(f.terms.items())]], [D], [0], weights, p,
                         method == "graded", mem_cap, entry_cap, stats)
        return total - r
    if method != "companion":
        raise ValueError(f"unknown method {method!r}")
    if comp is None:
        raise PolynomialError("f is not monic in any variable")
    _, v, k = comp
    rest = [i for i in range(n) if i != v]
    box_rest = [box[i] for i in rest]
    b = box[v]
    cols = _companion_columns(f, v, k, b, box_rest, p)
    terms = [[_array_terms(cols[j][i]) for i in range(k)] for j in range(k)]
    wv = weights[v]
    wrest = [weights[i] for i in rest]
    r = _module_rank(box_rest, terms, [(b + j) * wv for j in range(k)], [i * wv for i in range(k)],
                     wrest, p, homog, mem_cap, entry_cap, stats)
    return k * int(np.prod(box_rest, dtype=object)) - r


def multiplication_matrix(f: Polynomial, q: int) -> np.ndarray:
    """Dense matrix of multiplication by f on S/m^[q] (columns: sources)."""
    n = f.ring.nvars
    box = (q,) * n
    U = _box_monomials(box)
    L = U.shape[0]
    M = np.zeros((L, L), dtype=np.int64)
    for e, c in f.terms.items():
        tg = U + np.asarray(e, dtype=np.int64)
        ok = np.all(tg < q, axis=1)
        src = np.flatnonzero(ok)
        lin = np.ravel_multi_index(tuple(tg[src].T), box)
        M[lin, src] = (M[lin, src] + c) % f.ring.p
    return M
