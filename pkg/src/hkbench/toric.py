"""Lattice-point engine for affine semigroup rings k[M].

M is generated by integer vectors a_1..a_N spanning Z^r (entries may be
negative).  The ring is graded by positive weights w_j = deg(a_j).  Lengths
of quotients by monomial ideals are counts of semigroup elements outside
the ideal, enumerated layer by layer in degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Sequence

from .closure import _normal_vector


class ToricError(ValueError):
    pass


@dataclass(frozen=True)
class Semigroup:
    generators: tuple[tuple[int, ...], ...]
    weights: tuple[int, ...]

    @classmethod
    def of(cls, generators: Sequence[Sequence[int]], weights: Sequence[int] | None = None) -> Semigroup:
        gens = tuple(tuple(int(x) for x in a) for a in generators)
        if not gens:
            raise ToricError("no semigroup generators")
        r = len(gens[0])
        if any(len(a) != r for a in gens):
            raise ToricError("generators have different lengths")
        w = tuple(weights) if weights is not None else (1,) * len(gens)
        if len(w) != len(gens) or any(x <= 0 for x in w):
            raise ToricError("weights must be positive, one per generator")
        S = cls(gens, w)
        if S.rank() != r:
            raise ToricError("generators do not span a full-rank lattice")
        return S

    @property
    def r(self) -> int:
        return len(self.generators[0])

    def rank(self) -> int:
        rows = [[Fraction(x) for x in a] for a in self.generators]
        rank, col = 0, 0
        r = len(rows[0])
        for col in range(r):
            piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            for i in range(len(rows)):
                if i != rank and rows[i][col] != 0:
                    f = rows[i][col] / rows[rank][col]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
            rank += 1
        return rank

    def point(self, exps: Sequence[int]) -> tuple[int, ...]:
        """Lattice point of the monomial prod X_j^{e_j} in the toric variables."""
        return tuple(sum(e * a[i] for e, a in zip(exps, self.generators)) for i in range(self.r))

    # -- layered enumeration ----------------------------------------------
    def count_outside(self, outside: Callable[[tuple, dict], bool], max_degree: int = 10**6) -> int:
        """Number of u in M with ``outside(u, degree_of)`` true.

        ``outside`` must define an upward-closed complement: if u is not
        outside then neither is u + a_j.  Enumeration stops after a window of
        max(weights) consecutive degrees with no element outside.
        """
        wmax = max(self.weights)
        degree_of: dict[tuple, int] = {tuple([0] * self.r): 0}
        keep: dict[int, list[tuple]] = {0: [tuple([0] * self.r)]}
        count = 1 if outside(tuple([0] * self.r), degree_of) else 0
        empty_run = 0 if count else 1
        D = 0
        while empty_run < wmax:
            D += 1
            if D > max_degree:
                raise ToricError("enumeration did not terminate within the degree budget")
            layer = set()
            for a, w in zip(self.generators, self.weights):
                for v in keep.get(D - w, ()):
                    layer.add(tuple(x + y for x, y in zip(v, a)))
            found = []
            for u in sorted(layer):
                if u in degree_of and degree_of[u] != D:
                    raise ToricError("grading is not well defined on the semigroup")
                degree_of[u] = D
            for u in sorted(layer):
                if outside(u, degree_of):
                    found.append(u)
            keep[D] = sorted(layer)
            keep.pop(D - wmax - 1, None)
            count += len(found)
            empty_run = 0 if found else empty_run + 1
        return count

    def colength(self, ideal_points: Sequence[Sequence[int]]) -> int:
        """ℓ(k[M]/J) for J generated by the monomials t^g, g in ideal_points."""
        G = [tuple(g) for g in ideal_points]

        def outside(u, degree_of):
            return not any(_sub(u, g) in degree_of for g in G)

        # u - g has lower degree than u, so its layer is already complete
        return self.count_outside(outside)

    def colength_monomials(self, exps: Sequence[Sequence[int]]) -> int:
        return self.colength([self.point(e) for e in exps])

    def bracket_colength(self, q: int, exps: Sequence[Sequence[int]] | None = None) -> int:
        """ℓ(k[M]/I^[q]) for I generated by monomials in the toric variables
        (default: all toric variables, i.e. the maximal ideal)."""
        if exps is None:
            exps = [tuple(int(i == j) for i in range(len(self.generators))) for j in range(len(self.generators))]
        return self.colength([tuple(q * x for x in self.point(e)) for e in exps])

    # -- cone data ---------------------------------------------------------
    def facets(self) -> list[tuple[tuple[int, ...], int]]:
        """Primitive inner facet normals w of cone(M) with g = gcd_j <a_j, w>."""
        r = self.r
        out = set()
        for pts in itertools.combinations(self.generators, r - 1):
            w = _normal_vector([list(p) for p in pts], r) if r > 1 else [1]
            if not any(w):
                continue
            vals = [sum(x * y for x, y in zip(w, a)) for a in self.generators]
            if all(v <= 0 for v in vals):
                w = [-x for x in w]
                vals = [-v for v in vals]
            if any(v < 0 for v in vals):
                continue
            g = 0
            for x in w:
                g = gcd(g, x)
            w = tuple(x // g for x in w)
            out.add(w)
        res = []
        for w in sorted(out):
            g = 0
            for a in self.generators:
                g = gcd(g, sum(x * y for x, y in zip(w, a)))
            res.append((w, g))
        return res

    def splitting_number(self, q: int) -> int:
        """a_q = #{u in M : <u, w_i> < q g_i for every facet}, valid for normal M."""
        F = self.facets()

        def outside(u, degree_of):
            return all(sum(x * y for x, y in zip(w, u)) < q * g for w, g in F)

        return self.count_outside(outside)

    def is_normal_upto(self, degree: int) -> bool:
        """Every lattice point of the group of M in cone(M) with degree <= bound lies in M.

        Degrees are those of a rational linear functional matching the weights.
        """
        lam = self.degree_functional()
        F = self.facets()
        # enumerate M up to the bound
        layers = {tuple([0] * self.r)}
        frontier = {tuple([0] * self.r): 0}
        for D in range(1, degree + 1):
            new = {}
            for u, d in frontier.items():
                for a, w in zip(self.generators, self.weights):
                    if d + w <= degree:
                        new[_add(u, a)] = d + w
            layers |= set(new)
            frontier = new
        # bounding box of candidate points
        pts = list(layers)
        lo = [min(p[i] for p in pts) for i in range(self.r)]
        hi = [max(p[i] for p in pts) for i in range(self.r)]
        for u in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
            if any(sum(x * y for x, y in zip(w, u)) < 0 for w, _ in F):
                continue
            d = sum(x * y for x, y in zip(lam, u))
            if d > degree or d.denominator != 1:
                continue
            if not self.in_group(u):
                continue
            if u not in layers:
                return False
        return True

    def degree_functional(self) -> tuple[Fraction, ...]:
        """Rational lam with <lam, a_j> = w_j for all j."""
        rows = [[Fraction(x) for x in a] + [Fraction(w)] for a, w in zip(self.generators, self.weights)]
        r = self.r
        sol = _solve(rows, r)
        if sol is None:
            raise ToricError("weights are not induced by a linear functional")
        return sol

    def in_group(self, u) -> bool:
        return _in_lattice(self.generators, u)


def _sub(u, g):
    return tuple(x - y for x, y in zip(u, g))


def _add(u, g):
    return tuple(x + y for x, y in zip(u, g))


def _solve(rows, r):
    """Solve the consistent system rows (augmented) for r unknowns, or None."""
    A = [list(x) for x in rows]
    piv_cols = []
    rank = 0
    for c in range(r):
        piv = next((i for i in range(rank, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = 1 / A[rank][c]
        A[rank] = [x * inv for x in A[rank]]
        for i in range(len(A)):
            if i != rank and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[rank])]
        piv_cols.append(c)
        rank += 1
    if any(all(x == 0 for x in row[:r]) and row[r] != 0 for row in A):
        return None
    sol = [Fraction(0)] * r
    for i, c in enumerate(piv_cols):
        sol[c] = A[i][r]
    return tuple(sol)


def _hermite(gens):
    """Row-style Hermite basis of the integer span of gens."""
    rows = [list(g) for g in gens]
    r = len(rows[0])
    basis = []
    for c in range(r):
        while True:
            nz = [row for row in rows if row[c] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda row: abs(row[c]))
            piv = nz[0]
            for row in nz[1:]:
                f = row[c] // piv[c]
                for j in range(r):
                    row[j] -= f * piv[j]
        nz = [row for row in rows if row[c] != 0]
        if nz:
            piv = nz[0]
            basis.append(piv)
            rows = [row for row in rows if row is not piv]
    return basis


def _in_lattice(gens, u) -> bool:
    basis = _hermite(gens)
    v = list(u)
    for row in basis:
        c = next(i for i, x in enumerate(row) if x != 0)
        if v[c] % row[c]:
            return False
        f = v[c] // row[c]
        v = [x - f * y for x, y in zip(v, row)]
    return not any(v)


def toric_t(S: Semigroup, reduction_exps: Sequence[Sequence[int]]) -> int:
    """Largest t with closure(m^t) not contained in the monomial ideal (x).

    For normal M, closure(m^t) consists of the u in M lying in t*P + cone,
    P = conv(generators).  Membership is decided by the facets of P + cone.
    """
    F = _polyhedron_facets(S)
    G = [S.point(e) for e in reduction_exps]
    best = 0
    seen = []

    def outside(u, degree_of):
        ok = not any(_sub(u, g) in degree_of for g in G)
        if ok:
            seen.append(u)
        return ok

    S.count_outside(outside)
    for u in seen:
        t = None
        for a, b in F:
            if b > 0:
                val = Fraction(sum(x * y for x, y in zip(a, u)), b)
                t = val if t is None else min(t, val)
        if t is None:
            raise ToricError("P + cone has no bounded facet")
        best = max(best, int(t))
    return best


def closure_colength(S: Semigroup, ideal_points: Sequence[Sequence[int]]) -> int:
    """ℓ(k[M]/closure(J)) for the monomial ideal J = (t^g : g in ideal_points), M normal.

    The closure consists of the u in M lying in conv(ideal_points) + cone(M).
    """
    F = _polyhedron_facets(S, ideal_points)

    def outside(u, degree_of):
        return not all(sum(x * y for x, y in zip(a, u)) >= b for a, b in F)

    return S.count_outside(outside)


def _polyhedron_facets(S: Semigroup, points: Sequence[Sequence[int]] | None = None) -> list[tuple[tuple[int, ...], int]]:
    """Inequalities a.u >= b describing conv(points) + cone(generators).

    ``points`` defaults to the generators themselves.
    """
    A = S.generators
    P = sorted({tuple(x) for x in points}) if points is not None else list(A)
    r = S.r
    out = set()
    for k in range(1, r + 1):
        for pts in itertools.combinations(P, k):
            for rays in itertools.combinations(A, r - k):
                base = pts[0]
                vecs = [_sub(p, base) for p in pts[1:]] + [list(x) for x in rays]
                w = _normal_vector([list(v) for v in vecs], r)
                if not any(w):
                    continue
                for sgn in (1, -1):
                    ws = [sgn * x for x in w]
                    b = sum(x * y for x, y in zip(ws, base))
                    if all(sum(x * y for x, y in zip(ws, a)) >= 0 for a in A) and all(
                        sum(x * y for x, y in zip(ws, a)) >= b for a in P
                    ):
                        g = 0
                        for x in ws + [b]:
                            g = gcd(g, x)
                        out.add((tuple(x // g for x in ws), b // g))
    return sorted(out)

