"""Hilbert-Kunz functions, multiplicities, splitting numbers, reductions and
the indices r, t and mu of graded rings over F_p.

A ring is presented as S/J with S = F_p[x_1..x_n] graded by positive
integer weights and J generated by homogeneous relations.  All lengths are
graded lengths, which agree with the lengths of the localization at the
homogeneous maximal ideal.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .ffpoly import GREVLEX, PolyRing, Polynomial, PolynomialError, is_power_of
from .groebner import Ideal, WorkLimits, maximal_ideal, normal_form, power_of_ideal
from .hilbert import (
    DEFAULT_MEM_CAP,
    MemoryCapExceeded,
    NotZeroDimensional,
    Staircase,
    colength,
    colength_linalg,
    hilbert_series_numerator,
    krull_dimension,
)
from .toric import Semigroup, ToricError, toric_t


class PresentationError(ValueError):
    pass


class EngineError(ValueError):
    pass


FLAG_NAMES = ("gorenstein", "cm", "normal", "unmixed", "domain", "reduced")

# flag -> flags it implies for graded quotients of a polynomial ring
IMPLIED_FLAGS = {
    "gorenstein": ("cm",),
    "cm": ("unmixed",),
    "domain": ("unmixed", "reduced"),
    "normal": ("reduced",),
}


def close_flags(flags) -> frozenset[str]:
    out = set(flags)
    todo = list(out)
    while todo:
        f = todo.pop()
        for g in IMPLIED_FLAGS.get(f, ()):
            if g not in out:
                out.add(g)
                todo.append(g)
    return frozenset(out)


@dataclass
class RingPresentation:
    """R = S/(relations) with optional reduction, structural flags and toric data.

    ``toric`` describes R as a semigroup ring k[M]: toric variable j maps to
    the monomial t^{a_j}.  ``toric_coords`` lists, for each toric variable,
    the linear form of S it corresponds to (default: the j-th variable).
    """

    ambient: PolyRing
    relations: list[Polynomial] = field(default_factory=list)
    weights: tuple[int, ...] | None = None
    reduction: list[Polynomial] | None = None
    flags: frozenset[str] = frozenset()
    toric: Semigroup | None = None
    toric_coords: list[Polynomial] | None = None
    name: str = ""

    def __post_init__(self):
        n = self.ambient.nvars
        self.weights = tuple(self.weights) if self.weights is not None else (1,) * n
        if len(self.weights) != n or any(w <= 0 for w in self.weights):
            raise PresentationError("weights must be positive, one per variable")
        self.relations = [f for f in self.relations if f]
        for f in self.relations:
            if f.ring != self.ambient:
                raise PresentationError("relation not in the ambient ring")
            if not f.is_homogeneous(self.weights):
                raise PresentationError(f"relation {f} is not homogeneous for weights {self.weights}")
        unknown = set(self.flags) - set(FLAG_NAMES)
        if unknown:
            raise PresentationError(f"unknown flags {sorted(unknown)}")
        self.flags = close_flags(self.flags)
        if not self.relations and self.reduction is None:
            # the variables of a polynomial ring are a reduction of m
            self.reduction = self.ambient.gens()
        if self.toric is not None:
            k = len(self.toric.generators)
            if self.toric_coords is None:
                if k != n:
                    raise PresentationError("toric data needs one generator per variable")
            elif len(self.toric_coords) != k:
                raise PresentationError("toric_coords needs one linear form per generator")
        self._cache: dict = {}

    # -- basic data ----------------------------------------------------------
    @property
    def p(self) -> int:
        return self.ambient.p

    @property
    def n(self) -> int:
        return self.ambient.nvars

    @property
    def is_hypersurface(self) -> bool:
        return len(self.relations) == 1

    def defining_ideal(self) -> Ideal:
        return Ideal(self.relations, self.ambient)

    def ideal(self, gens: Sequence[Polynomial]) -> Ideal:
        """The ideal (relations + gens) of S, i.e. the preimage of (gens)R."""
        return Ideal(list(self.relations) + list(gens), self.ambient)

    def maximal(self) -> list[Polynomial]:
        return self.ambient.gens()

    def key(self) -> str:
        parts = [
            f"p={self.p}",
            "vars=" + ",".join(self.ambient.names),
            "weights=" + ",".join(map(str, self.weights)),
            "relations=" + ";".join(f.to_str() for f in self.relations),
        ]
        if self.toric is not None:
            parts.append("toric=" + repr(self.toric.generators))
            if self.toric_coords is not None:
                parts.append("coords=" + ";".join(f.to_str() for f in self.toric_coords))
        return hashlib.sha256("\n".join(parts).encode()).hexdigest()[:16]

    def dimension(self) -> int:
        if "d" not in self._cache:
            self._cache["d"] = krull_dimension(self.defining_ideal())
        return self._cache["d"]

    def embedding_dimension(self) -> int:
        """dim_k m/m^2: variables minus the rank of the linear parts of the relations."""
        p = self.p
        rows = []
        for f in self.relations:
            row = [0] * self.n
            for e, c in f.terms.items():
                if sum(e) == 1:
                    row[e.index(1)] = c
            rows.append(row)
        return self.n - _rank_mod(rows, p)

    def is_regular(self) -> bool:
        return self.embedding_dimension() == self.dimension()


def _rank_mod(rows, p) -> int:
    rows = [list(r) for r in rows if any(r)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


@dataclass
class IdealSpec:
    """An ideal of R given by generators in S (relations are added implicitly)."""

    generators: list[Polynomial]
    name: str = "m"
    # the same ideal as generated by monomials in the toric coordinates
    toric_exps: list[tuple[int, ...]] | None = None

    def key(self) -> str:
        body = ";".join(sorted(g.to_str() for g in self.generators))
        return hashlib.sha256(body.encode()).hexdigest()[:16]


def maximal_spec(R: RingPresentation) -> IdealSpec:
    return power_spec(R, 1)


def power_spec(R: RingPresentation, k: int) -> IdealSpec:
    """m^k; in toric coordinates it is generated by all degree-k toric monomials."""
    gens = power_of_ideal(maximal_ideal(R.ambient), k).generators if k else [R.ambient.one()]
    exps = None
    if R.toric is not None:
        N = len(R.toric.generators)
        exps = [e for e in _compositions(k, [1] * N)]
    return IdealSpec(gens, "m" if k == 1 else f"m^{k}", exps)


def spec_toric_exps(R: RingPresentation, I: IdealSpec):
    if R.toric is None:
        return None
    if I.toric_exps is not None:
        return I.toric_exps
    exps = [toric_exponents(R, g) for g in I.generators]
    return None if any(e is None for e in exps) else exps


def _box_scales(R: RingPresentation, I: IdealSpec):
    """Scales c with I = (x_1^{c_1}, ..., x_n^{c_n}) modulo nothing, else None."""
    scales = [None] * R.n
    for g in I.generators:
        if len(g.terms) != 1:
            return None
        (e, _), = g.terms.items()
        supp = [i for i, k in enumerate(e) if k]
        if len(supp) != 1:
            return None
        i = supp[0]
        if scales[i] is not None and scales[i] != e[i]:
            return None
        scales[i] = e[i]
    if any(s is None for s in scales):
        return None
    return scales


def toric_exponents(R: RingPresentation, g: Polynomial) -> tuple[int, ...] | None:
    """Write g as a scalar times a monomial in the toric coordinates, if possible."""
    if R.toric is None:
        return None
    k = len(R.toric.generators)
    if R.toric_coords is None:
        if len(g.terms) != 1:
            return None
        return next(iter(g.terms))
    coords = R.toric_coords
    degs = [L.degree(R.weights) for L in coords]
    D = g.degree(R.weights)
    lead = g.leading()
    for e in _compositions(D, degs):
        prod = R.ambient.one()
        for L, a in zip(coords, e):
            if a:
                prod = prod * L**a
        if prod and prod.leading()[0] == lead[0]:
            c = lead[1] * pow(prod.leading()[1], -1, R.p) % R.p
            if prod.scale(c) == g:
                return tuple(e)
    return None


def toric_mismatch(R: RingPresentation, max_degree: int = 4) -> str | None:
    """Check the toric description against the relations; None when consistent.

    Compares dim R_D with the number of semigroup elements of degree D for
    D <= max_degree and, when the coordinates are invertible, checks that
    every relation vanishes under x -> t^{a_j}.
    """
    S = R.toric
    if S is None:
        return None
    coords = R.toric_coords or R.ambient.gens()
    degs = [L.degree(R.weights) for L in coords]
    if tuple(degs) != tuple(S.weights):
        return "toric weights differ from the degrees of the toric coordinates"
    st = Staircase.from_ideal(R.defining_ideal()) if R.relations else Staircase.of([], R.n)
    counts: dict[tuple, int] = {}
    layer = {tuple([0] * S.r): 0}
    seen = dict(layer)
    for _ in range(max_degree):
        new = {}
        for u, d in layer.items():
            for a, w in zip(S.generators, S.weights):
                if d + w <= max_degree:
                    v = tuple(x + y for x, y in zip(u, a))
                    new[v] = d + w
        seen.update(new)
        layer = new
    for D in range(max_degree + 1):
        nm = sum(1 for d in seen.values() if d == D)
        nr = sum(1 for e in _compositions(D, list(R.weights)) if not st.contains(e))
        if nm != nr:
            return f"degree {D}: ring has dimension {nr}, semigroup has {nm} elements"
    if len(coords) == R.n:
        rows = [[L.terms.get(tuple(int(i == j) for i in range(R.n)), 0) for j in range(R.n)] for L in coords]
        inv = _inverse_mod(rows, R.p)
        if inv is None:
            return "toric coordinates are not linearly independent"
        T = PolyRing(R.p, [f"u{j}" for j in range(R.n)])
        images = [sum((T.gen(j).scale(inv[i][j]) for j in range(R.n) if inv[i][j]), T.zero()) for i in range(R.n)]
        for f in R.relations:
            g = f.compose(images, T)
            at: dict[tuple, int] = {}
            for e, c in g.terms.items():
                pt = S.point(e)
                at[pt] = (at.get(pt, 0) + c) % R.p
            if any(at.values()):
                return f"relation {f} does not vanish on the semigroup ring"
    return None


def _inverse_mod(rows, p):
    n = len(rows)
    A = [[x % p for x in r] + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return None
        A[c], A[piv] = A[piv], A[c]
        iv = pow(A[c][c], -1, p)
        A[c] = [x * iv % p for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[c])]
    return [r[n:] for r in A]


def _compositions(D, degs):
    if not degs:
        if D == 0:
            yield ()
        return
    for a in range(D // degs[0] + 1):
        for rest in _compositions(D - a * degs[0], degs[1:]):
            yield (a,) + rest


# ---------------------------------------------------------------------------
# Hilbert-Kunz function

ENGINES = ("groebner", "linalg", "toric", "auto")


def engine_for(R: RingPresentation, I: IdealSpec, q: int, engine: str = "auto", mem_cap: int = DEFAULT_MEM_CAP) -> str:
    if engine not in ENGINES:
        raise EngineError(f"unknown engine {engine!r}")
    if engine != "auto":
        return engine
    if spec_toric_exps(R, I) is not None:
        return "toric"
    if R.is_hypersurface and _box_scales(R, I) is not None:
        return "linalg"
    return "groebner"


def hk_function(
    R: RingPresentation,
    I: IdealSpec | None = None,
    e_exp: int | None = None,
    *,
    q: int | None = None,
    engine: str = "auto",
    limits: WorkLimits | None = None,
    mem_cap: int = DEFAULT_MEM_CAP,
) -> int:
    """ℓ(R/I^[q]) with q = p^e_exp (or q given directly)."""
    return hk_value(R, I, e_exp, q=q, engine=engine, limits=limits, mem_cap=mem_cap)[0]


def hk_value(R, I=None, e_exp=None, *, q=None, engine="auto", limits=None, mem_cap=DEFAULT_MEM_CAP):
    """(length, engine used) for ℓ(R/I^[q])."""
    I = I or maximal_spec(R)
    if q is None:
        if e_exp is None:
            raise EngineError("give e_exp or q")
        q = R.p**e_exp
    if not is_power_of(q, R.p):
        raise PolynomialError(f"q={q} is not a power of p={R.p}")
    eng = engine_for(R, I, q, engine, mem_cap)
    if eng == "toric":
        if R.toric is None:
            raise EngineError("ring has no toric data")
        exps = spec_toric_exps(R, I)
        if exps is None:
            raise EngineError("ideal is not monomial in the toric coordinates")
        return R.toric.bracket_colength(q, exps), eng
    if eng == "linalg":
        if not R.is_hypersurface:
            raise EngineError("linalg engine needs a hypersurface")
        scales = _box_scales(R, I)
        if scales is None:
            raise EngineError("linalg engine needs I generated by pure powers of all variables")
        return colength_linalg(R.relations[0], q, scales=scales, weights=R.weights, mem_cap=mem_cap), eng
    gens = [g**q for g in I.generators]
    try:
        return colength(R.ideal(gens), limits), eng
    except NotZeroDimensional as exc:
        raise NotZeroDimensional("ideal is not m-primary") from exc


@dataclass
class HKFit:
    e_hk: Fraction
    beta: Fraction
    residual: Fraction | None

    @property
    def tolerance(self) -> float:
        return math.inf if self.residual is None else float(self.residual)


def hk_estimate(samples: Sequence[tuple[int, int]], d: int) -> HKFit:
    """Solve ℓ(q) = A q^d + B q^(d-1) on the two largest q exactly.

    The residual is |model - data| at the third largest q, or 0 when only
    two samples are given.
    """
    pts = sorted({int(q): int(L) for q, L in samples}.items())
    if len(pts) < 2:
        raise ValueError("insufficient samples")
    if d < 1:
        raise ValueError("dimension must be at least 1")
    (q1, l1), (q2, l2) = pts[-2], pts[-1]
    # A q^d + B q^(d-1) = l at both points
    a11, a12 = Fraction(q1) ** d, Fraction(q1) ** (d - 1)
    a21, a22 = Fraction(q2) ** d, Fraction(q2) ** (d - 1)
    det = a11 * a22 - a12 * a21
    A = (l1 * a22 - a12 * l2) / det
    B = (a11 * l2 - l1 * a21) / det
    if len(pts) >= 3:
        q0, l0 = pts[-3]
        res = abs(A * Fraction(q0) ** d + B * Fraction(q0) ** (d - 1) - l0)
    else:
        res = Fraction(0)
    return HKFit(A, B, res)


@dataclass
class HKSeries:
    ideal: str
    d: int
    samples: list[tuple[int, int]]
    engines: list[str]
    fit: HKFit | None = None

    @property
    def e_hk(self) -> float:
        return float(self.fit.e_hk)

    @property
    def beta(self) -> float:
        return float(self.fit.beta)

    @property
    def tolerance(self) -> float:
        """Error allowance for e_HK: residual at the third largest q over q^d."""
        if len(self.samples) < 3:
            return math.inf
        q0 = sorted(q for q, _ in self.samples)[-3]
        return float(self.fit.residual) / q0**self.d

    def to_dict(self) -> dict:
        return {
            "ideal": self.ideal,
            "d": self.d,
            "samples": [[q, L] for q, L in self.samples],
            "engines": list(self.engines),
            "e_hk": self.e_hk,
            "e_hk_exact": str(self.fit.e_hk),
            "beta": self.beta,
            "residual": float(self.fit.residual),
            "tolerance": self.tolerance,
        }


def sample_qs(p: int, qmax: int, include_one: bool = True) -> list[int]:
    qs = [1] if include_one else []
    q = p
    while q <= qmax:
        qs.append(q)
        q *= p
    return qs


def default_qmax(R: RingPresentation) -> int:
    """p^3 for up to 3 ambient variables or toric rings, else p^2 unless p^3 <= 27."""
    p = R.p
    if R.n <= 3 or R.toric is not None:
        return p**3
    return p**3 if p**3 <= 27 else p**2


def hk_series(
    R: RingPresentation,
    I: IdealSpec | None = None,
    qmax: int | None = None,
    *,
    engine: str = "auto",
    cache=None,
    mem_cap: int = DEFAULT_MEM_CAP,
    limits: WorkLimits | None = None,
    mapper: Callable = map,
) -> HKSeries:
    """Sample ℓ(R/I^[q]) at q = 1, p, p^2, ... <= qmax and fit (e_HK, beta)."""
    I = I or maximal_spec(R)
    qmax = qmax or default_qmax(R)
    d = R.dimension()
    qs = sample_qs(R.p, qmax)

    def one(q):
        eng = engine_for(R, I, q, engine, mem_cap)

        def thunk():
            return hk_value(R, I, q=q, engine=eng, limits=limits, mem_cap=mem_cap)[0]

        if cache is not None:
            return cache.get_or_compute((R.key(), I.key(), q, eng), thunk), eng
        return thunk(), eng

    results = list(mapper(one, qs))
    samples = [(q, L) for q, (L, _) in zip(qs, results)]
    engines = [eng for _, eng in results]
    for (qa, la), (qb, lb) in zip(samples, samples[1:]):
        if lb < la:
            raise EngineError(f"Hilbert-Kunz samples decrease between q={qa} and q={qb}")
    fit = hk_estimate(samples, d) if len(samples) >= 2 and d >= 1 else None
    return HKSeries(I.name, d, samples, engines, fit)


# ---------------------------------------------------------------------------
# multiplicity


@dataclass
class MultiplicityResult:
    e: int
    d: int
    numerator: tuple[int, ...]
    cm_check: bool | None = None  # e == ℓ(R/(x)) for a verified reduction on CM rings


def hs_multiplicity(R: RingPresentation, reduction: Sequence[Polynomial] | None = None) -> MultiplicityResult:
    """Hilbert-Samuel multiplicity e of R at m.

    For unit weights e comes from the Hilbert series of the leading ideal of
    the relations; a verified reduction on a CM-flagged ring must give
    ℓ(R/(x)) = e.  Weighted presentations need that reduction, and then
    e = ℓ(R/(x)) since the reduction is generated by elements of m - m^2.
    """
    st = Staircase.from_ideal(R.defining_ideal())
    H = hilbert_series_numerator(st)
    xs = list(reduction) if reduction is not None else list(R.reduction or [])
    have_red = "cm" in R.flags and xs and verify_reduction(R, xs).status == "verified"
    linear = all(min(sum(e) for e in x.terms) == 1 for x in xs)
    if set(R.weights) == {1}:
        e = H.multiplicity
        check = None
        if have_red and linear:
            ex = colength(R.ideal(xs))
            check = ex == e
            if not check:
                raise PresentationError(f"multiplicity cross-check failed: e={e}, ℓ(R/(x))={ex}")
        return MultiplicityResult(e, H.krull_dim, H.h_vector, check)
    if not (have_red and linear):
        raise PresentationError("weighted presentation needs a verified linear reduction on a CM ring")
    return MultiplicityResult(colength(R.ideal(xs)), R.dimension(), H.h_vector, True)


# ---------------------------------------------------------------------------
# splitting numbers


def splitting_number(R: RingPresentation, q: int, engine: str = "auto", mem_cap: int = DEFAULT_MEM_CAP,
                     limits: WorkLimits | None = None) -> int:
    """a_q, the number of free summands of R^{1/q}.

    Hypersurfaces S/(f): a_q = ℓ(S/(m^[q] : f^(q-1))) = q^n - ℓ(S/(m^[q] + f^(q-1))),
    the second form by duality on the Gorenstein ring S/m^[q].  Normal toric
    rings: the lattice count of ``Semigroup.splitting_number``.  Polynomial
    rings: the colon is m^[q] itself (f = 1) under the Groebner engine, or
    the lattice count of the free semigroup under the toric engine.
    """
    if not is_power_of(q, R.p):
        raise PolynomialError(f"q={q} is not a power of p={R.p}")
    if engine == "auto":
        if not R.relations:
            engine = "groebner"
        elif R.toric is not None:
            engine = "toric"
        elif R.is_hypersurface:
            engine = "linalg"
        else:
            raise EngineError("splitting numbers need a hypersurface or toric ring")
    if engine == "toric":
        S = R.toric
        if S is None:
            if R.relations:
                raise EngineError("ring has no toric data")
            S = Semigroup.of([tuple(int(i == j) for i in range(R.n)) for j in range(R.n)], R.weights)
        return S.splitting_number(q)
    if not R.relations and engine == "groebner":
        from .groebner import bracket_power

        return colength(bracket_power(maximal_ideal(R.ambient), q), limits)
    if not R.is_hypersurface:
        raise EngineError("splitting numbers need a hypersurface or toric ring")
    f = R.relations[0]
    n = R.n
    if q == 1:
        return 1
    g = f ** (q - 1)
    if engine == "linalg":
        return q**n - colength_linalg(g, q, weights=R.weights, mem_cap=mem_cap)
    if engine == "groebner":
        from .groebner import bracket_power, colon_ideal

        C = colon_ideal(bracket_power(maximal_ideal(R.ambient), q), g, limits)
        return colength(C, limits)
    raise EngineError(f"unknown engine {engine!r}")


@dataclass
class FSigEstimate:
    samples: list[tuple[int, int]]
    d: int
    ratios: list[Fraction]
    s: float
    tolerance: float
    monotone: bool

    def to_dict(self) -> dict:
        return {
            "samples": [[q, a] for q, a in self.samples],
            "ratios": [float(r) for r in self.ratios],
            "s": self.s,
            "tolerance": self.tolerance,
            "monotone_nonincreasing": self.monotone,
        }


def fsig_estimate(R: RingPresentation, qmax: int | None = None, engine: str = "auto", cache=None,
                  mem_cap: int = DEFAULT_MEM_CAP, mapper: Callable = map) -> FSigEstimate:
    """The sequence a_q/q^d; s is its last term, tolerance the last change."""
    qmax = qmax or default_qmax(R)
    d = R.dimension()
    qs = sample_qs(R.p, qmax, include_one=False)
    if not qs:
        raise ValueError("qmax below p")

    def one(q):
        def thunk():
            return splitting_number(R, q, engine=engine, mem_cap=mem_cap)

        if cache is not None:
            return cache.get_or_compute((R.key(), "fsig", q, engine), thunk)
        return thunk()

    aq = list(mapper(one, qs))
    samples = list(zip(qs, aq))
    ratios = [Fraction(a, q**d) for q, a in samples]
    s = float(ratios[-1])
    tol = float(abs(ratios[-1] - ratios[-2])) if len(ratios) >= 2 else math.inf
    mono = all(b <= a for a, b in zip(ratios, ratios[1:]))
    if s > 1 + tol + 1e-12 or s < 0:
        raise EngineError(f"splitting ratio {s} outside [0, 1]")
    return FSigEstimate(samples, d, ratios, s, tol, mono)


# ---------------------------------------------------------------------------
# reductions


@dataclass
class ReductionResult:
    status: str  # verified | refuted | inconclusive
    n0: int | None
    message: str = ""


def _contained(R: RingPresentation, small: Sequence[Polynomial], big: Sequence[Polynomial]) -> bool:
    B = R.ideal(list(big)).basis()
    return all(not normal_form(g, B) for g in small)


def verify_reduction(R: RingPresentation, xs: Sequence[Polynomial], budget: int = 8) -> ReductionResult:
    """Smallest n0 <= budget with m^(n0+1) = (x) m^(n0) in R."""
    d = R.dimension()
    xs = list(xs)
    if len(xs) != d:
        return ReductionResult("refuted", None, f"wrong cardinality: {len(xs)} elements, d={d}")
    if any(x.constant_coeff() for x in xs):
        return ReductionResult("refuted", None, "element outside the maximal ideal")
    try:
        colength(R.ideal(xs))
    except NotZeroDimensional:
        return ReductionResult("refuted", None, "R/(x) is not Artinian")
    m = maximal_ideal(R.ambient)
    mk = Ideal([R.ambient.one()], R.ambient)
    for n0 in range(budget + 1):
        mk1 = power_of_ideal(m, n0 + 1)
        prod = [x * g for x in xs for g in mk.generators]
        if _contained(R, mk1.generators, prod) and _contained(R, prod, mk1.generators):
            return ReductionResult("verified", n0)
        mk = mk1
    return ReductionResult("inconclusive", None, f"no n0 <= {budget}")


@dataclass
class ReductionIndices:
    r: int
    t: int | None
    notes: list[str] = field(default_factory=list)


def reduction_indices(R: RingPresentation, xs: Sequence[Polynomial], max_power: int = 64) -> ReductionIndices:
    """r = max{i : m^i not in (x)}; t = max{i : closure(m^i) not in (x)} when
    (x) is monomial in toric coordinates of a normal toric ring."""
    xs = list(xs)
    m = maximal_ideal(R.ambient)
    notes = []
    r = None
    for i in range(1, max_power + 1):
        if _contained(R, power_of_ideal(m, i).generators, xs):
            r = i - 1
            break
    if r is None:
        raise EngineError("m^i not contained in (x) for any tested i")
    if r == 0:
        notes.append("regular ring: the multiplicity floors do not apply")
    t = None
    if R.toric is not None:
        exps = [toric_exponents(R, x) for x in xs]
        if all(e is not None for e in exps):
            try:
                t = toric_t(R.toric, exps)
            except ToricError as exc:
                notes.append(f"t unavailable: {exc}")
    if t is None:
        notes.append("t unavailable; r used in its place")
    return ReductionIndices(r, t, notes)


# ---------------------------------------------------------------------------
# Dilworth number


def generator_count(base: Sequence[Polynomial], J: Sequence[Polynomial], ring: PolyRing) -> int:
    """μ(J A) = ℓ(A/mJ) - ℓ(A/J) for the Artinian A = S/(base)."""
    m = ring.gens()
    mJ = [x * g for x in m for g in J]
    return colength(Ideal(list(base) + mJ, ring)) - colength(Ideal(list(base) + list(J), ring))


@dataclass
class DilworthBound:
    mu_hat: int
    witness: str
    scanned: int


def dilworth_lower_bound(A: Ideal, samples: int = 20, seed: int = 0) -> DilworthBound:
    """Lower bound for the largest minimal number of generators of an ideal of S/A.

    Scans the powers of m and ``samples`` random ideals (seeded).
    """
    ring = A.ring
    base = list(A.generators)
    st = Staircase.from_ideal(A)
    if not st.is_zero_dimensional():
        raise NotZeroDimensional("ring is not Artinian")
    std = st.standard_monomials()
    best = (0, "")
    m = maximal_ideal(ring)
    i = 0
    scanned = 0
    while True:
        Ji = power_of_ideal(m, i).generators if i else [ring.one()]
        if _all_in(A, Ji):
            break
        mu = generator_count(base, Ji, ring)
        scanned += 1
        if mu > best[0]:
            best = (mu, f"m^{i}")
        i += 1
    rng = random.Random(seed)
    nonunit = [u for u in std if any(u)]
    for k in range(samples):
        if not nonunit:
            break
        ngen = rng.randint(1, 3)
        gens = []
        for _ in range(ngen):
            terms = rng.sample(nonunit, min(len(nonunit), rng.randint(1, 3)))
            g = ring.zero()
            for u in terms:
                g = g + ring.monomial(u, rng.randrange(1, ring.p))
            gens.append(g)
        mu = generator_count(base, gens, ring)
        scanned += 1
        if mu > best[0]:
            best = (mu, "random ideal (" + ", ".join(g.to_str() for g in gens) + ")")
    return DilworthBound(best[0], best[1], scanned)


def _all_in(A: Ideal, gens) -> bool:
    B = A.basis()
    return all(not normal_form(g, B) for g in gens)


# ---------------------------------------------------------------------------
# radical extensions


@dataclass
class RadicalExtensionSpec:
    base: RingPresentation
    x: Polynomial
    n: int
    S: RingPresentation
    mS: IdealSpec
    x_not_in_m2: bool
    b: int
    residue_degree: int = 1


def radical_extension(R: RingPresentation, x: Polynomial, n: int, name: str = "Y") -> RadicalExtensionSpec:
    """S = R[Y]/(Y^n - x), presented by solving x = Y^n for one variable of x.

    x must be a homogeneous linear form in the variables of equal weight.
    """
    if n < 1:
        raise PresentationError("root index must be positive")
    lin = {e.index(1): c for e, c in x.terms.items() if sum(e) == 1}
    if not lin or len(lin) != len(x.terms):
        raise PresentationError("x must be a linear form")
    wts = {R.weights[i] for i in lin}
    if len(wts) != 1:
        raise PresentationError("x must be homogeneous")
    w = wts.pop()
    v = max(lin)  # solve for the last variable occurring in x
    rest = [i for i in range(R.n) if i != v]
    names = [R.ambient.names[i] for i in rest]
    while name in names:
        name += "_"
    T = PolyRing(R.p, names + [name])
    Y = T.gen(len(names))
    # x_v = (Y^n - sum_{i != v} c_i x_i) / c_v
    inv = pow(lin[v], -1, R.p)
    img = Y**n
    for i, c in lin.items():
        if i != v:
            img = img - T.gen(rest.index(i)).scale(c)
    img = img.scale(inv)
    images = [T.gen(rest.index(i)) if i != v else img for i in range(R.n)]
    rels = [f.compose(images, T) for f in R.relations]
    weights = [R.weights[i] * n for i in rest] + [w]
    red = None
    if R.reduction:
        red = [Y if _same_up_to_unit(g, x) else g.compose(images, T) for g in R.reduction]
    flags = {f for f in R.flags if f in ("cm", "gorenstein", "unmixed", "reduced")}
    S = RingPresentation(T, rels, weights, red, frozenset(flags), name=(R.name or "R") + f"[{name}^{n}]")
    mS = IdealSpec([T.gen(i) for i in range(len(names))] + [Y**n], "mS")
    return RadicalExtensionSpec(R, x, n, S, mS, True, n, 1)


def _same_up_to_unit(g: Polynomial, x: Polynomial) -> bool:
    if len(g.terms) != len(x.terms) or set(g.terms) != set(x.terms):
        return False
    e = next(iter(x.terms))
    c = g.terms[e] * pow(x.terms[e], -1, x.ring.p) % x.ring.p
    return x.scale(c) == g


# ---------------------------------------------------------------------------
# profile


@dataclass
class InvariantProfile:
    name: str
    p: int | None = None
    d: int | None = None
    e: int | None = None
    v: int | None = None
    e_hk: float | None = None
    e_hk_tol: float = 0.0
    beta: float | None = None
    residual: float | None = None
    a_q: list[tuple[int, int]] = field(default_factory=list)
    s: float | None = None
    s_tol: float = 0.0
    mu_hat: int | None = None
    mu_reduction: int | None = None  # μ(m/(x)) for the Gorenstein bound with I = m
    r: int | None = None
    t: int | None = None
    alpha: int = 0
    regular: bool | None = None
    flags: list[str] = field(default_factory=list)
    reduction_status: str = "absent"
    reduction_n0: int | None = None
    notes: list[str] = field(default_factory=list)
    hk_series: HKSeries | None = None
    fsig: FSigEstimate | None = None

    def to_dict(self) -> dict:
        out = {}
        for k in ("name", "p", "d", "e", "v", "e_hk", "e_hk_tol", "beta", "residual", "s", "s_tol",
                  "mu_hat", "mu_reduction", "r", "t", "alpha", "regular", "flags", "reduction_status",
                  "reduction_n0", "notes"):
            val = getattr(self, k)
            if isinstance(val, float) and math.isinf(val):
                val = "inf"
            out[k] = val
        out["a_q"] = [[q, a] for q, a in self.a_q]
        out["hk_series"] = self.hk_series.to_dict() if self.hk_series else None
        out["fsig"] = self.fsig.to_dict() if self.fsig else None
        return out


@dataclass
class ProfileConfig:
    qmax: int | None = None
    engine: str = "auto"
    fsig_qmax: int | None = None
    mu_samples: int = 20
    seed: int = 0
    mem_cap: int = DEFAULT_MEM_CAP
    reduction_budget: int = 8


def compute_profile(R: RingPresentation, config: ProfileConfig | None = None, cache=None,
                    mapper: Callable = map) -> InvariantProfile:
    cfg = config or ProfileConfig()
    prof = InvariantProfile(R.name, p=R.p, flags=sorted(R.flags))
    prof.d = R.dimension()
    prof.v = R.embedding_dimension()
    prof.regular = prof.v == prof.d
    if prof.regular:
        # regular local rings have every structural property we gate on
        prof.flags = sorted(set(prof.flags) | set(FLAG_NAMES))
    red_res = None
    if R.reduction:
        red_res = verify_reduction(R, R.reduction, cfg.reduction_budget)
        prof.reduction_status = red_res.status
        prof.reduction_n0 = red_res.n0
        if red_res.status != "verified":
            prof.notes.append(f"reduction {red_res.status}: {red_res.message}")
    mult = hs_multiplicity(R, R.reduction if red_res and red_res.status == "verified" else [])
    prof.e = mult.e
    if prof.d >= 1:
        hs = hk_series(R, None, cfg.qmax, engine=cfg.engine, cache=cache, mem_cap=cfg.mem_cap, mapper=mapper)
        prof.hk_series = hs
        if hs.fit is not None:
            prof.e_hk = hs.e_hk
            prof.beta = hs.beta
            prof.residual = float(hs.fit.residual)
            prof.e_hk_tol = hs.tolerance
    if R.toric is not None or R.is_hypersurface or not R.relations:
        try:
            fs = fsig_estimate(R, cfg.fsig_qmax or cfg.qmax, cache=cache, mem_cap=cfg.mem_cap, mapper=mapper)
        except (EngineError, MemoryCapExceeded) as exc:
            prof.notes.append(f"F-signature unavailable: {exc}")
        else:
            prof.fsig = fs
            prof.a_q = fs.samples
            prof.s = fs.s
            prof.s_tol = fs.tolerance
    if red_res is not None and red_res.status == "verified":
        xs = list(R.reduction)
        idx = reduction_indices(R, xs)
        prof.r, prof.t = idx.r, idx.t
        prof.notes.extend(idx.notes)
        A = R.ideal(xs)
        prof.mu_hat = dilworth_lower_bound(A, cfg.mu_samples, cfg.seed).mu_hat
        prof.mu_reduction = generator_count(A.generators, R.maximal(), R.ambient)
    return prof
