"""Multivariate polynomials over a prime field F_p.

Polynomials are immutable dictionaries ``{exponent tuple: coefficient}``.
Coefficients always live in ``[1, p)``; zero coefficients are never stored.
Iteration order is grevlex-descending regardless of the order used by an
ideal computation, so printing and hashing are deterministic.

Expression grammar accepted by :func:`parse_polynomial`::

    expr    := signed (("+" | "-") signed)*
    signed  := "-" signed | "+" signed | product
    product := power ("*" power)*
    power   := atom ("^" INTEGER)?
    atom    := INTEGER | IDENT | "(" expr ")"
    IDENT   := [A-Za-z_][A-Za-z0-9_]*

Binding strength is ``^`` > ``*`` > unary ``-`` > binary ``+``/``-``.
Whitespace is ignored everywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_EXPONENT = 1 << 20


class PolynomialError(ValueError):
    pass


class ParseError(PolynomialError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class PrimeModulus:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not 2 <= self.p <= 2**31 - 1:
            raise PolynomialError(f"modulus {self.p!r} outside [2, 2^31-1]")
        if not is_prime(self.p):
            raise PolynomialError(f"modulus not prime: {self.p}")

    def reduce(self, c: int) -> int:
        return c % self.p

    def inv(self, c: int) -> int:
        c %= self.p
        if c == 0:
            raise ZeroDivisionError("inverse of 0 mod p")
        return pow(c, -1, self.p)


def is_power_of(q: int, p: int) -> bool:
    if q < 1:
        return False
    while q % p == 0:
        q //= p
    return q == 1


# ---------------------------------------------------------------------------
# monomial orders


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order given by ``kind`` and an optional variable permutation.

    ``kind`` is ``"lex"``, ``"grevlex"`` or ``"elim"``.  For ``"elim"`` the
    first ``block`` variables (after permutation) form a block that is
    compared first by grevlex; ties fall through to grevlex on the rest.
    ``perm[i]`` is the index of the variable that plays the role of the
    i-th variable of the order.
    """

    kind: str = "grevlex"
    block: int = 0
    perm: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "elim"):
            raise PolynomialError(f"unknown monomial order {self.kind!r}")
        if self.kind == "elim" and self.block < 1:
            raise PolynomialError("elimination order needs block >= 1")

    def matrix(self, n: int) -> list[list[int]]:
        """Integer weight matrix W; a < b iff W·a < W·b lexicographically."""
        if self.kind == "lex":
            rows = [[int(i == j) for j in range(n)] for i in range(n)]
        elif self.kind == "grevlex":
            rows = _grevlex_rows(0, n, n)
        else:
            k = min(self.block, n)
            rows = _grevlex_rows(0, k, n) + _grevlex_rows(k, n, n)
        if self.perm is None:
            return rows
        perm = self.perm
        if sorted(perm) != list(range(n)):
            raise PolynomialError("order permutation does not match variable count")
        out = []
        for row in rows:
            new = [0] * n
            for i, w in enumerate(row):
                new[perm[i]] = w
            out.append(new)
        return out

    def sort_key(self, n: int):
        W = self.matrix(n)

        def key(e):
            return tuple(sum(w * x for w, x in zip(row, e)) for row in W)

        return key


def _grevlex_rows(lo: int, hi: int, n: int) -> list[list[int]]:
    if hi <= lo:
        return []
    rows = [[1 if lo <= j < hi else 0 for j in range(n)]]
    for j in range(hi - 1, lo, -1):
        rows.append([-1 if i == j else 0 for i in range(n)])
    return rows


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


def elimination_order(block: int) -> MonomialOrder:
    return MonomialOrder("elim", block=block)


def compare_monomials(order: MonomialOrder, a: Sequence[int], b: Sequence[int]) -> int:
    """Return -1, 0 or 1 as a is less than, equal to or greater than b."""
    if len(a) != len(b):
        raise PolynomialError("exponent vectors of different lengths")
    key = order.sort_key(len(a))
    ka, kb = key(a), key(b)
    return (ka > kb) - (ka < kb)


_grevlex_cache: dict[int, object] = {}


def _grevlex_key(n: int):
    k = _grevlex_cache.get(n)
    if k is None:
        k = _grevlex_cache[n] = GREVLEX.sort_key(n)
    return k


# ---------------------------------------------------------------------------
# rings and polynomials


class PolyRing:
    """The ambient polynomial ring F_p[x_1, ..., x_n] with named variables."""

    __slots__ = ("modulus", "names", "_index")

    def __init__(self, p: int | PrimeModulus, names: Sequence[str]):
        self.modulus = p if isinstance(p, PrimeModulus) else PrimeModulus(p)
        names = tuple(names)
        for s in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", s):
                raise PolynomialError(f"bad variable name {s!r}")
        if len(set(names)) != len(names):
            raise PolynomialError("duplicate variable names")
        self.names = names
        self._index = {s: i for i, s in enumerate(names)}

    @property
    def p(self) -> int:
        return self.modulus.p

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.p == other.p and self.names == other.names

    def __hash__(self):
        return hash((self.p, self.names))

    def __repr__(self):
        return f"PolyRing(p={self.p}, names={list(self.names)})"

    def index(self, name: str) -> int:
        return self._index[name]

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return self.const(1)

    def const(self, c: int) -> Polynomial:
        return Polynomial(self, {(0,) * self.nvars: c})

    def gen(self, i: int | str) -> Polynomial:
        if isinstance(i, str):
            i = self._index[i]
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list[Polynomial]:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exp: Sequence[int], c: int = 1) -> Polynomial:
        exp = tuple(exp)
        if len(exp) != self.nvars or min(exp, default=0) < 0:
            raise PolynomialError(f"bad exponent vector {exp}")
        return Polynomial(self, {exp: c})

    def parse(self, text: str) -> Polynomial:
        return parse_polynomial(text, self)

    def extend(self, names: Sequence[str], front: bool = False) -> PolyRing:
        return PolyRing(self.modulus, tuple(names) + self.names if front else self.names + tuple(names))


class Polynomial:
    __slots__ = ("ring", "terms", "_hash", "_sorted")

    def __init__(self, ring: PolyRing, terms: dict, *, _clean: bool = False):
        self.ring = ring
        if not _clean:
            p = ring.p
            n = ring.nvars
            clean = {}
            for e, c in terms.items():
                c %= p
                if c:
                    if len(e) != n:
                        raise PolynomialError("variable-count mismatch")
                    clean[tuple(e)] = c
            terms = clean
        self.terms = terms
        self._hash = None
        self._sorted = None

    # -- basic protocol ----------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return self.to_str()

    def items(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms in canonical (grevlex descending) order."""
        if self._sorted is None:
            key = _grevlex_key(self.ring.nvars)
            self._sorted = sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)
        return self._sorted

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        names = self.ring.names
        parts = []
        for e, c in self.items():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    # -- structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_coeff(self) -> int:
        return self.terms.get((0,) * self.ring.nvars, 0)

    def degree(self, weights: Sequence[int] | None = None) -> int:
        if not self.terms:
            return -1
        if weights is None:
            return max(sum(e) for e in self.terms)
        return max(sum(w * x for w, x in zip(weights, e)) for e in self.terms)

    def is_homogeneous(self, weights: Sequence[int] | None = None) -> bool:
        if weights is None:
            degs = {sum(e) for e in self.terms}
        else:
            degs = {sum(w * x for w, x in zip(weights, e)) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_part(self, deg: int, weights: Sequence[int] | None = None) -> Polynomial:
        w = weights or (1,) * self.ring.nvars
        return Polynomial(
            self.ring,
            {e: c for e, c in self.terms.items() if sum(a * b for a, b in zip(w, e)) == deg},
            _clean=True,
        )

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    def leading(self, order: MonomialOrder = GREVLEX) -> tuple[tuple[int, ...], int]:
        if not self.terms:
            raise PolynomialError("zero polynomial has no leading term")
        key = order.sort_key(self.ring.nvars)
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def monic(self, order: MonomialOrder = GREVLEX) -> Polynomial:
        _, c = self.leading(order)
        return self.scale(self.ring.modulus.inv(c))

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.ring.p != self.ring.p:
                raise PolynomialError("modulus mismatch")
            if other.ring.nvars != self.ring.nvars:
                raise PolynomialError("variable-count mismatch")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        p = self.ring.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = (out.get(e, 0) + c) % p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {e: p - c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c: int) -> Polynomial:
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero()
        return Polynomial(self.ring, {e: v * c % p for e, v in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        p = self.ring.p
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = (out.get(e, 0) + c1 * c2) % p
        return Polynomial(self.ring, {e: c for e, c in out.items() if c}, _clean=True)

    __rmul__ = __mul__

    def mul_monomial(self, exp: Sequence[int], c: int = 1) -> Polynomial:
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero()
        return Polynomial(
            self.ring,
            {tuple(a + b for a, b in zip(e, exp)): v * c % p for e, v in self.terms.items()},
            _clean=True,
        )

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise PolynomialError("exponent must be a nonnegative integer")
        if k > MAX_EXPONENT:
            raise PolynomialError("exponent overflow")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def frobenius(self, q: int) -> Polynomial:
        """f^q computed termwise; valid because q is a power of p."""
        if not is_power_of(q, self.ring.p):
            raise PolynomialError(f"{q} is not a power of {self.ring.p}")
        p = self.ring.p
        return Polynomial(
            self.ring,
            {tuple(q * a for a in e): pow(c, q, p) for e, c in self.terms.items()},
            _clean=True,
        )

    def evaluate(self, point: Sequence[int]) -> int:
        p = self.ring.p
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * pow(x, k, p) % p
            total += v
        return total % p

    def compose(self, images: Sequence[Polynomial], target: PolyRing | None = None) -> Polynomial:
        """Substitute ``images[i]`` for the i-th variable."""
        if len(images) != self.ring.nvars:
            raise PolynomialError("wrong number of substitution images")
        target = target or (images[0].ring if images else self.ring)
        if target.p != self.ring.p:
            raise PolynomialError("modulus mismatch")
        powers: dict[tuple[int, int], Polynomial] = {}

        def pw(i, k):
            r = powers.get((i, k))
            if r is None:
                r = powers[(i, k)] = images[i] ** k
            return r

        out = target.zero()
        for e, c in self.terms.items():
            t = target.const(c)
            for i, k in enumerate(e):
                if k:
                    t = t * pw(i, k)
            out = out + t
        return out

    def change_ring(self, target: PolyRing, mapping: Sequence[int]) -> Polynomial:
        """Re-index variables: variable i goes to variable ``mapping[i]`` of target."""
        n = target.nvars
        out = {}
        for e, c in self.terms.items():
            new = [0] * n
            for i, k in enumerate(e):
                if k:
                    new[mapping[i]] += k
            out[tuple(new)] = c
        return Polynomial(target, out)


def poly_arithmetic(op: str, f: Polynomial, g) -> Polynomial:
    """Dispatch ``add``/``sub``/``mul``/``scale``/``power`` on f and g."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(int(g))
    if op == "power":
        return f ** int(g)
    raise PolynomialError(f"unknown operation {op!r}")


def exact_divide(g: Polynomial, f: Polynomial) -> Polynomial:
    """Return h with h*f == g; raise if f does not divide g."""
    if not f:
        raise ZeroDivisionError("division by zero polynomial")
    key = GREVLEX.sort_key(f.ring.nvars)
    lf = max(f.terms, key=key)
    inv = f.ring.modulus.inv(f.terms[lf])
    p = f.ring.p
    rem = dict(g.terms)
    quot = {}
    ftail = [(e, c) for e, c in f.terms.items() if e != lf]
    while rem:
        lr = max(rem, key=key)
        t = tuple(a - b for a, b in zip(lr, lf))
        if min(t) < 0:
            raise PolynomialError("polynomial does not divide exactly")
        c = rem.pop(lr) * inv % p
        quot[t] = c
        for e, v in ftail:
            m = tuple(a + b for a, b in zip(e, t))
            nv = (rem.get(m, 0) - c * v) % p
            if nv:
                rem[m] = nv
            else:
                rem.pop(m, None)
    return Polynomial(f.ring, quot, _clean=True)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1) is not None:
            out.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            out.append(("ident", m.group(2), start))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*^()":
                raise ParseError(f"unexpected character {ch!r}", start, text)
            out.append(("op", ch, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        f = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return f

    def expr(self):
        f = self.signed()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            g = self.signed()
            f = f + g if op == "+" else f - g
        return f

    def signed(self):
        t = self.peek()
        if t[:2] == ("op", "-"):
            self.take()
            return -self.signed()
        if t[:2] == ("op", "+"):
            self.take()
            return self.signed()
        return self.product()

    def product(self):
        f = self.power()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            f = f * self.power()
        return f

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            t = self.take()
            if t[0] != "int":
                self.fail("exponent must be a nonnegative integer literal", t)
            k = int(t[1])
            if k > MAX_EXPONENT:
                self.fail("exponent overflow", t)
            base = base**k
        return base

    def atom(self):
        t = self.take()
        if t[0] == "int":
            return self.ring.const(int(t[1]))
        if t[0] == "ident":
            try:
                return self.ring.gen(self.ring.index(t[1]))
            except KeyError:
                self.fail(f"unknown identifier {t[1]!r}", t)
        if t[:2] == ("op", "("):
            f = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return f
        self.fail("malformed expression", t)


def parse_polynomial(text: str, ring) -> Polynomial:
    """Parse ``text`` into a polynomial of ``ring``.

    ``ring`` may be a :class:`PolyRing` or anything exposing one as
    ``.ambient`` (a ring presentation).
    """
    ring = getattr(ring, "ambient", ring)
    return _Parser(text, ring).parse()


def parse_many(texts: Iterable[str], ring) -> list[Polynomial]:
    return [parse_polynomial(t, ring) for t in texts]
