"""Zigzag numbers c_d with sec(x) + tan(x) = sum c_d x^d / d!, and the floors 1 + c_d/d!."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


MAX_D = 64


@dataclass(frozen=True)
class ZigzagTable:
    c: tuple[int, ...]
    floors: tuple[Fraction, ...]

    def to_dict(self) -> dict:
        return {
            "c": [str(x) for x in self.c],
            "floors": [str(f) for f in self.floors],
        }


def boustrophedon(dmax: int) -> list[int]:
    """c_0..c_dmax by the Seidel-Entringer triangle."""
    row = [1]
    out = [1]
    for n in range(1, dmax + 1):
        new = [0]
        for k in range(n):
            new.append(new[-1] + row[n - 1 - k])
        row = new
        out.append(row[-1])
    return out


def series_coefficients(dmax: int) -> list[int]:
    """c_d = d! [x^d] (1 + sin x)/cos x, by exact power-series division."""
    fact = [math.factorial(k) for k in range(dmax + 1)]
    num = [Fraction(0)] * (dmax + 1)
    den = [Fraction(0)] * (dmax + 1)
    num[0] = Fraction(1)
    for k in range(dmax + 1):
        if k % 2 == 1:
            num[k] += Fraction((-1) ** ((k - 1) // 2), fact[k])
        else:
            den[k] = Fraction((-1) ** (k // 2), fact[k])
    quo = [Fraction(0)] * (dmax + 1)
    for k in range(dmax + 1):
        acc = num[k] - sum(quo[j] * den[k - j] for j in range(k))
        quo[k] = acc / den[0]
    out = []
    for k in range(dmax + 1):
        v = quo[k] * fact[k]
        if v.denominator != 1:
            raise ArithmeticError(f"non-integral coefficient at d={k}")
        out.append(int(v))
    return out


def zigzag_numbers(dmax: int) -> ZigzagTable:
    """Both algorithms, compared; floors 1 + c_d/d!."""
    if dmax < 0 or dmax > MAX_D:
        raise ValueError(f"dmax must be in [0, {MAX_D}]")
    a = boustrophedon(dmax)
    b = series_coefficients(dmax)
    if a != b:
        raise ArithmeticError("zigzag algorithms disagree")
    floors = tuple(1 + Fraction(c, math.factorial(d)) for d, c in enumerate(a))
    return ZigzagTable(tuple(a), floors)


def conjecture_floor(d: int) -> Fraction:
    if d < 1:
        raise ValueError("d must be at least 1")
    return zigzag_numbers(d).floors[d]
