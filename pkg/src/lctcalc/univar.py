"""Dense univariate polynomials over the rationals.

Only what face-polynomial analysis needs: derivative, gcd, Yun's squarefree
decomposition and rational roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class UnivarPoly:
    """Polynomial in ``T`` stored lowest degree first, trailing zeros stripped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def from_roots(cls, roots: Iterable) -> UnivarPoly:
        out = cls([1])
        for r in roots:
            out = out * cls([-Fraction(r), 1])
        return out

    def __repr__(self):
        return f"UnivarPoly({[str(c) for c in self.coeffs]})"

    def __eq__(self, other):
        if not isinstance(other, UnivarPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, t):
        acc = Fraction(0) if isinstance(t, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __add__(self, other: UnivarPoly) -> UnivarPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UnivarPoly(x + y for x, y in zip(a, b))

    def __neg__(self):
        return UnivarPoly(-c for c in self.coeffs)

    def __sub__(self, other: UnivarPoly) -> UnivarPoly:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UnivarPoly(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return UnivarPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UnivarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> UnivarPoly:
        out = UnivarPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: UnivarPoly) -> tuple[UnivarPoly, UnivarPoly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quot = [Fraction(0)] * max(len(rem) - dq, 1)
        inv = 1 / other.lead
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] * inv
            if c:
                quot[i - dq] = c
                for j, oc in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * oc
        return UnivarPoly(quot), UnivarPoly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> UnivarPoly:
        if self.is_zero():
            return self
        return self * (1 / self.lead)

    def primitive(self) -> UnivarPoly:
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if self.is_zero():
            return self
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return UnivarPoly(Fraction(v // g) for v in ints)


@dataclass(frozen=True)
class MultiplicityClass:
    multiplicity: int
    factor: UnivarPoly


def derivative(p: UnivarPoly) -> UnivarPoly:
    return UnivarPoly(i * c for i, c in enumerate(p.coeffs) if i > 0)


def gcd(p: UnivarPoly, q: UnivarPoly) -> UnivarPoly:
    """Monic gcd over the rationals."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
        # keep coefficient growth in check
        b = b.monic()
    return a.monic()


def _require_nonconstant(p: UnivarPoly):
    if p.is_zero() or p.degree < 1:
        raise ValueError("polynomial must have degree at least 1")


def squarefree_decompose(p: UnivarPoly) -> list[MultiplicityClass]:
    """Yun's algorithm: ``p = const * prod(factor ** multiplicity)``."""
    _require_nonconstant(p)
    dp = derivative(p)
    a = gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - derivative(b)
    out: list[MultiplicityClass] = []
    i = 1
    while b.degree > 0:
        a = gcd(b, d)
        if a.degree > 0:
            out.append(MultiplicityClass(i, a.primitive()))
        b = b // a
        c = d // a
        d = c - derivative(b)
        i += 1
    return out


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _squarefree_rational_roots(f: UnivarPoly) -> list[Fraction]:
    f = f.primitive()
    roots = []
    shift = 0
    while f.coeffs and f.coeffs[0] == 0:
        shift += 1
        f = UnivarPoly(f.coeffs[1:])
    if shift:
        roots.append(Fraction(0))
    if f.degree < 1:
        return roots
    if f.degree == 1:
        return roots + [-f.coeffs[0] / f.coeffs[1]]
    lead = int(f.coeffs[-1])
    trail = int(f.coeffs[0])
    for num in _divisors(trail):
        for den in _divisors(lead):
            if math.gcd(num, den) != 1:
                continue
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if f(cand) == 0:
                    roots.append(cand)
    return roots


def rational_roots(p: UnivarPoly) -> list[tuple[Fraction, int]]:
    """All rational roots with multiplicities, sorted by root."""
    out = []
    for cls in squarefree_decompose(p):
        for r in _squarefree_rational_roots(cls.factor):
            out.append((r, cls.multiplicity))
    return sorted(out)


def reconstruct(classes: Sequence[MultiplicityClass]) -> UnivarPoly:
    out = UnivarPoly([1])
    for cls in classes:
        out = out * cls.factor**cls.multiplicity
    return out
