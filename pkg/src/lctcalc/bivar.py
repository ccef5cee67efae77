"""Exact sparse bivariate polynomials over the rationals.

Scalars are :class:`fractions.Fraction`.  A :class:`BivarPoly` maps exponent
pairs ``(p, q)`` (for ``x**p * y**q``) to nonzero coefficients and is
immutable once built.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from types import MappingProxyType
from typing import Iterable, Mapping

Rational = Fraction
Monomial = tuple[int, int]

INFINITE = math.inf


class Axis(enum.Enum):
    Y = "y"
    X = "x"


@dataclass(frozen=True)
class ShearTerm:
    """One monomial of a coordinate change.

    ``Axis.Y`` encodes ``y -> y + coefficient * x**exponent``;
    ``Axis.X`` encodes ``x -> x + coefficient * y**exponent``.
    """

    axis: Axis
    exponent: int
    coefficient: Fraction

    def __post_init__(self):
        if self.exponent < 1:
            raise ValueError("shear exponent must be positive")
        if self.coefficient == 0:
            raise ValueError("shear coefficient must be nonzero")
        object.__setattr__(self, "coefficient", Fraction(self.coefficient))


class BivarPoly:
    """Sparse polynomial in ``x`` and ``y`` with rational coefficients."""

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: Mapping[Monomial, object] | Iterable = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[Monomial, Fraction] = {}
        for (p, q), c in items:
            p, q = int(p), int(q)
            if p < 0 or q < 0:
                raise ValueError(f"negative exponent in monomial {(p, q)}")
            acc[(p, q)] = acc.get((p, q), Fraction(0)) + Fraction(c)
        self._coeffs = MappingProxyType({k: v for k, v in acc.items() if v != 0})
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def _raw(cls, coeffs: dict[Monomial, Fraction]) -> BivarPoly:
        # caller guarantees canonical form
        obj = cls.__new__(cls)
        obj._coeffs = MappingProxyType(coeffs)
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c) -> BivarPoly:
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, p: int, q: int, c=1) -> BivarPoly:
        return cls({(p, q): c})

    @classmethod
    def x(cls) -> BivarPoly:
        return cls.monomial(1, 0)

    @classmethod
    def y(cls) -> BivarPoly:
        return cls.monomial(0, 1)

    # -- basic accessors ----------------------------------------------------

    @property
    def coeffs(self) -> Mapping[Monomial, Fraction]:
        return self._coeffs

    def coefficient(self, p: int, q: int) -> Fraction:
        return self._coeffs.get((p, q), Fraction(0))

    def support(self) -> list[Monomial]:
        return sorted(self._coeffs, key=lambda m: (m[0] + m[1], m[0]))

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    def __len__(self):
        return len(self._coeffs)

    def order(self):
        """Lowest total degree of a monomial; ``INFINITE`` for zero."""
        if not self._coeffs:
            return INFINITE
        return min(p + q for p, q in self._coeffs)

    def degree(self) -> int:
        """Total degree (``-1`` for the zero polynomial)."""
        return max((p + q for p, q in self._coeffs), default=-1)

    def degree_y(self) -> int:
        return max((q for _, q in self._coeffs), default=-1)

    def degree_x(self) -> int:
        return max((p for p, _ in self._coeffs), default=-1)

    # -- ring operations ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, BivarPoly):
            return self._coeffs == other._coeffs
        if isinstance(other, (int, Fraction)):
            return self == BivarPoly.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._coeffs.items()))
        return self._hash

    @staticmethod
    def _coerce(other) -> BivarPoly:
        if isinstance(other, BivarPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return BivarPoly.constant(other)
        raise TypeError(f"cannot combine BivarPoly with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        acc = dict(self._coeffs)
        for m, c in other._coeffs.items():
            v = acc.get(m, 0) + c
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
        return BivarPoly._raw(acc)

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly._raw({m: -c for m, c in self._coeffs.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        acc: dict[Monomial, Fraction] = {}
        for (p1, q1), c1 in self._coeffs.items():
            for (p2, q2), c2 in other._coeffs.items():
                m = (p1 + p2, q1 + q2)
                acc[m] = acc.get(m, 0) + c1 * c2
        return BivarPoly._raw({m: c for m, c in acc.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = BivarPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> BivarPoly:
        c = Fraction(c)
        if c == 0:
            return BivarPoly()
        return BivarPoly._raw({m: v * c for m, v in self._coeffs.items()})

    # -- substitutions ------------------------------------------------------

    def transpose(self) -> BivarPoly:
        """Swap the roles of ``x`` and ``y``."""
        return BivarPoly._raw({(q, p): c for (p, q), c in self._coeffs.items()})

    def shear(self, term: ShearTerm) -> BivarPoly:
        """Substitute ``y -> y + b x^k`` (or ``x -> x + b y^k`` on the X axis)."""
        if term.axis is Axis.X:
            return self.transpose().shear(
                ShearTerm(Axis.Y, term.exponent, term.coefficient)
            ).transpose()
        b, k = term.coefficient, term.exponent
        acc: dict[Monomial, Fraction] = {}
        bpow = [Fraction(1)]
        for _ in range(self.degree_y()):
            bpow.append(bpow[-1] * b)
        for (p, q), c in self._coeffs.items():
            # x^p (y + b x^k)^q = sum_j C(q, j) b^j x^(p + jk) y^(q - j)
            for j in range(q + 1):
                m = (p + j * k, q - j)
                acc[m] = acc.get(m, 0) + c * comb(q, j) * bpow[j]
        return BivarPoly._raw({m: c for m, c in acc.items() if c})

    def compose_linear(self, a, b, c, d) -> BivarPoly:
        """Return ``f(a x + b y, c x + d y)``."""
        X = BivarPoly({(1, 0): a, (0, 1): b})
        Y = BivarPoly({(1, 0): c, (0, 1): d})
        return self.substitute(X, Y)

    def substitute(self, X: BivarPoly, Y: BivarPoly) -> BivarPoly:
        """Return ``f(X(x, y), Y(x, y))``."""
        xp = [BivarPoly.constant(1)]
        for _ in range(self.degree_x()):
            xp.append(xp[-1] * X)
        yp = [BivarPoly.constant(1)]
        for _ in range(self.degree_y()):
            yp.append(yp[-1] * Y)
        out = BivarPoly()
        for (p, q), coef in self._coeffs.items():
            out = out + (xp[p] * yp[q]).scale(coef)
        return out

    def diff_y(self) -> BivarPoly:
        return BivarPoly._raw(
            {(p, q - 1): c * q for (p, q), c in self._coeffs.items() if q > 0}
        )

    def y_coefficients(self) -> dict[int, dict[int, Fraction]]:
        """Group as ``sum_q c_q(x) y^q``; returns ``{q: {p: coeff}}``."""
        out: dict[int, dict[int, Fraction]] = {}
        for (p, q), c in self._coeffs.items():
            out.setdefault(q, {})[p] = c
        return out

    # -- numerics -----------------------------------------------------------

    def eval_float(self, x, y):
        """Evaluate in floating point; ``x``/``y`` may be complex or numpy arrays.

        Horner in ``y`` for each power of ``x``, then Horner in ``x``.
        """
        rows: dict[int, dict[int, float]] = {}
        for (p, q), c in self._coeffs.items():
            rows.setdefault(p, {})[q] = float(c)
        if not rows:
            return 0.0 * x * y
        acc_x = 0.0
        for p in range(max(rows), -1, -1):
            row = rows.get(p)
            inner = 0.0
            if row:
                for q in range(max(row), -1, -1):
                    inner = inner * y + row.get(q, 0.0)
            acc_x = acc_x * x + inner
        return acc_x

    # -- printing -----------------------------------------------------------

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"BivarPoly({to_text(self)!r})"


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def to_text(f: BivarPoly) -> str:
    """Canonical text: graded-lex order (total degree, then power of x)."""
    if f.is_zero():
        return "0"
    parts = []
    for p, q in f.support():
        c = f.coefficient(p, q)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        factors = []
        if p:
            factors.append("x" if p == 1 else f"x^{p}")
        if q:
            factors.append("y" if q == 1 else f"y^{q}")
        if mag != 1 or not factors:
            factors.insert(0, _fmt_rational(mag))
        parts.append((sign, "*".join(factors)))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# -- parsing -----------------------------------------------------------------


class ParseError(ValueError):
    """Malformed polynomial text; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message, pos=None):
        pos = self.pos if pos is None else pos
        return ParseError(message, len(self.text[:pos].encode("utf-8")))

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> BivarPoly:
        self.ws()
        if not self.peek():
            raise self.error("empty expression")
        result = self.expr()
        self.ws()
        if self.pos != len(self.text):
            raise self.error(f"unexpected character {self.peek()!r}")
        return result

    def expr(self) -> BivarPoly:
        self.ws()
        acc = self.term()
        while True:
            self.ws()
            ch = self.peek()
            if ch not in ("+", "-"):
                return acc
            self.pos += 1
            self.ws()
            rhs = self.term()
            acc = acc + rhs if ch == "+" else acc - rhs

    def term(self) -> BivarPoly:
        negate = False
        if self.peek() == "-":
            negate = True
            self.pos += 1
            self.ws()
        acc = self.factor()
        while True:
            save = self.pos
            self.ws()
            if self.peek() == "*":
                self.pos += 1
                self.ws()
                acc = acc * self.factor()
            elif self.peek() and (self.peek() in "(xy" or self.peek().isdigit()):
                acc = acc * self.factor()
            else:
                self.pos = save
                break
        return -acc if negate else acc

    def factor(self) -> BivarPoly:
        base = self.base()
        save = self.pos
        self.ws()
        if self.peek() == "^":
            self.pos += 1
            self.ws()
            if self.peek() == "-":
                raise self.error("negative exponent")
            if not self.peek().isdigit():
                raise self.error("exponent must be a nonnegative integer")
            k = self.nat()
            if self.peek() in (".", "/"):
                raise self.error("exponent must be a nonnegative integer")
            return base**k
        self.pos = save
        return base

    def base(self) -> BivarPoly:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            self.ws()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            return inner
        if ch == "x":
            self.pos += 1
            return BivarPoly.x()
        if ch == "y":
            self.pos += 1
            return BivarPoly.y()
        if ch.isdigit():
            num = self.nat()
            if self.peek() == "/":
                self.pos += 1
                if not self.peek().isdigit():
                    raise self.error("expected denominator")
                den_pos = self.pos
                den = self.nat()
                if den == 0:
                    raise self.error("zero denominator", den_pos)
                return BivarPoly.constant(Fraction(num, den))
            if self.peek() == ".":
                raise self.error("decimal coefficients are not supported")
            return BivarPoly.constant(num)
        if ch.isalpha():
            raise self.error(f"unknown variable {ch!r}")
        if not ch:
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected character {ch!r}")

    def nat(self) -> int:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        return int(self.text[start:self.pos])


def parse(text: str) -> BivarPoly:
    """Parse polynomial text such as ``"3/2 x y^2 - (y-x)^2"``."""
    return _Parser(text).parse()


def order(f: BivarPoly):
    return f.order()


def transpose(f: BivarPoly) -> BivarPoly:
    return f.transpose()


def shear(f: BivarPoly, term: ShearTerm) -> BivarPoly:
    return f.shear(term)
