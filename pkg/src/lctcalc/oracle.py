"""Closed-form thresholds for families where the answer is forced."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .adapt import Field
from .bivar import BivarPoly


class Family(enum.Enum):
    MONOMIAL = "monomial"  # x^alpha y^beta
    QUASI_HOMOG = "quasi_homog"  # y^n - x^m
    DISTINCT_LINES = "distinct_lines"  # prod (y - s_i x)
    SMOOTH_SHEAR = "smooth_shear"  # (y - Q(x))^N


@dataclass(frozen=True)
class FamilyInstance:
    kind: Family
    params: tuple
    field: Field = Field.COMPLEX

    @classmethod
    def monomial(cls, alpha: int, beta: int, field=Field.COMPLEX):
        return cls(Family.MONOMIAL, (alpha, beta), field)

    @classmethod
    def quasi_homog(cls, n: int, m: int, field=Field.COMPLEX):
        return cls(Family.QUASI_HOMOG, (n, m), field)

    @classmethod
    def distinct_lines(cls, slopes, field=Field.COMPLEX):
        return cls(Family.DISTINCT_LINES, tuple(Fraction(s) for s in slopes), field)

    @classmethod
    def smooth_shear(cls, q_coeffs, power: int, field=Field.COMPLEX):
        """``q_coeffs[k]`` multiplies ``x**(k+1)``."""
        return cls(Family.SMOOTH_SHEAR, (tuple(Fraction(c) for c in q_coeffs), power), field)

    def validate(self):
        p = self.params
        if self.kind is Family.MONOMIAL:
            if len(p) != 2 or min(p) < 1:
                raise ValueError("monomial exponents must be positive integers")
        elif self.kind is Family.QUASI_HOMOG:
            if len(p) != 2 or min(p) < 2:
                raise ValueError("y^n - x^m needs n, m >= 2; smooth germs use SMOOTH_SHEAR")
        elif self.kind is Family.DISTINCT_LINES:
            if len(p) < 1 or len(set(p)) != len(p):
                raise ValueError("slopes must be distinct and nonempty")
        elif self.kind is Family.SMOOTH_SHEAR:
            if p[1] < 1:
                raise ValueError("power must be positive")

    def polynomial(self) -> BivarPoly:
        self.validate()
        x, y = BivarPoly.x(), BivarPoly.y()
        if self.kind is Family.MONOMIAL:
            return BivarPoly.monomial(*self.params)
        if self.kind is Family.QUASI_HOMOG:
            n, m = self.params
            return y**n - x**m
        if self.kind is Family.DISTINCT_LINES:
            out = BivarPoly.constant(1)
            for s in self.params:
                out = out * (y - x.scale(s))
            return out
        coeffs, power = self.params
        q = BivarPoly({(k + 1, 0): c for k, c in enumerate(coeffs)})
        return (y - q) ** power

    def text(self) -> str:
        return str(self.polynomial())


def oracle_lct(inst: FamilyInstance) -> Fraction:
    """Integrability index (``|f|^-c`` convention) from the closed form."""
    inst.validate()
    p = inst.params
    if inst.kind is Family.MONOMIAL:
        value = Fraction(2, max(p))
    elif inst.kind is Family.QUASI_HOMOG:
        n, m = p
        value = 2 * (Fraction(1, n) + Fraction(1, m))
    elif inst.kind is Family.DISTINCT_LINES:
        k = len(p)
        value = Fraction(4, k) if k >= 2 else Fraction(2)
    else:
        value = Fraction(2, p[1])
    return value if inst.field is Field.COMPLEX else value / 2
