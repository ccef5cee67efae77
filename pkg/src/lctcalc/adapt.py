"""Adapted coordinates and the critical integrability index.

The loop: build the Newton polygon, find where the diagonal meets it, and
look for a *thick* root on that main face, i.e. a root class of the face
polynomial whose multiplicity exceeds ``t_star``.  If one exists, shear it
away (``y -> y + b x^k``) and repeat; otherwise ``t_star`` is final and
``c0 = 2 / t_star`` over C (``1 / t_star`` over R).

A polynomial may carry an m-fold root ``y = psi(x)`` that is an infinite
power series.  Shearing one monomial at a time would then never finish, but
``t_star`` increases to exactly ``m``; :func:`compute_lct` detects that
situation with a gcd test and returns the limit.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .bivar import INFINITE, Axis, BivarPoly, ShearTerm, to_text
from .newton import (
    MainFace,
    MainFaceKind,
    NewtonPolygon,
    face_polynomial,
    newton_distance,
    polygon,
)
from .univar import UnivarPoly, squarefree_decompose

log = logging.getLogger(__name__)


class Field(enum.Enum):
    COMPLEX = "complex"
    REAL = "real"


class Normalization(enum.Enum):
    INDEX = "index"  # sup{c : |f|^-c locally integrable}
    LCT = "lct"  # algebraic log-canonical threshold


class LctError(Exception):
    """Base class for failures of the exact engine."""


class ZeroPolynomialError(LctError, ValueError):
    pass


class InternalAssertionError(LctError):
    """A proven property failed; indicates a bug rather than bad input."""


class IterationCapExceeded(InternalAssertionError):
    pass


class RationalityViolation(InternalAssertionError):
    pass


class AmbiguousThickRoot(InternalAssertionError):
    pass


class MonotonicityViolation(InternalAssertionError):
    pass


@dataclass(frozen=True)
class ThickRoot:
    face: object
    b: Fraction
    multiplicity: int
    axis: Axis
    exponent: int

    def shear_term(self) -> ShearTerm:
        return ShearTerm(self.axis, self.exponent, self.b)


@dataclass(frozen=True)
class IterationRecord:
    polynomial: str
    vertices: tuple
    main_face: MainFaceKind
    t_star: Fraction
    face_polynomial: UnivarPoly | None
    thick_root: ThickRoot | None
    transposed: bool

    @property
    def adapted(self) -> bool:
        return self.thick_root is None


@dataclass(frozen=True)
class LctResult:
    c0: object  # Fraction, or INFINITE when f(0, 0) != 0
    field: Field
    normalization: Normalization
    delta_inv_final: object
    coordinate_change: tuple[ShearTerm, ...] = ()
    trace: tuple[IterationRecord, ...] = ()
    order: object = None
    limit_multiplicity: int | None = None  # set when Q is an infinite series

    @property
    def axis(self) -> Axis | None:
        return self.coordinate_change[0].axis if self.coordinate_change else None


def thick_root(f: BivarPoly, P: NewtonPolygon, M: MainFace) -> ThickRoot | None:
    """Return the unique root class on the main face heavier than ``t_star``."""
    if M.kind is not MainFaceKind.COMPACT_FACE:
        return None
    F = M.face
    phi = face_polynomial(f, F)
    classes = squarefree_decompose(phi)
    heavy = [c for c in classes if c.multiplicity > M.t_star]
    if not heavy:
        return None
    if len(heavy) > 1:
        raise AmbiguousThickRoot(f"several thick root classes on face {F}")
    if heavy[0].factor.degree > 1:
        raise RationalityViolation(
            f"thick class of multiplicity {heavy[0].multiplicity} has "
            f"irrational roots: {heavy[0].factor}"
        )
    cls = heavy[0]
    c0, c1 = cls.factor.coeffs
    root = -c0 / c1
    if F.q_nu == 1:
        return ThickRoot(F, root, cls.multiplicity, Axis.Y, F.p_nu)
    if F.p_nu == 1:
        # roots of the transposed face polynomial are reciprocals
        return ThickRoot(F, 1 / root, cls.multiplicity, Axis.X, F.q_nu)
    raise InternalAssertionError(
        f"thick root on face with p_nu={F.p_nu}, q_nu={F.q_nu}"
    )


def adapt_step(f: BivarPoly, r: ThickRoot) -> BivarPoly:
    """Shear the thick root away; the new ``t_star`` must strictly grow."""
    before = newton_distance(polygon(f)).t_star
    g = f.shear(r.shear_term())
    after = newton_distance(polygon(g)).t_star
    if not after > before:
        raise MonotonicityViolation(f"t_star went from {before} to {after}")
    return g


# -- exact m-fold roots --------------------------------------------------------

_X, _Y = sympy.symbols("x y")


def _to_sympy(f: BivarPoly) -> sympy.Poly:
    return sympy.Poly.from_dict(
        {k: sympy.Rational(v.numerator, v.denominator) for k, v in f.coeffs.items()},
        _X,
        _Y,
        domain=sympy.QQ,
    )


def _from_sympy(p: sympy.Poly) -> BivarPoly:
    return BivarPoly(
        {k: Fraction(int(v.p), int(v.q)) for k, v in p.as_dict().items()}
    )


def multiple_part(f: BivarPoly, m: int) -> BivarPoly:
    """gcd of ``f`` and its first ``m-1`` y-derivatives: the roots of
    ``f(x, .)`` of multiplicity at least ``m``."""
    g = _to_sympy(f)
    acc = g
    deriv = g
    for _ in range(m - 1):
        deriv = deriv.diff(_Y)
        acc = sympy.gcd(acc, deriv)
        if acc.degree(_Y) <= 0:
            break
    return _from_sympy(acc)


def is_exact_root(f: BivarPoly, r: ThickRoot) -> bool:
    """Whether the ``r.multiplicity`` roots ``y ~ b x^k`` coincide exactly.

    Expects ``r.axis is Axis.Y``.
    """
    m = r.multiplicity
    if m == 1:
        return True
    h = multiple_part(f, m)
    if h.degree_y() < 1:
        return False
    for F in polygon(h).faces:
        if F.q_nu == 1 and F.p_nu == r.exponent:
            phi = face_polynomial(h, F)
            return phi(r.b) == 0
    return False


def _limit_face(P: NewtonPolygon, M: MainFace, m: int) -> bool:
    """After shearing off the leading term of an exact m-fold root, the root
    sits alone on the last face, from ``(A', m)`` down to the p-axis."""
    if M.kind is not MainFaceKind.COMPACT_FACE or not P.faces:
        return False
    last = P.faces[-1]
    return (
        M.face == last
        and last.right[1] == 0
        and last.left[1] == m
        and last.q_nu == 1
    )


# -- driver ------------------------------------------------------------------


def iteration_cap(f: BivarPoly) -> int:
    return 4 * (1 + max(f.degree(), 0)) ** 2


def _c0_from(t_star, fld: Field, norm: Normalization):
    if t_star is INFINITE:
        return INFINITE
    if fld is Field.COMPLEX:
        return Fraction(1) / t_star if norm is Normalization.LCT else 2 / t_star
    return 1 / t_star


def compute_lct(
    f: BivarPoly,
    field: Field = Field.COMPLEX,
    normalization: Normalization = Normalization.INDEX,
) -> LctResult:
    """Critical integrability index of ``f`` at the origin, exactly."""
    if f.is_zero():
        raise ZeroPolynomialError("the zero polynomial has no integrability index")
    if f.coefficient(0, 0) != 0:
        return LctResult(
            INFINITE, field, normalization, INFINITE, order=0
        )
    g = f
    transposed = False
    terms: list[ShearTerm] = []
    trace: list[IterationRecord] = []
    last_t = None
    cap = iteration_cap(f)
    for _ in range(cap):
        P = polygon(g)
        M = newton_distance(P)
        if last_t is not None and not M.t_star > last_t:
            raise MonotonicityViolation(f"t_star went from {last_t} to {M.t_star}")
        last_t = M.t_star
        r = thick_root(g, P, M)
        phi = face_polynomial(g, M.face) if M.face is not None else None
        trace.append(
            IterationRecord(to_text(g), P.vertices, M.kind, M.t_star, phi, r, transposed)
        )
        if r is None:
            return _finish(f, field, normalization, M.t_star, terms, trace, transposed)
        if r.axis is Axis.X:
            if terms:
                raise InternalAssertionError("coordinate change switched axis")
            g = g.transpose()
            transposed = True
            r = ThickRoot(r.face, r.b, r.multiplicity, Axis.Y, r.exponent)
        exact = is_exact_root(g, r)
        g = g.shear(r.shear_term())
        terms.append(r.shear_term())
        if exact:
            P2 = polygon(g)
            M2 = newton_distance(P2)
            if _limit_face(P2, M2, r.multiplicity):
                log.debug("exact %d-fold root: t_star -> %d", r.multiplicity, r.multiplicity)
                t_final = Fraction(r.multiplicity)
                return _finish(
                    f, field, normalization, t_final, terms, trace, transposed,
                    limit=r.multiplicity,
                )
    raise IterationCapExceeded(f"no adapted coordinates after {cap} iterations")


def _finish(f, fld, norm, t_star, terms, trace, transposed, limit=None) -> LctResult:
    axis = Axis.X if transposed else Axis.Y
    change = tuple(ShearTerm(axis, t.exponent, t.coefficient) for t in terms)
    return LctResult(
        c0=_c0_from(t_star, fld, norm),
        field=fld,
        normalization=norm,
        delta_inv_final=t_star,
        coordinate_change=change,
        trace=tuple(trace),
        order=f.order(),
        limit_multiplicity=limit,
    )


def lct(text_or_poly, field: Field = Field.COMPLEX, normalization=Normalization.INDEX):
    """Convenience wrapper accepting polynomial text."""
    from .bivar import parse

    f = parse(text_or_poly) if isinstance(text_or_poly, str) else text_or_poly
    return compute_lct(f, field, normalization).c0
