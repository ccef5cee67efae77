"""Newton polygons of bivariate polynomials at the origin.

The polygon is the convex hull of the support with the first quadrant
attached at every point.  Its boundary is a vertical ray at ``p = alpha``,
a staircase of compact faces, and a horizontal ray at ``q = beta``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .bivar import BivarPoly
from .univar import UnivarPoly

Point = tuple[int, int]


@dataclass(frozen=True)
class Face:
    """A compact face, oriented left (top) to right (bottom).

    The direction vector is ``(p_nu, -q_nu)`` with coprime entries and the
    face contains ``lattice_length + 1`` lattice points.  ``a = p_nu/q_nu``
    is the leading exponent of the roots the face carries.
    """

    left: Point
    right: Point
    p_nu: int
    q_nu: int
    a: Fraction
    lattice_length: int
    A: int
    B: int
    delta_inv: Fraction

    @classmethod
    def between(cls, left: Point, right: Point) -> Face:
        dp = right[0] - left[0]
        dq = left[1] - right[1]
        if dp <= 0 or dq <= 0:
            raise ValueError(f"not a staircase face: {left} -> {right}")
        d = math.gcd(dp, dq)
        p_nu, q_nu = dp // d, dq // d
        a = Fraction(p_nu, q_nu)
        A, B = right
        return cls(
            left=left,
            right=right,
            p_nu=p_nu,
            q_nu=q_nu,
            a=a,
            lattice_length=d,
            A=A,
            B=B,
            delta_inv=(A + a * B) / (1 + a),
        )

    @property
    def level(self) -> int:
        """Right-hand side ``k`` of the supporting line ``q_nu p + p_nu q = k``."""
        return self.q_nu * self.A + self.p_nu * self.B

    def lattice_points(self) -> list[Point]:
        return [
            (self.left[0] + j * self.p_nu, self.left[1] - j * self.q_nu)
            for j in range(self.lattice_length + 1)
        ]


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[Point, ...]
    alpha: int
    beta: int
    faces: tuple[Face, ...] = field(default=())

    def contains(self, pt) -> bool:
        """Exact membership of a (rational) point in the polygon."""
        p, q = Fraction(pt[0]), Fraction(pt[1])
        if p < self.alpha or q < self.beta:
            return False
        return all(f.q_nu * p + f.p_nu * q >= f.level for f in self.faces)


class MainFaceKind(enum.Enum):
    VERTEX = "VERTEX"
    COMPACT_FACE = "COMPACT_FACE"
    VERTICAL_RAY = "VERTICAL_RAY"
    HORIZONTAL_RAY = "HORIZONTAL_RAY"


@dataclass(frozen=True)
class MainFace:
    """Where the diagonal first meets the polygon; ``t_star`` is the Newton
    distance's reciprocal."""

    kind: MainFaceKind
    t_star: Fraction
    face: Face | None = None
    vertex: Point | None = None


def _cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def polygon(f: BivarPoly) -> NewtonPolygon:
    if f.is_zero():
        raise ValueError("the zero polynomial has no Newton polygon")
    lowest: dict[int, int] = {}
    for p, q in f.coeffs:
        if p not in lowest or q < lowest[p]:
            lowest[p] = q
    # staircase candidates: points not dominated by anything to their left
    stair: list[Point] = []
    for p in sorted(lowest):
        q = lowest[p]
        if not stair or q < stair[-1][1]:
            stair.append((p, q))
    # lower convex hull (monotone chain) of the staircase points
    hull: list[Point] = []
    for pt in stair:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    faces = tuple(Face.between(hull[i], hull[i + 1]) for i in range(len(hull) - 1))
    return NewtonPolygon(
        vertices=tuple(hull),
        alpha=hull[0][0],
        beta=hull[-1][1],
        faces=faces,
    )


def newton_distance(P: NewtonPolygon) -> MainFace:
    """Locate the diagonal on the boundary as a max of half-plane bounds."""
    t = Fraction(max(P.alpha, P.beta))
    for f in P.faces:
        t = max(t, Fraction(f.level, f.p_nu + f.q_nu))
    for v in P.vertices:
        if v[0] == t and v[1] == t:
            return MainFace(MainFaceKind.VERTEX, t, vertex=v)
    first, last = P.vertices[0], P.vertices[-1]
    if t == P.alpha and t > first[1]:
        return MainFace(MainFaceKind.VERTICAL_RAY, t)
    if t == P.beta and t > last[0]:
        return MainFace(MainFaceKind.HORIZONTAL_RAY, t)
    for f in P.faces:
        if f.left[0] < t < f.right[0]:
            return MainFace(MainFaceKind.COMPACT_FACE, t, face=f)
    raise AssertionError(f"diagonal point {t} not located on polygon boundary")


def face_polynomial(f: BivarPoly, F: Face) -> UnivarPoly:
    """Coefficients of ``f`` along ``F``: the left endpoint gives ``T^d``.

    When ``q_nu == 1`` the roots are the leading coefficients ``b`` of the
    roots ``y ~ b x^a``; otherwise they are ``b**q_nu``.
    """
    pts = F.lattice_points()
    if f.coefficient(*pts[0]) == 0 or f.coefficient(*pts[-1]) == 0:
        raise ValueError("face endpoints are not in the support of f")
    d = F.lattice_length
    coeffs = [Fraction(0)] * (d + 1)
    for j, (p, q) in enumerate(pts):
        coeffs[d - j] = f.coefficient(p, q)
    return UnivarPoly(coeffs)


def delta_tradeoff(a, A, B, m, x) -> Fraction:
    """``(1 + a + x) / (A + a B + m x)``, exactly."""
    a, A, B, x = Fraction(a), Fraction(A), Fraction(B), Fraction(x)
    den = A + a * B + m * x
    if den == 0:
        raise ZeroDivisionError("A + a B + m x vanishes")
    return (1 + a + x) / den
