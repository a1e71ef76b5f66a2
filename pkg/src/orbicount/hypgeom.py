"""Hyperbolic plane primitives in the upper half-plane model.

Points are complex numbers with strictly positive imaginary part.
Orientation-preserving isometries are real 2x2 matrices of determinant one,
considered up to global sign.  Bi-infinite geodesics are unordered pairs of
distinct boundary points (``math.inf`` allowed).

Everything here is pure and immutable; all tolerances come from
:mod:`orbicount.tolerances`.
"""

from __future__ import annotations

import cmath
import math
from typing import NamedTuple

from .errors import NotHyperbolic
from .tolerances import TOL

INF = math.inf


def plane_point(x: float, y: float) -> complex:
    """Validated point of the upper half-plane."""
    if not y > 0:
        raise ValueError(f"point ({x}, {y}) is not in the upper half-plane")
    return complex(x, y)


def _check_point(p: complex) -> complex:
    if not p.imag > 0:
        raise ValueError(f"point {p} is not in the upper half-plane")
    return p


class Isometry:
    """A real 2x2 unit-determinant matrix up to sign."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: float, b: float, c: float, d: float):
        det = a * d - b * c
        if det <= 0:
            raise ValueError("matrix must have positive determinant")
        if abs(det - 1.0) > TOL.det_drift:
            s = math.sqrt(det)
            a, b, c, d = a / s, b / s, c / s, d / s
        self.a, self.b, self.c, self.d = a, b, c, d

    def __mul__(self, other: "Isometry") -> "Isometry":
        return Isometry(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inv(self) -> "Isometry":
        return Isometry(self.d, -self.b, -self.c, self.a)

    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def trace(self) -> float:
        return self.a + self.d

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __call__(self, z: complex) -> complex:
        """Moebius action on the upper half-plane (or its boundary)."""
        if z == INF:
            return self.a / self.c if self.c != 0.0 else INF
        num = self.a * z + self.b
        den = self.c * z + self.d
        if isinstance(z, complex) and z.imag != 0.0:
            return num / den
        # boundary point: keep it real, send the pole to infinity
        if den == 0.0:
            return INF
        return num / den

    def __eq__(self, other) -> bool:
        if not isinstance(other, Isometry):
            return NotImplemented
        return self.distance_to(other) <= 1e-9

    def __hash__(self):  # projective sign-normalized rounding
        a, b, c, d = self.entries()
        for v in (a, b, c, d):
            if abs(v) > 1e-9:
                if v < 0:
                    a, b, c, d = -a, -b, -c, -d
                break
        return hash(tuple(round(v, 7) for v in (a, b, c, d)))

    def distance_to(self, other: "Isometry") -> float:
        """Max-norm distance to another matrix, minimized over sign."""
        d1 = max(
            abs(self.a - other.a), abs(self.b - other.b),
            abs(self.c - other.c), abs(self.d - other.d),
        )
        d2 = max(
            abs(self.a + other.a), abs(self.b + other.b),
            abs(self.c + other.c), abs(self.d + other.d),
        )
        return min(d1, d2)

    def is_identity(self, tol: float = 1e-9) -> bool:
        return self.distance_to(IDENTITY) <= tol

    def __repr__(self):
        return f"Isometry([[{self.a!r}, {self.b!r}], [{self.c!r}, {self.d!r}]])"


IDENTITY = Isometry(1.0, 0.0, 0.0, 1.0)


def compose(g: Isometry, h: Isometry) -> Isometry:
    return g * h


class Classification(NamedTuple):
    kind: str          # "identity" | "parabolic" | "elliptic" | "hyperbolic"
    value: float       # rotation angle, translation length, or 0.0


def classify(g: Isometry) -> Classification:
    """Classify by |trace|: <2 elliptic, =2 parabolic/identity, >2 hyperbolic.

    The band ``| |tr|-2 | <= TOL.trace_band`` is decided toward Parabolic
    (Identity when the matrix itself is close to +-I); callers needing
    certainty about torsion use word-level data instead.
    """
    t = abs(g.trace())
    if abs(t - 2.0) <= TOL.trace_band:
        if g.is_identity():
            return Classification("identity", 0.0)
        return Classification("parabolic", 0.0)
    if t < 2.0:
        return Classification("elliptic", 2.0 * math.acos(t / 2.0))
    return Classification("hyperbolic", 2.0 * math.acosh(t / 2.0))


def translation_length(g: Isometry) -> float:
    """Length of the closed geodesic of a hyperbolic isometry: 2*acosh(|tr|/2)."""
    t = abs(g.trace())
    if t <= 2.0 + TOL.trace_band:
        raise NotHyperbolic(f"|trace| = {t} is not > 2")
    return 2.0 * math.acosh(t / 2.0)


def dist(p: complex, q: complex) -> float:
    """Hyperbolic distance; exact also at tiny separations.

    Uses d = 2*asinh(|p-q| / (2*sqrt(Im p * Im q))), equivalent to
    cosh d = 1 + |p-q|^2/(2 Im p Im q) but without cancellation near 0.
    """
    _check_point(p)
    _check_point(q)
    return 2.0 * math.asinh(abs(p - q) / (2.0 * math.sqrt(p.imag * q.imag)))


class BoundaryGeodesic(NamedTuple):
    """Unoriented bi-infinite geodesic, stored as a sorted endpoint pair.

    Finite endpoints are sorted ascending; infinity is stored last.
    """

    e1: float
    e2: float

    @classmethod
    def make(cls, u: float, v: float) -> "BoundaryGeodesic":
        if u == v:
            raise ValueError("geodesic endpoints must be distinct")
        if u == INF:
            u, v = v, u
        elif v != INF and v < u:
            u, v = v, u
        return cls(u, v)


def boundary_geodesic(u: float, v: float) -> BoundaryGeodesic:
    return BoundaryGeodesic.make(u, v)


def axis(g: Isometry) -> BoundaryGeodesic:
    """Fixed boundary points of a hyperbolic isometry."""
    if classify(g).kind != "hyperbolic":
        raise NotHyperbolic("axis requires a hyperbolic isometry")
    a, b, c, d = g.entries()
    if abs(c) < 1e-300:
        # fixes infinity and b/(d-a)
        return BoundaryGeodesic.make(b / (d - a), INF)
    disc = (a + d) ** 2 - 4.0
    r = math.sqrt(disc)
    return BoundaryGeodesic.make(((a - d) + r) / (2 * c), ((a - d) - r) / (2 * c))


def _circle_angle(x: float) -> float:
    """Monotone embedding of the boundary circle into (-pi/2, pi/2]."""
    return math.pi / 2.0 if x == INF else math.atan(x)


def _ccw(a: float, b: float, c: float) -> bool:
    """True if the cyclic order a -> b -> c is counterclockwise on the circle."""
    if a < b:
        return a < c < b
    return not (b <= c <= a)


def cross(g1: BoundaryGeodesic, g2: BoundaryGeodesic) -> bool:
    """Do the geodesics intersect transversally (endpoint pairs linked)?"""
    pts = {g1.e1, g1.e2, g2.e1, g2.e2}
    if len(pts) < 4:
        return False  # shared endpoint or identical geodesic
    a, b = _circle_angle(g1.e1), _circle_angle(g1.e2)
    c, d = _circle_angle(g2.e1), _circle_angle(g2.e2)
    return _ccw(a, b, c) != _ccw(a, b, d)


def geodesic_distance(g1: BoundaryGeodesic, g2: BoundaryGeodesic) -> float:
    """Distance between two complete geodesics (0 when they meet).

    For disjoint geodesics with endpoint cross-ratio
    R = ((a-c)(b-d)) / ((a-d)(b-c)) the distance is acosh((1+R)/(1-R)).
    """
    if cross(g1, g2):
        return 0.0
    pts = {g1.e1, g1.e2, g2.e1, g2.e2}
    if len(pts) < 4:
        return 0.0  # asymptotic or identical
    a, b = g1.e1, g1.e2
    c, d = g2.e1, g2.e2

    def diff(u, v):
        # formal difference with infinity cancelling in the cross-ratio
        return 1.0 if u == INF or v == INF else u - v

    num = diff(a, c) * diff(b, d)
    den = diff(a, d) * diff(b, c)
    R = num / den
    if R == 1.0:
        return INF
    # swapping endpoints within a pair sends R to 1/R and flips the sign
    # of (1+R)/(1-R), so the unordered invariant is the absolute value
    x = abs((1.0 + R) / (1.0 - R))
    if x < 1.0:
        return 0.0
    return math.acosh(x)


def point_to_geodesic(p: complex, g: BoundaryGeodesic) -> float:
    """Distance from a point to a complete geodesic."""
    _check_point(p)
    if g.e2 == INF:
        return math.asinh(abs(p.real - g.e1) / p.imag)
    c0 = (g.e1 + g.e2) / 2.0
    r0 = abs(g.e2 - g.e1) / 2.0
    return math.asinh(abs(abs(p - c0) ** 2 - r0 ** 2) / (2.0 * r0 * p.imag))


def foot_on_geodesic(p: complex, g: BoundaryGeodesic) -> complex:
    """Nearest point of a complete geodesic to p."""
    _check_point(p)
    if g.e2 == INF:
        # vertical line x = e1: foot at (e1, |p - e1|)
        return complex(g.e1, abs(p - g.e1))
    c0 = (g.e1 + g.e2) / 2.0
    r0 = abs(g.e2 - g.e1) / 2.0
    # invert to the vertical-axis picture via z -> (z - e1)/(z - e2)
    m = _mobius_two_points(g.e1, g.e2)
    q = m(p)
    foot_v = complex(0.0, abs(q))
    return m.inv()(foot_v)


def _mobius_two_points(u: float, v: float) -> Isometry:
    """An isometry sending u to 0 and v to infinity."""
    if v == INF:
        return Isometry(1.0, -u, 0.0, 1.0)
    if u == INF:
        return Isometry(0.0, -1.0, 1.0, -v)
    if u > v:
        return Isometry(1.0, -u, 1.0, -v)
    return Isometry(-1.0, u, 1.0, -v)


# --- constructors used by the group builder and the verification suite ---

def rotation_about(p: complex, theta: float) -> Isometry:
    """Rotation by theta (counterclockwise) about a point of the plane."""
    _check_point(p)
    r = math.sqrt(p.imag)
    t = Isometry(r, p.real / r, 0.0, 1.0 / r)
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return t * Isometry(c, s, -s, c) * t.inv()


def vertical_translation(d: float) -> Isometry:
    """Translation by d along the imaginary axis (toward infinity)."""
    e = math.exp(d / 2.0)
    return Isometry(e, 0.0, 0.0, 1.0 / e)


def point_at(p: complex, direction: float, d: float) -> complex:
    """Point at distance d from p along the ray with chart angle ``direction``.

    ``direction`` is the Euclidean angle of the initial tangent vector in the
    half-plane chart; pi/2 points straight up.
    """
    _check_point(p)
    up = complex(p.real, p.imag * math.exp(d))
    if direction == math.pi / 2.0:
        return up
    return rotation_about(p, direction - math.pi / 2.0)(up)


def elliptic_fixed_point(g: Isometry) -> complex:
    """Fixed point in the plane of an elliptic isometry."""
    if classify(g).kind != "elliptic":
        raise ValueError("fixed point in the plane requires an elliptic isometry")
    a, b, c, d = g.entries()
    disc = cmath.sqrt(complex((d - a) ** 2 + 4.0 * b * c))
    for z in ((-(d - a) + disc) / (2 * c), (-(d - a) - disc) / (2 * c)):
        if z.imag > 1e-15:
            return z
    raise ValueError("no fixed point found in the upper half-plane")


def signed_rotation_angle(g: Isometry) -> float:
    """Rotation angle in (-pi, pi], with sign, of an elliptic isometry."""
    p = elliptic_fixed_point(g)
    ang = -2.0 * cmath.phase(g.c * p + g.d)
    if ang <= -math.pi:
        ang += 2.0 * math.pi
    if ang > math.pi:
        ang -= 2.0 * math.pi
    return ang


def translation_along(g: BoundaryGeodesic, d: float) -> Isometry:
    """Translation by d along a geodesic, toward its second stored endpoint."""
    m = _mobius_two_points(g.e1, g.e2)
    return m.inv() * vertical_translation(d) * m
