"""Exact-formula primitives for the upper half-plane model of the hyperbolic plane.

Points, ideal boundary points, geodesics, orientation-preserving isometries
(as determinant-one 2x2 real matrices acting by fractional-linear maps),
distances, cross-ratios, ideal triangles with their inscribed-circle tangency
points, axis translations, the distance between disjoint geodesics, and the
two-sided wedge distance function.

Conventions used throughout the package:

* The model is the upper half-plane {x + iy : y > 0} with boundary R u {oo}.
* Infinity is the single ideal point ``INFINITY``; all formulas implement the
  oo cases explicitly instead of going through projective coordinates.
* ``MobiusMap`` stores a determinant-one representative; maps are equal up to
  a global sign (PSL(2, R)).
* A ``Geodesic`` remembers the order of its two ideal endpoints.  Operations
  that need an orientation (``translate_along``, arclength parameterization)
  use that stored order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "INFINITY",
    "IdealPoint",
    "UhpPoint",
    "Geodesic",
    "MobiusMap",
    "IdealTriangle",
    "dist",
    "cross_ratio",
    "distinguished_points",
    "translate_along",
    "geodesic_gap",
    "wedge_distance",
    "point_at_distance",
    "signed_distance_along",
]

_DET_TOL = 1e-12


@dataclass(frozen=True)
class IdealPoint:
    """A point of the ideal boundary R u {oo}; ``value == math.inf`` tags oo."""

    value: float

    @property
    def is_infinity(self):
        return math.isinf(self.value)

    def __repr__(self):
        return "IdealPoint(oo)" if self.is_infinity else f"IdealPoint({self.value!r})"


INFINITY = IdealPoint(math.inf)


def ideal(value):
    """Coerce a float or IdealPoint to an IdealPoint."""
    if isinstance(value, IdealPoint):
        return value
    return IdealPoint(float(value))


@dataclass(frozen=True)
class UhpPoint:
    """A point x + iy of the open upper half-plane (y > 0)."""

    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError(f"upper half-plane point needs y > 0, got y = {self.y}")

    @property
    def z(self):
        return complex(self.x, self.y)

    @staticmethod
    def from_complex(z):
        return UhpPoint(z.real, z.imag)


@dataclass(frozen=True)
class Geodesic:
    """The complete geodesic with the given pair of distinct ideal endpoints.

    The pair is stored in order; the geodesic as a set does not depend on it,
    but orientation-sensitive operations read the order as "from a to b".
    """

    a: IdealPoint
    b: IdealPoint

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("geodesic endpoints must be distinct")

    @property
    def endpoints(self):
        return (self.a, self.b)

    def has_endpoint(self, p):
        return self.a == p or self.b == p

    def other_endpoint(self, p):
        if self.a == p:
            return self.b
        if self.b == p:
            return self.a
        raise ValueError(f"{p} is not an endpoint of this geodesic")


@dataclass(frozen=True)
class MobiusMap:
    """An orientation-preserving isometry z -> (az + b)/(cz + d), ad - bc = 1.

    The constructor rescales to determinant one and rejects non-positive
    determinants.  Two maps represent the same isometry iff their matrices
    agree up to a global sign.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if det <= 0:
            raise ValueError(f"Mobius map needs positive determinant, got {det}")
        if abs(det - 1.0) > _DET_TOL:
            s = math.sqrt(det)
            object.__setattr__(self, "a", self.a / s)
            object.__setattr__(self, "b", self.b / s)
            object.__setattr__(self, "c", self.c / s)
            object.__setattr__(self, "d", self.d / s)

    @staticmethod
    def identity():
        return MobiusMap(1.0, 0.0, 0.0, 1.0)

    def compose(self, other):
        """The map ``self after other``."""
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self):
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def same_as(self, other, tol=1e-10):
        """Equality in PSL(2, R): matrices agree up to sign within tol."""
        plus = max(
            abs(self.a - other.a), abs(self.b - other.b),
            abs(self.c - other.c), abs(self.d - other.d),
        )
        minus = max(
            abs(self.a + other.a), abs(self.b + other.b),
            abs(self.c + other.c), abs(self.d + other.d),
        )
        return min(plus, minus) <= tol

    @property
    def trace(self):
        return self.a + self.d

    def apply_point(self, p):
        z = p.z
        w = (self.a * z + self.b) / (self.c * z + self.d)
        return UhpPoint(w.real, w.imag)

    def apply_ideal(self, p):
        if p.is_infinity:
            if self.c == 0.0:
                return INFINITY
            return IdealPoint(self.a / self.c)
        denom = self.c * p.value + self.d
        if denom == 0.0:
            return INFINITY
        return IdealPoint((self.a * p.value + self.b) / denom)

    def apply_geodesic(self, g):
        return Geodesic(self.apply_ideal(g.a), self.apply_ideal(g.b))

    def __call__(self, obj):
        """Apply to a UhpPoint, IdealPoint, or Geodesic (same kind out)."""
        if isinstance(obj, UhpPoint):
            return self.apply_point(obj)
        if isinstance(obj, IdealPoint):
            return self.apply_ideal(obj)
        if isinstance(obj, Geodesic):
            return self.apply_geodesic(obj)
        raise TypeError(f"cannot apply MobiusMap to {type(obj).__name__}")


@dataclass(frozen=True)
class IdealTriangle:
    """An ideal triangle given by an ordered triple of distinct ideal vertices."""

    v1: IdealPoint
    v2: IdealPoint
    v3: IdealPoint

    def __post_init__(self):
        if self.v1 == self.v2 or self.v2 == self.v3 or self.v1 == self.v3:
            raise ValueError("ideal triangle vertices must be pairwise distinct")

    @property
    def vertices(self):
        return (self.v1, self.v2, self.v3)

    def sides(self):
        """The three side geodesics (v1 v2), (v2 v3), (v3 v1)."""
        return (
            Geodesic(self.v1, self.v2),
            Geodesic(self.v2, self.v3),
            Geodesic(self.v3, self.v1),
        )


def dist(p, q):
    """Hyperbolic distance, cosh d = 1 + ((dx)^2 + (dy)^2) / (2 y1 y2)."""
    dx = p.x - q.x
    dy = p.y - q.y
    arg = 1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y)
    return math.acosh(max(arg, 1.0))


def _sub(p, q):
    """p - q for ideal points, with None marking an oo factor."""
    if p.is_infinity or q.is_infinity:
        return None
    return p.value - q.value


def cross_ratio(p1, p2, p3, p4):
    """((p1-p3)(p2-p4)) / ((p1-p4)(p2-p3)) with the usual oo conventions.

    Invariant under the MobiusMap action.  Raises ValueError when any two of
    the four points coincide.
    """
    pts = (p1, p2, p3, p4)
    for i in range(4):
        for j in range(i + 1, 4):
            if pts[i] == pts[j]:
                raise ValueError("cross-ratio needs four pairwise-distinct points")
    num = 1.0
    den = 1.0
    # Factors containing oo cancel pairwise: one lives upstairs, one downstairs.
    for fac in (_sub(p1, p3), _sub(p2, p4)):
        if fac is not None:
            num *= fac
    for fac in (_sub(p1, p4), _sub(p2, p3)):
        if fac is not None:
            den *= fac
    n_inf_num = (p1.is_infinity or p3.is_infinity) + (p2.is_infinity or p4.is_infinity)
    n_inf_den = (p1.is_infinity or p4.is_infinity) + (p2.is_infinity or p3.is_infinity)
    if n_inf_num != n_inf_den:
        raise ValueError("unbalanced infinities in cross-ratio")  # pragma: no cover
    return num / den


def map_to_zero_infinity(p, q):
    """The Mobius map sending p -> 0 and q -> oo (and UHP to itself)."""
    if p == q:
        raise ValueError("need distinct ideal points")
    if q.is_infinity:
        return MobiusMap(1.0, -p.value, 0.0, 1.0)
    if p.is_infinity:
        return MobiusMap(0.0, -1.0, 1.0, -q.value)
    if p.value > q.value:
        return MobiusMap(1.0, -p.value, 1.0, -q.value)
    return MobiusMap(-1.0, p.value, 1.0, -q.value)


def point_at_distance(g, origin, s, toward):
    """The point of g at signed arclength s from origin, positive toward ``toward``.

    ``origin`` must lie on g (it is projected onto the normalized axis, so a
    point within roundoff of g is fine); ``toward`` must be an endpoint of g.
    """
    n = map_to_zero_infinity(g.other_endpoint(toward), toward)
    h = n.apply_point(origin).y
    return n.inverse().apply_point(UhpPoint(0.0, h * math.exp(s)))


def signed_distance_along(g, origin, point, toward):
    """Signed arclength from origin to point along g, positive toward ``toward``."""
    n = map_to_zero_infinity(g.other_endpoint(toward), toward)
    h0 = n.apply_point(origin).y
    h1 = n.apply_point(point).y
    return math.log(h1 / h0)


def distinguished_points(t):
    """Inscribed-circle tangency points of an ideal triangle, one per side.

    Returns three UhpPoints in the order of ``t.sides()``: the tangency on
    (v1 v2), on (v2 v3), on (v3 v1).  Each is the orthogonal projection of the
    triangle's center of symmetry onto the side.
    """
    out = []
    verts = t.vertices
    for k in range(3):
        p, q, r = verts[k], verts[(k + 1) % 3], verts[(k + 2) % 3]
        n = map_to_zero_infinity(p, q)
        w = n.apply_ideal(r)
        # Normalized picture: side is (0, oo), third vertex at w != 0, oo.
        # The tangency point on (0, oo) sits at height |w|.
        out.append(n.inverse().apply_point(UhpPoint(0.0, abs(w.value))))
    return tuple(out)


def translate_along(g, s):
    """Hyperbolic translation with axis g and signed displacement s.

    Positive s moves points of the axis toward the second stored endpoint
    ``g.b``.  s = 0 gives the identity.
    """
    n = map_to_zero_infinity(g.a, g.b)
    h = math.exp(s / 2.0)
    d = MobiusMap(h, 0.0, 0.0, 1.0 / h)
    return n.inverse().compose(d.compose(n))


def geodesic_gap(g1, g2):
    """Length of the common perpendicular between disjoint geodesics.

    Normalizing g1 to (0, oo), g2 lands at endpoints 0 < p < q on one side and
    the gap is arccosh((q + p)/(q - p)).  Raises ValueError when the geodesics
    cross, coincide, or share an endpoint (asymptotic pair).
    """
    for e1 in g1.endpoints:
        for e2 in g2.endpoints:
            if e1 == e2:
                raise ValueError("geodesics share an ideal endpoint; gap undefined")
    n = map_to_zero_infinity(g1.a, g1.b)
    u = n.apply_ideal(g2.a)
    v = n.apply_ideal(g2.b)
    if u.is_infinity or v.is_infinity or u.value == 0.0 or v.value == 0.0:
        raise ValueError("geodesics are asymptotic within roundoff")
    if (u.value > 0) != (v.value > 0):
        raise ValueError("geodesics cross; no common perpendicular")
    p, q = sorted((abs(u.value), abs(v.value)))
    if p == q:
        raise ValueError("degenerate image geodesic")  # pragma: no cover
    return math.acosh((q + p) / (q - p))


def wedge_distance(a, b):
    """Distance across the standard wedge between boundary points at arclengths (a, b).

    The standard wedge has sides x = 0 and x = 1 with common ideal point oo,
    both sides parameterized by arclength toward oo with the inscribed-circle
    tangency points (0, 1) and (1, 1) at parameter 0.  The two parameterized
    points are (0, e^a) and (1, e^b), and

        cosh d = (1 + e^{2a} + e^{2b}) / (2 e^{a+b})
               = (e^{-a-b} + e^{a-b} + e^{b-a}) / 2.

    Symmetric in (a, b) and strictly convex on R x R.
    """
    exps = (-a - b, a - b, b - a)
    mx = max(exps)
    if mx > 350.0:
        # cosh d would overflow; acosh(M) = log(2M) up to O(M^-2).
        return mx + math.log(sum(math.exp(e - mx) for e in exps))
    m = 0.5 * (math.exp(-a - b) + math.exp(a - b) + math.exp(b - a))
    return math.acosh(max(m, 1.0))


def wedge_distance_derivatives(a, b):
    """(value, gradient, Hessian) of ``wedge_distance`` at (a, b).

    With M = cosh d = (e^{-a-b} + e^{a-b} + e^{b-a}) / 2 and s = sqrt(M^2 - 1):
    M_a = (e^{a-b} - e^{b-a} - e^{-a-b}) / 2, M_aa = M, M_ab = e^{-a-b} - M.
    The chain rule through acosh gives the rest.  M > 1 always (the wedge
    sides are disjoint), so s > 0 and everything is smooth.
    """
    emm = math.exp(-a - b)
    epm = math.exp(a - b)
    emp = math.exp(b - a)
    m = 0.5 * (emm + epm + emp)
    ma = 0.5 * (epm - emp - emm)
    mb = 0.5 * (emp - epm - emm)
    mab = emm - m
    s2 = m * m - 1.0
    s = math.sqrt(s2)
    value = math.acosh(m)
    ga = ma / s
    gb = mb / s
    s3 = s2 * s
    haa = m / s - ma * ma * m / s3
    hbb = m / s - mb * mb * m / s3
    hab = mab / s - ma * mb * m / s3
    return value, (ga, gb), ((haa, hab), (hab, hbb))
