"""Strips with finite wedge cuts.

A strip is the region between two disjoint geodesics, sliced into ``n``
wedges by ``n - 1`` interior leaves; consecutive leaves share one ideal point
(the wedge apex), which lies on the Left or Right side of the oriented core.
This module develops a strip in the plane from its combinatorics and shear
vector, measures shears back, transports points along the per-wedge
horocyclic foliations, evaluates the convex piecewise-geodesic length
functional, and computes geodesic and core lengths by minimizing it.

Conventions
-----------
* Wedges are numbered 1..n, leaves 0..n; wedge i sits between leaves i-1 and
  i; interior leaf j (1 <= j <= n-1) carries the shear ``shears[j-1]``.
* Every leaf is oriented positively toward the Left side of the core.  A
  developed leaf is stored as a ``Geodesic`` whose second endpoint is the
  Left-side one, so "positive arclength" is always "toward ``leaf.b``".
* ``measure_shear`` at leaf j is the signed arclength from wedge j's marked
  point to wedge (j+1)'s marked point in that orientation; ``develop``
  realizes exactly these values.
* Curve coordinates ``y`` are arclength positions of wedge-chord endpoints
  relative to the wedge's marked points, in the leaf orientation above.
* ``horocyclic_project`` speaks the opposite sign (positions measured toward
  the Right side); see its docstring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hyperbolic import (
    INFINITY,
    Geodesic,
    MobiusMap,
    UhpPoint,
    dist,
    ideal,
    point_at_distance,
    signed_distance_along,
    wedge_distance,
    wedge_distance_derivatives,
)

__all__ = [
    "WedgeCombinatorics",
    "StripShape",
    "DevelopedStrip",
    "PwCurveCoords",
    "DegenerateStripError",
    "ConvergenceError",
    "develop",
    "measure_shear",
    "shear_between",
    "horocyclic_project",
    "pw_length",
    "geodesic_length",
    "core_length",
    "strip_to_json",
    "strip_from_json",
    "curve_coords_to_json",
    "curve_coords_from_json",
]

GRAD_TOL = 1e-10
MAX_ITERATIONS = 10_000


class DegenerateStripError(ValueError):
    """The combinatorics develop to asymptotic boundary leaves (no core)."""


class ConvergenceError(RuntimeError):
    """The minimizer hit its iteration cap; carries the best value found."""

    def __init__(self, best_value, best_positions):
        super().__init__(
            f"minimizer did not reach gradient tolerance; best value {best_value}"
        )
        self.best_value = best_value
        self.best_positions = best_positions


@dataclass(frozen=True)
class WedgeCombinatorics:
    """Wedge count and, per wedge, the side of the core holding its apex."""

    apex_sides: tuple

    def __post_init__(self):
        sides = tuple(self.apex_sides)
        object.__setattr__(self, "apex_sides", sides)
        if len(sides) < 2:
            raise ValueError("a strip needs at least two wedges")
        if any(s not in ("L", "R") for s in sides):
            raise ValueError("apex sides must be 'L' or 'R'")

    @property
    def n(self):
        return len(self.apex_sides)

    def is_pure_fan(self):
        return len(set(self.apex_sides)) == 1


@dataclass(frozen=True)
class StripShape:
    """Combinatorics plus one shear per interior leaf (n - 1 values)."""

    combinatorics: WedgeCombinatorics
    shears: tuple

    def __post_init__(self):
        object.__setattr__(self, "shears", tuple(float(s) for s in self.shears))
        if len(self.shears) != self.combinatorics.n - 1:
            raise ValueError(
                f"expected {self.combinatorics.n - 1} shears, got {len(self.shears)}"
            )

    @property
    def n(self):
        return self.combinatorics.n


@dataclass(frozen=True)
class PwCurveCoords:
    """Wedge-chord endpoint positions: one (y_minus, y_plus) pair per wedge."""

    y: tuple

    def __post_init__(self):
        pairs = tuple((float(a), float(b)) for a, b in self.y)
        object.__setattr__(self, "y", pairs)
        if not pairs:
            raise ValueError("curve coordinates need at least one wedge pair")

    @property
    def n(self):
        return len(self.y)


@dataclass(frozen=True)
class DevelopedStrip:
    """A strip realized in the plane.

    ``leaves[j]`` is leaf j oriented with its Left-side endpoint second;
    ``dp_left[i]`` / ``dp_right[i]`` are wedge (i+1)'s marked points on its
    left and right leaves; ``frames[i]`` maps the standard wedge (sides x=0,
    x=1, apex oo, marked points (0,1), (1,1)) onto wedge i+1.  ``parities[i]``
    records which standard side faces left (0: the x=0 side, 1: the x=1 side).
    """

    shape: StripShape
    leaves: tuple
    dp_left: tuple
    dp_right: tuple
    frames: tuple
    parities: tuple

    @property
    def n(self):
        return self.shape.n

    def marked_points(self, j):
        """Marked points on leaf j: interior leaves carry two, boundaries one."""
        if j == 0:
            return (self.dp_left[0],)
        if j == self.n:
            return (self.dp_right[-1],)
        return (self.dp_right[j - 1], self.dp_left[j])

    def left_endpoint(self, j):
        return self.leaves[j].b

    def position_on_leaf(self, j, point, origin):
        """Signed arclength from origin to point on leaf j (positive = Left)."""
        return signed_distance_along(self.leaves[j], origin, point, self.leaves[j].b)

    def point_on_leaf(self, j, origin, s):
        return point_at_distance(self.leaves[j], origin, s, self.leaves[j].b)


_STD_LEFT = Geodesic(ideal(0.0), INFINITY)
_STD_RIGHT = Geodesic(ideal(1.0), INFINITY)
_STD_DP = {0.0: UhpPoint(0.0, 1.0), 1.0: UhpPoint(1.0, 1.0)}


def _ideal_close(p, q, tol=1e-9):
    if p.is_infinity or q.is_infinity:
        return p.is_infinity and q.is_infinity
    scale = max(1.0, abs(p.value), abs(q.value))
    return abs(p.value - q.value) <= tol * scale


def develop(shape):
    """Realize a strip in the plane from combinatorics and shears.

    Wedge 1 sits in standard position.  Each later wedge is glued across the
    shared leaf so that ``measure_shear`` returns the input shear at every
    interior leaf, with its apex on the declared side.  Pure fans (all apexes
    on one side) have asymptotic boundary leaves and raise
    ``DegenerateStripError``, as does any development whose outer leaves fail
    to have four distinct ideal endpoints.
    """
    sides = shape.combinatorics.apex_sides
    n = shape.n
    if shape.combinatorics.is_pure_fan():
        raise DegenerateStripError("pure fan: boundary leaves are asymptotic")

    frames = [MobiusMap.identity()]
    parities = [0]
    for i in range(n - 1):
        # Transition from wedge i+1 to wedge i+2, written in wedge (i+1)'s
        # standard coordinates.  k is the developed height of the next wedge's
        # marked point on the shared leaf: positive shear displaces it toward
        # the Left side, which is toward the apex oo exactly when the current
        # apex side is 'L'.
        eps = 1.0 if sides[i] == "L" else -1.0
        k = math.exp(eps * shape.shears[i])
        flip = sides[i + 1] != sides[i]
        p = parities[-1]
        if not flip and p == 0:
            t = MobiusMap(k, 1.0, 0.0, 1.0)
            p_next = 0
        elif not flip and p == 1:
            t = MobiusMap(k, -k, 0.0, 1.0)
            p_next = 1
        elif flip and p == 0:
            t = MobiusMap(1.0, -1.0 - k, 1.0, -1.0)
            p_next = 1
        else:
            t = MobiusMap(0.0, -k, 1.0, 0.0)
            p_next = 0
        frames.append(frames[-1].compose(t))
        parities.append(p_next)

    leaves = []
    dp_left = []
    dp_right = []
    for i in range(n):
        f = frames[i]
        p = parities[i]
        left_line, right_line = (_STD_LEFT, _STD_RIGHT) if p == 0 else (_STD_RIGHT, _STD_LEFT)
        apex = f.apply_ideal(INFINITY)
        if i == 0:
            foot = f.apply_ideal(left_line.a)
            leaves.append(_oriented_leaf(foot, apex, sides[i]))
        foot = f.apply_ideal(right_line.a)
        leaves.append(_oriented_leaf(foot, apex, sides[i]))
        dp_left.append(f.apply_point(_STD_DP[left_line.a.value]))
        dp_right.append(f.apply_point(_STD_DP[right_line.a.value]))

    g_minus, g_plus = leaves[0], leaves[n]
    for e1 in g_minus.endpoints:
        for e2 in g_plus.endpoints:
            if _ideal_close(e1, e2):
                raise DegenerateStripError(
                    "boundary leaves share an ideal endpoint within tolerance"
                )

    return DevelopedStrip(
        shape=shape,
        leaves=tuple(leaves),
        dp_left=tuple(dp_left),
        dp_right=tuple(dp_right),
        frames=tuple(frames),
        parities=tuple(parities),
    )


def _oriented_leaf(foot, apex, apex_side):
    """Order the leaf endpoints so the Left-side one comes second."""
    if apex_side == "L":
        return Geodesic(foot, apex)
    return Geodesic(apex, foot)


def measure_shear(d, j):
    """Signed arclength from wedge j's marked point to wedge (j+1)'s on leaf j."""
    if not 1 <= j <= d.n - 1:
        raise IndexError(f"interior leaf index must be in 1..{d.n - 1}, got {j}")
    return d.position_on_leaf(j, d.dp_left[j], origin=d.dp_right[j - 1])


def shear_between(d, i1, i2):
    """Sum of the interior-leaf shears strictly between wedges i1 < i2."""
    if not 1 <= i1 < i2 <= d.n:
        raise IndexError(f"need wedge indices 1 <= i1 < i2 <= {d.n}")
    return sum(measure_shear(d, j) for j in range(i1, i2))


def horocyclic_project(d, from_leaf, position, to_leaf):
    """Transport a point of leaf ``from_leaf`` to leaf ``to_leaf`` along the
    per-wedge horocyclic foliations (horocycles centered at each wedge apex).

    Positions are signed arclengths measured positively toward the *Right*
    side of the core, with origins given by the marked points of the wedges
    being crossed: the input position is relative to the first crossed
    wedge's marked point on ``from_leaf``, the output is relative to the last
    crossed wedge's marked point on ``to_leaf``.  Crossing a single wedge
    therefore fixes positions (its two marked points lie on one horocycle),
    and projecting position 0 across wedges i1..i2 displaces it by
    ``shear_between(d, i1, i2)``.
    """
    if not 0 <= from_leaf < to_leaf <= d.n:
        raise IndexError("need leaf indices 0 <= from_leaf < to_leaf <= n")
    point = d.point_on_leaf(from_leaf, d.dp_left[from_leaf], -position)
    for w in range(from_leaf, to_leaf):
        std = d.frames[w].inverse().apply_point(point)
        target_x = 1.0 if std.x < 0.5 else 0.0
        point = d.frames[w].apply_point(UhpPoint(target_x, std.y))
    return -d.position_on_leaf(to_leaf, point, origin=d.dp_right[to_leaf - 1])


def _check_shear_vector(shape, x):
    x = tuple(float(v) for v in x)
    if len(x) != shape.n - 1:
        raise ValueError(f"expected {shape.n - 1} shears, got {len(x)}")
    return x


def _chord_args(shape, x, y):
    """Per-wedge chord-endpoint offsets (a_i, b_i) in leaf coordinates.

    Deforming the base strip to shears ``x`` shifts each reconnected chord
    endpoint by half the adjacent shear increment: the right endpoint by
    +delta/2 in the leaf orientation, the left endpoint by -delta/2 (the two
    sides of a leaf translate oppositely), with no shift at the boundary
    leaves.  The leaf-gap lengths are then independent of ``x``.
    """
    n = shape.n
    delta = [xv - x0 for xv, x0 in zip(x, shape.shears)]
    out = []
    for i in range(n):
        dl = delta[i - 1] if i >= 1 else 0.0
        dr = delta[i] if i <= n - 2 else 0.0
        out.append((y[i][0] - 0.5 * dl, y[i][1] + 0.5 * dr))
    return out


def _tau(shape, i):
    """Converts leaf-frame arclengths to toward-apex arclengths for wedge i+1."""
    return 1.0 if shape.combinatorics.apex_sides[i] == "L" else -1.0


def pw_length(base, x, y):
    """Length of a piecewise-geodesic curve in the strip sheared to ``x``.

    ``y`` encodes the curve in the base strip; the curve is carried to the
    deformed strip by the reconnection rule (see ``_chord_args``).  The value
    is the sum of the wedge-chord lengths plus the leaf-gap lengths
    ``|y_i^+ - y_{i+1}^- - x0_j|``, the latter independent of ``x``.
    """
    x = _check_shear_vector(base, x)
    if isinstance(y, PwCurveCoords):
        pairs = y.y
    else:
        pairs = tuple((float(a), float(b)) for a, b in y)
    if len(pairs) != base.n:
        raise ValueError(f"expected {base.n} coordinate pairs, got {len(pairs)}")
    total = 0.0
    for i, (a, b) in enumerate(_chord_args(base, x, pairs)):
        t = _tau(base, i)
        total += wedge_distance(t * a, t * b)
    for j in range(base.n - 1):
        total += abs(pairs[j][1] - pairs[j + 1][0] - base.shears[j])
    return total


def _minimize_chord_sum(base, x, fixed_first, fixed_last, initial_interior=None):
    """Minimize the total wedge-chord length over leaf crossing positions.

    Positions p_0..p_n locate one crossing point per leaf (p_0 relative to
    wedge 1's left marked point, p_j relative to wedge j's right marked point
    for j >= 1).  The minimizing piecewise-geodesic curve crosses each
    interior leaf in a single point, so the gap terms vanish and the
    objective reduces to the smooth, strictly convex sum of chord lengths.

    Damped Newton with backtracking.  Stops at gradient norm ``GRAD_TOL`` or
    when the Newton decrement falls below the double-precision floor of the
    objective (the decrement estimates f - f*, so at that point no
    representable step can decrease f further).
    """
    n = base.n
    taus = [_tau(base, i) for i in range(n)]
    m = n + 1
    fixed = np.zeros(m, dtype=bool)
    p = np.zeros(m)
    if initial_interior is not None:
        init = np.asarray(initial_interior, dtype=float)
        if init.size != n - 1:
            raise ValueError(f"initial guess needs {n - 1} interior positions")
        p[1:-1] = init
    if fixed_first is not None:
        fixed[0] = True
        p[0] = fixed_first
    if fixed_last is not None:
        fixed[-1] = True
        p[-1] = fixed_last
    free = ~fixed

    def chord_offsets(pv):
        return [
            (pv[w] - (x[w - 1] if w >= 1 else 0.0), pv[w + 1]) for w in range(n)
        ]

    def value(pv):
        return sum(
            wedge_distance(taus[w] * a, taus[w] * b)
            for w, (a, b) in enumerate(chord_offsets(pv))
        )

    def value_grad_hess(pv):
        f = 0.0
        g = np.zeros(m)
        h = np.zeros((m, m))
        for w, (a, b) in enumerate(chord_offsets(pv)):
            t = taus[w]
            val, (ga, gb), ((haa, hab), (_, hbb)) = wedge_distance_derivatives(
                t * a, t * b
            )
            f += val
            g[w] += t * ga
            g[w + 1] += t * gb
            h[w, w] += haa
            h[w + 1, w + 1] += hbb
            h[w, w + 1] += hab
            h[w + 1, w] += hab
        return f, g, h

    f, g, h = value_grad_hess(p)
    best = (f, p.copy())
    for _ in range(MAX_ITERATIONS):
        gn = math.sqrt(float(np.dot(g[free], g[free])))
        if gn <= GRAD_TOL:
            return f, p
        step = np.zeros(m)
        hf = h[np.ix_(free, free)]
        try:
            step[free] = np.linalg.solve(hf, -g[free])
        except np.linalg.LinAlgError:  # pragma: no cover - Hessian is SPD
            step[free] = -g[free]
        slope = float(np.dot(g[free], step[free]))
        if slope >= 0:  # pragma: no cover - safeguard
            step[free] = -g[free]
            slope = -float(np.dot(g[free], g[free]))
        if -slope <= 32.0 * np.finfo(float).eps * max(1.0, f):
            return f, p  # numerical minimum: f cannot decrease in doubles
        t = 1.0
        while t > 1e-18:
            cand = p + t * step
            fc = value(cand)
            if fc <= f + 1e-4 * t * slope:
                p = cand
                break
            t *= 0.5
        else:  # pragma: no cover - safeguard
            break
        f, g, h = value_grad_hess(p)
        if f < best[0]:
            best = (f, p.copy())
    raise ConvergenceError(best[0], best[1])


def _coords_from_positions(base, x, p):
    """Rebuild curve coordinates (zero gap terms) from leaf crossing positions."""
    n = base.n
    delta = [xv - x0 for xv, x0 in zip(x, base.shears)]
    pairs = []
    for w in range(n):
        a = p[w] - (x[w - 1] if w >= 1 else 0.0)
        b = p[w + 1]
        dl = delta[w - 1] if w >= 1 else 0.0
        dr = delta[w] if w <= n - 2 else 0.0
        pairs.append((a + 0.5 * dl, b - 0.5 * dr))
    return PwCurveCoords(tuple(pairs))


def geodesic_length(base, x, y_minus, y_plus, initial=None):
    """Length of the geodesic joining the boundary points at positions
    (y_minus, y_plus), together with the minimizing curve coordinates.

    Minimizes ``pw_length(base, x, .)`` over all curve coordinates with the
    boundary endpoints held fixed (positions are relative to the boundary
    marked points).  The minimizer is the geodesic itself; its gap terms
    vanish.  ``initial`` optionally seeds the interior crossing positions.
    """
    x = _check_shear_vector(base, x)
    value, p = _minimize_chord_sum(
        base, x, float(y_minus), float(y_plus), initial_interior=initial
    )
    return value, _coords_from_positions(base, x, p)


def core_length(base, x):
    """Length of the strip core at shears ``x``: the unconstrained minimum of
    the piecewise-geodesic functional, equal to the distance between the
    developed boundary leaves."""
    x = _check_shear_vector(base, x)
    value, _ = _minimize_chord_sum(base, x, None, None)
    return value


def strip_to_json(shape):
    return {
        "n": shape.n,
        "apex_sides": list(shape.combinatorics.apex_sides),
        "shears": list(shape.shears),
    }


def strip_from_json(obj):
    sides = obj["apex_sides"]
    if "n" in obj and int(obj["n"]) != len(sides):
        raise ValueError("strip JSON field 'n' disagrees with apex_sides length")
    return StripShape(WedgeCombinatorics(tuple(sides)), tuple(obj["shears"]))


def curve_coords_to_json(coords):
    return {"y": [list(pair) for pair in coords.y]}


def curve_coords_from_json(obj):
    return PwCurveCoords(tuple((a, b) for a, b in obj["y"]))
