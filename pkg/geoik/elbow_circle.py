"""The redundancy circle: every elbow position compatible with a wrist point.

The elbow lies on the sphere of radius ``d1`` around the shoulder (origin)
and on the sphere of radius ``d2`` around the wrist ``m = (a, b, c)``.
Subtracting the two sphere equations gives the plane

    2ax + 2by + 2cz = a² + b² + c² + d1² - d2²

and the intersection is a circle in that plane, parametrised by ``t``:

    point(t) = M + r3 · (basis_a · cos t + basis_b · sin t)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Iterable, List, Literal, Optional, Sequence, Tuple

import numpy as np

from geoik.arm_model import ArmGeometry
from geoik.decouple import WristPoint
from geoik.errors import DegenerateInput, InternalInconsistency, Unreachable
from geoik.geom3 import (
    X_AXIS,
    Z_AXIS,
    ZERO_TOL,
    Plane,
    Vec3,
    cross,
    norm,
    normalize,
)

TWO_PI = 2.0 * math.pi
# Distance tolerance for the tangent (single elbow) classification.
TANGENT_TOL = 1e-9
# Arc boundaries found by sampling are refined to this width.
BOUNDARY_TOL = 1e-9


class Reachability(str, Enum):
    REACHABLE = "Reachable"
    TANGENT_POINT = "TangentPoint"
    TOO_FAR = "TooFar"
    TOO_CLOSE = "TooClose"
    WRIST_AT_SHOULDER = "WristAtShoulder"

    @property
    def has_circle(self) -> bool:
        return self in (Reachability.REACHABLE, Reachability.TANGENT_POINT)


# ── arcs of t ────────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class Arc:
    """``[start, start + length]`` on the circle; ``start`` in [0, 2π)."""

    start: float
    length: float

    @property
    def end(self) -> float:
        return self.start + self.length

    @property
    def midpoint(self) -> float:
        return math.fmod(self.start + self.length / 2, TWO_PI)

    def contains(self, t: float, tol: float = 1e-12) -> bool:
        if self.length >= TWO_PI:
            return True
        offset = math.fmod(t - self.start, TWO_PI)
        if offset < 0:
            offset += TWO_PI
        return offset <= self.length + tol or offset >= TWO_PI - tol


def _to_linear(arc: Arc) -> List[Tuple[float, float]]:
    if arc.end <= TWO_PI:
        return [(arc.start, arc.end)]
    return [(arc.start, TWO_PI), (0.0, arc.end - TWO_PI)]


@dataclass(frozen=True)
class ArcSet:
    """A set of disjoint arcs of the circle parameter ``t``."""

    arcs: Tuple[Arc, ...] = ()

    @classmethod
    def full(cls) -> "ArcSet":
        return cls((Arc(0.0, TWO_PI),))

    @classmethod
    def empty(cls) -> "ArcSet":
        return cls(())

    @classmethod
    def from_interval(cls, start: float, length: float) -> "ArcSet":
        length = min(max(length, 0.0), TWO_PI)
        if length >= TWO_PI:
            return cls.full()
        start = math.fmod(start, TWO_PI)
        if start < 0:
            start += TWO_PI
        if start >= TWO_PI:
            start = 0.0
        return cls((Arc(start, length),))

    @classmethod
    def _from_linear(cls, intervals: Iterable[Tuple[float, float]]) -> "ArcSet":
        merged: List[List[float]] = []
        for lo, hi in sorted(intervals):
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        if not merged:
            return cls.empty()
        if merged[0][0] <= 0.0 and merged[-1][1] >= TWO_PI:
            if len(merged) == 1:
                return cls.full()
            first = merged.pop(0)
            merged[-1][1] = TWO_PI + first[1]
        return cls(tuple(Arc(lo, hi - lo) for lo, hi in merged))

    @classmethod
    def from_arcs(cls, arcs: Iterable[Arc]) -> "ArcSet":
        """Normalise arbitrary (possibly overlapping or wrapping) arcs."""
        linear: List[Tuple[float, float]] = []
        for arc in arcs:
            for part in ArcSet.from_interval(arc.start, arc.length).arcs:
                linear.extend(_to_linear(part))
        return cls._from_linear(linear)

    @property
    def is_empty(self) -> bool:
        return not self.arcs

    @property
    def is_full(self) -> bool:
        return len(self.arcs) == 1 and self.arcs[0].length >= TWO_PI

    @property
    def total_length(self) -> float:
        return sum(arc.length for arc in self.arcs)

    def contains(self, t: float) -> bool:
        return any(arc.contains(t) for arc in self.arcs)

    def intersect(self, other: "ArcSet") -> "ArcSet":
        mine = sorted(iv for arc in self.arcs for iv in _to_linear(arc))
        theirs = sorted(iv for arc in other.arcs for iv in _to_linear(arc))
        out: List[Tuple[float, float]] = []
        i = j = 0
        while i < len(mine) and j < len(theirs):
            lo = max(mine[i][0], theirs[j][0])
            hi = min(mine[i][1], theirs[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if mine[i][1] < theirs[j][1]:
                i += 1
            else:
                j += 1
        return ArcSet._from_linear(out)

    def midpoint(self) -> float:
        """Middle of the longest arc."""
        if self.is_empty:
            raise DegenerateInput("empty arc set has no midpoint")
        return max(self.arcs, key=lambda arc: arc.length).midpoint

    def sample(self, n: int) -> List[float]:
        """``n`` values of t spread uniformly along the arcs, endpoints included."""
        if n < 2:
            raise ValueError("need at least 2 samples")
        if self.is_empty:
            return []
        total = self.total_length
        if total == 0.0:
            return [self.arcs[0].start] * n
        out: List[float] = []
        for i in range(n):
            s = total * i / (n - 1)
            for arc in self.arcs:
                if s <= arc.length or arc is self.arcs[-1]:
                    out.append(arc.start + min(s, arc.length))
                    break
                s -= arc.length
        return out

    def as_pairs(self) -> List[Tuple[float, float]]:
        return [(arc.start, arc.end) for arc in self.arcs]


# ── circle ──────────────────────────────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class RedundancyCircle:
    center: Vec3
    radius: float
    basis_a: Vec3
    basis_b: Vec3
    plane: Plane
    beta: float
    wrist: Vec3
    feasible_arc: ArcSet = field(default_factory=ArcSet.full)


def reachability(wrist: WristPoint, geom: ArmGeometry) -> Reachability:
    """Classify whether the two link spheres intersect."""
    dist = wrist.distance
    if dist < ZERO_TOL:
        return Reachability.WRIST_AT_SHOULDER
    outer = geom.d1 + geom.d2
    inner = abs(geom.d1 - geom.d2)
    if abs(dist - outer) <= TANGENT_TOL or abs(dist - inner) <= TANGENT_TOL:
        return Reachability.TANGENT_POINT
    if dist > outer:
        return Reachability.TOO_FAR
    if dist < inner:
        return Reachability.TOO_CLOSE
    return Reachability.REACHABLE


def intersection_plane(wrist: WristPoint, geom: ArmGeometry) -> Plane:
    """Difference of the two sphere equations."""
    m = wrist.m
    if norm(m) < ZERO_TOL:
        raise DegenerateInput("wrist at the shoulder: spheres are concentric")
    offset = float(np.dot(m, m)) + geom.d1**2 - geom.d2**2
    return Plane(2.0 * m, offset)


def circle_frame(wrist: WristPoint) -> Tuple[Vec3, Vec3]:
    """Orthonormal in-plane basis.

    ``basis_a`` swaps the x, y components of the plane normal and negates
    one; ``basis_b`` is ``basis_a × normal`` in that operand order. A wrist on
    the Z axis falls back to ``basis_a = x̂``.
    """
    v1 = 2.0 * wrist.m
    if norm(v1) < ZERO_TOL:
        raise DegenerateInput("wrist at the shoulder: no circle frame")
    a1 = np.array([-v1[1], v1[0], 0.0])
    if norm(a1) < ZERO_TOL:
        basis_a = X_AXIS.copy()
        return basis_a, cross(basis_a, normalize(v1))
    return normalize(a1), normalize(cross(a1, v1))


def circle_center(wrist: WristPoint, geom: ArmGeometry) -> Tuple[Vec3, float]:
    """Foot of the circle on the shoulder–wrist line: ``center = β·m``."""
    m = wrist.m
    mm = float(np.dot(m, m))
    if math.sqrt(mm) < ZERO_TOL:
        raise DegenerateInput("wrist at the shoulder: circle center undefined")
    beta = (geom.d1**2 - geom.d2**2 + mm) / (2.0 * mm)
    return beta * m, beta


def circle_radius(center: Vec3, geom: ArmGeometry) -> float:
    """``r3 = √(d1² − |center|²)``."""
    d = norm(center)
    gap = geom.d1**2 - d * d
    if gap < -2.0 * geom.d1 * TANGENT_TOL:
        raise InternalInconsistency(
            f"circle center at distance {d:.12g} lies beyond d1 = {geom.d1}"
        )
    return math.sqrt(max(gap, 0.0))


def redundancy_circle(wrist: WristPoint, geom: ArmGeometry) -> RedundancyCircle:
    """Build the full circle (unrestricted arc) for a reachable wrist.

    Raises:
        Unreachable: if the spheres do not meet.
    """
    reach = reachability(wrist, geom)
    if not reach.has_circle:
        raise Unreachable(reach.value)
    center, beta = circle_center(wrist, geom)
    basis_a, basis_b = circle_frame(wrist)
    return RedundancyCircle(
        center=center,
        radius=circle_radius(center, geom),
        basis_a=basis_a,
        basis_b=basis_b,
        plane=intersection_plane(wrist, geom),
        beta=beta,
        wrist=wrist.m,
    )


def point_at(circle: RedundancyCircle, t: float) -> Vec3:
    return circle.center + circle.radius * (
        circle.basis_a * math.cos(t) + circle.basis_b * math.sin(t)
    )


# ── feasibility ─────────────────────────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class BodyHalfSpace:
    """The elbow must stay on one side of a plane through the shoulder.

    Without a fixed ``normal`` the plane is the vertical one containing the
    shoulder's Z axis and the wrist; the right arm keeps the elbow on the
    side opposite to ``ẑ × m``. The left arm mirrors the rule across X = 0.
    """

    side: Literal["right", "left"] = "right"
    normal: Optional[Vec3] = None

    def allowed_normal(self, wrist: Vec3) -> Vec3:
        """Unit normal ``n`` such that ``elbow · n ≥ 0`` is allowed."""
        if self.normal is not None:
            n = normalize(np.asarray(self.normal, dtype=np.float64))
            if self.side == "left":
                n = n * np.array([-1.0, 1.0, 1.0])
            return n
        lateral = cross(Z_AXIS, wrist)
        lateral = X_AXIS.copy() if norm(lateral) < ZERO_TOL else normalize(lateral)
        return -lateral if self.side == "right" else lateral

    def allows(self, point: Vec3, wrist: Vec3) -> bool:
        return float(np.dot(point, self.allowed_normal(wrist))) >= -ZERO_TOL


def _halfspace_arc(circle: RedundancyCircle, n: Vec3) -> ArcSet:
    # point(t)·n = c0 + A cos t + B sin t = c0 + R cos(t - φ)
    c0 = float(np.dot(circle.center, n))
    a = circle.radius * float(np.dot(circle.basis_a, n))
    b = circle.radius * float(np.dot(circle.basis_b, n))
    r = math.hypot(a, b)
    if r < ZERO_TOL:
        return ArcSet.full() if c0 >= -ZERO_TOL else ArcSet.empty()
    k = -c0 / r
    if k <= -1.0:
        return ArcSet.full()
    if k > 1.0 + 1e-12:
        return ArcSet.empty()
    half = math.acos(min(k, 1.0))
    phi = math.atan2(b, a)
    return ArcSet.from_interval(phi - half, 2.0 * half)


def _safe(predicate: Callable[[float], bool], t: float) -> bool:
    try:
        return bool(predicate(t))
    except (ArithmeticError, ValueError):
        return False


def _refine(predicate: Callable[[float], bool], t_out: float, t_in: float) -> float:
    while abs(t_in - t_out) > BOUNDARY_TOL:
        mid = 0.5 * (t_in + t_out)
        if _safe(predicate, mid):
            t_in = mid
        else:
            t_out = mid
    return t_in


def _predicate_arc(
    arcs: ArcSet, predicate: Callable[[float], bool], resolution: int
) -> ArcSet:
    kept: List[Arc] = []
    for arc in arcs.arcs:
        count = max(2, int(math.ceil(resolution * arc.length / TWO_PI)) + 1)
        ts: Sequence[float] = np.linspace(arc.start, arc.end, count).tolist()
        ok = [_safe(predicate, t) for t in ts]
        i = 0
        while i < count:
            if not ok[i]:
                i += 1
                continue
            j = i
            while j + 1 < count and ok[j + 1]:
                j += 1
            lo = ts[i] if i == 0 else _refine(predicate, ts[i - 1], ts[i])
            hi = ts[j] if j == count - 1 else _refine(predicate, ts[j + 1], ts[j])
            kept.append(Arc(lo, hi - lo))
            i = j + 1
    return ArcSet.from_arcs(kept)


def feasible_arc(
    circle: RedundancyCircle,
    body: Optional[BodyHalfSpace] = None,
    predicate: Optional[Callable[[float], bool]] = None,
    resolution: int = 720,
) -> ArcSet:
    """Values of t whose elbow satisfies every constraint.

    The body half-space is solved in closed form; an arbitrary ``predicate``
    (joint limits, typically) is sampled ``resolution`` times per turn and
    its boundaries refined by bisection.
    """
    arcs = ArcSet.full()
    if body is not None:
        arcs = arcs.intersect(_halfspace_arc(circle, body.allowed_normal(circle.wrist)))
    if predicate is not None and not arcs.is_empty:
        arcs = _predicate_arc(arcs, predicate, resolution)
    return arcs


def with_arc(circle: RedundancyCircle, arcs: ArcSet) -> RedundancyCircle:
    return replace(circle, feasible_arc=arcs)
