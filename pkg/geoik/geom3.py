"""3D geometric primitives and the constructions the solver is built from.

Vectors are plain ``float64`` NumPy arrays of shape ``(3,)``. Angles are
always radians; degrees only appear at presentation time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np
import numpy.typing as npt

from geoik.errors import DegenerateInput, InternalInconsistency

Vec3 = npt.NDArray[np.float64]

# A vector is "zero" below this norm (link lengths are O(1)–O(10)).
ZERO_TOL = 1e-9
# How far outside [-1, 1] a cosine/sine may spill before it is an error.
UNIT_SPILL_TOL = 1e-9

X_AXIS: Vec3 = np.array([1.0, 0.0, 0.0])
Y_AXIS: Vec3 = np.array([0.0, 1.0, 0.0])
Z_AXIS: Vec3 = np.array([0.0, 0.0, 1.0])
ORIGIN: Vec3 = np.zeros(3)


def vec3(x: float, y: float, z: float) -> Vec3:
    """Build a Vec3 from three components."""
    return as_vec3((x, y, z))


def as_vec3(values: Iterable[float]) -> Vec3:
    """Coerce any 3-sequence into a finite Vec3."""
    v = np.asarray(tuple(values), dtype=np.float64)
    if v.shape != (3,):
        raise DegenerateInput(f"expected 3 components, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DegenerateInput(f"non-finite vector {v.tolist()}")
    return v


def cross(u: Vec3, v: Vec3) -> Vec3:
    """Right-handed cross product ``u × v``."""
    return np.cross(u, v)


def norm(v: Vec3) -> float:
    """Euclidean length."""
    return float(np.linalg.norm(v))


def normalize(v: Vec3) -> Vec3:
    """Unit vector parallel to ``v``.

    Raises:
        DegenerateInput: if ``|v| < ZERO_TOL``.
    """
    n = norm(v)
    if n < ZERO_TOL:
        raise DegenerateInput(f"cannot normalize near-zero vector {np.asarray(v).tolist()}")
    return v / n


def clamp_unit(value: float, what: str = "ratio") -> float:
    """Clamp a would-be sine/cosine into [-1, 1].

    Values spilling past the interval by at most ``UNIT_SPILL_TOL`` are
    rounding noise and get clamped; anything further out is a contradiction.
    """
    if value > 1.0 + UNIT_SPILL_TOL or value < -1.0 - UNIT_SPILL_TOL:
        raise InternalInconsistency(f"{what} = {value!r} lies outside [-1, 1]")
    return float(min(1.0, max(-1.0, value)))


def perpendicular_frame(axis: Vec3) -> Tuple[Vec3, Vec3]:
    """Two unit vectors completing ``axis`` to a right-handed orthonormal frame.

    The first vector is horizontal (``ẑ × axis``) unless the axis is vertical,
    in which case it is ``x̂``.
    """
    u = normalize(axis)
    r0 = cross(Z_AXIS, u)
    if norm(r0) < ZERO_TOL:
        r0 = X_AXIS.copy()
    else:
        r0 = normalize(r0)
    return r0, cross(u, r0)


@dataclass(frozen=True, eq=False)
class Plane:
    """The plane ``normal · (x, y, z) = offset``.

    The normal is kept exactly as constructed (not normalized) so literal
    coefficients such as ``2x + 2y - 2z = 9`` survive.
    """

    normal: Vec3
    offset: float

    def __post_init__(self) -> None:
        if norm(self.normal) < ZERO_TOL:
            raise DegenerateInput("plane normal is the zero vector")

    @property
    def coefficients(self) -> Tuple[float, float, float, float]:
        a, b, c = (float(x) for x in self.normal)
        return a, b, c, float(self.offset)

    def evaluate(self, point: Vec3) -> float:
        return float(np.dot(self.normal, point) - self.offset)

    def contains(self, point: Vec3, tol: float = 1e-9) -> bool:
        return abs(self.evaluate(point)) <= tol * norm(self.normal)

    def normalized(self) -> "Plane":
        """Same plane with a unit normal, for comparisons."""
        n = norm(self.normal)
        return Plane(self.normal / n, self.offset / n)


@dataclass(frozen=True, eq=False)
class Line3:
    """Parametric line ``origin + s · direction``."""

    origin: Vec3
    direction: Vec3

    def __post_init__(self) -> None:
        if norm(self.direction) < ZERO_TOL:
            raise DegenerateInput("line direction is the zero vector")

    def point_at(self, s: float) -> Vec3:
        return self.origin + s * self.direction


def plane_from_points(p1: Vec3, p2: Vec3, p3: Vec3) -> Plane:
    """Plane through three points, normal ``(p2 - p1) × (p3 - p1)``.

    Raises:
        DegenerateInput: if the points are collinear.
    """
    normal = cross(p2 - p1, p3 - p1)
    if norm(normal) < ZERO_TOL:
        raise DegenerateInput("points are collinear; no unique plane")
    return Plane(normal, float(np.dot(normal, p1)))


def line_plane_angle(line: Line3, plane: Plane) -> float:
    """Angle between a line and a plane, in [0, π/2].

    Computed as the complement of the angle between the direction and the
    normal: ``arcsin(|d·n| / (|d||n|))``.
    """
    d, n = line.direction, plane.normal
    ratio = abs(float(np.dot(d, n))) / (norm(d) * norm(n))
    return float(np.arcsin(clamp_unit(ratio, "line/plane sine")))


def vector_angle(u: Vec3, v: Vec3, signed_by_dot: bool = True) -> float:
    """Angle between two vectors.

    With ``signed_by_dot`` the sign of the dot product is kept and the result
    lies in [0, π]; otherwise the absolute value is taken and the result lies
    in [0, π/2].

    Raises:
        DegenerateInput: if either vector is zero.
    """
    nu, nv = norm(u), norm(v)
    if nu < ZERO_TOL or nv < ZERO_TOL:
        raise DegenerateInput("angle undefined for a zero vector")
    cos = float(np.dot(u, v)) / (nu * nv)
    if not signed_by_dot:
        cos = abs(cos)
    return float(np.arccos(clamp_unit(cos, "cosine")))
