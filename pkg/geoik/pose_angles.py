"""Joint angles from a chosen elbow point.

Shoulder angles come from right triangles on the elbow's coordinates, the
elbow angle from the two right triangles the circle center cuts out of the
shoulder–elbow–wrist triangle, and the wrist/hand angles from the plane
through shoulder, elbow and circle center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from geoik.arm_model import ArmGeometry
from geoik.decouple import WristPoint
from geoik.elbow_circle import RedundancyCircle
from geoik.errors import DegenerateHandPlane, DegenerateInput, InternalInconsistency
from geoik.geom3 import (
    ORIGIN,
    ZERO_TOL,
    Line3,
    Plane,
    Vec3,
    clamp_unit,
    line_plane_angle,
    norm,
    perpendicular_frame,
    plane_from_points,
    vector_angle,
)

# |elbow| must match d1 this closely before shoulder angles are extracted.
ELBOW_RADIUS_TOL = 1e-6


@dataclass(frozen=True)
class ShoulderAngles:
    ang_hombro_z: float
    ang_hombro_x: float
    cat_codo_z: float
    hip_brazo_xy: float
    # -1 when the elbow has negative y; the azimuth itself is unsigned.
    x_sign: int = 1
    elbow_above_shoulder: bool = False


@dataclass(frozen=True)
class ElbowAngle:
    ang_codo: float
    cat_antebrazo: float
    cat_brazo: float
    ang_codo_1: float
    ang_codo_2: float


@dataclass(frozen=True, eq=False)
class HandAngles:
    plane: Plane | None
    alpha: float
    wrist_roll_total: float
    hand_flex: float
    degenerate_plane: bool = False


def shoulder_angles(elbow: Vec3, geom: ArmGeometry) -> ShoulderAngles:
    """Tilt from the downward vertical and azimuth from +X of the upper arm."""
    d1 = geom.d1
    if abs(norm(elbow) - d1) > ELBOW_RADIUS_TOL:
        raise InternalInconsistency(f"elbow at distance {norm(elbow):.9g} from shoulder, expected {d1}")
    x, y, z = (float(c) for c in elbow)
    if abs(z) > d1 + ELBOW_RADIUS_TOL:
        raise InternalInconsistency(f"|codo_z| = {abs(z):.9g} exceeds d1 = {d1}")

    cat_codo_z = math.sqrt(max(d1 * d1 - z * z, 0.0))
    ang_z = math.asin(clamp_unit(cat_codo_z / d1, "catCodo_z / d1"))
    hip_brazo_xy = math.hypot(x, y)
    if hip_brazo_xy < ZERO_TOL:
        ang_x = 0.0
    else:
        ang_x = math.acos(clamp_unit(x / hip_brazo_xy, "codo_x / hipBrazo_xy"))
    return ShoulderAngles(
        ang_hombro_z=ang_z,
        ang_hombro_x=ang_x,
        cat_codo_z=cat_codo_z,
        hip_brazo_xy=hip_brazo_xy,
        x_sign=-1 if y < 0 else 1,
        elbow_above_shoulder=z > 0,
    )


def elbow_angle(wrist: WristPoint, circle: RedundancyCircle, geom: ArmGeometry) -> ElbowAngle:
    """Interior elbow angle as the sum of two right-triangle angles.

    When the circle center falls outside the shoulder–wrist segment
    (β < 0 or β > 1) the corresponding term is subtracted.
    """
    cat_antebrazo = norm(wrist.m - circle.center)
    cat_brazo = norm(circle.center)
    ang_1 = math.asin(clamp_unit(cat_brazo / geom.d1, "catBrazo / d1"))
    ang_2 = math.asin(clamp_unit(cat_antebrazo / geom.d2, "catAntebrazo / d2"))
    s1 = 1.0 if circle.beta >= 0.0 else -1.0
    s2 = 1.0 if circle.beta <= 1.0 else -1.0
    return ElbowAngle(
        ang_codo=s1 * ang_1 + s2 * ang_2,
        cat_antebrazo=cat_antebrazo,
        cat_brazo=cat_brazo,
        ang_codo_1=ang_1,
        ang_codo_2=ang_2,
    )


def hand_plane(shoulder: Vec3, elbow: Vec3, circle_center: Vec3) -> Plane:
    """Plane through shoulder, elbow and circle center.

    Raises:
        DegenerateHandPlane: when the arm is straight or folded.
    """
    try:
        return plane_from_points(shoulder, elbow, circle_center)
    except DegenerateInput as e:
        raise DegenerateHandPlane("shoulder, elbow and circle center are collinear") from e


def wrist_roll(
    tip: Vec3, wrist: WristPoint, plane: Plane, mount_offset: float = math.pi / 2
) -> Tuple[float, float]:
    """Angle ``alpha`` between the hand line and the hand plane, and the total
    wrist servo rotation ``mount_offset + alpha``."""
    direction = wrist.m - tip
    if norm(direction) < ZERO_TOL:
        raise DegenerateInput("tip coincides with the wrist")
    alpha = line_plane_angle(Line3(tip, direction), plane)
    return alpha, mount_offset + alpha


def hand_flex(elbow: Vec3, wrist: WristPoint, tip: Vec3) -> float:
    """Angle at the wrist between the forearm (toward the elbow) and the hand."""
    return vector_angle(elbow - wrist.m, tip - wrist.m, signed_by_dot=True)


def hand_angles(
    elbow: Vec3,
    wrist: WristPoint,
    circle: RedundancyCircle,
    tip: Vec3,
    mount_offset: float = math.pi / 2,
) -> HandAngles:
    """Wrist roll and hand flex together.

    A degenerate hand plane leaves the roll at the mounting offset.
    """
    flex = hand_flex(elbow, wrist, tip)
    try:
        plane = hand_plane(ORIGIN, elbow, circle.center)
    except DegenerateHandPlane:
        return HandAngles(None, 0.0, mount_offset, flex, degenerate_plane=True)
    alpha, total = wrist_roll(tip, wrist, plane, mount_offset)
    return HandAngles(plane, alpha, total, flex)


def upper_arm_roll(elbow: Vec3, wrist: Vec3) -> float:
    """Swing of the forearm about the upper-arm axis, in (-π, π]."""
    r0, r1 = perpendicular_frame(elbow)
    forearm = wrist - elbow
    return math.atan2(float(np.dot(forearm, r1)), float(np.dot(forearm, r0)))
