"""Kinematic decoupling, stage one: wrist point from the desired hand pose."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Optional, Tuple

import numpy as np

from geoik.arm_model import ArmGeometry, TargetPose
from geoik.errors import DegenerateInput
from geoik.geom3 import ZERO_TOL, Vec3, as_vec3, clamp_unit


@dataclass(frozen=True, eq=False)
class WristPoint:
    """Wrist center ``m``. ``source_target`` is None when the wrist was given directly."""

    m: Vec3
    source_target: Optional[TargetPose] = None

    @classmethod
    def at(cls, x: Any, y: Optional[float] = None, z: Optional[float] = None) -> "WristPoint":
        """Inject a wrist point directly, bypassing the decoupling stage."""
        values = (x, y, z) if y is not None else x
        return cls(as_vec3(values))

    @property
    def distance(self) -> float:
        return float(np.linalg.norm(self.m))


def hand_direction(ang_muneca: float, ang_mano: float) -> Vec3:
    """Unit vector from tip to wrist: polar angle from +Z, azimuth from +X."""
    s = math.sin(ang_muneca)
    return np.array([
        s * math.cos(ang_mano),
        s * math.sin(ang_mano),
        math.cos(ang_muneca),
    ])


def wrist_from_target(target: TargetPose, geom: ArmGeometry) -> WristPoint:
    """Place the wrist on the sphere of radius ``long_mano`` around the tip.

    Angles outside their servo ranges are accepted here; limit validation
    happens after the full solve.
    """
    if not (math.isfinite(target.ang_muneca) and math.isfinite(target.ang_mano)):
        raise DegenerateInput("target orientation angles must be finite")
    if not np.all(np.isfinite(target.tip)):
        raise DegenerateInput("target tip must be finite")
    m = target.tip + geom.long_mano * hand_direction(target.ang_muneca, target.ang_mano)
    return WristPoint(m, target)


def orientation_from_points(tip: Vec3, wrist: Vec3) -> Tuple[float, float]:
    """Inverse of :func:`hand_direction`: (polar, azimuth) of ``wrist - tip``."""
    d = wrist - tip
    n = float(np.linalg.norm(d))
    if n < ZERO_TOL:
        raise DegenerateInput("tip coincides with the wrist")
    polar = math.acos(clamp_unit(float(d[2]) / n, "hand direction z"))
    azimuth = math.atan2(float(d[1]), float(d[0])) if math.hypot(d[0], d[1]) >= ZERO_TOL else 0.0
    return polar, azimuth
