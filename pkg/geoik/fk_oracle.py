"""Forward kinematics, used to verify the solver by round trip.

FK reads only joint angles and the sign/hemisphere flags; it never looks at
the solver's witness points. With all angles zero the arm hangs straight
down and the forearm is folded back up against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from geoik.arm_model import ArmGeometry, JointAngles
from geoik.decouple import hand_direction
from geoik.errors import DegenerateInput
from geoik.geom3 import Vec3, norm, perpendicular_frame


@dataclass(frozen=True, eq=False)
class FkPose:
    elbow: Vec3
    wrist: Vec3
    tip: Vec3

    def link_errors(self, geom: ArmGeometry) -> tuple[float, float, float]:
        """Deviation of each link length from the geometry."""
        return (
            abs(norm(self.elbow) - geom.d1),
            abs(norm(self.wrist - self.elbow) - geom.d2),
            abs(norm(self.tip - self.wrist) - geom.long_mano),
        )


def elbow_position(angles: JointAngles, geom: ArmGeometry) -> Vec3:
    """Place the elbow from the two shoulder angles and the sign flags."""
    theta, phi = angles.ang_hombro_z, angles.ang_hombro_x
    z_sign = 1.0 if angles.elbow_above_shoulder else -1.0
    return geom.d1 * np.array([
        math.sin(theta) * math.cos(phi),
        angles.shoulder_x_sign * math.sin(theta) * math.sin(phi),
        z_sign * math.cos(theta),
    ])


def fk(solution: JointAngles, geom: ArmGeometry) -> FkPose:
    """Elbow, wrist and tip positions for a set of joint angles."""
    values = np.array(list(solution.joint_values().values())
                      + [solution.upper_arm_roll, solution.hand_polar, solution.hand_azimuth])
    if not np.all(np.isfinite(values)):
        raise DegenerateInput("joint angles must be finite")

    elbow = elbow_position(solution, geom)
    u = elbow / geom.d1
    r0, r1 = perpendicular_frame(u)
    bend, roll = solution.ang_codo, solution.upper_arm_roll
    forearm = -math.cos(bend) * u + math.sin(bend) * (math.cos(roll) * r0 + math.sin(roll) * r1)
    wrist = elbow + geom.d2 * forearm
    tip = wrist - geom.long_mano * hand_direction(solution.hand_polar, solution.hand_azimuth)
    return FkPose(elbow=elbow, wrist=wrist, tip=tip)
