"""Arm geometry, joint limits, targets and solutions: the shared vocabulary.

The solver frame puts the shoulder at the origin with X lateral, Y forward
and Z vertical. Lengths are in arm-link units.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, Literal, Mapping, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from geoik.errors import ConfigError
from geoik.geom3 import ORIGIN, Vec3, as_vec3

if TYPE_CHECKING:
    from geoik.elbow_circle import RedundancyCircle

# Joint keys, in kinematic order from shoulder to gripper.
JOINT_NAMES: Tuple[str, ...] = ("hombro_z", "hombro_x", "brazo", "codo", "muneca", "mano", "pinza")

# Every standard servo on the arm is limited to 180°.
DEFAULT_INTERVAL: Tuple[float, float] = (0.0, math.pi)

# brazo is checked against the circle parameter t, which runs over [0, 2π).
BRAZO_INTERVAL: Tuple[float, float] = (0.0, 2.0 * math.pi)

Interval = Tuple[float, float]


class JointLimits(BaseModel):
    """Closed [lo, hi] interval per joint, radians."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    hombro_z: Interval = DEFAULT_INTERVAL
    hombro_x: Interval = DEFAULT_INTERVAL
    brazo: Interval = BRAZO_INTERVAL
    codo: Interval = DEFAULT_INTERVAL
    muneca: Interval = DEFAULT_INTERVAL
    mano: Interval = DEFAULT_INTERVAL
    pinza: Interval = DEFAULT_INTERVAL

    @field_validator(*JOINT_NAMES)
    @classmethod
    def interval_must_be_ordered(cls, v: Interval) -> Interval:
        lo, hi = v
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError("limits must be finite")
        if lo > hi:
            raise ValueError(f"inverted interval [{lo}, {hi}]")
        if hi - lo > 2 * math.pi:
            raise ValueError(f"interval [{lo}, {hi}] is wider than 2π")
        return v

    def interval(self, joint: str) -> Interval:
        return getattr(self, joint)

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "JointLimits":
        """Same interval for every joint."""
        return cls(**{name: (lo, hi) for name in JOINT_NAMES})


class ArmGeometry(BaseModel):
    """Link lengths and mounting constants of one arm."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    d1: float
    d2: float
    long_mano: float
    side: Literal["right", "left"] = "right"
    wrist_mount_offset: float = math.pi / 2

    @field_validator("d1", "d2", "long_mano")
    @classmethod
    def length_must_be_positive(cls, v: float, info) -> float:
        if not math.isfinite(v) or v <= 0:
            raise ValueError(f"{info.field_name} must be > 0")
        return v

    @property
    def shoulder_origin(self) -> Vec3:
        return ORIGIN.copy()

    @property
    def reach(self) -> float:
        return self.d1 + self.d2


class GeometryDocument(ArmGeometry):
    """On-disk form: the geometry plus its joint limits."""

    limits: JointLimits = Field(default_factory=JointLimits)

    def split(self) -> Tuple[ArmGeometry, JointLimits]:
        geom = ArmGeometry(**self.model_dump(exclude={"limits"}))
        return geom, self.limits

    @classmethod
    def from_parts(cls, geom: ArmGeometry, limits: JointLimits) -> "GeometryDocument":
        return cls(**geom.model_dump(), limits=limits)


def _config_error(exc: ValidationError) -> ConfigError:
    err = exc.errors()[0]
    key_path = ".".join(str(part) for part in err["loc"])
    message = err["msg"]
    if message.startswith("Value error, "):
        message = message[len("Value error, "):]
    return ConfigError(message, key_path)


def load_geometry(
    source: Union[str, Path, Mapping[str, Any]],
) -> Tuple[ArmGeometry, JointLimits]:
    """Parse and validate a geometry document.

    ``source`` may be a mapping, a JSON string, or a path to a JSON file.
    Joints without limits default to [0, π]; brazo, which holds the circle
    parameter t, defaults to [0, 2π].

    Raises:
        ConfigError: on unreadable input, missing keys or invalid values.
    """
    if isinstance(source, Mapping):
        data: Any = dict(source)
    else:
        text = str(source)
        if isinstance(source, str) and text.lstrip().startswith("{"):
            raw = text
        else:
            path = Path(source)
            if not path.is_file():
                raise ConfigError(f"geometry file not found: {path}")
            raw = path.read_text(encoding="utf-8")
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as e:
            raise ConfigError(f"invalid JSON at line {e.lineno}: {e.msg}") from e

    if not isinstance(data, dict):
        raise ConfigError("geometry document must be an object")
    try:
        return GeometryDocument.model_validate(data).split()
    except ValidationError as e:
        raise _config_error(e) from e


@dataclass(frozen=True, eq=False)
class TargetPose:
    """Desired hand-tip point plus hand orientation (polar ``ang_muneca``
    from +Z, azimuth ``ang_mano`` from +X)."""

    tip: Vec3
    ang_muneca: float
    ang_mano: float

    @classmethod
    def of(cls, tip: Any, ang_muneca: float, ang_mano: float) -> "TargetPose":
        return cls(as_vec3(tip), float(ang_muneca), float(ang_mano))


@dataclass(frozen=True, kw_only=True)
class JointAngles:
    """The seven joint values plus the flags that make FK a function.

    ``ang_hombro_x`` is the unsigned azimuth; ``shoulder_x_sign`` restores the
    side of the XY plane the elbow is on. ``hand_polar``/``hand_azimuth``
    give the hand direction (wrist minus tip) in the decoupling convention.
    """

    ang_hombro_z: float
    ang_hombro_x: float
    elbow_t: float
    ang_codo: float
    wrist_roll_total: float
    hand_flex: float
    gripper: float = 0.0
    upper_arm_roll: float = 0.0
    shoulder_x_sign: int = 1
    elbow_above_shoulder: bool = False
    hand_polar: float = 0.0
    hand_azimuth: float = 0.0

    @property
    def ang_hombro_x_signed(self) -> float:
        return self.shoulder_x_sign * self.ang_hombro_x

    def joint_values(self) -> Dict[str, float]:
        """Value checked against each joint's limits, keyed by joint name."""
        return {
            "hombro_z": self.ang_hombro_z,
            "hombro_x": self.ang_hombro_x,
            "brazo": self.elbow_t,
            "codo": self.ang_codo,
            "muneca": self.wrist_roll_total,
            "mano": self.hand_flex,
            "pinza": self.gripper,
        }

    def joint_vector(self) -> np.ndarray:
        """Physical joint coordinates used for joint-space distances."""
        return np.array([
            self.ang_hombro_z,
            self.ang_hombro_x_signed,
            self.upper_arm_roll,
            self.ang_codo,
            self.wrist_roll_total,
            self.hand_flex,
        ])


@dataclass(frozen=True, kw_only=True, eq=False)
class JointSolution(JointAngles):
    """Joint angles together with the geometric witnesses they came from."""

    wrist: Vec3
    elbow: Vec3
    tip: Vec3
    circle: Optional["RedundancyCircle"] = None
    hand_plane_degenerate: bool = False

    def angles(self) -> JointAngles:
        """Strip the witnesses."""
        return JointAngles(**{
            name: getattr(self, name) for name in JointAngles.__dataclass_fields__
        })
