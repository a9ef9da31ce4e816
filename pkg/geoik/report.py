"""Structured documents emitted by the CLI.

Single solves are written as JSON (:class:`ReportDoc`), batches and sweeps
as CSV rows (:class:`ResultRow`). Angles appear in radians for machines and
degrees for people; both come from the same value.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import IO, Any, Dict, Iterable, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from geoik.arm_model import JOINT_NAMES, JointAngles, JointSolution
from geoik.errors import ConfigError
from geoik.geom3 import Vec3, as_vec3, vec3
from geoik.solver import FailureReason, LimitViolation, SolveReport, SolveStatus

SCHEMA_VERSION = "1"

# Row status for a batch line that could not be parsed.
PARSE_ERROR = "ParseError"


class Point3(BaseModel):
    model_config = ConfigDict(frozen=True)

    x: float
    y: float
    z: float

    @classmethod
    def of(cls, v: Vec3) -> "Point3":
        return cls(x=float(v[0]), y=float(v[1]), z=float(v[2]))

    def to_vec(self) -> Vec3:
        return vec3(self.x, self.y, self.z)


class JointValue(BaseModel):
    rad: float
    deg: float

    @classmethod
    def of(cls, rad: float) -> "JointValue":
        return cls(rad=rad, deg=math.degrees(rad))


class CircleDoc(BaseModel):
    center: Point3
    radius: float
    basis_a: Point3
    basis_b: Point3
    plane_normal: Point3
    plane_offset: float
    beta: float
    feasible_arc: List[Tuple[float, float]] = Field(default_factory=list)


class ViolationDoc(BaseModel):
    joint: str
    value: float
    lo: float
    hi: float

    @classmethod
    def of(cls, v: LimitViolation) -> "ViolationDoc":
        return cls(joint=v.joint, value=v.value, lo=v.lo, hi=v.hi)


class SolutionDoc(BaseModel):
    """Joint values plus everything FK needs to rebuild the pose."""

    joints: Dict[str, JointValue]
    upper_arm_roll: float
    elbow_t: float
    shoulder_x_sign: Literal[-1, 1] = 1
    elbow_above_shoulder: bool = False
    hand_polar: float = 0.0
    hand_azimuth: float = 0.0
    hand_plane_degenerate: bool = False
    wrist: Point3
    elbow: Point3
    tip: Point3

    @field_validator("joints")
    @classmethod
    def joints_must_be_complete(cls, v: Dict[str, JointValue]) -> Dict[str, JointValue]:
        missing = [name for name in JOINT_NAMES if name not in v]
        if missing:
            raise ValueError(f"missing joints: {', '.join(missing)}")
        return v

    @classmethod
    def of(cls, sol: JointSolution) -> "SolutionDoc":
        return cls(
            joints={name: JointValue.of(value) for name, value in sol.joint_values().items()},
            upper_arm_roll=sol.upper_arm_roll,
            elbow_t=sol.elbow_t,
            shoulder_x_sign=sol.shoulder_x_sign,
            elbow_above_shoulder=sol.elbow_above_shoulder,
            hand_polar=sol.hand_polar,
            hand_azimuth=sol.hand_azimuth,
            hand_plane_degenerate=sol.hand_plane_degenerate,
            wrist=Point3.of(sol.wrist),
            elbow=Point3.of(sol.elbow),
            tip=Point3.of(sol.tip),
        )

    def to_angles(self) -> JointAngles:
        """Joint angles in the form the solver takes as the current pose."""
        rad = {name: value.rad for name, value in self.joints.items()}
        return JointAngles(
            ang_hombro_z=rad["hombro_z"],
            ang_hombro_x=abs(rad["hombro_x"]),
            elbow_t=rad["brazo"],
            ang_codo=rad["codo"],
            wrist_roll_total=rad["muneca"],
            hand_flex=rad["mano"],
            gripper=rad["pinza"],
            upper_arm_roll=self.upper_arm_roll,
            shoulder_x_sign=self.shoulder_x_sign,
            elbow_above_shoulder=self.elbow_above_shoulder,
            hand_polar=self.hand_polar,
            hand_azimuth=self.hand_azimuth,
        )


class ReportDoc(BaseModel):
    """JSON form of a :class:`~geoik.solver.SolveReport`."""

    schema_version: str = SCHEMA_VERSION
    status: SolveStatus
    reason: Optional[FailureReason] = None
    message: str = ""
    reachability: Optional[str] = None
    violations: List[ViolationDoc] = Field(default_factory=list)
    wrist: Optional[Point3] = None
    circle: Optional[CircleDoc] = None
    elbow_t: Optional[float] = None
    solution: Optional[SolutionDoc] = None

    @classmethod
    def from_report(cls, report: SolveReport) -> "ReportDoc":
        circle = None
        if report.circle is not None:
            c = report.circle
            circle = CircleDoc(
                center=Point3.of(c.center),
                radius=c.radius,
                basis_a=Point3.of(c.basis_a),
                basis_b=Point3.of(c.basis_b),
                plane_normal=Point3.of(c.plane.normal),
                plane_offset=c.plane.offset,
                beta=c.beta,
                feasible_arc=c.feasible_arc.as_pairs(),
            )
        return cls(
            status=report.status,
            reason=report.reason,
            message=report.message,
            reachability=None if report.reachability is None else report.reachability.value,
            violations=[ViolationDoc.of(v) for v in report.violations],
            wrist=None if report.wrist is None else Point3.of(report.wrist.m),
            circle=circle,
            elbow_t=report.elbow_t,
            solution=None if report.solution is None else SolutionDoc.of(report.solution),
        )


def load_current(path: Path) -> JointAngles:
    """Current pose from a previously written solve report.

    Raises:
        ConfigError: when the file is missing, invalid, or holds no solution.
    """
    if not path.is_file():
        raise ConfigError(f"current-pose report not found: {path}")
    try:
        doc = ReportDoc.model_validate_json(path.read_text(encoding="utf-8"))
    except ValueError as e:
        raise ConfigError(f"invalid report {path}: {e}") from e
    if doc.solution is None:
        raise ConfigError(f"report {path} carries no solution")
    return doc.solution.to_angles()


# ── batch input ─────────────────────────────────────────────────────────────

TARGET_COLUMNS = ("tip_x", "tip_y", "tip_z", "ang_muneca", "ang_mano")
WRIST_COLUMNS = ("wrist_x", "wrist_y", "wrist_z")
BATCH_COLUMNS = ("id",) + TARGET_COLUMNS + WRIST_COLUMNS + ("policy", "elbow_t")


def _blank_to_none(v: Any) -> Any:
    if isinstance(v, str) and not v.strip():
        return None
    return v


class BatchRecord(BaseModel):
    """One input row: a full target or a raw wrist point, plus an optional
    per-row policy override."""

    model_config = ConfigDict(extra="ignore")

    id: str = ""
    tip_x: Optional[float] = None
    tip_y: Optional[float] = None
    tip_z: Optional[float] = None
    ang_muneca: Optional[float] = None
    ang_mano: Optional[float] = None
    wrist_x: Optional[float] = None
    wrist_y: Optional[float] = None
    wrist_z: Optional[float] = None
    policy: Optional[Literal["fixed", "mid", "nearest"]] = None
    elbow_t: Optional[float] = None

    @field_validator(*TARGET_COLUMNS, *WRIST_COLUMNS, "policy", "elbow_t", mode="before")
    @classmethod
    def blank_is_missing(cls, v: Any) -> Any:
        return _blank_to_none(v)

    @model_validator(mode="after")
    def exactly_one_target_kind(self) -> "BatchRecord":
        target = [getattr(self, c) is not None for c in TARGET_COLUMNS]
        wrist = [getattr(self, c) is not None for c in WRIST_COLUMNS]
        if any(target) and not all(target):
            raise ValueError("incomplete target: need tip_x, tip_y, tip_z, ang_muneca and ang_mano")
        if any(wrist) and not all(wrist):
            raise ValueError("incomplete wrist: need wrist_x, wrist_y and wrist_z")
        if all(target) == all(wrist):
            raise ValueError("give exactly one of a target or a raw wrist")
        if self.policy == "fixed" and self.elbow_t is None:
            raise ValueError("policy 'fixed' needs elbow_t")
        return self

    @property
    def is_target(self) -> bool:
        return self.tip_x is not None

    def tip(self) -> Vec3:
        return as_vec3((self.tip_x, self.tip_y, self.tip_z))

    def wrist(self) -> Vec3:
        return as_vec3((self.wrist_x, self.wrist_y, self.wrist_z))


# ── CSV output ──────────────────────────────────────────────────────────────


def _result_columns() -> List[str]:
    cols = ["id", "status", "reason", "elbow_t"]
    for name in JOINT_NAMES:
        cols += [f"{name}_rad", f"{name}_deg"]
    for point in ("wrist", "elbow", "tip"):
        cols += [f"{point}_x", f"{point}_y", f"{point}_z"]
    return cols


RESULT_COLUMNS: Tuple[str, ...] = tuple(_result_columns())


class ResultRow(BaseModel):
    """One CSV output row. Solution columns stay empty when there is none."""

    model_config = ConfigDict(extra="forbid")

    id: str = ""
    status: str
    reason: str = ""
    elbow_t: Optional[float] = None
    hombro_z_rad: Optional[float] = None
    hombro_z_deg: Optional[float] = None
    hombro_x_rad: Optional[float] = None
    hombro_x_deg: Optional[float] = None
    brazo_rad: Optional[float] = None
    brazo_deg: Optional[float] = None
    codo_rad: Optional[float] = None
    codo_deg: Optional[float] = None
    muneca_rad: Optional[float] = None
    muneca_deg: Optional[float] = None
    mano_rad: Optional[float] = None
    mano_deg: Optional[float] = None
    pinza_rad: Optional[float] = None
    pinza_deg: Optional[float] = None
    wrist_x: Optional[float] = None
    wrist_y: Optional[float] = None
    wrist_z: Optional[float] = None
    elbow_x: Optional[float] = None
    elbow_y: Optional[float] = None
    elbow_z: Optional[float] = None
    tip_x: Optional[float] = None
    tip_y: Optional[float] = None
    tip_z: Optional[float] = None

    @field_validator(*RESULT_COLUMNS[3:], mode="before")
    @classmethod
    def blank_is_missing(cls, v: Any) -> Any:
        return _blank_to_none(v)

    @classmethod
    def parse_error(cls, row_id: str, message: str) -> "ResultRow":
        return cls(id=row_id, status=PARSE_ERROR, reason=message)

    @classmethod
    def of(
        cls,
        row_id: str,
        status: str,
        reason: str = "",
        solution: Optional[JointSolution] = None,
        wrist: Optional[Vec3] = None,
        elbow_t: Optional[float] = None,
    ) -> "ResultRow":
        values: Dict[str, Any] = {"id": row_id, "status": status, "reason": reason, "elbow_t": elbow_t}
        if wrist is not None:
            values.update(wrist_x=float(wrist[0]), wrist_y=float(wrist[1]), wrist_z=float(wrist[2]))
        if solution is not None:
            for name, rad in solution.joint_values().items():
                values[f"{name}_rad"] = rad
                values[f"{name}_deg"] = math.degrees(rad)
            for point in ("wrist", "elbow", "tip"):
                v = getattr(solution, point)
                values.update({f"{point}_{axis}": float(c) for axis, c in zip("xyz", v)})
        return cls(**values)

    @classmethod
    def from_report(cls, row_id: str, report: SolveReport) -> "ResultRow":
        if report.status is SolveStatus.SOLVED:
            reason = ""
        elif report.reason is not None:
            reason = report.reason.value
        else:
            reason = report.message
        return cls.of(
            row_id,
            report.status.value,
            reason,
            report.solution,
            None if report.wrist is None else report.wrist.m,
            report.elbow_t,
        )

    def to_csv(self) -> Dict[str, str]:
        out = {}
        for key, value in self.model_dump().items():
            out[key] = "" if value is None else (repr(float(value)) if isinstance(value, float) else str(value))
        return out


def write_rows(stream: IO[str], rows: Iterable[ResultRow]) -> int:
    """Header plus one line per row; returns the number of rows written."""
    writer = csv.DictWriter(stream, fieldnames=list(RESULT_COLUMNS))
    writer.writeheader()
    count = 0
    for row in rows:
        writer.writerow(row.to_csv())
        count += 1
    return count


def read_rows(stream: IO[str]) -> List[ResultRow]:
    return [ResultRow.model_validate(line) for line in csv.DictReader(stream)]
