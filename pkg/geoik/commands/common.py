"""Option parsing shared by the solve, batch and sweep commands.

Every helper reports bad input through the logger and exits with code 1.
"""

from pathlib import Path
from typing import Optional, Tuple

import typer

from geoik.arm_model import ArmGeometry, JointLimits, TargetPose
from geoik.config_manager import ConfigManager
from geoik.errors import GeoIKError
from geoik.geom3 import Vec3, as_vec3
from geoik.solver import ElbowPolicy, FixedT, MidArc, NearestToCurrent, SolveRequest
from geoik.utils.logger import log_error

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2

POLICY_CHOICES = ["fixed", "mid", "nearest"]
CONSTRAINT_CHOICES = ["none", "right-body", "left-body"]


def fail(message: str) -> typer.Exit:
    """Log ``message`` and build the usage-error exit."""
    log_error(message)
    return typer.Exit(EXIT_USAGE)


def parse_point(text: str, flag: str) -> Vec3:
    """``"x,y,z"`` → Vec3."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise fail(f"{flag} expects three comma-separated numbers, got '{text}'")
    try:
        return as_vec3(float(p) for p in parts)
    except (ValueError, GeoIKError):
        raise fail(f"{flag} expects three finite numbers, got '{text}'")


def load_arm(geometry: Optional[Path], constraints: Optional[str]) -> Tuple[ArmGeometry, JointLimits, bool]:
    """Geometry, limits and whether the body constraint applies.

    ``right-body``/``left-body`` override the side stored in the geometry.
    """
    if constraints is not None and constraints not in CONSTRAINT_CHOICES:
        raise fail(f"Invalid constraints '{constraints}'. Choose from: {', '.join(CONSTRAINT_CHOICES)}")
    try:
        geom, limits = ConfigManager().load(geometry)
    except GeoIKError as e:
        raise fail(str(e))
    if constraints == "right-body":
        geom = geom.model_copy(update={"side": "right"})
    elif constraints == "left-body":
        geom = geom.model_copy(update={"side": "left"})
    return geom, limits, constraints != "none"


def build_policy(policy: Optional[str], elbow_t: Optional[float]) -> ElbowPolicy:
    """``--elbow-t`` alone means a fixed policy; no flags mean the arc midpoint."""
    if policy is None:
        policy = "fixed" if elbow_t is not None else "mid"
    if policy not in POLICY_CHOICES:
        raise fail(f"Invalid policy '{policy}'. Choose from: {', '.join(POLICY_CHOICES)}")
    if policy != "fixed":
        if elbow_t is not None:
            raise fail("--elbow-t only applies to the fixed policy")
        return MidArc() if policy == "mid" else NearestToCurrent()
    if elbow_t is None:
        raise fail("the fixed policy needs --elbow-t")
    try:
        return FixedT(elbow_t)
    except ValueError as e:
        raise fail(str(e))


def build_request(
    wrist: Optional[str],
    tip: Optional[str],
    ang_muneca: Optional[float],
    ang_mano: Optional[float],
    **kwargs,
) -> SolveRequest:
    """Request from the target flags: ``--wrist`` (optionally with ``--tip``),
    or ``--tip`` with both hand angles."""
    angles = (ang_muneca, ang_mano)
    if wrist is not None:
        if any(a is not None for a in angles):
            raise fail("--ang-muneca/--ang-mano describe a target; do not combine them with --wrist")
        tip_point = None if tip is None else parse_point(tip, "--tip")
        return SolveRequest.for_wrist(parse_point(wrist, "--wrist"), tip_point, **kwargs)
    if tip is None:
        raise fail("give a target: --wrist x,y,z or --tip x,y,z --ang-muneca r --ang-mano r")
    if any(a is None for a in angles):
        raise fail("--tip needs both --ang-muneca and --ang-mano")
    return SolveRequest(target=TargetPose.of(parse_point(tip, "--tip"), ang_muneca, ang_mano), **kwargs)
