"""End-to-end pipeline: target → wrist → circle → feasible arc → elbow → angles.

Failures are reported as data (:class:`SolveReport`), never raised. Each
report carries the diagnostics of the stages that ran; stages after the
first failure leave their fields empty.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from geoik.arm_model import ArmGeometry, JointAngles, JointLimits, JointSolution, TargetPose
from geoik.decouple import WristPoint, orientation_from_points, wrist_from_target
from geoik.elbow_circle import (
    TWO_PI,
    ArcSet,
    BodyHalfSpace,
    Reachability,
    RedundancyCircle,
    feasible_arc,
    point_at,
    reachability,
    redundancy_circle,
    with_arc,
)
from geoik.errors import GeoIKError, PolicyViolation
from geoik.geom3 import Vec3, as_vec3
from geoik.pose_angles import elbow_angle, hand_angles, shoulder_angles, upper_arm_roll
from geoik.utils.logger import log_step, log_warning

PIPELINE_STAGES = 6
# Joint values may overshoot a limit by this much (rounding) and still pass.
LIMIT_TOL = 1e-9


# ── elbow policies ──────────────────────────────────────────────────────────


@dataclass(frozen=True)
class FixedT:
    """Use exactly this circle parameter."""

    t: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.t < TWO_PI):
            raise ValueError(f"fixed t must lie in [0, 2π), got {self.t}")


@dataclass(frozen=True)
class MidArc:
    """Middle of the (longest) feasible arc."""


@dataclass(frozen=True)
class NearestToCurrent:
    """Closest pose to the current one in joint space.

    The arc is scanned at ``resolution`` samples per turn, then the best
    bracket is refined by bounded scalar minimisation.
    """

    resolution: int = 360
    xatol: float = 1e-8


ElbowPolicy = Union[FixedT, MidArc, NearestToCurrent]


def _wrapped(delta: np.ndarray) -> np.ndarray:
    return (delta + math.pi) % TWO_PI - math.pi


def joint_distance(a: JointAngles, b: JointAngles) -> float:
    """Squared joint-space distance, angle differences wrapped to (-π, π]."""
    d = _wrapped(a.joint_vector() - b.joint_vector())
    return float(np.dot(d, d))


def select_elbow(
    circle: RedundancyCircle,
    policy: ElbowPolicy,
    current: Optional[JointAngles] = None,
    evaluate: Optional[Callable[[float], JointAngles]] = None,
) -> float:
    """Pick one t on the circle's feasible arc.

    NearestToCurrent without a current pose falls back to the arc midpoint.

    Raises:
        PolicyViolation: empty arc, or a fixed t outside it.
    """
    arcs = circle.feasible_arc
    if arcs.is_empty:
        raise PolicyViolation("feasible arc is empty")

    if isinstance(policy, FixedT):
        if not arcs.contains(policy.t):
            raise PolicyViolation(f"t = {policy.t:.6f} lies outside the feasible arc {arcs.as_pairs()}")
        return policy.t

    if isinstance(policy, MidArc) or current is None:
        return arcs.midpoint()

    if evaluate is None:
        raise ValueError("NearestToCurrent needs an evaluate callback")

    def cost(t: float) -> float:
        try:
            return joint_distance(evaluate(t), current)
        except GeoIKError:
            return math.inf

    count = max(3, int(math.ceil(policy.resolution * arcs.total_length / TWO_PI)) + 1)
    ts = arcs.sample(count)
    costs = [cost(t) for t in ts]
    best = int(np.argmin(costs))
    lo, hi = ts[max(best - 1, 0)], ts[min(best + 1, count - 1)]
    t_best = ts[best]
    step = arcs.total_length / (count - 1)
    # Neighbouring samples may sit on different arcs; only refine within one.
    if lo < hi <= lo + 2 * step + 1e-12:
        res = minimize_scalar(cost, bounds=(lo, hi), method="bounded", options={"xatol": policy.xatol})
        if res.fun <= costs[best]:
            t_best = float(res.x)
    return math.fmod(t_best, TWO_PI)


# ── requests and reports ────────────────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class SolveRequest:
    """Either a full target pose, or a raw wrist point (optionally with a tip)."""

    target: Optional[TargetPose] = None
    wrist: Optional[Vec3] = None
    tip: Optional[Vec3] = None
    policy: ElbowPolicy = field(default_factory=MidArc)
    current: Optional[JointAngles] = None
    body_constraint: bool = True
    gripper: float = 0.0

    def __post_init__(self) -> None:
        if (self.target is None) == (self.wrist is None):
            raise ValueError("give exactly one of target or wrist")
        if self.target is not None and self.tip is not None:
            raise ValueError("tip comes from the target; do not pass both")

    @classmethod
    def for_wrist(cls, wrist, tip=None, **kwargs) -> "SolveRequest":
        return cls(wrist=as_vec3(wrist), tip=None if tip is None else as_vec3(tip), **kwargs)


class SolveStatus(str, Enum):
    SOLVED = "Solved"
    INFEASIBLE = "Infeasible"
    OUT_OF_LIMITS = "OutOfLimits"


class FailureReason(str, Enum):
    TOO_FAR = "TooFar"
    TOO_CLOSE = "TooClose"
    WRIST_AT_SHOULDER = "WristAtShoulder"
    DEGENERATE_INPUT = "DegenerateInput"
    NO_VALID_ELBOW = "NoValidElbow"
    POLICY_VIOLATION = "PolicyViolation"
    INTERNAL_INCONSISTENCY = "InternalInconsistency"


@dataclass(frozen=True)
class LimitViolation:
    joint: str
    value: float
    lo: float
    hi: float

    def __str__(self) -> str:
        return f"{self.joint} = {self.value:.6f} outside [{self.lo:.6f}, {self.hi:.6f}]"


@dataclass(frozen=True, eq=False)
class SolveReport:
    status: SolveStatus
    reason: Optional[FailureReason] = None
    message: str = ""
    violations: Tuple[LimitViolation, ...] = ()
    solution: Optional[JointSolution] = None
    reachability: Optional[Reachability] = None
    wrist: Optional[WristPoint] = None
    circle: Optional[RedundancyCircle] = None
    feasible_arc: Optional[ArcSet] = None
    elbow_t: Optional[float] = None

    @property
    def solved(self) -> bool:
        return self.status is SolveStatus.SOLVED


def validate_limits(solution: JointAngles, limits: JointLimits) -> List[LimitViolation]:
    """Joints whose value leaves its closed interval."""
    out = []
    for joint, value in solution.joint_values().items():
        lo, hi = limits.interval(joint)
        if not lo - LIMIT_TOL <= value <= hi + LIMIT_TOL:
            out.append(LimitViolation(joint, value, lo, hi))
    return out


# ── pipeline ────────────────────────────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class SweepResult:
    report: SolveReport
    rows: List[Tuple[float, JointSolution, List[LimitViolation]]]


@dataclass(frozen=True, eq=False)
class _Prepared:
    wrist: WristPoint
    tip: Optional[Vec3]
    orientation: Optional[Tuple[float, float]]


class IKSolver:
    """Stateless closed-form solver bound to one arm geometry."""

    def __init__(
        self,
        geom: ArmGeometry,
        limits: Optional[JointLimits] = None,
        verbose: bool = False,
        arc_resolution: int = 720,
    ) -> None:
        self._geom = geom
        self._limits = limits or JointLimits()
        self._verbose = verbose
        self._arc_resolution = arc_resolution
        self._body = BodyHalfSpace(side=geom.side)

    @property
    def geometry(self) -> ArmGeometry:
        return self._geom

    @property
    def limits(self) -> JointLimits:
        return self._limits

    def _log(self, step: int, message: str) -> None:
        if self._verbose:
            log_step(step, PIPELINE_STAGES, message)

    def solution_at(
        self,
        wrist: WristPoint,
        circle: RedundancyCircle,
        t: float,
        tip: Optional[Vec3] = None,
        orientation: Optional[Tuple[float, float]] = None,
        gripper: float = 0.0,
    ) -> JointSolution:
        """Full joint solution for the elbow at circle parameter ``t``.

        Without a tip the hand is held straight along the forearm.
        """
        geom = self._geom
        elbow = point_at(circle, t)
        shoulder = shoulder_angles(elbow, geom)
        bend = elbow_angle(wrist, circle, geom)
        if tip is None:
            tip = wrist.m + geom.long_mano * (wrist.m - elbow) / geom.d2
            orientation = orientation_from_points(tip, wrist.m)
        assert orientation is not None
        hand = hand_angles(elbow, wrist, circle, tip, geom.wrist_mount_offset)
        return JointSolution(
            ang_hombro_z=shoulder.ang_hombro_z,
            ang_hombro_x=shoulder.ang_hombro_x,
            elbow_t=t,
            ang_codo=bend.ang_codo,
            wrist_roll_total=hand.wrist_roll_total,
            hand_flex=hand.hand_flex,
            gripper=gripper,
            upper_arm_roll=upper_arm_roll(elbow, wrist.m),
            shoulder_x_sign=shoulder.x_sign,
            elbow_above_shoulder=shoulder.elbow_above_shoulder,
            hand_polar=orientation[0],
            hand_azimuth=orientation[1],
            wrist=wrist.m,
            elbow=elbow,
            tip=tip,
            circle=circle,
            hand_plane_degenerate=hand.degenerate_plane,
        )

    def _prepare(self, request: SolveRequest) -> _Prepared:
        if request.target is not None:
            target = request.target
            return _Prepared(
                wrist_from_target(target, self._geom),
                target.tip,
                (target.ang_muneca, target.ang_mano),
            )
        wrist = WristPoint(as_vec3(request.wrist))
        if request.tip is None:
            return _Prepared(wrist, None, None)
        tip = as_vec3(request.tip)
        return _Prepared(wrist, tip, orientation_from_points(tip, wrist.m))

    def _circle_stage(self, request: SolveRequest) -> Union[SolveReport, Tuple[_Prepared, RedundancyCircle]]:
        """Stages 1–4; returns a failed report or the prepared wrist and circle."""
        self._log(1, "Decoupling: wrist point from target")
        try:
            prep = self._prepare(request)
        except GeoIKError as e:
            return SolveReport(SolveStatus.INFEASIBLE, FailureReason.DEGENERATE_INPUT, str(e))

        self._log(2, f"Reachability of wrist {np.round(prep.wrist.m, 6).tolist()}")
        reach = reachability(prep.wrist, self._geom)
        if not reach.has_circle:
            return SolveReport(
                SolveStatus.INFEASIBLE,
                FailureReason(reach.value),
                f"wrist at distance {prep.wrist.distance:.6g} is {reach.value}",
                reachability=reach,
                wrist=prep.wrist,
            )

        self._log(3, "Redundancy circle")
        try:
            circle = redundancy_circle(prep.wrist, self._geom)
        except GeoIKError as e:
            return SolveReport(
                SolveStatus.INFEASIBLE, FailureReason.INTERNAL_INCONSISTENCY, str(e),
                reachability=reach, wrist=prep.wrist,
            )

        self._log(4, "Feasible arc")
        body = self._body if request.body_constraint else None
        circle = with_arc(circle, feasible_arc(circle, body))
        if circle.feasible_arc.is_empty:
            return SolveReport(
                SolveStatus.INFEASIBLE, FailureReason.NO_VALID_ELBOW,
                "no elbow position on the circle satisfies the constraints",
                reachability=reach, wrist=prep.wrist, circle=circle, feasible_arc=circle.feasible_arc,
            )
        return prep, circle

    def solve(self, request: SolveRequest) -> SolveReport:
        staged = self._circle_stage(request)
        if isinstance(staged, SolveReport):
            return staged
        prep, circle = staged
        reach = reachability(prep.wrist, self._geom)

        def evaluate(t: float) -> JointSolution:
            return self.solution_at(prep.wrist, circle, t, prep.tip, prep.orientation, request.gripper)

        partial = dict(reachability=reach, wrist=prep.wrist, circle=circle, feasible_arc=circle.feasible_arc)

        self._log(5, f"Elbow selection ({type(request.policy).__name__})")
        try:
            t = select_elbow(circle, request.policy, request.current, evaluate)
        except PolicyViolation as e:
            return SolveReport(SolveStatus.INFEASIBLE, FailureReason.POLICY_VIOLATION, str(e), **partial)

        self._log(6, f"Joint angles at t = {t:.6f}")
        try:
            solution = evaluate(t)
            violations = validate_limits(solution, self._limits)
            if violations and isinstance(request.policy, NearestToCurrent) and request.current is not None:
                circle, t, solution, violations = self._readjust(prep, circle, request, t, solution, violations)
                partial.update(circle=circle, feasible_arc=circle.feasible_arc)
        except GeoIKError as e:
            return SolveReport(
                SolveStatus.INFEASIBLE, FailureReason.INTERNAL_INCONSISTENCY, str(e), elbow_t=t, **partial
            )

        if violations:
            return SolveReport(
                SolveStatus.OUT_OF_LIMITS,
                message="; ".join(str(v) for v in violations),
                violations=tuple(violations),
                solution=solution,
                elbow_t=t,
                **partial,
            )
        return SolveReport(SolveStatus.SOLVED, solution=solution, elbow_t=t, **partial)

    def _readjust(
        self,
        prep: _Prepared,
        circle: RedundancyCircle,
        request: SolveRequest,
        t: float,
        solution: JointSolution,
        violations: List[LimitViolation],
    ) -> Tuple[RedundancyCircle, float, JointSolution, List[LimitViolation]]:
        """Retry the nearest-pose choice on the limit-satisfying part of the arc."""
        if self._verbose:
            log_warning(f"{len(violations)} limit violation(s) at t = {t:.6f}; searching the arc again")

        def within_limits(s: float) -> bool:
            sol = self.solution_at(prep.wrist, circle, s, prep.tip, prep.orientation, request.gripper)
            return not validate_limits(sol, self._limits)

        body = self._body if request.body_constraint else None
        arcs = feasible_arc(circle, body, within_limits, self._arc_resolution)
        if arcs.is_empty:
            return circle, t, solution, violations
        narrowed = with_arc(circle, arcs)

        def evaluate(s: float) -> JointSolution:
            return self.solution_at(prep.wrist, narrowed, s, prep.tip, prep.orientation, request.gripper)

        t = select_elbow(narrowed, request.policy, request.current, evaluate)
        solution = evaluate(t)
        return narrowed, t, solution, validate_limits(solution, self._limits)

    def sweep(self, request: SolveRequest, samples: int) -> SweepResult:
        """Solutions at ``samples`` values of t spread over the feasible arc."""
        staged = self._circle_stage(request)
        if isinstance(staged, SolveReport):
            return SweepResult(staged, [])
        prep, circle = staged
        rows = []
        for t in circle.feasible_arc.sample(samples):
            sol = self.solution_at(prep.wrist, circle, t, prep.tip, prep.orientation, request.gripper)
            rows.append((t, sol, validate_limits(sol, self._limits)))
        report = SolveReport(
            SolveStatus.SOLVED,
            reachability=reachability(prep.wrist, self._geom),
            wrist=prep.wrist,
            circle=circle,
            feasible_arc=circle.feasible_arc,
        )
        return SweepResult(report, rows)


def solve(request: SolveRequest, geom: ArmGeometry, limits: Optional[JointLimits] = None) -> SolveReport:
    return IKSolver(geom, limits).solve(request)


def solve_batch(
    requests: Sequence[SolveRequest],
    geom: ArmGeometry,
    limits: Optional[JointLimits] = None,
    workers: int = 1,
    on_result: Optional[Callable[[SolveReport], None]] = None,
) -> List[SolveReport]:
    """Solve many requests; results keep the input order.

    ``on_result`` is called once per report, in input order, as results
    become available.
    """
    solver = IKSolver(geom, limits)
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    results: Iterable[SolveReport] = pool.map(solver.solve, requests) if pool else map(solver.solve, requests)
    reports: List[SolveReport] = []
    try:
        for report in results:
            reports.append(report)
            if on_result is not None:
                on_result(report)
    finally:
        if pool is not None:
            pool.shutdown()
    return reports
