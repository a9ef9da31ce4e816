"""'solve' command: one target in, one JSON report out."""

import json
from pathlib import Path
from typing import Optional

import typer
from typing_extensions import Annotated

from geoik.commands.common import (
    EXIT_INFEASIBLE,
    EXIT_OK,
    build_policy,
    build_request,
    fail,
    load_arm,
)
from geoik.errors import ConfigError
from geoik.report import ReportDoc, load_current
from geoik.solver import IKSolver, NearestToCurrent, SolveStatus
from geoik.utils.logger import log_error, log_panel, log_success, log_warning


def solve(
    geometry: Annotated[Optional[Path], typer.Option("--geometry", "-g", help="Geometry JSON file")] = None,
    wrist: Annotated[Optional[str], typer.Option("--wrist", help="Raw wrist point x,y,z")] = None,
    tip: Annotated[Optional[str], typer.Option("--tip", help="Hand tip x,y,z")] = None,
    ang_muneca: Annotated[Optional[float], typer.Option("--ang-muneca", help="Hand polar angle from +Z (rad)")] = None,
    ang_mano: Annotated[Optional[float], typer.Option("--ang-mano", help="Hand azimuth from +X (rad)")] = None,
    elbow_t: Annotated[Optional[float], typer.Option("--elbow-t", help="Circle parameter for the fixed policy (rad)")] = None,
    policy: Annotated[Optional[str], typer.Option("--policy", help="Elbow policy: fixed | mid | nearest")] = None,
    current: Annotated[Optional[Path], typer.Option("--current", help="Previous report; current pose for 'nearest'")] = None,
    constraints: Annotated[Optional[str], typer.Option("--constraints", help="none | right-body | left-body")] = None,
    gripper: Annotated[float, typer.Option("--gripper", help="Gripper opening (rad)")] = 0.0,
    out: Annotated[Optional[Path], typer.Option("--out", "-o", help="Write the report here instead of stdout")] = None,
    schema: Annotated[bool, typer.Option("--schema", help="Print the report JSON schema and exit")] = False,
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Log each pipeline stage")] = False,
) -> None:
    """Solve a single target and print the report as JSON."""
    if schema:
        typer.echo(json.dumps(ReportDoc.model_json_schema(), indent=2))
        raise typer.Exit(EXIT_OK)

    geom, limits, body = load_arm(geometry, constraints)
    elbow_policy = build_policy(policy, elbow_t)

    current_pose = None
    if current is not None:
        if not isinstance(elbow_policy, NearestToCurrent):
            raise fail("--current only applies to --policy nearest")
        try:
            current_pose = load_current(current)
        except ConfigError as e:
            raise fail(str(e))
    elif isinstance(elbow_policy, NearestToCurrent):
        log_warning("no --current pose given; using the middle of the feasible arc")

    request = build_request(
        wrist, tip, ang_muneca, ang_mano,
        policy=elbow_policy, current=current_pose, body_constraint=body, gripper=gripper,
    )
    report = IKSolver(geom, limits, verbose=verbose).solve(request)
    doc = ReportDoc.from_report(report)
    text = doc.model_dump_json(indent=2)
    if verbose and doc.solution is not None:
        _print_joints(doc)

    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text + "\n", encoding="utf-8")
    else:
        typer.echo(text)

    if report.status is SolveStatus.SOLVED:
        if out is not None:
            log_success(f"Solved; report written to [bold]{out}[/bold]")
        raise typer.Exit(EXIT_OK)
    label = report.reason.value if report.reason is not None else report.status.value
    log_error(f"{label}: {report.message}")
    raise typer.Exit(EXIT_INFEASIBLE)


def _print_joints(doc: ReportDoc) -> None:
    lines = [f"{name:<9} {value.deg:9.3f}°" for name, value in doc.solution.joints.items()]
    lines.append(f"{'elbow_t':<9} {doc.elbow_t:9.5f} rad")
    log_panel("\n".join(lines), title="Joint angles", style="green")
