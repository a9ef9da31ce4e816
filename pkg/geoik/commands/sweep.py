"""'sweep' command: sample the whole family of elbow positions for one target."""

import sys
from pathlib import Path
from typing import Optional

import typer
from typing_extensions import Annotated

from geoik.commands.common import EXIT_INFEASIBLE, EXIT_OK, build_request, fail, load_arm
from geoik.report import ResultRow, write_rows
from geoik.solver import IKSolver, SolveStatus
from geoik.utils.logger import log_error, log_success


def sweep(
    geometry: Annotated[Optional[Path], typer.Option("--geometry", "-g", help="Geometry JSON file")] = None,
    wrist: Annotated[Optional[str], typer.Option("--wrist", help="Raw wrist point x,y,z")] = None,
    tip: Annotated[Optional[str], typer.Option("--tip", help="Hand tip x,y,z")] = None,
    ang_muneca: Annotated[Optional[float], typer.Option("--ang-muneca", help="Hand polar angle from +Z (rad)")] = None,
    ang_mano: Annotated[Optional[float], typer.Option("--ang-mano", help="Hand azimuth from +X (rad)")] = None,
    samples: Annotated[int, typer.Option("--samples", "-n", help="Number of t values, endpoints included")] = 37,
    constraints: Annotated[Optional[str], typer.Option("--constraints", help="none | right-body | left-body")] = None,
    out: Annotated[Optional[Path], typer.Option("--out", "-o", help="Output CSV (default: stdout)")] = None,
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Log each pipeline stage")] = False,
) -> None:
    """Solutions at evenly spaced t over the feasible arc, as CSV."""
    if samples < 2:
        raise fail(f"--samples must be at least 2, got {samples}")
    geom, limits, body = load_arm(geometry, constraints)
    request = build_request(wrist, tip, ang_muneca, ang_mano, body_constraint=body)

    result = IKSolver(geom, limits, verbose=verbose).sweep(request, samples)
    if not result.rows:
        report = result.report
        label = report.reason.value if report.reason is not None else report.status.value
        log_error(f"{label}: {report.message}")
        raise typer.Exit(EXIT_INFEASIBLE)

    rows = []
    for i, (t, sol, violations) in enumerate(result.rows):
        status = SolveStatus.OUT_OF_LIMITS if violations else SolveStatus.SOLVED
        reason = " ".join(v.joint for v in violations)
        rows.append(ResultRow.of(str(i), status.value, reason, sol, sol.wrist, t))

    if out is None:
        write_rows(sys.stdout, rows)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        with out.open("w", newline="", encoding="utf-8") as f:
            write_rows(f, rows)
        log_success(f"{len(rows)} samples written to [bold]{out}[/bold]")
    raise typer.Exit(EXIT_OK)
