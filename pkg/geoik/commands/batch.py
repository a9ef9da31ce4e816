"""'batch' command: solve every row of a CSV file."""

import csv
import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import typer
from pydantic import ValidationError
from rich.progress import BarColumn, MofNCompleteColumn, Progress, SpinnerColumn, TextColumn
from typing_extensions import Annotated

from geoik.arm_model import TargetPose
from geoik.commands.common import EXIT_OK, build_policy, fail, load_arm
from geoik.report import BatchRecord, ResultRow, write_rows
from geoik.solver import ElbowPolicy, FixedT, MidArc, NearestToCurrent, SolveReport, SolveRequest, solve_batch
from geoik.utils.logger import console, log_info, log_success, log_warning


def _error_text(exc: ValidationError) -> str:
    err = exc.errors()[0]
    message = err["msg"]
    if message.startswith("Value error, "):
        message = message[len("Value error, "):]
    loc = ".".join(str(part) for part in err["loc"])
    return f"{loc}: {message}" if loc else message


def _row_policy(record: BatchRecord, default: ElbowPolicy) -> ElbowPolicy:
    if record.policy is None:
        return default
    if record.policy == "fixed":
        return FixedT(record.elbow_t)
    return MidArc() if record.policy == "mid" else NearestToCurrent()


def parse_record(raw: Dict[str, str], default: ElbowPolicy, body: bool) -> Tuple[str, SolveRequest]:
    """Row id and request for one CSV line.

    Raises:
        ValueError: the row is malformed (pydantic's ValidationError included).
    """
    record = BatchRecord.model_validate(raw)
    policy = _row_policy(record, default)
    if record.is_target:
        target = TargetPose.of(record.tip(), record.ang_muneca, record.ang_mano)
        return record.id, SolveRequest(target=target, policy=policy, body_constraint=body)
    return record.id, SolveRequest.for_wrist(record.wrist(), policy=policy, body_constraint=body)


def _read_input(path: Path) -> List[Dict[str, str]]:
    try:
        with path.open(newline="", encoding="utf-8") as f:
            return list(csv.DictReader(f))
    except (OSError, UnicodeDecodeError, csv.Error) as e:
        raise fail(f"cannot read {path}: {e}")


def batch(
    input_file: Annotated[Path, typer.Argument(help="Input CSV (id, tip_x..ang_mano or wrist_x..wrist_z)")],
    geometry: Annotated[Optional[Path], typer.Option("--geometry", "-g", help="Geometry JSON file")] = None,
    out: Annotated[Optional[Path], typer.Option("--out", "-o", help="Output CSV (default: stdout)")] = None,
    policy: Annotated[Optional[str], typer.Option("--policy", help="Default elbow policy: fixed | mid | nearest")] = None,
    elbow_t: Annotated[Optional[float], typer.Option("--elbow-t", help="Circle parameter for the fixed policy (rad)")] = None,
    constraints: Annotated[Optional[str], typer.Option("--constraints", help="none | right-body | left-body")] = None,
    workers: Annotated[int, typer.Option("--workers", "-w", help="Solver threads")] = 1,
) -> None:
    """Solve every row of a CSV file; one output row per input row, same order."""
    geom, limits, body = load_arm(geometry, constraints)
    default_policy = build_policy(policy, elbow_t)
    if workers < 1:
        raise fail("--workers must be at least 1")

    rows = _read_input(input_file)
    results: List[Optional[ResultRow]] = [None] * len(rows)
    pending: List[Tuple[int, str, SolveRequest]] = []
    for i, raw in enumerate(rows):
        row_id = (raw.get("id") or "").strip()
        try:
            row_id, request = parse_record(raw, default_policy, body)
        except ValidationError as e:
            results[i] = ResultRow.parse_error(row_id, _error_text(e))
        except ValueError as e:
            results[i] = ResultRow.parse_error(row_id, str(e))
        else:
            pending.append((i, row_id, request))

    parse_errors = len(rows) - len(pending)
    if parse_errors:
        log_warning(f"{parse_errors} row(s) could not be parsed")

    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        console=console,
        transient=True,
        disable=out is None,
    ) as progress:
        task = progress.add_task("Solving", total=len(pending))

        def advance(_: SolveReport) -> None:
            progress.advance(task)

        reports = solve_batch([req for _, _, req in pending], geom, limits, workers, on_result=advance)

    for (i, row_id, _), report in zip(pending, reports):
        results[i] = ResultRow.from_report(row_id, report)

    solved = sum(1 for r in reports if r.solved)
    if out is None:
        write_rows(sys.stdout, results)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        with out.open("w", newline="", encoding="utf-8") as f:
            write_rows(f, results)
        log_success(f"{solved}/{len(rows)} solved; results written to [bold]{out}[/bold]")
    if not rows:
        log_info("input has no rows")
    raise typer.Exit(EXIT_OK)
