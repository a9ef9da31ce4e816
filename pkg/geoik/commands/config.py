"""'config' command: create or inspect the default geometry document."""

import math
from pathlib import Path
from typing import Optional

import typer
from rich.table import Table
from typing_extensions import Annotated

from geoik.arm_model import JOINT_NAMES, ArmGeometry, JointLimits
from geoik.commands.common import fail
from geoik.config_manager import EXAMPLE_GEOMETRY, ConfigManager
from geoik.errors import GeoIKError
from geoik.utils.logger import console, log_success, log_warning


def config(
    init: Annotated[bool, typer.Option("--init", help="Write the example geometry to the default location")] = False,
    force: Annotated[bool, typer.Option("--force", help="Overwrite an existing geometry with --init")] = False,
    show: Annotated[bool, typer.Option("--show", help="Print the resolved geometry")] = False,
    geometry: Annotated[Optional[Path], typer.Option("--geometry", "-g", help="Show this file instead")] = None,
) -> None:
    """View the active geometry, or create the default one."""
    config_manager = ConfigManager()

    if init:
        if config_manager.config_path.exists() and not force:
            log_warning(f"{config_manager.config_path} already exists (use --force to overwrite)")
        else:
            path = config_manager.save(EXAMPLE_GEOMETRY)
            log_success(f"Example geometry written to [bold]{path}[/bold]")

    if show or not init:
        try:
            geom, limits = config_manager.load(geometry)
        except GeoIKError as e:
            raise fail(str(e))
        _print_config(geometry or config_manager.config_path, geom, limits)


def _print_config(path: Path, geom: ArmGeometry, limits: JointLimits) -> None:
    """Render the geometry and joint limits as a Rich table."""
    table = Table(title="[bold cyan]geoik Geometry[/bold cyan]", show_header=True)
    table.add_column("Setting", style="bold")
    table.add_column("Value", style="green")

    table.add_row("Geometry file", str(path))
    table.add_row("d1 (upper arm)", f"{geom.d1:g}")
    table.add_row("d2 (forearm)", f"{geom.d2:g}")
    table.add_row("long_mano (hand)", f"{geom.long_mano:g}")
    table.add_row("Side", geom.side)
    table.add_row("Wrist mount offset", f"{math.degrees(geom.wrist_mount_offset):.2f}°")
    for joint in JOINT_NAMES:
        lo, hi = limits.interval(joint)
        table.add_row(f"limits.{joint}", f"[{math.degrees(lo):.2f}°, {math.degrees(hi):.2f}°]")

    console.print()
    console.print(table)
    console.print()
