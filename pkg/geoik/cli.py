"""geoik: main Typer CLI entry point."""

import typer
from rich import print as rprint

from geoik import __app_name__, __version__
from geoik.commands.batch import batch
from geoik.commands.config import config
from geoik.commands.solve import solve
from geoik.commands.sweep import sweep
from geoik.utils.logger import console

ASCII_BANNER = r"""
  ██████╗ ███████╗ ██████╗ ██╗██╗  ██╗
 ██╔════╝ ██╔════╝██╔═══██╗██║██║ ██╔╝
 ██║  ███╗█████╗  ██║   ██║██║█████╔╝
 ██║   ██║██╔══╝  ██║   ██║██║██╔═██╗
 ╚██████╔╝███████╗╚██████╔╝██║██║  ██╗
  ╚═════╝ ╚══════╝ ╚═════╝ ╚═╝╚═╝  ╚═╝
"""


def _print_banner() -> None:
    """Print the ASCII art banner with Rich styling."""
    lines = ASCII_BANNER.rstrip().splitlines()
    colors = ["bright_cyan", "cyan"]
    for i, line in enumerate(lines):
        color = colors[i % len(colors)]
        console.print(f"[bold {color}]{line}[/bold {color}]")
    console.print()
    console.print(
        f"  [dim]Hand pose[/dim] [bold magenta]→[/bold magenta] "
        f"[dim]Joint angles[/dim]   [dim]v{__version__}[/dim]"
    )
    console.print()


app = typer.Typer(
    name=__app_name__,
    help=(
        "[bold cyan]geoik[/bold cyan]: closed-form inverse kinematics for a 7-DOF arm.\n\n"
        "Solve single targets, batch CSV files, and sweep the elbow's redundancy circle."
    ),
    add_completion=True,
    rich_markup_mode="rich",
    no_args_is_help=False,
)


def _version_callback(value: bool) -> None:
    if value:
        rprint(f"[bold cyan]{__app_name__}[/bold cyan] version [bold]{__version__}[/bold]")
        raise typer.Exit()


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    version: bool = typer.Option(
        None,
        "--version",
        "-V",
        help="Show version and exit.",
        callback=_version_callback,
        is_eager=True,
    ),
) -> None:
    """Closed-form inverse kinematics for a 7-DOF arm."""
    if ctx.invoked_subcommand is None:
        _print_banner()
        console.print(ctx.get_help())
        raise typer.Exit(0)


app.command()(solve)
app.command()(batch)
app.command()(sweep)
app.command()(config)
