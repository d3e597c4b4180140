#!/usr/bin/env python3
"""
Kernel analysis CLI
Runs the gallery instances and problem files through the uniqueness analysis
"""

import sys
from pathlib import Path
from typing import List, Optional

import typer
from rich import box
from rich.console import Console
from rich.table import Table

from core.constants import EXIT_OK, EXIT_USAGE, EXIT_VALIDATION
from gallery_registry import get_gallery_registry
from kernel_lab import AnalysisConfig, analyze_file, export_gallery, run_galleries, run_gallery
from kernel_lab.reports import REPORT_FORMATS
from kernel_lab.utils import default_workers, parse_depth_range, setup_logging

console = Console()
app = typer.Typer(
    name="kernels",
    help="Averaging-operator kernels on discretized surjections",
    add_completion=False,
    rich_markup_mode="rich",
)

# typer may ship its own click, so the usage-error base comes from typer's classes
USAGE_ERROR = next(cls for cls in typer.BadParameter.__mro__ if cls.__name__ == "UsageError")

VERDICT_STYLES = {
    "unique": "green",
    "non-unique": "cyan",
    "none-found": "magenta",
    "inconclusive": "yellow",
}


def _analysis_config(lipschitz, atom_tol, fiber_tol, delta, openness_ratio, smoothing, max_sets,
                     report_format, workers, depths=None, mass_L=None) -> AnalysisConfig:
    if report_format not in REPORT_FORMATS:
        raise typer.BadParameter(f"expected one of {', '.join(REPORT_FORMATS)}", param_hint="--format")
    try:
        depth_list = parse_depth_range(depths)
    except ValueError:
        raise typer.BadParameter(f"cannot parse depth range '{depths}'", param_hint="--depths")
    return AnalysisConfig(
        lipschitz_bound=lipschitz,
        atom_tol=atom_tol,
        fiber_tol=fiber_tol,
        delta=delta,
        openness_ratio=openness_ratio,
        smoothing=smoothing,
        max_sets=max_sets,
        report_format=report_format,
        workers=workers if workers is not None else default_workers(),
        depths=depth_list,
        mass_L=mass_L,
    )


def _resolution(name: str, mesh: Optional[float], depth: Optional[int]):
    gallery = get_gallery_registry().get_gallery(name)
    if gallery is None:
        raise typer.BadParameter(f"unknown gallery '{name}'. Available: "
                                 f"{', '.join(get_gallery_registry().list_galleries())}", param_hint="NAME")
    if gallery.uses_depth:
        if mesh is not None:
            raise typer.BadParameter(f"{name} is indexed by depth", param_hint="--mesh")
        return depth
    if depth is not None:
        raise typer.BadParameter(f"{name} is indexed by mesh", param_hint="--depth")
    return mesh


def _start_logging(command: str, debug: bool, out: Path):
    try:
        setup_logging(debug, out, command)
    except OSError as e:
        console.print(f"[bold red]✗ cannot write to {out}:[/bold red] {e}")
        raise typer.Exit(code=EXIT_VALIDATION)


def _show_result(result) -> int:
    if not result["success"]:
        console.print(f"[bold red]✗ {result['name']}:[/bold red] {result['error']}")
        return result.get("exit_code", EXIT_VALIDATION)

    report = result["uniqueness"]
    style = VERDICT_STYLES.get(report.verdict, "white")
    table = Table(title=f"{result['name']}", box=box.SIMPLE, show_header=False)
    table.add_column("field", style="bold")
    table.add_column("value")
    table.add_row("verdict", f"[{style}]{report.verdict}[/{style}]")
    table.add_row("sections found", str(report.sections_found))
    table.add_row("admissible sets", str(report.admissible_sets_found))
    table.add_row("distinct valid kernels", str(report.distinct_valid_kernels))
    table.add_row("transversals", str(report.transversal_count))
    table.add_row("caps hit", "yes" if report.caps_hit else "no")
    table.add_row("report", str(result["report"]))
    for path in result["tables"]:
        table.add_row("table", str(path))
    console.print(table)
    return result["exit_code"]


# Shared option declarations
LIPSCHITZ = typer.Option(None, "--lipschitz", help="Section Lipschitz bound (default 2)")
ATOM_TOL = typer.Option(None, "--atom-tol", help="Weights at or below this are not atoms (default 0)")
FIBER_TOL = typer.Option(None, "--fiber-tol", help="Fiber support tolerance")
DELTA = typer.Option(None, "--delta", help="Openness ball radius (default 2 x spacing)")
OPENNESS_RATIO = typer.Option(None, "--openness-ratio", help="Openness ratio c (default 0.5)")
SMOOTHING = typer.Option(None, "--smoothing", help="Milutin smoothing scale (default 0.5 x spacing)")
MAX_SETS = typer.Option(None, "--max-sets", help="Cap on admissible sets (default 64)")
OUT = typer.Option(Path("outputs"), "--out", "-o", help="Output directory")
FORMAT = typer.Option("structured", "--format", "-f", help="Report format: structured|csv")
DEBUG = typer.Option(False, "--debug", help="Debug logging")
WORKERS = typer.Option(None, "--workers", "-w", help="Worker threads (default KERNELS_WORKERS or auto)")


@app.command("gallery")
def gallery_command(
    name: str = typer.Argument(help="Gallery instance: see 'kernels list'"),
    mesh: Optional[float] = typer.Option(None, "--mesh", help="Grid mesh for interval instances"),
    depth: Optional[int] = typer.Option(None, "--depth", help="Tree depth for the cantor instance"),
    depths: Optional[str] = typer.Option(None, "--depths", help="Cantor mass sweep depths, e.g. 4-8"),
    mass_L: Optional[float] = typer.Option(None, "--L", help="Lipschitz constant of the mass-bound test functions"),
    lipschitz: Optional[float] = LIPSCHITZ,
    atom_tol: Optional[float] = ATOM_TOL,
    fiber_tol: Optional[float] = FIBER_TOL,
    delta: Optional[float] = DELTA,
    openness_ratio: Optional[float] = OPENNESS_RATIO,
    smoothing: Optional[float] = SMOOTHING,
    max_sets: Optional[int] = MAX_SETS,
    out: Path = OUT,
    report_format: str = FORMAT,
    debug: bool = DEBUG,
    workers: Optional[int] = WORKERS,
):
    """Analyze a gallery instance"""
    resolution = _resolution(name, mesh, depth)
    config = _analysis_config(lipschitz, atom_tol, fiber_tol, delta, openness_ratio, smoothing, max_sets,
                              report_format, workers, depths, mass_L)
    _start_logging("gallery", debug, out)
    raise typer.Exit(code=_show_result(run_gallery(name, resolution, out, config)))


@app.command("batch")
def batch_command(
    names: Optional[List[str]] = typer.Argument(None, help="Gallery instances (default: all)"),
    out: Path = OUT,
    report_format: str = FORMAT,
    debug: bool = DEBUG,
    workers: Optional[int] = WORKERS,
):
    """Analyze several gallery instances concurrently at their default resolutions"""
    registry = get_gallery_registry()
    names = names or registry.list_galleries()
    unknown = [n for n in names if not registry.is_gallery_name(n)]
    if unknown:
        raise typer.BadParameter(f"unknown gallery {', '.join(unknown)}", param_hint="NAMES")
    config = _analysis_config(None, None, None, None, None, None, None, report_format, workers)
    _start_logging("batch", debug, out)
    codes = [_show_result(result) for result in run_galleries(names, out, config, max_workers=config.workers)]
    raise typer.Exit(code=EXIT_VALIDATION if EXIT_VALIDATION in codes else max(codes, default=EXIT_OK))


@app.command("analyze")
def analyze_command(
    path: Path = typer.Argument(help="Problem-definition JSON file"),
    lipschitz: Optional[float] = LIPSCHITZ,
    atom_tol: Optional[float] = ATOM_TOL,
    fiber_tol: Optional[float] = FIBER_TOL,
    delta: Optional[float] = DELTA,
    openness_ratio: Optional[float] = OPENNESS_RATIO,
    smoothing: Optional[float] = SMOOTHING,
    max_sets: Optional[int] = MAX_SETS,
    out: Path = OUT,
    report_format: str = FORMAT,
    debug: bool = DEBUG,
    workers: Optional[int] = WORKERS,
):
    """Analyze a problem-definition file"""
    config = _analysis_config(lipschitz, atom_tol, fiber_tol, delta, openness_ratio, smoothing, max_sets,
                              report_format, workers)
    _start_logging("analyze", debug, out)
    raise typer.Exit(code=_show_result(analyze_file(path, out, config)))


@app.command("export")
def export_command(
    name: str = typer.Argument(help="Gallery instance to export"),
    out: Path = typer.Option(..., "--out", "-o", help="Problem file to write"),
    mesh: Optional[float] = typer.Option(None, "--mesh", help="Grid mesh for interval instances"),
    depth: Optional[int] = typer.Option(None, "--depth", help="Tree depth for the cantor instance"),
):
    """Write a gallery instance as a problem-definition file"""
    resolution = _resolution(name, mesh, depth)
    try:
        path = export_gallery(name, out, resolution)
    except (ValueError, OSError) as e:
        console.print(f"[bold red]✗ export failed:[/bold red] {e}")
        raise typer.Exit(code=EXIT_VALIDATION)
    console.print(f"[green]✓[/green] {name} → {path}")
    raise typer.Exit(code=EXIT_OK)


@app.command("list")
def list_command():
    """List the gallery instances"""
    table = Table(title="Gallery", box=box.ROUNDED)
    table.add_column("name", style="bold cyan")
    table.add_column("map")
    table.add_column("resolution")
    table.add_column("extras")
    table.add_column("description", style="dim")
    for gallery in get_gallery_registry().galleries.values():
        resolution = f"depth {gallery.resolution}" if gallery.uses_depth else str(gallery.resolution)
        table.add_row(gallery.name, gallery.map_name, resolution, ", ".join(gallery.extras), gallery.description)
    console.print(table)


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point returning the exit code: 0 ok, 1 usage, 2 validation, 3 inconclusive"""
    try:
        code = app(args=argv, prog_name="kernels", standalone_mode=False)
    except USAGE_ERROR as e:
        console.print(f"[bold red]Usage error:[/bold red] {e.format_message()}")
        return EXIT_USAGE
    except typer.Abort:
        return EXIT_USAGE
    return code if isinstance(code, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
