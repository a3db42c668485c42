"""Rich tables and progress displays for CLI summaries (all rendered on stderr)."""

import os
from collections.abc import Callable, Iterator, Sequence
from contextlib import contextmanager

from rich import box
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn
from rich.table import Table

from .cone import ConeSpec
from .logger import console, debug
from .stats import CaptureEstimate, Histogram
from .symmetry import OrbitRecord


def compat_mode() -> bool:
    """Simple (borderless) box style unless SUBDD_TTY_COMPAT=0."""
    return os.environ.get("SUBDD_TTY_COMPAT") != "0"


def _table(title: str) -> Table:
    return Table(
        title=title,
        title_justify="left",
        title_style="bold bright_cyan not italic",
        box=box.SIMPLE if compat_mode() else box.ROUNDED,
        border_style="cyan",
        show_lines=False,
        expand=False,
        padding=(0, 1),
        header_style="bold bright_white",
    )


def summary_table(title: str, values: dict) -> Table:
    table = _table(title)
    table.add_column("Key", style="dim", no_wrap=True)
    table.add_column("Value", style="bold white", justify="right")
    for key, value in values.items():
        table.add_row(str(key), str(value))
    return table


def histogram_table(hist: Histogram, title: str, bucket: str = "Weight") -> Table:
    table = _table(title)
    table.add_column(bucket, style="white", justify="right")
    table.add_column("Count", style="green", justify="right")
    table.add_column("Share", style="dim", justify="right")
    total = hist.total
    for key, count in hist.items():
        share = f"{100 * count / total:.1f}%" if total else "-"
        table.add_row(str(key), str(count), share)
    table.caption = f"total {total}, range {hist.min}..{hist.max}" if total else "empty"
    return table


def trajectory_table(
    trajectory: Sequence[tuple[int, int]], spec: ConeSpec | None = None, order=()
) -> Table:
    """Ray count after each processed row; the inserted row is labeled when known."""
    table = _table("DD trajectory")
    table.add_column("Rows", style="white", justify="right")
    table.add_column("Rays", style="green", justify="right")
    if spec is not None:
        table.add_column("Last row", style="magenta", no_wrap=True)
    for processed, rays in trajectory:
        row = [str(processed), str(rays)]
        if spec is not None:
            label = spec.row_label(order[processed - 1]) if 0 < processed <= len(order) else ""
            row.append(label)
        table.add_row(*row)
    return table


def orbit_table(records: Sequence[OrbitRecord], title: str = "Orbits", limit: int = 20) -> Table:
    table = _table(title)
    table.add_column("#", style="white", justify="right", width=4)
    table.add_column("Weight", style="green", justify="right")
    table.add_column("Size", style="cyan", justify="right")
    table.add_column("Canonical ray", style="white", overflow="fold", max_width=95)
    for k, rec in enumerate(records[:limit], 1):
        table.add_row(str(k), str(rec.weight), str(rec.size), " ".join(map(str, rec.canonical)))
    if len(records) > limit:
        table.caption = f"{len(records) - limit} more not shown"
    return table


def estimate_table(estimate: CaptureEstimate) -> Table:
    values = {
        "pool": estimate.pool_size,
        "probe": estimate.probe_size,
        "overlap": f"{estimate.overlap} ({100 * estimate.overlap_fraction:.2f}%)",
        "estimated orbits": f"{estimate.orbits:.4e}" if estimate.defined else "undefined",
    }
    if estimate.rays is not None:
        values["estimated rays"] = f"{estimate.rays:.4e}"
    return summary_table("Capture-recapture estimate", values)


def show(renderable, quiet: bool = False) -> None:
    if not quiet:
        console.print(renderable)


@contextmanager
def dd_progress(
    total: int, spec: ConeSpec | None = None, quiet: bool = False
) -> Iterator[Callable[[int, int, int], None]]:
    """Yield a DD progress callback feeding a progress bar (when interactive) and debug."""

    def label(row: int) -> str:
        return spec.row_label(row) if spec is not None else str(row)

    if quiet or not console.is_terminal:

        def callback(processed: int, rays: int, row: int) -> None:
            debug.dd_step(processed, rays, label(row))

        yield callback
        return

    progress = Progress(
        TextColumn("[cyan]DD[/cyan]"),
        BarColumn(),
        MofNCompleteColumn(),
        TextColumn("{task.fields[rays]} rays"),
        TimeElapsedColumn(),
        console=console,
        transient=True,
    )
    with progress:
        task = progress.add_task("dd", total=total, rays=0)

        def callback(processed: int, rays: int, row: int) -> None:
            progress.update(task, completed=processed, rays=rays)
            debug.dd_step(processed, rays, label(row))

        yield callback
