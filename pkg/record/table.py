from pathlib import Path

from progrich.fmt import format_duration
from rich import box
from rich.table import Table

from .check import Check


def format_number(number: float | None, precision: int = 5) -> str:
    if number is None:
        return "-"
    if isinstance(number, int):
        return str(number)
    # Values of the checks span many orders of magnitude
    if number != 0 and not 1e-3 <= abs(number) < 1e5:
        return f"{number:.{precision - 1}e}"
    return f"{number:.{precision}f}"


def table_from_checks(
    checks: list[Check],
    title: str | None = None,
    time_elapsed: float | None = None,
    out_dir: Path | None = None,
    partial: bool = False,
) -> Table:
    caption = f"Results in {out_dir}" if out_dir else ""
    if partial:
        caption = f"{caption} [partial]" if caption else "[partial]"
    if time_elapsed:
        elapsed = f"Time elapsed {format_duration(time_elapsed)}"
        title = f"{title} ({elapsed})" if title else elapsed
    table = Table(
        title=title,
        box=box.HORIZONTALS,
        border_style="dim",
        caption=caption,
        caption_style="",
        min_width=60,
    )
    table.add_column("Check")
    table.add_column("Value", justify="right")
    table.add_column("Bound", justify="right")
    table.add_column("Result", justify="center")
    for check in checks:
        table.add_row(
            check.name,
            format_number(check.value),
            f"{check.relation} {format_number(check.bound)}",
            "[green]pass[/green]" if check.passed else "[red]fail[/red]",
        )
    return table
