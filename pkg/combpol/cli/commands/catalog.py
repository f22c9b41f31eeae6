"""
Worked-example catalogue commands
"""
from typing import Optional

import typer
from rich.console import Console
from rich.table import Table

from ...catalog.loader import catalog_loader
from ..render import emit, error
from ..settings import resolve_settings

console = Console()
catalog_app = typer.Typer(help="Worked examples with expected verdicts")


@catalog_app.command("list")
def catalog_list(
    fmt: str = typer.Option("text", "--format", help="Output format: json or text"),
):
    """List catalogue entries"""
    names = catalog_loader.list_entries()
    if fmt == "json":
        emit({"entries": names}, fmt)
        return

    if not names:
        console.print("[yellow]No catalogue entries found[/yellow]")
        return

    table = Table(title="Catalogue", show_header=True, header_style="bold cyan")
    table.add_column("Name", style="cyan")
    table.add_column("Field", style="dim")
    table.add_column("n", style="dim")
    table.add_column("Polynomial")
    for name in names:
        try:
            entry = catalog_loader.load_entry(name)
            table.add_row(name, str(entry["field"]), str(entry["n"]), str(entry["poly"]))
        except ValueError:
            table.add_row(name, "?", "?", "[red]unreadable[/red]")
    console.print(table)


@catalog_app.command("check")
def catalog_check(
    ctx: typer.Context,
    name: Optional[str] = typer.Argument(None, help="Entry to check (default: all)"),
    fmt: str = typer.Option("text", "--format", help="Output format: json or text"),
):
    """Re-run classify on entries and compare with the recorded verdicts"""
    profile = (ctx.obj or {}).get("profile")
    try:
        settings = resolve_settings(profile)
        names = [name] if name else catalog_loader.list_entries()
        results = [
            catalog_loader.check(
                entry,
                homogeneity_budget=settings.homogeneity_budget,
                linearity_budget=settings.linearity_budget,
                samples=settings.sample_count,
                seed=settings.seed,
            )
            for entry in names
        ]
    except ValueError as e:
        error(str(e))
        raise typer.Exit(2)

    if fmt == "json":
        emit({
            "results": [
                {"name": r.name, "ok": r.ok,
                 "mismatches": [{"key": k, "expected": e, "actual": a} for k, e, a in r.mismatches]}
                for r in results
            ]
        }, fmt)
    else:
        for r in results:
            if r.ok:
                console.print(f"[green]✓[/green] {r.name}")
            else:
                console.print(f"[red]✗[/red] {r.name}")
                for key, expected, actual in r.mismatches:
                    console.print(f"  [dim]{key}: expected {expected!r}, got {actual!r}[/dim]")

    if not all(r.ok for r in results):
        raise typer.Exit(1)
