import json
from typing import Any, Mapping

import typer
from rich.console import Console
from rich.markup import escape
from rich.table import Table

console = Console()
err_console = Console(stderr=True)

FORMATS = ("json", "text")


def check_format(fmt: str) -> str:
    if fmt not in FORMATS:
        err_console.print(f"[red]Error:[/red] unknown format {fmt!r}; use json or text")
        raise typer.Exit(2)
    return fmt


def to_json_text(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True)


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "[green]yes[/green]" if value else "[red]no[/red]"
    if value is None:
        return "[dim]-[/dim]"
    if isinstance(value, Mapping):
        return ", ".join(f"{k}={_plain(v)}" for k, v in sorted(value.items()))
    if isinstance(value, (list, tuple)):
        return _plain(value)
    return str(value)


def _plain(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_plain(v) for v in value) + "]"
    return str(value)


def emit(data: Mapping[str, Any], fmt: str, title: str = "") -> None:
    """JSON on stdout, or a key/value table for humans"""
    if fmt == "json":
        typer.echo(to_json_text(data))
        return
    table = Table(title=title or None, show_header=False, header_style="bold cyan")
    table.add_column("Key", style="cyan")
    table.add_column("Value")
    for key, value in sorted(data.items()):
        table.add_row(key, _cell(value))
    console.print(table)


def error(message: str, hint: str = "") -> None:
    err_console.print(f"[red]Error:[/red] {escape(message)}", highlight=False)
    if hint:
        err_console.print(f"[dim]{hint}[/dim]")
