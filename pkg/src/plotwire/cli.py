"""Operator entry points: serve a data directory, render one-shot plots,
convert CSV to the columnar format.

Exit codes: 0 ok, 1 I/O problem, 2 cannot bind port, 3 spec validation.
"""

from __future__ import annotations

import socket
import sys
from pathlib import Path

import click

from .csvio import load_csv
from .errors import ParseError, PlotwireError, SchemaError, ValidationError
from .pngio import encode_png
from .prep import auto_range
from .pwct import load_columnar, save_columnar
from .plotspec import validate
from .registry import TableRegistry
from .render import render
from .session import SessionManager
from .table import ColumnTable
from .view import Viewport

EXIT_IO = 1
EXIT_BIND = 2
EXIT_VALIDATION = 3


@click.group()
def main():
    """plotwire: server-side plotting for large tables."""


@main.command()
@click.option("--data", "data_dir", required=True, envvar="PLOTWIRE_DATA",
              help="directory of .csv/.pwct table files")
@click.option("--port", default=8099, envvar="PLOTWIRE_PORT", show_default=True)
@click.option("--host", default="127.0.0.1", envvar="PLOTWIRE_HOST", show_default=True)
@click.option("--cache-mb", default=512, envvar="PLOTWIRE_CACHE_MB", show_default=True,
              help="coordinate cache budget in MiB")
@click.option("--ttl-min", default=30, envvar="PLOTWIRE_TTL_MIN", show_default=True,
              help="session idle timeout in minutes")
@click.option("--static", "static_dir", default=None, envvar="PLOTWIRE_STATIC",
              help="directory of web client assets to serve at /")
def serve(data_dir, port, host, cache_mb, ttl_min, static_dir):
    """Serve every table under --data over the HTTP API."""
    import uvicorn

    from .server import create_app

    root = Path(data_dir)
    if not root.is_dir():
        click.echo(f"error: --data {data_dir} is not a readable directory", err=True)
        sys.exit(EXIT_IO)
    registry = TableRegistry(root)
    try:
        loaded = registry.load_all()
    except (OSError, PlotwireError) as e:
        click.echo(f"error loading tables: {e}", err=True)
        sys.exit(EXIT_IO)
    click.echo(f"loaded {len(loaded)} table(s): {', '.join(loaded) or '(none)'}")

    # claim the port up front so a busy port fails fast with its own code
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as e:
        click.echo(f"error: cannot bind {host}:{port}: {e}", err=True)
        sys.exit(EXIT_BIND)
    finally:
        probe.close()

    sessions = SessionManager(registry, coord_budget_bytes=cache_mb * 1024 * 1024,
                              ttl_seconds=ttl_min * 60)
    app = create_app(registry, sessions, static_dir=static_dir)
    server = uvicorn.Server(uvicorn.Config(app, host=host, port=port, log_level="info"))

    # exit 0 on SIGTERM/SIGINT: uvicorn re-raises the captured signal after
    # graceful shutdown, which these handlers absorb
    import signal as _signal

    def _absorb(signum, frame):
        server.should_exit = True

    _signal.signal(_signal.SIGTERM, _absorb)
    _signal.signal(_signal.SIGINT, _absorb)
    server.run()


def _load_table_file(path: Path) -> ColumnTable:
    if path.suffix == ".pwct":
        return load_columnar(path)
    return load_csv(path)


def _parse_opts(opts: tuple[str, ...]) -> dict[str, str]:
    out = {}
    for item in opts:
        name, sep, value = item.partition("=")
        if not sep:
            raise ValidationError([(item, "expected name=value")])
        out[name] = value
    return out


@main.command("plot")
@click.option("--table", "table_file", required=True, type=click.Path(path_type=Path))
@click.option("--type", "plot_type", required=True)
@click.option("--opt", "opts", multiple=True, help="plot option name=value (repeatable)")
@click.option("--out", "out_file", required=True, type=click.Path(path_type=Path))
@click.option("--width", default=640, show_default=True)
@click.option("--height", default=480, show_default=True)
def plot_cmd(table_file, plot_type, opts, out_file, width, height):
    """Render one static PNG; pixels match the server frame endpoint."""
    try:
        table = _load_table_file(table_file)
    except (OSError, ParseError, SchemaError, PlotwireError) as e:
        click.echo(f"error reading {table_file}: {e}", err=True)
        sys.exit(EXIT_IO)
    try:
        plan = validate(plot_type, _parse_opts(opts), table)
    except ValidationError as e:
        for option, why in e.issues:
            click.echo(f"bad option {option}: {why}", err=True)
        sys.exit(EXIT_VALIDATION)
    view = auto_range(plan, table)
    frame = render(plan, table, view, Viewport(width, height))
    try:
        out_file.write_bytes(encode_png(frame.pixels))
    except OSError as e:
        click.echo(f"error writing {out_file}: {e}", err=True)
        sys.exit(EXIT_IO)
    click.echo(f"wrote {out_file} ({width}x{height})")


@main.command()
@click.option("--in", "in_file", required=True, type=click.Path(path_type=Path))
@click.option("--out", "out_file", required=True, type=click.Path(path_type=Path))
def convert(in_file, out_file):
    """Convert a CSV file to the columnar .pwct format."""
    try:
        table = load_csv(in_file)
    except (OSError, SchemaError) as e:
        click.echo(f"error reading {in_file}: {e}", err=True)
        sys.exit(EXIT_IO)
    except ParseError as e:
        click.echo(f"error reading {in_file} at line {e.offset}: {e}", err=True)
        sys.exit(EXIT_IO)
    try:
        save_columnar(table, out_file)
    except OSError as e:
        click.echo(f"error writing {out_file}: {e}", err=True)
        sys.exit(EXIT_IO)
    click.echo(f"wrote {out_file} ({table.row_count} rows, {len(table.columns)} columns)")


if __name__ == "__main__":
    main()
