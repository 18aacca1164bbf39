"""``matchmaker`` command line.

Exit status: 0 on success, 1 for invalid descriptors, tables or a failed
benchmark bound, 2 for I/O and usage errors.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path
from typing import Any, NoReturn, Optional

import click

from .bench import CSV_HEADER, BoundViolation, run_bench
from .descriptor import DescriptorError, ServiceProfile, parse_profile, validate_profile
from .matcher import build_bipartite, format_score, match_services
from .registry import RegistryError, discover, load_registry
from .simrules import DEFAULT_TABLE, SimilarityTable, TableError, load_table

EXIT_DOMAIN = 1
EXIT_IO = 2


def _fail(message: str, code: int) -> NoReturn:
    click.echo(message, err=True)
    raise click.exceptions.Exit(code)


def _read_profile(path: str) -> ServiceProfile:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        _fail(f"{path}: {exc.strerror or exc}", EXIT_IO)
    try:
        return parse_profile(data)
    except DescriptorError as exc:
        _fail(f"{path}:{exc.line}:{exc.column}: error: {exc.code}: {exc.message}", EXIT_DOMAIN)


def _read_table(path: Optional[str]) -> SimilarityTable:
    if path is None:
        return DEFAULT_TABLE
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        _fail(f"{path}: {exc.strerror or exc}", EXIT_IO)
    try:
        return load_table(data)
    except TableError as exc:
        where = f"{path}:{exc.line}" if exc.line is not None else path
        _fail(f"{where}: error: {exc.code}: {exc.message}", EXIT_DOMAIN)


def _emit_json(data: Any) -> None:
    click.echo(json.dumps(data, indent=2, sort_keys=True))


table_option = click.option(
    "--table", "table_path", type=click.Path(dir_okay=False), envvar="MATCHMAKER_TABLE",
    default=None, help="Rule table file (default: built-in table; env MATCHMAKER_TABLE).",
)
strategy_option = click.option(
    "--strategy", type=click.Choice(["dfs", "bfs"]), default="bfs", show_default=True,
    help="Augmenting-path search order.",
)
format_option = click.option(
    "--format", "output_format", type=click.Choice(["text", "json"]), default="text", show_default=True,
)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main() -> None:
    """Score and discover services by typed input/output similarity."""


@main.command()
@click.argument("paths", nargs=-1, required=True, type=click.Path())
def validate(paths: tuple[str, ...]) -> None:
    """Check descriptor files; diagnostics go to standard error."""
    io_failed = False
    errors = False
    for path in paths:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            click.echo(f"{path}: {exc.strerror or exc}", err=True)
            io_failed = True
            continue
        try:
            profile = parse_profile(data)
        except DescriptorError as exc:
            click.echo(f"{path}:{exc.line}:{exc.column}: error: {exc.code}: {exc.message}", err=True)
            errors = True
            continue
        for diag in validate_profile(profile):
            line, column = diag.line or 1, diag.column or 1
            click.echo(f"{path}:{line}:{column}: {diag.severity}: {diag.code}: {diag.message}", err=True)
            errors = errors or diag.severity == "error"
    if io_failed:
        raise click.exceptions.Exit(EXIT_IO)
    if errors:
        raise click.exceptions.Exit(EXIT_DOMAIN)


def _explain_side(requested, advertised, flow, table) -> list[dict[str, Any]]:
    spec = build_bipartite(requested, advertised, table)
    edges = []
    for (i, j), weight in sorted(spec.edge_weights.items()):
        a, b = spec.left[i], spec.right[j]
        edges.append({
            "requested": a.name,
            "requested_type": a.datatype.value,
            "advertised": b.name,
            "advertised_type": b.datatype.value,
            "weight": weight,
            "flow": flow[spec.left_vertex(i), spec.right_vertex(j)],
        })
    return edges


@main.command()
@click.argument("requested_path", type=click.Path())
@click.argument("advertised_path", type=click.Path())
@table_option
@strategy_option
@click.option("--explain", is_flag=True, help="Show every parameter pair's weight and flow.")
@format_option
def sim(requested_path, advertised_path, table_path, strategy, explain, output_format) -> None:
    """Score how well the advertised service matches the requested one."""
    table = _read_table(table_path)
    requested = _read_profile(requested_path)
    advertised = _read_profile(advertised_path)
    report = match_services(requested, advertised, table, strategy)
    sides = {
        "inputs": (requested.inputs, advertised.inputs, report.input_flow),
        "outputs": (requested.outputs, advertised.outputs, report.output_flow),
    }

    if output_format == "json":
        data = {"requested_name": requested.name, "strategy": strategy, **report.to_dict()}
        if explain:
            data["explain"] = {side: _explain_side(r, a, f, table) for side, (r, a, f) in sides.items()}
        _emit_json(data)
        return

    click.echo(f"requested: {requested.name}")
    click.echo(f"advertised: {advertised.name}")
    click.echo(f"input_score: {format_score(report.input_score)}")
    click.echo(f"output_score: {format_score(report.output_score)}")
    click.echo(f"overall: {format_score(report.overall)}")
    if explain:
        for side, (r, a, f) in sides.items():
            click.echo(f"{side}: flow {f.value} in {f.iterations} augmentations")
            for e in _explain_side(r, a, f, table):
                click.echo(
                    f"  {e['requested']}: {e['requested_type']} -> "
                    f"{e['advertised']}: {e['advertised_type']}  weight {e['weight']}  flow {e['flow']}"
                )


@main.command("discover")
@click.argument("registry_path", type=click.Path())
@click.argument("request_path", type=click.Path())
@click.option("--mode", type=click.Choice(["best", "ranked"]), default="best", show_default=True)
@table_option
@strategy_option
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True,
              help="Worker threads for ranked mode.")
@format_option
def discover_cmd(registry_path, request_path, mode, table_path, strategy, jobs, output_format) -> None:
    """Find the registered service most similar to a request."""
    table = _read_table(table_path)
    requested = _read_profile(request_path)
    try:
        registry = load_registry(registry_path)
    except RegistryError as exc:
        _fail(f"error: {exc}", EXIT_IO if exc.code == "io" else EXIT_DOMAIN)
    result = discover(registry, requested, table, strategy, mode, workers=jobs)

    if output_format == "json":
        _emit_json({
            "mode": mode,
            "best": result.best.to_dict() if result.best is not None else None,
            "scanned_count": result.scanned_count,
            "registry_size": len(registry),
            "ranked": [r.to_dict() for r in result.ranked],
        })
        return

    if result.best is None:
        click.echo("no services")
        return
    if mode == "ranked":
        for rank, r in enumerate(result.ranked, start=1):
            click.echo(
                f"{rank}. {r.advertised_name}: overall {format_score(r.overall)} "
                f"(input {format_score(r.input_score)}, output {format_score(r.output_score)})"
            )
    else:
        click.echo(f"best: {result.best.advertised_name}")
        click.echo(f"overall: {format_score(result.best.overall)}")
    click.echo(f"scanned: {result.scanned_count} of {len(registry)}")


def _parse_sizes(ctx, param, value: str) -> list[int]:
    try:
        sizes = [int(s) for s in value.split(",") if s.strip()]
    except ValueError:
        raise click.BadParameter("expected comma-separated integers") from None
    if not sizes or any(s < 1 for s in sizes):
        raise click.BadParameter("sizes must be positive")
    return sizes


@main.command()
@click.option("--sizes", default="10,50,100", show_default=True, callback=_parse_sizes,
              help="Comma-separated parameter counts per side.")
@click.option("--seeds", type=click.IntRange(min=1), default=20, show_default=True,
              help="Random instances per size.")
@click.option("--seed", type=int, default=0, show_default=True, help="Base random seed.")
def bench(sizes: list[int], seeds: int, seed: int) -> None:
    """Compare augmentation counts of dfs and bfs; CSV on standard output."""
    out = click.get_text_stream("stdout")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    try:
        for row in run_bench(sizes, seeds, seed):
            writer.writerow(row.as_csv())
    except BoundViolation as exc:
        out.flush()
        _fail(f"error: iteration bound violated: {exc}", EXIT_DOMAIN)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
