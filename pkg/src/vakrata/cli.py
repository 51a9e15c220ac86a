# ──────────────────────────── src/vakrata/cli.py ────────────────────────────
"""CLI entry-point – *thin* wrapper delegating to the harness and engine."""
from __future__ import annotations

import logging
import sys
from pathlib import Path

import click
import numpy as np

from vakrata.catalog import CATALOG, CatalogEntry, catalog
from vakrata.config import FORMATS, RunConfig, Settings, load_settings
from vakrata.curvature import PointContext
from vakrata.errors import ConfigError, VakrataError
from vakrata.harness import PASS, SuiteOptions, run_suite
from vakrata.identities import registry
from vakrata.metric import MetricSpec, load_spec_file
from vakrata.progress import progress
from vakrata.report import dumps, render_table, to_json
from vakrata.residuals import QUANTITIES, evaluate_quantity
from vakrata.static_tensors import static_context
from vakrata.tensors import frame_components, orthonormal_frame
from vakrata.utils import expand_path, parse_params, parse_point

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]
FRAMES = ["coordinate", "orthonormal", "adapted"]


class InputError(click.ClickException):
    """Bad input or configuration; exits with status 2."""
    exit_code = 2


@click.group()
@click.option("--log-level", type=click.Choice(LOG_LEVELS, case_sensitive=False), default=None,
              help="Logging level (default: VAKRATA_LOG_LEVEL or WARNING).")
@click.pass_context
def main(ctx: click.Context, log_level: str | None) -> None:
    """Vakrata – curvature identities of vacuum static spaces, checked with jets."""
    try:
        settings = load_settings()
    except ConfigError as exc:
        raise InputError(str(exc)) from exc
    logging.basicConfig(
        level=(log_level or settings.log_level).upper(),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    ctx.obj = settings


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------
def _resolve(source: str, params: dict[str, float]) -> tuple[MetricSpec, CatalogEntry | None]:
    """``catalog:<name>``, ``file:<path>`` or a bare path."""
    try:
        if source.startswith("catalog:"):
            entry = catalog(source[len("catalog:"):], params)
            return entry.spec, entry
        path = source[len("file:"):] if source.startswith("file:") else source
        return load_spec_file(expand_path(path), params), None
    except VakrataError as exc:
        raise InputError(str(exc)) from exc


def _params(items: tuple[str, ...]) -> dict[str, float]:
    try:
        return parse_params(items)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        click.echo(text)
        return
    path = expand_path(output)
    path.write_text(text + "\n", encoding="utf-8")
    click.echo(f"Report written to {path}", err=True)


# ---------------------------------------------------------------------------
# vakrata init – copy templates on first run
# ---------------------------------------------------------------------------
@main.command("init")
@click.option("--overwrite", is_flag=True, help="Overwrite existing files if present.")
def init_cmd(overwrite: bool) -> None:
    """Create ~/.vakrata with a template .env and an example spec file."""
    from vakrata.config import CONFIG_DIR, bootstrap_user_config

    written = bootstrap_user_config(overwrite)
    click.echo(f"Configuration initialised at {CONFIG_DIR}")
    for path in written:
        click.echo(f"  wrote {path.name}")


# ---------------------------------------------------------------------------
# vakrata check – run the identity suite
# ---------------------------------------------------------------------------
@main.command("check")
@click.argument("source")
@click.option("--param", "params", multiple=True, metavar="KEY=VALUE", help="Catalog or spec-file parameter.")
@click.option("--check", "checks", multiple=True, metavar="GLOB", help="Only run checks whose id matches.")
@click.option("--points", type=int, default=None, help="Number of sample points.")
@click.option("--seed", type=int, default=None, help="Sampling seed.")
@click.option("--order", type=int, default=None, help="Jet order (default: what the checks need).")
@click.option("--tolerance", type=float, default=None, help="Relative tolerance.")
@click.option("--threads", type=int, default=None, help="Worker threads for sample points.")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="table", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Write the report here instead of stdout.")
@click.option("--no-controls", is_flag=True, help="Skip the negative controls.")
@click.pass_context
def check_cmd(
    ctx: click.Context,
    source: str,
    params: tuple[str, ...],
    checks: tuple[str, ...],
    points: int | None,
    seed: int | None,
    order: int | None,
    tolerance: float | None,
    threads: int | None,
    fmt: str,
    output: Path | None,
    no_controls: bool,
) -> None:
    """Run identity checks on SOURCE (catalog:<name> or a spec file).

    Exit status: 0 when everything passes, 1 on any failure, 2 on bad input.
    """
    settings: Settings = ctx.obj
    try:
        cfg = RunConfig.from_settings(
            settings, source,
            params=_params(params), checks=checks or None, points=points, seed=seed, order=order,
            tolerance=tolerance, threads=threads, format=fmt, output=output, controls=not no_controls,
        )
    except ConfigError as exc:
        raise InputError(str(exc)) from exc
    spec, entry = _resolve(cfg.source, cfg.params)
    options = SuiteOptions(
        points=cfg.points, seed=cfg.seed, order=cfg.order, tolerance=cfg.tolerance,
        threads=cfg.threads, checks=cfg.checks, controls=cfg.controls,
    )
    with progress(cfg.points, f"Checking {spec.name}", enabled=cfg.format == "table") as bar:
        report = run_suite(spec, options, entry, on_point=lambda: bar.update(1))

    text = to_json(report) if cfg.format == "json" else render_table(report, colour=cfg.output is None)
    _emit(text, cfg.output)
    if report.verdict != PASS:
        ctx.exit(1)


# ---------------------------------------------------------------------------
# vakrata eval – print one tensor at one point
# ---------------------------------------------------------------------------
@main.command("eval")
@click.argument("source")
@click.argument("tensor")
@click.option("--param", "params", multiple=True, metavar="KEY=VALUE")
@click.option("--at", "at", default=None, help="Comma-separated coordinates (default: centre of the domain).")
@click.option("--order", type=int, default=None, help="Jet order (default: what the tensor needs).")
@click.option("--frame", type=click.Choice(FRAMES), default="coordinate", show_default=True,
              help="orthonormal: Cholesky frame; adapted: frame ending with ∇f/|∇f|.")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="table", show_default=True)
def eval_cmd(
    source: str, tensor: str, params: tuple[str, ...], at: str | None, order: int | None, frame: str, fmt: str
) -> None:
    """Print the components of TENSOR at a point of SOURCE."""
    if tensor not in QUANTITIES:
        raise InputError(f"unknown tensor {tensor!r}; choose from {', '.join(QUANTITIES)}")
    spec, _ = _resolve(source, _params(params))
    _, depth, needs_potential = QUANTITIES[tensor]
    if needs_potential and spec.potential is None:
        raise InputError(f"{tensor} needs a potential and {spec.name} has none")
    order = order or max(2, depth)
    if order < depth:
        raise InputError(f"{tensor} needs jet order {depth}, got {order}")

    if at is None:
        point = [(lo + hi) / 2 for lo, hi in spec.domain]
    else:
        try:
            point = parse_point(at)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    if len(point) != spec.dim:
        raise InputError(f"{spec.name} has {spec.dim} coordinates, --at gave {len(point)}")
    outside = [c for c, x, (lo, hi) in zip(spec.coords, point, spec.domain) if not lo <= x <= hi]
    if outside:
        raise InputError(f"point outside the domain in {', '.join(outside)}")

    try:
        pctx = PointContext.build(spec, point, order)
        value = evaluate_quantity(tensor, pctx)
        if frame == "coordinate" or not value.valence:
            comps = value.components if value.valence else np.asarray(value.value)
        else:
            last = None
            if frame == "adapted":
                last = static_context(pctx).require_normal().components
            comps = frame_components(value, orthonormal_frame(pctx.g.components, last), pctx)
    except VakrataError as exc:
        raise InputError(str(exc)) from exc

    if fmt == "json":
        click.echo(dumps({
            "spec": spec.name,
            "tensor": tensor,
            "point": [float(x) for x in point],
            "frame": frame,
            "order": order,
            "components": np.asarray(comps).tolist(),
        }))
        return
    click.echo(f"{tensor} of {spec.name} at ({', '.join(f'{x:g}' for x in point)}), {frame} frame")
    if np.ndim(comps) == 0:
        click.echo(f"{float(comps):.12g}")
    else:
        click.echo(np.array2string(np.asarray(comps), precision=10, suppress_small=True, max_line_width=120))


# ---------------------------------------------------------------------------
# vakrata list – catalog entries, checks, quantities
# ---------------------------------------------------------------------------
@main.command("list")
@click.argument("what", type=click.Choice(["catalog", "checks", "quantities"]))
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="table", show_default=True)
def list_cmd(what: str, fmt: str) -> None:
    """List catalog entries, registered checks or evaluable quantities."""
    if what == "catalog":
        rows = [
            {"name": name, "params": dict(fam.defaults), "description": fam.description}
            for name, fam in sorted(CATALOG.items())
        ]
        lines = [
            f"{r['name']:<24} {', '.join(f'{k}={v}' for k, v in r['params'].items()):<34} {r['description']}"
            for r in rows
        ]
    elif what == "checks":
        rows = [c.describe() for c in registry()]
        lines = [f"{r['id']:<22} order {r['order']}  [{', '.join(r['gates'])}]  {r['ref']}" for r in rows]
    else:
        rows = [
            {"name": name, "order": depth, "potential": needs}
            for name, (_, depth, needs) in QUANTITIES.items()
        ]
        lines = [
            f"{r['name']:<16} order {r['order']}{'  (needs a potential)' if r['potential'] else ''}" for r in rows
        ]
    if fmt == "json":
        click.echo(dumps(rows))
    else:
        click.echo("\n".join(lines))


if __name__ == "__main__":
    main()
