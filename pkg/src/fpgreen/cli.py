"""Command-line driver.

Every subcommand is a thin client of the HTTP service: by default the app
runs in process, and --server URL sends the same requests to a remote
instance instead.  Outputs are deterministic (stable key order, fixed float
formatting), so repeated runs with one configuration are byte-identical.

Exit codes: 0 success, 1 golden-file mismatch, 2 usage or domain error,
3 numerical non-convergence.
"""

from __future__ import annotations

import sys
import warnings
from dataclasses import fields as dataclass_fields

import click

from .config import RunConfig, apply_env, load_config_file
from .errors import FpgreenError
from .serialize import csv_from_record, golden_diff, to_json

_CSV_FLOAT = "%.17g"


def _make_transport(server: str | None):
    if server:
        import httpx

        client = httpx.Client(base_url=server, timeout=600.0)
        return lambda path, payload: client.post(path, json=payload)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

        from .service import create_app

        client = TestClient(create_app())
    return lambda path, payload: client.post(path, json=payload)


def parse_complex(text: str) -> complex:
    """Parse '2+1i', '3', '0.5i', or Python 'a+bj' notation."""
    cleaned = text.strip().replace(" ", "").replace("i", "j").replace("I", "j")
    try:
        return complex(cleaned)
    except ValueError:
        raise click.UsageError(f"cannot parse wavenumber {text!r}") from None


def _post(ctx: click.Context, path: str, payload: dict) -> dict:
    response = ctx.obj["transport"](path, payload)
    body = response.json()
    if response.status_code == 200:
        return body
    message = body.get("message") or str(body.get("detail", body))
    error = body.get("error", "request error")
    click.echo(f"error: {error}: {message}", err=True)
    ctx.exit(3 if response.status_code == 409 else 2)


def _emit(ctx: click.Context, text: str) -> None:
    output = ctx.obj["config"].output
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _check_golden(ctx: click.Context, produced: str, golden_path: str | None) -> None:
    if golden_path is None:
        return
    with open(golden_path, encoding="utf-8") as fh:
        expected = fh.read()
    diffs = golden_diff(produced, expected)
    if diffs:
        for line in diffs:
            click.echo(f"golden mismatch: {line}", err=True)
        ctx.exit(1)


_CONFIG_FIELDS = {f.name for f in dataclass_fields(RunConfig)}


def _layer(ctx: click.Context, **flags) -> RunConfig:
    """Apply this subcommand's provided flags over the session config."""
    cfg: RunConfig = ctx.obj["config"]
    changes = {
        key: value
        for key, value in flags.items()
        if value is not None and key in _CONFIG_FIELDS
    }
    return cfg.updated(**changes)


def _source_payload(cfg: RunConfig) -> dict:
    return {
        "builtin": cfg.builtin,
        "f": cfg.f,
        "v": cfg.v,
        "vs": cfg.vs,
        "e0": cfg.e0,
        "potential_file": cfg.potential_file,
    }


def _source_options(fn):
    options = [
        click.option("--builtin", default=None, help="Builtin example name (ex1..ex8)."),
        click.option("--f", "f", default=None, help="Drift f(z) expression."),
        click.option("--V", "v", default=None, help="Fokker-Planck potential V(z); f = -V'/2."),
        click.option("--VS", "vs", default=None, help="Schrodinger potential VS(z)."),
        click.option("--E0", "e0", type=float, default=None, help="Energy shift for --VS."),
        click.option(
            "--potential-file",
            default=None,
            type=click.Path(exists=True, dir_okay=False),
            help="Key-value potential definition file.",
        ),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


@click.group()
@click.option("--server", default=None, help="Remote service URL (default: in process).")
@click.option(
    "--config",
    "config_path",
    default=None,
    type=click.Path(exists=True, dir_okay=False),
    help="Key-value config file overriding defaults.",
)
@click.option("--threads", type=int, default=None, help="Worker threads for k-sweeps.")
@click.option("--output", default=None, help="Write the result to this file.")
@click.option(
    "--format",
    "format_",
    type=click.Choice(["json", "csv"]),
    default=None,
    help="Output format where both are supported.",
)
@click.pass_context
def main(ctx, server, config_path, threads, output, format_):
    """Asymptotic Green-function expansions for one-dimensional drifts."""
    cfg = RunConfig()
    try:
        if config_path:
            cfg = load_config_file(config_path, cfg)
        cfg = apply_env(cfg)
    except FpgreenError as exc:
        raise click.UsageError(str(exc)) from None
    overrides = {}
    if threads is not None:
        overrides["threads"] = threads
    if output is not None:
        overrides["output"] = output
    if format_ is not None:
        overrides["format"] = format_
    if overrides:
        cfg = cfg.updated(**overrides)
    ctx.obj = {"config": cfg, "transport": None, "server": server}
    if ctx.invoked_subcommand != "serve":
        ctx.obj["transport"] = _make_transport(server)


@main.command()
@click.option("--order", type=int, required=True, help="Coefficient order n.")
@click.option(
    "--family",
    type=click.Choice(["s", "alpha", "c", "K", "b", "g"]),
    default="s",
    help="Symbol family to print.",
)
@click.option("--basis", type=click.Choice(["f", "vs"]), default="f")
@click.option("--force", is_flag=True, help="Generate past the documented order cap.")
@click.pass_context
def coeffs(ctx, order, family, basis, force):
    """Print one canonical expansion coefficient."""
    record = _post(
        ctx,
        "/coeffs",
        {"family": family, "order": order, "basis": basis, "force": force},
    )
    cfg: RunConfig = ctx.obj["config"]
    fmt = cfg.format or "text"
    if fmt == "csv":
        raise click.UsageError("coeffs supports only text or json output")
    if fmt == "json":
        _emit(ctx, to_json(record))
    else:
        _emit(ctx, record["text"] + "\n")


@main.command()
@_source_options
@click.option("--x", type=float, required=True)
@click.option("--y", type=float, required=True)
@click.option("--k", "k_text", required=True, help="Wavenumber, e.g. 2+1i.")
@click.option("--N", "order", type=int, default=4, help="Truncation order.")
@click.option("--plain", is_flag=True, help="Skip jump corrections.")
@click.option("--force", is_flag=True, help="Ignore validity caps.")
@click.pass_context
def expand(ctx, builtin, f, v, vs, e0, potential_file, x, y, k_text, order, plain, force):
    """Evaluate the truncated log G expansion at one wavenumber."""
    cfg = _layer(
        ctx, builtin=builtin, f=f, v=v, vs=vs, e0=e0,
        potential_file=potential_file, x=x, y=y, order=order,
    )
    k = parse_complex(k_text)
    record = _post(
        ctx,
        "/expand",
        {
            **_source_payload(cfg),
            "x": cfg.x,
            "y": cfg.y,
            "k_re": k.real,
            "k_im": k.imag,
            "order": cfg.order,
            "corrected": not plain,
            "force": force,
        },
    )
    _emit(ctx, to_json(record))


@main.command()
@_source_options
@click.option("--x", type=float, required=True)
@click.option("--y", type=float, required=True)
@click.option("--N", "order", type=int, default=4, help="Truncation order.")
@click.option("--ray", default=None, help="real, sector:THETA, or imline:B.")
@click.option("--kmin", type=float, default=None)
@click.option("--kmax", type=float, default=None)
@click.option("--samples", type=int, default=None)
@click.option(
    "--oracle",
    type=click.Choice(["auto", "closed-form", "riccati"]),
    default=None,
)
@click.option(
    "--corrected/--plain",
    "corrected",
    default=None,
    help="Override the regime default for jump corrections.",
)
@click.option(
    "--golden",
    default=None,
    type=click.Path(exists=True, dir_okay=False),
    help="Compare the output against this golden file.",
)
@click.pass_context
def compare(
    ctx, builtin, f, v, vs, e0, potential_file, x, y, order,
    ray, kmin, kmax, samples, oracle, corrected, golden,
):
    """Measure the scaled remainder k^N Delta_N along a wavenumber ray."""
    cfg = _layer(
        ctx, builtin=builtin, f=f, v=v, vs=vs, e0=e0,
        potential_file=potential_file, x=x, y=y, order=order,
        ray=ray, kmin=kmin, kmax=kmax, samples=samples, oracle=oracle,
    )
    record = _post(
        ctx,
        "/compare",
        {
            **_source_payload(cfg),
            "x": cfg.x,
            "y": cfg.y,
            "order": cfg.order,
            "ray": cfg.ray,
            "kmin": cfg.kmin,
            "kmax": cfg.kmax,
            "samples": cfg.samples,
            "oracle": cfg.oracle,
            "corrected": corrected,
            "threads": cfg.threads,
        },
    )
    fmt = cfg.format or "csv"
    text = to_json(record) if fmt == "json" else csv_from_record(record)
    _check_golden(ctx, text, golden)
    _emit(ctx, text)


@main.command()
@_source_options
@click.option("--x", type=float, required=True)
@click.option("--y", type=float, required=True)
@click.option("--N", "order", type=int, default=3, help="Number of g_n terms.")
@click.option("--tmin", type=float, default=None)
@click.option("--tmax", type=float, default=None)
@click.option("--tpoints", type=int, default=None)
@click.pass_context
def shorttime(ctx, builtin, f, v, vs, e0, potential_file, x, y, order, tmin, tmax, tpoints):
    """Tabulate the short-time kernel series on a t-grid."""
    cfg = _layer(
        ctx, builtin=builtin, f=f, v=v, vs=vs, e0=e0,
        potential_file=potential_file, x=x, y=y, order=order,
        tmin=tmin, tmax=tmax, tpoints=tpoints,
    )
    record = _post(
        ctx,
        "/shorttime",
        {
            **_source_payload(cfg),
            "x": cfg.x,
            "y": cfg.y,
            "order": cfg.order,
            "tmin": cfg.tmin,
            "tmax": cfg.tmax,
            "tpoints": cfg.tpoints,
        },
    )
    if (cfg.format or "csv") == "json":
        _emit(ctx, to_json(record))
        return
    lines = ["t,series,exact"]
    for row in record["rows"]:
        exact = "" if row["exact"] is None else _CSV_FLOAT % row["exact"]
        lines.append(f"{_CSV_FLOAT % row['t']},{_CSV_FLOAT % row['series']},{exact}")
    _emit(ctx, "\n".join(lines) + "\n")


@main.command()
@_source_options
@click.option("--x", type=float, required=True)
@click.option("--y", type=float, required=True)
@click.pass_context
def validity(ctx, builtin, f, v, vs, e0, potential_file, x, y):
    """Print per-regime order caps and jump corrections."""
    cfg = _layer(
        ctx, builtin=builtin, f=f, v=v, vs=vs, e0=e0,
        potential_file=potential_file, x=x, y=y,
    )
    record = _post(
        ctx,
        "/validity",
        {**_source_payload(cfg), "x": cfg.x, "y": cfg.y},
    )
    if cfg.format == "json" or cfg.output:
        _emit(ctx, to_json(record))
        return
    if cfg.format == "csv":
        raise click.UsageError("validity supports only text or json output")
    for regime, rep in record["regimes"].items():
        cap = "unbounded" if rep["max_order"] is None else str(rep["max_order"])
        click.echo(f"{regime}: max order {cap}")
        for n, c in rep["corrections"]:
            click.echo(f"  correction at order {n}: {c:+g}")
        for note in rep["notes"]:
            click.echo(f"  note: {note}")


@main.command()
@_source_options
@click.option("--x1", type=float, required=True, help="Left endpoint.")
@click.option("--x2", type=float, required=True, help="Right endpoint.")
@click.option("--kmin", type=float, default=None)
@click.option("--kmax", type=float, default=None)
@click.option("--samples", type=int, default=None)
@click.pass_context
def scatter(ctx, builtin, f, v, vs, e0, potential_file, x1, x2, kmin, kmax, samples):
    """Sweep transmission and reflection coefficients of a finite interval."""
    cfg = _layer(
        ctx, builtin=builtin, f=f, v=v, vs=vs, e0=e0,
        potential_file=potential_file, kmin=kmin, kmax=kmax, samples=samples,
    )
    record = _post(
        ctx,
        "/scatter",
        {
            **_source_payload(cfg),
            "x1": x1,
            "x2": x2,
            "kmin": cfg.kmin,
            "kmax": cfg.kmax,
            "samples": cfg.samples,
        },
    )
    if (cfg.format or "csv") == "json":
        _emit(ctx, to_json(record))
        return
    lines = ["k_re,k_im,tau_re,tau_im,rr_re,rr_im,rl_re,rl_im"]
    for s in record["sweep"]:
        values = (*s["k"], *s["tau"], *s["r_r"], *s["r_l"])
        lines.append(",".join(_CSV_FLOAT % v for v in values))
    _emit(ctx, "\n".join(lines) + "\n")


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8777)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
