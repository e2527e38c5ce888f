"""Command-line front end.

Usage::

    vmdfourier transform --function runge --k 1.0
    vmdfourier sweep --function odd_vmd --k-grid log:1:64:32 --format csv
    vmdfourier invert --function runge --x-grid -3:3:7 --n 16
    vmdfourier taper --m 10 --a0 1 --a1 0 --a2 0 --samples 100
    vmdfourier classify --function samples.csv
    vmdfourier verify --function runge --suite all

``--function`` takes a corpus name or the path of a sampled-function CSV.
Grids are comma lists (``1,2,5``), linear ranges ``start:stop:count`` or
geometric ranges ``log:start:stop:count``.  ``--config FILE`` reads
``key = value`` lines used as defaults; flags given on the command line
win.  Without ``--output`` results go to stdout, or to
``$VMDFOURIER_OUTPUT_DIR/<command>-<function>.<format>`` when that
variable is set.

Exit status: 0 success, 1 a verification check failed, 2 usage or input
error, 3 a numerical certificate could not be established.
"""
from __future__ import annotations

import functools
import math
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import click
import numpy as np

from . import quadrature
from .corpus import corpus_names, get_function
from .errors import (
    CapabilityError,
    CertificationError,
    DomainError,
    EvaluationError,
    ParseError,
    UnknownFunctionError,
)
from .funcmodel import FunctionDescriptor
from .io import csv_text, json_text, load_sampled_function, write_atomic
from .taper import build_approximant, build_taper, taper_table
from .verify import SUITES, CachedTransform, profile, run_suite

__all__ = ["cli", "main", "RunConfig", "parse_grid", "read_config_file", "resolve_function"]

OUTPUT_DIR_ENV = "VMDFOURIER_OUTPUT_DIR"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_CERTIFICATION = 3


@dataclass(frozen=True)
class RunConfig:
    """The resolved settings of one invocation, embedded in every output."""

    command: str
    function: Optional[str] = None
    k: Optional[float] = None
    k_grid: Optional[str] = None
    x_grid: Optional[str] = None
    n: Optional[int] = None
    m: Optional[int] = None
    a0: Optional[float] = None
    a1: Optional[float] = None
    a2: Optional[float] = None
    samples: Optional[int] = None
    suite: Optional[str] = None
    rel_tol: float = 1e-8
    max_segments: int = 10**6
    format: str = "json"
    output: Optional[str] = None

    def __post_init__(self):
        if not 0 < self.rel_tol <= 0.1:
            raise DomainError(f"rel_tol must lie in (0, 0.1], got {self.rel_tol!r}")
        if self.max_segments < 1:
            raise DomainError("max_segments must be positive")
        for name in ("n", "m", "samples"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise DomainError(f"{name} must be a positive integer")
        if self.format not in ("csv", "json"):
            raise DomainError(f"format must be csv or json, got {self.format!r}")

    def provenance(self) -> dict:
        # the output path is deliberately left out so that the same run
        # written to two places produces identical bytes
        return {k: v for k, v in asdict(self).items() if v is not None and k != "output"}


def parse_grid(spec: str) -> np.ndarray:
    """Parse ``a,b,c``, ``start:stop:count`` or ``log:start:stop:count``."""
    s = spec.strip()
    try:
        if s.startswith("log:"):
            a, b, n = s[4:].split(":")
            a, b, n = float(a), float(b), int(n)
            if a * b <= 0:
                raise DomainError(f"geometric grid endpoints must share a sign: {spec!r}")
            grid = np.geomspace(a, b, n)
        elif ":" in s:
            a, b, n = s.split(":")
            grid = np.linspace(float(a), float(b), int(n))
        else:
            grid = np.array([float(v) for v in s.split(",") if v.strip()])
    except ValueError:
        raise DomainError(f"malformed grid {spec!r}") from None
    if grid.size == 0:
        raise DomainError(f"empty grid {spec!r}")
    if not np.all(np.isfinite(grid)):
        raise DomainError(f"non-finite grid value in {spec!r}")
    return grid


def read_config_file(path) -> dict:
    """Read ``key = value`` lines; ``#`` starts a comment.  Keys may use ``-`` or ``_``."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError("expected 'key = value'", line=lineno)
            key, value = (p.strip() for p in line.split("=", 1))
            if not key:
                raise ParseError("empty key", line=lineno)
            out[key.replace("-", "_")] = value
    return out


def resolve_function(name: str) -> FunctionDescriptor:
    """Corpus name, or path of a sampled-function CSV."""
    if name in corpus_names():
        return get_function(name)
    if os.path.sep in name or name.endswith(".csv") or Path(name).exists():
        if not Path(name).is_file():
            raise UnknownFunctionError(f"no such file {name!r}; corpus: {', '.join(corpus_names())}")
        return load_sampled_function(name)
    return get_function(name)


def _emit(cfg: RunConfig, payload: dict, columns=None, rows=None):
    if cfg.format == "csv":
        if columns is None:
            raise DomainError(f"{cfg.command} has no tabular form; use --format json")
        text = csv_text(columns, rows, cfg.provenance())
    else:
        text = json_text(payload, cfg.provenance())
    target = cfg.output
    if target is None and os.environ.get(OUTPUT_DIR_ENV):
        stem = cfg.command if cfg.function is None else f"{cfg.command}-{Path(cfg.function).stem}"
        target = str(Path(os.environ[OUTPUT_DIR_ENV]) / f"{stem}.{cfg.format}")
    if target is None:
        click.echo(text, nl=False)
    else:
        write_atomic(target, text)


def _guarded(fn):
    """Map library errors onto the exit-code contract."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (UnknownFunctionError, ParseError, DomainError, CapabilityError, FileNotFoundError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
        except (CertificationError, EvaluationError) as exc:
            click.echo(f"certification failed: {exc}", err=True)
            sys.exit(EXIT_CERTIFICATION)

    return wrapper


def _load_config_defaults(ctx, param, value):
    if value is None:
        return None
    try:
        cfg = read_config_file(value)
    except ParseError as exc:
        raise click.BadParameter(str(exc), ctx=ctx, param=param)
    except OSError as exc:
        raise click.BadParameter(str(exc), ctx=ctx, param=param)
    if "format" in cfg:
        cfg["fmt"] = cfg.pop("format")
    ctx.default_map = {name: dict(cfg) for name in cli.commands}
    return value


def _common(fn):
    fn = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="json", show_default=True)(fn)
    fn = click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
                      help="Output file (written atomically).")(fn)
    return fn


def _tolerances(fn):
    fn = click.option("--max-segments", type=int, default=10**6, show_default=True,
                      help="Cap on half-period segments per tail.")(fn)
    fn = click.option("--rel-tol", type=float, default=1e-8, show_default=True)(fn)
    return fn


@click.group()
@click.option("--config", type=click.Path(dir_okay=False), callback=_load_config_defaults, is_eager=True,
              expose_value=False, help="File of 'key = value' defaults; flags override.")
@click.version_option(package_name="artifact")
def cli():
    """Certified Fourier transforms of slowly decaying functions."""


def _transform_rows(results):
    return [
        (r.k, r.value.real, r.value.imag, r.tail_bound, r.segments_used,
         r.core_bound_Nk if r.core_bound_Nk is not None else math.nan)
        for r in results
    ]


_SWEEP_COLUMNS = ("k", "re_value", "im_value", "tail_bound", "segments_used", "core_bound_Nk")


def _result_dict(r):
    return {
        "k": r.k,
        "value": [r.value.real, r.value.imag],
        "tail_bound": r.tail_bound,
        "quad_error": r.quad_error,
        "segments_used": r.segments_used,
        "core_bound_Nk": r.core_bound_Nk,
    }


def _transforms(cfg: RunConfig, ks):
    f = resolve_function(cfg.function)
    if cfg.m is not None:
        fm = build_approximant(f, cfg.m)
        return [quadrature.transform_absolute(fm, k, min(cfg.rel_tol, 1e-10)) for k in ks], "absolute"
    prof = profile(f)
    if prof.osc.kind != "non_oscillatory":
        raise CapabilityError(
            f"{f.name} has {prof.osc.kind} tails; pass --m to transform its compactly supported approximant"
        )
    rs = quadrature.sweep(f, prof.osc, ks, cfg.rel_tol, cfg.max_segments)
    return rs, "conditional"


@cli.command()
@click.option("--function", "function", required=True, help="Corpus name or sampled-function CSV.")
@click.option("--k", type=float, default=None, help="Single frequency.")
@click.option("--k-grid", default=None, help="Frequency grid (see module help).")
@click.option("--m", type=int, default=None, help="Transform the approximant f_m instead of f.")
@_tolerances
@_common
@_guarded
def transform(function, k, k_grid, m, rel_tol, max_segments, output, fmt):
    """Fourier transform of a function at one or more frequencies."""
    if (k is None) == (k_grid is None):
        raise DomainError("give exactly one of --k and --k-grid")
    cfg = RunConfig("transform", function, k=k, k_grid=k_grid, m=m, rel_tol=rel_tol,
                    max_segments=max_segments, format=fmt, output=output)
    ks = [k] if k is not None else parse_grid(k_grid).tolist()
    rs, method = _transforms(cfg, ks)
    payload = {"method": method, "results": [_result_dict(r) for r in rs]}
    _emit(cfg, payload, _SWEEP_COLUMNS, _transform_rows(rs))


@cli.command()
@click.option("--function", "function", required=True, help="Corpus name or sampled-function CSV.")
@click.option("--k-grid", required=True, help="Frequency grid (see module help).")
@click.option("--m", type=int, default=None, help="Sweep the approximant f_m instead of f.")
@_tolerances
@_common
@_guarded
def sweep(function, k_grid, m, rel_tol, max_segments, output, fmt):
    """Transform over a frequency grid (plot-ready table)."""
    cfg = RunConfig("sweep", function, k_grid=k_grid, m=m, rel_tol=rel_tol, max_segments=max_segments,
                    format=fmt, output=output)
    rs, method = _transforms(cfg, parse_grid(k_grid).tolist())
    payload = {"method": method, "results": [_result_dict(r) for r in rs]}
    _emit(cfg, payload, _SWEEP_COLUMNS, _transform_rows(rs))


@cli.command()
@click.option("--function", "function", required=True, help="Corpus name or sampled-function CSV.")
@click.option("--x-grid", required=True, help="Points x at which to invert.")
@click.option("--n", type=int, required=True, help="Frequency cutoff.")
@_tolerances
@_common
@_guarded
def invert(function, x_grid, n, rel_tol, max_segments, output, fmt):
    """Truncated inverse transform of F(f), compared with f."""
    cfg = RunConfig("invert", function, x_grid=x_grid, n=n, rel_tol=rel_tol, max_segments=max_segments,
                    format=fmt, output=output)
    f = resolve_function(function)
    prof = profile(f)
    if prof.osc.kind != "non_oscillatory":
        raise CapabilityError(f"{f.name} has {prof.osc.kind} tails; inversion needs a conditional transform")
    xs = parse_grid(x_grid)
    F = CachedTransform(f, prof, rel_tol, abs_tol=1e-13, max_segments=max_segments)
    vals, errs = quadrature.inverse_transform(F, xs, n, rel_tol, abs_tol=1e-12, return_error=True)
    fx = f(xs)
    rows = [(x, v.real, v.imag, y, abs(v.real - y), e) for x, v, y, e in zip(xs, vals, fx, errs)]
    payload = {
        "n": n,
        "m": int(math.floor(n**1.5)),
        "points": [
            {"x": r[0], "value": [r[1], r[2]], "f": r[3], "abs_error": r[4], "quad_error": r[5]} for r in rows
        ],
    }
    _emit(cfg, payload, ("x", "re_value", "im_value", "f", "abs_error", "quad_error"), rows)


@cli.command()
@click.option("--m", type=float, required=True, help="Taper start (must exceed sqrt(72/19)).")
@click.option("--a0", type=float, required=True)
@click.option("--a1", type=float, required=True)
@click.option("--a2", type=float, required=True)
@click.option("--samples", type=int, default=101, show_default=True)
@click.option("--side", type=click.Choice(["right", "left"]), default="right", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None)
@_guarded
def taper(m, a0, a1, a2, samples, side, fmt, output):
    """Tabulate the quintic taper and its first three derivatives."""
    cfg = RunConfig("taper", m=m, a0=a0, a1=a1, a2=a2, samples=samples, format=fmt, output=output)
    tp = build_taper(m, a0, a1, a2, side)
    table = taper_table(tp, samples)
    cols = ("x", "h", "h1", "h2", "h3")
    payload = {
        "side": side,
        "sup_bound": tp.sup_bound(),
        "sup_abs": tp.sup_abs(),
        "abs_h3_integral": tp.abs_third_derivative_integral(),
        "rows": [dict(zip(cols, map(float, row))) for row in table],
    }
    _emit(cfg, payload, cols, table.tolist())


@cli.command()
@click.option("--function", "function", required=True, help="Corpus name or sampled-function CSV.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="json", show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None)
@_guarded
def classify(function, fmt, output):
    """Decay class and monotone breakpoints of a function."""
    cfg = RunConfig("classify", function, format=fmt, output=output)
    f = resolve_function(function)
    prof = profile(f)
    d, o = prof.decay, prof.osc
    payload = {
        "function": f.name,
        "decay": {"class": d.decay_class, "constant_C": d.constant_C, "exponent_p": d.exponent_p,
                  "grid_max_abs_x": d.grid_max_abs_x},
        "oscillation": {"kind": o.kind, "delta": o.delta, "core_radius_E": o.core_radius_E,
                        "core_max_K": o.core_max_K, "breakpoints": list(o.breakpoints)},
        "metadata": {k: v for k, v in f.metadata.items()},
    }
    row = (f.name, d.decay_class, d.constant_C, d.exponent_p, o.kind, o.delta, o.core_radius_E,
           o.core_max_K, len(o.breakpoints))
    cols = ("function", "decay_class", "constant_C", "exponent_p", "oscillation", "delta", "core_radius_E",
            "core_max_K", "breakpoints")
    _emit(cfg, payload, cols, [row])


@cli.command()
@click.option("--function", "function", required=True, help="Corpus name or sampled-function CSV.")
@click.option("--suite", type=click.Choice(SUITES), default="all", show_default=True)
@click.option("--rel-tol", type=float, default=1e-8, show_default=True)
@_common
@_guarded
def verify(function, suite, rel_tol, output, fmt):
    """Run measured checks; exit 1 if any fails."""
    cfg = RunConfig("verify", function, suite=suite, rel_tol=rel_tol, format=fmt, output=output)
    report = run_suite(resolve_function(function), suite, rel_tol)
    d = report.to_dict()
    rows = [(c["name"], c["pass"], c["measured"], c["bound"]) for c in d["checks"]]
    _emit(cfg, d, ("name", "pass", "measured", "bound"), rows)
    if not report.overall_pass:
        sys.exit(EXIT_CHECK_FAILED)


def main(argv=None):
    cli.main(args=argv, prog_name="vmdfourier")


if __name__ == "__main__":  # pragma: no cover
    main()
