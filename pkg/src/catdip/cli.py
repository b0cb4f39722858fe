"""catdip command line: energy curves, dip reports, scaling sweeps and self-verification.

Precedence for every option is built-in default < --config file < command-line flag.
Exit status: 0 success, 1 a verification check failed, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, fields, replace

import numpy as np

from .analytic import energy_curve, find_dip, scaling_sweep, sep_grid
from .errors import CatDipError
from .kernel import DEFAULT_POINTS, QUADRATURE_RULES, gaussian_mode
from .observables import normalized_cat_energy_numeric
from .verify import GridSetup, run_checks

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2

SUBCOMMANDS = ("curve", "dip", "sweep", "verify")
FORMATS = ("csv", "json")
ENGINES = ("closed", "numeric")
DEFAULT_N = (100.0, 1000.0, 10000.0)
SWEEP_N = (100.0, 300.0, 1000.0, 3000.0, 10000.0, 30000.0, 100000.0)

CURVE_COLUMNS = ("n_avg", "z", "sep_norm", "e_norm", "de_dz")
DIP_COLUMNS = ("n_avg", "sep_norm_star", "e_min", "depth", "max_opposing_slope", "boundary_case")

# central-difference step in 2z/w0 for slopes of the numeric engine
_FD_STEP = 1e-6


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    n_values: tuple[float, ...] | None = None
    w0: float = 1.0
    mass: float = 0.0
    zmax_norm: float = 3.0
    steps: int = 601
    k_max: float | None = None
    points: int = DEFAULT_POINTS
    quadrature: str = "trapezoid"
    engine: str = "closed"
    format: str = "csv"
    out: str | None = None

    def validate(self) -> "RunConfig":
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        if self.n_values is not None:
            if not self.n_values:
                raise UsageError("n_values must not be empty")
            if any(not (math.isfinite(n) and n >= 0) for n in self.n_values):
                raise UsageError("every n must be a finite nonnegative number")
        if not (math.isfinite(self.w0) and self.w0 > 0):
            raise UsageError("w0 must be positive")
        if not (math.isfinite(self.mass) and self.mass >= 0):
            raise UsageError("mass must be nonnegative")
        if not (math.isfinite(self.zmax_norm) and self.zmax_norm > 0):
            raise UsageError("zmax-norm must be positive")
        if self.steps < 2:
            raise UsageError("steps must be at least 2")
        if self.k_max is not None and not self.k_max > 0:
            raise UsageError("k-max must be positive")
        if self.points < 2:
            raise UsageError("points must be at least 2")
        if self.quadrature not in QUADRATURE_RULES:
            raise UsageError(f"quadrature must be one of {', '.join(QUADRATURE_RULES)}")
        if self.engine not in ENGINES:
            raise UsageError(f"engine must be one of {', '.join(ENGINES)}")
        if self.format not in FORMATS:
            raise UsageError(f"format must be one of {', '.join(FORMATS)}")
        return self

    def grid_setup(self) -> GridSetup:
        return GridSetup(self.w0, self.mass, self.k_max, self.points, self.quadrature)


def parse_n_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise UsageError(f"cannot parse particle numbers {text!r}") from None
    if not values:
        raise UsageError("n list is empty")
    return values


# config key -> (RunConfig field, parser)
_CONFIG_KEYS = {
    "n": ("n_values", parse_n_list),
    "n_values": ("n_values", parse_n_list),
    "w0": ("w0", float),
    "mass": ("mass", float),
    "zmax_norm": ("zmax_norm", float),
    "steps": ("steps", int),
    "k_max": ("k_max", float),
    "points": ("points", int),
    "quadrature": ("quadrature", str),
    "engine": ("engine", str),
    "format": ("format", str),
    "out": ("out", str),
}


def read_config(path: str) -> dict:
    """Plain ``key = value`` lines; ``#`` starts a comment; unknown keys are an error."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    out = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        name, conv = _CONFIG_KEYS[key]
        try:
            out[name] = conv(value)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # defaults are None so that unset flags do not override the config file
    common.add_argument("--n", dest="n_values", type=_arg(parse_n_list), help="comma-separated mean particle numbers")
    common.add_argument("--w0", type=float, help="width of the mass distribution (default 1.0)")
    common.add_argument("--mass", type=float, help="field mass in the dispersion sqrt(k^2 + m^2) (default 0)")
    common.add_argument("--zmax-norm", dest="zmax_norm", type=float, help="largest 2z/w0 of a curve (default 3.0)")
    common.add_argument("--steps", type=int, help="samples per curve (default 601)")
    common.add_argument("--k-max", dest="k_max", type=float, help="wave-number cutoff (default 24/w0)")
    common.add_argument("--points", type=int, help=f"wave-number grid points (default {DEFAULT_POINTS})")
    common.add_argument("--quadrature", help="trapezoid or gauss-legendre")
    common.add_argument("--engine", help="curve source: closed (default) or numeric")
    common.add_argument("--format", help="csv (default) or json")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--config", help="key=value configuration file")

    parser = argparse.ArgumentParser(prog="catdip", description="Energy dips of translated-thermal cat states.")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="{curve,dip,sweep,verify}")
    sub.add_parser("curve", parents=[common], help="normalized energy against 2z/w0")
    sub.add_parser("dip", parents=[common], help="dip position, depth and opposing slope per n")
    sub.add_parser("sweep", parents=[common], help="dip rows over many n plus a log-log fit")
    sub.add_parser("verify", parents=[common], help="run the oracle suite")
    return parser


def _arg(conv):
    def wrapped(text):
        try:
            return conv(text)
        except UsageError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    wrapped.__name__ = conv.__name__
    return wrapped


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(args.subcommand)
    if args.config:
        cfg = replace(cfg, **read_config(args.config))
    flags = {f.name: getattr(args, f.name) for f in fields(RunConfig) if getattr(args, f.name, None) is not None}
    flags.pop("subcommand", None)
    return replace(cfg, **flags).validate()


def format_value(x) -> str:
    """Fixed 12-decimal text for floats; locale independent."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    x = float(x)
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    s = f"{x:.12f}"
    if s.startswith("-") and float(s) == 0.0:
        s = s[1:]
    return s


def format_n(n: float) -> str:
    return f"{n:.12g}"


def _json_value(text: str):
    if text in ("true", "false"):
        return text == "true"
    v = float(text)
    return v if math.isfinite(v) else text


@dataclass
class Table:
    columns: tuple[str, ...]
    rows: list[list[str]]
    meta: dict

    def to_csv(self) -> str:
        out = [",".join(self.columns)]
        out.extend(",".join(r) for r in self.rows)
        out.extend(f"# {k}={v}" for k, v in self.meta.items())
        return "\n".join(out) + "\n"

    def to_json(self) -> str:
        doc = {
            "columns": list(self.columns),
            "rows": [[_json_value(v) for v in r] for r in self.rows],
        }
        if self.meta:
            doc["meta"] = {k: _json_value(v) for k, v in self.meta.items()}
        return json.dumps(doc, indent=1) + "\n"


def _numeric_curve(cfg: RunConfig, n: float):
    grid = cfg.grid_setup().build()
    theta = gaussian_mode(cfg.w0, grid)
    s = sep_grid(n, cfg.zmax_norm, cfg.steps)

    def energy(sep):
        return normalized_cat_energy_numeric(n, sep, theta, cfg.w0, m=cfg.mass)

    e = energy(s)
    # even in s, so the central difference at s = 0 is exactly zero
    de_ds = (energy(s + _FD_STEP) - energy(s - _FD_STEP)) / (2.0 * _FD_STEP)
    return 0.5 * cfg.w0 * s, s, e, de_ds * 2.0 / cfg.w0


def run_curve(cfg: RunConfig) -> Table:
    rows = []
    for n in sorted(cfg.n_values or DEFAULT_N):
        if cfg.engine == "numeric":
            z, s, e, de_dz = _numeric_curve(cfg, n)
        else:
            c = energy_curve(n, cfg.w0, cfg.zmax_norm, cfg.steps)
            z, s, e, de_dz = c.z, c.sep_norm, c.e_norm, c.de_dz
        for i in range(len(z)):
            rows.append([format_n(n)] + [format_value(v) for v in (z[i], s[i], e[i], de_dz[i])])
    return Table(CURVE_COLUMNS, rows, {})


def _dip_row(d) -> list[str]:
    vals = (d.sep_norm_star, d.e_min, d.depth, d.max_opposing_slope, d.boundary_case)
    return [format_n(d.n_avg)] + [format_value(v) for v in vals]


def run_dip(cfg: RunConfig) -> Table:
    ns = sorted(cfg.n_values or DEFAULT_N)
    if any(n <= 0 for n in ns):
        raise UsageError("dip needs n > 0")
    return Table(DIP_COLUMNS, [_dip_row(find_dip(n, cfg.w0)) for n in ns], {})


def run_sweep(cfg: RunConfig) -> Table:
    fit = scaling_sweep(cfg.n_values or SWEEP_N, cfg.w0)
    meta = {
        "fit_exponent": format_value(fit.exponent),
        "fit_intercept": format_value(fit.intercept),
        "slope_increasing": format_value(fit.slope_increasing),
    }
    return Table(DIP_COLUMNS, [_dip_row(d) for d in fit.dips], meta)


def run_verify(cfg: RunConfig) -> tuple[int, str]:
    report = run_checks(cfg.grid_setup())
    status = EXIT_OK if report.passed else EXIT_CHECK_FAILED
    if cfg.format == "json":
        doc = {
            "passed": report.passed,
            "checks": [
                {"name": r.name, "passed": r.passed, "residual": r.residual, "tol": r.tol, "detail": r.detail}
                for r in report.results
            ],
        }
        return status, json.dumps(doc, indent=1) + "\n"
    summary = "all checks passed" if report.passed else "FAILED: " + ", ".join(
        r.name for r in report.results if not r.passed
    )
    return status, "\n".join(report.lines() + [summary]) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror}") from None


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
        if cfg.subcommand == "verify":
            status, text = run_verify(cfg)
        else:
            table = {"curve": run_curve, "dip": run_dip, "sweep": run_sweep}[cfg.subcommand](cfg)
            status = EXIT_OK
            text = table.to_json() if cfg.format == "json" else table.to_csv()
        _emit(text, cfg.out)
    except (UsageError, CatDipError) as exc:
        print(f"catdip: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return status


if __name__ == "__main__":
    sys.exit(main())
