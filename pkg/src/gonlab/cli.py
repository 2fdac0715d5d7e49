"""
Command-line interface for gonlab.

Usage:
    gonlab minima --lattice Zd.txt --tau "2,-1,-1"
    gonlab trajectory --theta golden.txt --weights w.txt --gamma 1 --smax 20
    gonlab exponent --kind omega --theta golden.txt --weights w.txt
    gonlab verify --suite local --d 2,3 --seeds 2
    gonlab diagram --weights w.txt --delta 2
    gonlab plot-data --weights w.txt --points 10

Every command writes deterministic TSV (or JSON with ``--format json``).
Rationals are printed as ``p/q`` and log reals as ``log(r)/n+q`` so that
output re-parses into the originating records without loss.

Exit codes: 0 success, 1 usage, 2 inconclusive, 3 budget, 4 input,
5 when ``verify`` finds a failing check.
"""

from __future__ import annotations

import json
import math
import sys
from fractions import Fraction
from typing import Sequence

import click

from . import exponents as ex
from .errors import BudgetExceeded, Inconclusive, InputError
from .exact import as_fraction, format_logreal, format_rational, parse_logreal, parse_rational
from .lattice import Lattice, parse_lattice, parse_theta, theta_lattice
from .minima import DEFAULT_BUDGET, LatticePoint, MinimaProfile, successive_minima
from .params import (
    TauVector,
    Weights,
    collinearity_residual,
    diagram_points,
    gamma_delta,
    mu_of_gamma,
    parse_weights,
)
from .verify import run_suite, summarize

__all__ = [
    "EXIT_BUDGET",
    "EXIT_FAILED",
    "EXIT_INCONCLUSIVE",
    "EXIT_INPUT",
    "EXIT_OK",
    "EXIT_USAGE",
    "cli",
    "format_profile_row",
    "main",
    "parse_config",
    "parse_diagram",
    "parse_plot_data",
    "parse_profile_row",
    "parse_trajectory",
]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCONCLUSIVE = 2
EXIT_BUDGET = 3
EXIT_INPUT = 4
# not an error: a verification check produced a counterexample
EXIT_FAILED = 5

INF = math.inf


# ---------------------------------------------------------------------------
# Input helpers
# ---------------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _rationals(text: str) -> list[Fraction]:
    try:
        return [parse_rational(x) for x in text.replace(",", " ").split()]
    except ValueError as exc:
        raise InputError(f"bad rational list {text!r}") from exc


def _rational(text: str, name: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise InputError(f"bad {name}: {text!r}") from exc


def _positive(x: Fraction, name: str) -> Fraction:
    if x <= 0:
        raise InputError(f"{name} must be positive")
    return x


def parse_config(text: str) -> dict[str, dict[str, str]]:
    """Parse ``key=value`` lines into a click ``default_map``.

    A bare key applies to every command that has that option; ``cmd.key``
    targets one command. Keys use option names (``smax``, ``grid-step``).
    """
    shared: dict[str, str] = {}
    scoped: dict[str, dict[str, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"config line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if "." in key:
            cmd, opt = key.split(".", 1)
            scoped.setdefault(cmd.replace("_", "-"), {})[opt] = value
        else:
            shared[key] = value
    out = {}
    for name, cmd in cli.commands.items():
        params = {p.name for p in cmd.params}
        vals = {k: v for k, v in shared.items() if k in params}
        vals.update(scoped.get(name, {}))
        unknown = set(scoped.get(name, {})) - params
        if unknown:
            raise InputError(f"unknown option(s) for {name}: {', '.join(sorted(unknown))}")
        if vals:
            out[name] = vals
    stray = set(scoped) - set(cli.commands)
    if stray:
        raise InputError(f"unknown command(s) in config: {', '.join(sorted(stray))}")
    return out


def _load_lattice(lattice_path, theta_path, weights_path) -> Lattice:
    if lattice_path and theta_path:
        raise click.UsageError("give either --lattice or --theta, not both")
    if lattice_path:
        return parse_lattice(_read(lattice_path))
    if theta_path:
        theta = parse_theta(_read(theta_path))
        if weights_path:
            return ex.weighted_lattice(theta, parse_weights(_read(weights_path)))
        return theta_lattice(theta)
    raise click.UsageError("one of --lattice or --theta is required")


def _load_weighted(theta_path, weights_path):
    if not theta_path:
        raise click.UsageError("--theta is required")
    theta = parse_theta(_read(theta_path))
    w = parse_weights(_read(weights_path)) if weights_path else Weights.trivial(theta.m, theta.n)
    return theta, w


def _emit_tsv(rows: Sequence[Sequence[str]]):
    for row in rows:
        click.echo("\t".join(row))


def _emit_json(obj):
    click.echo(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def _real(x: float) -> str:
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return repr(float(x))


def _unreal(text: str) -> float:
    return float(text)


# ---------------------------------------------------------------------------
# Record formats (each with its parser)
# ---------------------------------------------------------------------------

def _tau_tag(tau: Sequence) -> str:
    return "tau=" + ",".join(format_rational(as_fraction(x)) for x in tau)


def _point_record(p: LatticePoint) -> dict:
    return {"coeffs": list(p.coeffs), "coords": [format_rational(x) for x in p.coords]}


def _point_from_record(rec: dict) -> LatticePoint:
    return LatticePoint(tuple(int(c) for c in rec["coeffs"]), tuple(parse_rational(x) for x in rec["coords"]))


def profile_header(d: int) -> list[str]:
    return ["tag"] + [f"L{k}" for k in range(1, d + 1)] + [f"S{k}" for k in range(1, d + 1)] + ["witnesses"]


def format_profile_row(p: MinimaProfile) -> list[str]:
    """One TSV row: tag, ``L_1..L_d``, ``S_1..S_d`` and the witnesses as a JSON array."""
    wit = json.dumps([_point_record(w) for w in p.witnesses], separators=(",", ":"))
    return [_tau_tag(p.tau)] + [format_logreal(x) for x in p.L] + [format_logreal(x) for x in p.S] + [wit]


def parse_profile_row(row: Sequence[str] | str, precision_bits: int = 128) -> MinimaProfile:
    """Inverse of ``format_profile_row`` (the node count is not carried)."""
    if isinstance(row, str):
        row = row.rstrip("\n").split("\t")
    if not row[0].startswith("tau="):
        raise InputError("profile rows start with a tau= tag")
    tau = tuple(parse_rational(x) for x in row[0][4:].split(","))
    d = len(tau)
    if len(row) != 2 * d + 2:
        raise InputError(f"expected {2 * d + 2} columns, got {len(row)}")
    L = tuple(parse_logreal(x) for x in row[1:d + 1])
    S = tuple(parse_logreal(x) for x in row[d + 1:2 * d + 1])
    wit = tuple(_point_from_record(r) for r in json.loads(row[-1]))
    return MinimaProfile(tau, L, S, wit, precision_bits)


def _profile_json(p: MinimaProfile) -> dict:
    return {
        "tau": [format_rational(as_fraction(x)) for x in p.tau],
        "L": [format_logreal(x) for x in p.L],
        "S": [format_logreal(x) for x in p.S],
        "Lfloat": [float(x) for x in p.L],
        "witnesses": [_point_record(w) for w in p.witnesses],
        "precisionBits": p.precision_bits,
        "intervalWidth": p.interval_width(),
    }


def parse_trajectory(text: str) -> list[dict]:
    """Rows of ``trajectory`` TSV as ``{"s": Fraction, "L": [LogReal], "ratio": [float]}``."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    head = lines[0].split("\t")
    d = sum(1 for h in head if h.startswith("L") and h.endswith("/s"))
    out = []
    for ln in lines[1:]:
        cols = ln.split("\t")
        out.append({
            "s": parse_rational(cols[0]),
            "ratio": [_unreal(x) for x in cols[1:d + 1]],
            "L": [parse_logreal(x) for x in cols[d + 1:2 * d + 1]],
        })
    return out


def parse_diagram(text: str) -> dict[str, tuple[Fraction, Fraction]]:
    """Labelled points from ``diagram`` TSV."""
    out = {}
    for ln in text.splitlines():
        if not ln or ln.startswith("#") or ln.startswith("label\t"):
            continue
        label, a, b = ln.split("\t")
        out[label] = (parse_rational(a), parse_rational(b))
    return out


def parse_plot_data(text: str) -> list[tuple[str, object, object]]:
    """Rows of ``plot-data`` TSV; ``inf`` stays a float infinity."""
    out = []
    for ln in text.splitlines():
        if not ln or ln.startswith("#") or ln.startswith("series\t"):
            continue
        series, a, b = ln.split("\t")
        out.append((series, INF if a == "inf" else parse_rational(a), INF if b == "inf" else parse_rational(b)))
    return out


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

_FORMAT = click.option(
    "--format", "fmt", type=click.Choice(["tsv", "json"]), default="tsv", show_default=True,
    help="Output format.",
)
_BUDGET = click.option(
    "--budget", type=click.IntRange(min=1), default=DEFAULT_BUDGET, show_default=True,
    help="Node budget for each minima search.",
)


@click.group()
@click.option("--config", "config_path", type=str, default=None,
              help="key=value file supplying option defaults; flags override it.")
@click.pass_context
def cli(ctx: click.Context, config_path: str | None):
    """Successive minima, Diophantine exponents and transference checks."""
    if config_path:
        ctx.default_map = parse_config(_read(config_path))


@cli.command()
@click.option("--lattice", "lattice_path", type=str, help="Lattice file: d, then d basis rows.")
@click.option("--theta", "theta_path", type=str, help="Theta file: 'm n', then n rows; uses its lattice.")
@click.option("--weights", "weights_path", type=str, help="Weights file, with --theta.")
@click.option("--tau", "taus", type=str, multiple=True, required=True,
              help='Comma separated exponents, e.g. "2,-1,-1"; repeatable.')
@click.option("--precision-bits", type=click.IntRange(min=16), default=128, show_default=True,
              help="Precision of the reported enclosures (JSON only).")
@_BUDGET
@_FORMAT
def minima(lattice_path, theta_path, weights_path, taus, precision_bits, budget, fmt):
    """Log successive minima of a lattice in the boxes B_tau."""
    lat = _load_lattice(lattice_path, theta_path, weights_path)
    profiles = []
    for t in taus:
        tau = _rationals(t)
        profiles.append(successive_minima(lat, TauVector(tau), budget, precision_bits=precision_bits))
    if fmt == "json":
        for p in profiles:
            _emit_json(_profile_json(p))
    else:
        _emit_tsv([profile_header(lat.dim)] + [format_profile_row(p) for p in profiles])
    return EXIT_OK


@cli.command()
@click.option("--lattice", "lattice_path", type=str, help="Lattice file.")
@click.option("--theta", "theta_path", type=str, help="Theta file.")
@click.option("--weights", "weights_path", type=str, help="Weights file (default: trivial weights).")
@click.option("--gamma", type=str, default="1", show_default=True, help="Ray parameter, mu = -e1 + gamma e2.")
@click.option("--mu", type=str, default=None, help="Explicit ray direction; overrides --gamma.")
@click.option("--smax", type=str, default="20", show_default=True, help="Largest s on the grid.")
@click.option("--grid-step", type=str, default="1", show_default=True, help="Spacing of the s grid.")
@_BUDGET
@_FORMAT
def trajectory(lattice_path, theta_path, weights_path, gamma, mu, smax, grid_step, budget, fmt):
    """Normalized profile L_k(s mu)/s along a ray."""
    s_max = _positive(_rational(smax, "smax"), "smax")
    step = _positive(_rational(grid_step, "grid-step"), "grid-step")
    lat = _load_lattice(lattice_path, theta_path, weights_path)
    if mu is not None:
        direction = TauVector(_rationals(mu))
    else:
        if not theta_path:
            raise click.UsageError("--gamma needs --theta (or pass --mu)")
        _, w = _load_weighted(theta_path, weights_path)
        direction = mu_of_gamma(w, _rational(gamma, "gamma")).components
    if len(direction) != lat.dim:
        raise InputError("ray direction and lattice dimensions differ")
    d = lat.dim
    grid = [step * i for i in range(1, int(s_max / step) + 1)]
    rows = [["s"] + [f"L{k}/s" for k in range(1, d + 1)] + [f"L{k}" for k in range(1, d + 1)]]
    records = []
    for s in grid:
        p = successive_minima(lat, direction.scale(s), budget)
        ratio = [float(x) / float(s) for x in p.L]
        rows.append([format_rational(s)] + [_real(r) for r in ratio] + [format_logreal(x) for x in p.L])
        records.append({"s": format_rational(s), "ratio": ratio, "L": [format_logreal(x) for x in p.L]})
    if fmt == "json":
        for r in records:
            _emit_json(r)
    else:
        click.echo("# mu=" + ",".join(format_rational(x) for x in direction))
        _emit_tsv(rows)
    return EXIT_OK


_KINDS = ["omega", "Omega", "inhom", "psi", "Psi", "lattice-omega", "lattice-Omega"]


@cli.command()
@click.option("--kind", type=click.Choice(_KINDS), default="omega", show_default=True,
              help="Which exponent to bracket.")
@click.option("--uniform", is_flag=True, help="Uniform (hat) variant.")
@click.option("--dual", "transpose", is_flag=True, help="Transposed system (omega and Omega kinds).")
@click.option("--k", type=click.IntRange(min=1), default=1, show_default=True, help="Order k.")
@click.option("--lattice", "lattice_path", type=str, help="Lattice file (lattice kinds).")
@click.option("--theta", "theta_path", type=str, help="Theta file (weighted kinds).")
@click.option("--weights", "weights_path", type=str, help="Weights file (default: trivial weights).")
@click.option("--eta", type=str, default=None, help="Inhomogeneous shift, comma separated.")
@click.option("--smax", type=str, default="20", show_default=True, help="Largest s on each ray.")
@click.option("--tail", type=str, default=format_rational(ex.DEFAULT_TAIL), show_default=True,
              help="Tail fraction of the ray used for the fit.")
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=0.05, show_default=True,
              help="Target bracket width.")
@click.option("--directions", type=click.IntRange(min=1), default=None,
              help="Direction sample size (lattice kinds).")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed of the direction sample.")
@_BUDGET
def exponent(kind, uniform, transpose, k, lattice_path, theta_path, weights_path, eta,
             smax, tail, tol, directions, seed, budget):
    """Bracket one exponent; exit 2 unless the bracket converged."""
    s_max = _positive(_rational(smax, "smax"), "smax")
    tail_fraction = _rational(tail, "tail")
    if not 0 < tail_fraction < 1:
        raise InputError("tail must lie in (0, 1)")
    opts = dict(tol=tol, s_max=s_max, tail_fraction=tail_fraction, budget=budget)
    if kind in ("omega", "Omega", "inhom"):
        theta, w = _load_weighted(theta_path, weights_path)
        if kind == "inhom":
            if eta is None:
                raise click.UsageError("--eta is required for kind inhom")
            est = ex.inhom_omega(theta, w, _rationals(eta), uniform, **opts)
        else:
            fn = {
                ("omega", False): ex.weighted_omega, ("Omega", False): ex.weighted_Omega,
                ("omega", True): ex.dual_weighted_omega, ("Omega", True): ex.dual_weighted_Omega,
            }[kind, transpose]
            est = fn(theta, w, k, uniform, **opts)
    else:
        if not lattice_path:
            raise click.UsageError("--lattice is required for lattice kinds")
        lat = parse_lattice(_read(lattice_path))
        sample = ex.direction_sample(lat.dim, directions, seed)
        lopts = dict(directions=sample, s_max=s_max, tol=tol, budget=budget)
        if kind in ("psi", "Psi"):
            est = ex.lattice_psi(lat, k, uniform, second_type=(kind == "Psi"), **lopts)
        elif kind == "lattice-omega":
            est = ex.lattice_omega(lat, k, uniform, **lopts)
        else:
            est = ex.lattice_Omega(lat, k, uniform, **lopts)
    _emit_json(est.to_record())
    return EXIT_OK if est.converged else EXIT_INCONCLUSIVE


@cli.command()
@click.option("--suite", type=click.Choice(["local", "weighted", "lattice", "all"]), default="local",
              show_default=True, help="Which checks to run.")
@click.option("--d", "dims", type=str, default="2,3", show_default=True, help="Comma separated dimensions.")
@click.option("--seeds", type=click.IntRange(min=1), default=2, show_default=True,
              help="Random lattices per dimension and generator.")
@click.option("--samples", type=click.IntRange(min=1), default=5, show_default=True,
              help="tau samples per lattice; delta samples per weight vector.")
@click.option("--smax", type=str, default="15", show_default=True, help="Largest s for estimates.")
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=0.15, show_default=True,
              help="Tolerance of estimate-based checks.")
@click.option("--directions", type=click.IntRange(min=1), default=None,
              help="Direction sample size of the lattice suite.")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True, help="Worker processes.")
@_BUDGET
def verify(suite, dims, seeds, samples, smax, tol, directions, jobs, budget):
    """Run a verification suite; exit 0 iff nothing failed."""
    try:
        ds = tuple(int(x) for x in dims.replace(",", " ").split())
    except ValueError as exc:
        raise InputError(f"bad --d {dims!r}") from exc
    if not ds or any(x < 2 for x in ds):
        raise InputError("dimensions must be at least 2")
    s_max = _positive(_rational(smax, "smax"), "smax")
    results = run_suite(suite, ds, seeds, samples, s_max, tol, budget, jobs, directions)
    for r in results:
        _emit_json(r.to_record())
    summary = summarize(results)
    _emit_json({"summary": summary})
    return EXIT_OK if summary["failed"] == 0 else EXIT_FAILED


@cli.command()
@click.option("--weights", "weights_path", type=str, required=True, help="Weights file.")
@click.option("--delta", type=str, required=True, help="Rational delta >= 0.")
def diagram(weights_path, delta):
    """Labelled points of the transference diagram in (e1, e2) coordinates."""
    w = parse_weights(_read(weights_path))
    dl = _rational(delta, "delta")
    pts = diagram_points(w, dl)
    click.echo(f"# collinearityResidual={format_rational(collinearity_residual(w, dl))}")
    _emit_tsv([["label", "e1", "e2"]] + [
        [label, format_rational(a), format_rational(b)] for label, (a, b) in sorted(pts.items())
    ])
    return EXIT_OK


def _delta_grid(points: int) -> list[Fraction]:
    lower = [Fraction(i, points) for i in range(points + 1)]
    upper = [Fraction(points, i) for i in range(points - 1, 0, -1)]
    return lower + upper


def emit_plot_data(w: Weights, points: int = 10, delta=None) -> list[list[str]]:
    """TSV rows: the curve ``gamma_delta`` on a rational grid, then the diagram points."""
    rows = [["series", "x", "y"]]
    for dl in _delta_grid(points):
        rows.append(["gamma_delta", format_rational(dl), format_rational(gamma_delta(w, dl))])
    top = gamma_delta(w, INF)
    rows.append(["gamma_delta", "inf", "inf" if top == INF else format_rational(top)])
    if delta is not None:
        for label, (a, b) in sorted(diagram_points(w, delta).items()):
            rows.append([f"diagram:{label}", format_rational(a), format_rational(b)])
    return rows


@cli.command("plot-data")
@click.option("--weights", "weights_path", type=str, required=True, help="Weights file.")
@click.option("--points", type=click.IntRange(min=1), default=10, show_default=True,
              help="Grid density: delta = i/N and N/i.")
@click.option("--delta", type=str, default=None, help="Also emit the diagram at this delta.")
def plot_data(weights_path, points, delta):
    """Plot-ready TSV for the gamma_delta curve and the diagram."""
    w = parse_weights(_read(weights_path))
    dl = None if delta is None else _rational(delta, "delta")
    _emit_tsv(emit_plot_data(w, points, dl))
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return the exit code instead of raising ``SystemExit``."""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name="gonlab", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_INPUT
    except InputError as exc:
        click.echo(f"input error: {exc}", err=True)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        click.echo(f"budget exceeded: {exc}", err=True)
        return EXIT_BUDGET
    except Inconclusive as exc:
        click.echo(f"inconclusive: {exc}", err=True)
        return EXIT_INCONCLUSIVE
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
