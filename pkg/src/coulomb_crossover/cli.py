"""Command-line interface: ``coulomb-crossover <command> [flags]``.

Commands:

* ``solve2d``: radial crossover densities in the plane, one table per c.
* ``density1d``: crossover densities on the line, one table per c.
* ``sample``: a finite-N gas run; writes a checkpoint and a histogram.
* ``check``: the identity suite; exit status 1 when any check fails.

Every command also reads ``--config FILE``, an INI file with one section
per command whose keys are flag names; flags given on the command line
take precedence. ``COULOMB_THREADS`` caps the number of worker processes
used over c values. Errors in the input ranges or in the solvers exit
with status 2 and a message on stderr.
"""

import argparse
import json
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import checks
from .crossover1d import Crossover1DParams, c_zero_density, crossover_density, make_grid
from .errors import CoulombError
from .estimators import bin_average_radial, estimate_line_density, estimate_radial_density, snapshot_counts
from .io import atomic_write, package_version, parse_config, write_checkpoint, write_table
from .potentials import PotentialSpec
from .radial import RadialProblem, limit_density, solve_radial
from .sampler import GasConfig, advance, burn_in, initial_ensemble

__all__ = ["main", "build_parser"]

HISTOGRAM_BINS = 60
CHECKPOINT_CHUNKS = 20


# ---------------------------------------------------------------------------
# argument parsing


def _burn_in_value(text: str):
    return None if text in ("auto", "none", "None") else int(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coulomb-crossover",
        description="Crossover densities of two- and one-dimensional Coulomb gases.",
    )
    parser.add_argument("--version", action="version", version=package_version())
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        p.add_argument("--config", type=Path, help="INI file with a section for this command")
        p.add_argument("--out", help="output file (single c, matching suffix) or directory")
        if fmt:
            p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("solve2d", help="radial crossover density in the plane")
    p.add_argument("--alpha", type=float, default=1.0, help="Q = |z|^(2 alpha) / 2, alpha >= 1")
    p.add_argument("--c", type=float, nargs="+", required=False, help="c > -2, one or more")
    p.add_argument("--rmax", type=float, help="outer radius of the grid")
    p.add_argument("--tol", type=float, default=1e-6, help="mean-field residual target")
    p.add_argument("--method", choices=("auto", "shooting", "relaxation"), default="auto")
    common(p)

    p = sub.add_parser("density1d", help="crossover density on the line")
    p.add_argument("--a", type=float, default=0.0, help="V = x^2/2 - a log|x|, a > -1")
    p.add_argument("--c", type=float, nargs="+", required=False, help="c > -1, one or more")
    p.add_argument("--rmax", type=float, help="half-width of the grid")
    common(p)

    p = sub.add_parser("sample", help="Monte Carlo run of the finite-N gas")
    p.add_argument("--dim", type=int, choices=(1, 2), default=2)
    p.add_argument("--alpha", type=float, default=1.0, help="2D potential |z|^(2 alpha) / 2")
    p.add_argument("--a", type=float, default=0.0, help="1D potential x^2/2 - a log|x|")
    p.add_argument("--c", type=float, default=1.0, help="crossover coupling, beta = 2c/N")
    p.add_argument("--n", type=int, default=100, help="number of particles")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=10_000, help="post-burn-in sweeps")
    p.add_argument("--burn-in", type=_burn_in_value, default=None, help="sweeps, or 'auto'")
    p.add_argument("--dt", type=float, default=1e-3, help="Langevin time step")
    p.add_argument("--method", choices=("metropolis", "langevin"), default="metropolis")
    p.add_argument("--rmax", type=float, help="histogram range (radius or half-width)")
    common(p)

    p = sub.add_parser("check", help="run the identity suite")
    p.add_argument("--only", nargs="+", choices=checks.GROUPS, default=list(checks.GROUPS))
    p.add_argument("--dim", type=int, nargs="+", choices=(1, 2), default=[1, 2])
    p.add_argument("--n", type=int, nargs="+", default=list(checks.WARD_N))
    p.add_argument("--c", type=float, nargs="+", default=list(checks.WARD_C))
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--steps", type=int, default=4000, help="snapshots per Ward configuration")
    p.add_argument("--tol", type=float, default=1e-4, help="Riccati residual tolerance")
    p.add_argument("--mutate", action="store_true", help="negative control: scale II by 1.1")
    common(p)
    return parser


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def _convert(action: argparse.Action, text: str):
    if isinstance(action, argparse._StoreTrueAction):
        return text.strip().lower() in ("1", "true", "yes", "on")
    convert = action.type or str
    if action.nargs in ("+", "*"):
        values = [convert(v) for v in text.replace(",", " ").split()]
        if action.choices is not None and any(v not in action.choices for v in values):
            raise ValueError(f"invalid choice in {text!r}")
        return values
    value = convert(text)
    if action.choices is not None and value not in action.choices:
        raise ValueError(f"invalid choice {value!r}")
    return value


def parse_args(argv=None) -> argparse.Namespace:
    """Parse flags, filling unset values from the ``--config`` section."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is None:
        return args
    sections = parse_config(Path(args.config).read_text())
    section = sections.get(args.command, {})
    sub = _subparser(parser, args.command)
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, text in section.items():
        if key not in actions or key in ("config", "help"):
            parser.error(f"unknown key {key!r} in section [{args.command}]")
        try:
            defaults[key] = _convert(actions[key], text)
        except ValueError as exc:
            parser.error(f"bad value for {key!r} in section [{args.command}]: {exc}")
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


# ---------------------------------------------------------------------------
# helpers


def _workers(tasks: int) -> int:
    limit = os.environ.get("COULOMB_THREADS")
    cap = int(limit) if limit else (os.cpu_count() or 1)
    return max(1, min(cap, tasks))


def _map(func, items):
    items = list(items)
    workers = _workers(len(items))
    if workers == 1:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _output_paths(out: str | None, names: list[str], fmt: str) -> list[Path]:
    """A single output may be named directly; otherwise ``out`` is a directory."""
    if out is not None and len(names) == 1 and out.endswith("." + fmt):
        return [Path(out)]
    base = Path(out) if out is not None else Path(".")
    return [base / name for name in names]


def _require_c(args):
    if not args.c:
        raise ValueError("--c is required (on the command line or in --config)")


# ---------------------------------------------------------------------------
# commands


def _solve2d_one(task):
    alpha, c, rmax, tol, method = task
    problem = RadialProblem(PotentialSpec.radial_monomial(alpha), c, r_max=rmax)
    density = solve_radial(problem, tol=tol, method=method)
    c0 = limit_density(problem, "c_zero").values
    cinf = limit_density(problem, "c_infinity").values if c > 0 else np.full(problem.grid.shape, np.nan)
    columns = {"r": problem.grid, "g": density.values, "g_limit_c0": c0, "g_limit_cinf": cinf}
    meta = {
        "kind": "radial_density",
        "alpha": alpha,
        "c": c,
        "method": density.method,
        "g0": density.g0,
        "normalization_residual": density.normalization_residual,
    }
    return columns, meta


def cmd_solve2d(args) -> int:
    _require_c(args)
    for c in args.c:  # validate every c before any work starts
        RadialProblem(PotentialSpec.radial_monomial(args.alpha), c, r_max=args.rmax)
    tasks = [(args.alpha, c, args.rmax, args.tol, args.method) for c in args.c]
    names = [f"alpha{args.alpha:g}_c{c:g}.{args.format}" for c in args.c]
    paths = _output_paths(args.out, names, args.format)
    for path, (columns, meta) in zip(paths, _map(_solve2d_one, tasks)):
        write_table(path, columns, fmt=args.format, metadata_=meta)
        print(path)
    return 0


def _density1d_one(task):
    a, c, rmax = task
    params = Crossover1DParams(c, a)
    grid = make_grid(params, extent=rmax) if rmax is not None else None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        density = crossover_density(params, grid)
    notes = [str(w.message) for w in caught]
    columns = {
        "lambda": density.grid,
        "rho": density.values,
        "rho_c0_envelope": c_zero_density(a, density.grid),
    }
    meta = {"kind": "line_density", "a": a, "c": c, "z_norm": density.z_norm}
    return columns, meta, notes


def cmd_density1d(args) -> int:
    _require_c(args)
    for c in args.c:
        Crossover1DParams(c, args.a)
    tasks = [(args.a, c, args.rmax) for c in args.c]
    names = [f"a{args.a:g}_c{c:g}.{args.format}" for c in args.c]
    paths = _output_paths(args.out, names, args.format)
    for path, (columns, meta, notes) in zip(paths, _map(_density1d_one, tasks)):
        for note in notes:
            print(f"warning: {note}", file=sys.stderr)
        write_table(path, columns, fmt=args.format, metadata_=meta)
        print(path)
    return 0


def _line_bin_average(params: Crossover1DParams, edges: np.ndarray) -> np.ndarray:
    """Bin averages of the line density from its cumulative trapezoid integral."""
    density = crossover_density(params, n=20001)
    x, rho = density.grid, density.values
    cum = np.concatenate(([0.0], np.cumsum(0.5 * (rho[1:] + rho[:-1]) * np.diff(x))))
    return np.diff(np.interp(edges, x, cum)) / np.diff(edges)


def _sample_config(args) -> GasConfig:
    if args.dim == 2:
        potential = PotentialSpec.radial_monomial(args.alpha)
    else:
        potential = PotentialSpec.gaussian_log_1d(args.a)
    return GasConfig(
        args.dim, potential, args.n, c=args.c, steps=args.steps, burn_in=args.burn_in,
        dt=args.dt, seed=args.seed, method=args.method,
    )


def cmd_sample(args) -> int:
    config = _sample_config(args)
    out = Path(args.out) if args.out is not None else Path("sample_out")
    checkpoint = out / "checkpoint.csv"
    ensemble = initial_ensemble(config)
    write_checkpoint(checkpoint, config, ensemble)
    try:
        ensemble, burn = burn_in(config, ensemble)
        write_checkpoint(checkpoint, config, ensemble)
        radial = config.dimension == 2
        extent = args.rmax or 1.2 * float(np.max(np.abs(ensemble.positions)))
        edges = np.linspace(0.0 if radial else -extent, extent, HISTOGRAM_BINS + 1)
        counts = np.zeros((config.steps, HISTOGRAM_BINS), dtype=np.int32)
        chunk = max(1, config.steps // CHECKPOINT_CHUNKS)
        done = 0
        while done < config.steps:
            for _ in range(min(chunk, config.steps - done)):
                ensemble = advance(config, ensemble, 1)
                counts[done] = snapshot_counts([ensemble.positions], edges, radial)[0]
                done += 1
            write_checkpoint(checkpoint, config, ensemble)
    except (CoulombError, FloatingPointError) as exc:
        print(f"error: {exc}; partial checkpoint in {checkpoint}", file=sys.stderr)
        return 2

    batches = min(20, config.steps)
    if radial:
        hist = estimate_radial_density(config.n, edges, counts=counts, n_batches=batches)
        try:
            problem = RadialProblem(config.potential, config.c)
            theory = bin_average_radial(solve_radial(problem), edges)
        except CoulombError as exc:
            print(f"warning: no mean-field curve: {exc}", file=sys.stderr)
            theory = np.full(HISTOGRAM_BINS, np.nan)
        names = ("r_lo", "r_hi", "r", "g", "g_err", "g_solve2d")
    else:
        hist = estimate_line_density(config.n, edges, counts=counts, n_batches=batches)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            theory = _line_bin_average(Crossover1DParams(config.c, args.a), edges)
        names = ("lambda_lo", "lambda_hi", "lambda", "rho", "rho_err", "rho_density1d")
    values = (edges[:-1], edges[1:], hist.centers, hist.normalized_density, hist.std_error, theory)
    meta = {
        "kind": "histogram",
        **config.to_dict(),
        "burn_in_sweeps": burn,
        "acceptance_rate": ensemble.acceptance_rate,
    }
    path = out / f"histogram.{args.format}"
    write_table(path, dict(zip(names, values)), fmt=args.format, metadata_=meta)
    print(checkpoint)
    print(path)
    return 0


def cmd_check(args) -> int:
    report = checks.run_checks(
        args.only, dims=tuple(args.dim), ns=tuple(args.n), cs=tuple(args.c), seed=args.seed,
        samples=args.steps, mutate=args.mutate, tol=args.tol,
    )
    text = report.to_text()
    sys.stdout.write(text)
    if args.out is not None:
        if args.format == "json":
            payload = {"version": package_version(), **report.to_dict()}
            atomic_write(args.out, json.dumps(payload, indent=1, allow_nan=True) + "\n")
        else:
            atomic_write(args.out, text)
    if report.all_passed:
        return 0
    for entry in report.entries:
        if not entry.passed:
            print(f"violated: {entry.line()}", file=sys.stderr)
    return 1


COMMANDS = {
    "solve2d": cmd_solve2d,
    "density1d": cmd_density1d,
    "sample": cmd_sample,
    "check": cmd_check,
}


def main(argv=None) -> int:
    args = parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (CoulombError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
