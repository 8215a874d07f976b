"""Command line entry point.

Exit codes: 0 on success or pass, 2 when a configured threshold fails,
1 on any error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import blaschke, boundary, experiments, logmean, modelspace, zeroseq
from .blaschke import BlaschkeProduct

EXIT_OK, EXIT_ERROR, EXIT_FAIL = 0, 1, 2


def read_zeros(path: str) -> zeroseq.ZeroSequence:
    """Zero file in either the JSON or the two-column text format; ``-`` reads stdin."""
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    if text.lstrip().startswith("{"):
        return zeroseq.ZeroSequence.from_json(text)
    return zeroseq.ZeroSequence.from_text(text)


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_gen(args) -> int:
    angles = args.angles
    if args.kind == "geometric":
        seq = zeroseq.generate_geometric(args.c, args.delta, args.count, angles, seed=args.seed)
    else:
        seq = zeroseq.generate_power(args.q, args.count, angles, seed=args.seed)
    _emit(seq.to_json() + "\n" if args.json else seq.to_text(), args.output)
    return EXIT_OK


def cmd_eval(args) -> int:
    B = BlaschkeProduct(read_zeros(args.zeros))
    theta = np.asarray(args.theta, float)
    gap = 1.0 - args.r
    rows = []
    val = blaschke.evaluate_polar(B, gap, theta)
    if gap > 0:
        der = blaschke.derivative_polar(B, gap, theta)
        dmod = np.abs(der)
    else:
        dmod = blaschke.boundary_derivative_modulus(B, theta)
    for t, v, d in zip(theta.tolist(), np.atleast_1d(val).tolist(), np.atleast_1d(dmod).tolist()):
        rows.append({"theta": t, "r": args.r, "value": [v.real, v.imag], "derivative_modulus": d})
    _emit(_dump(rows), args.output)
    return EXIT_OK


def _boundary_samples(args):
    seq = read_zeros(args.zeros)
    grid = boundary.make_grid(seq, args.base_count, args.refine_factor)
    return BlaschkeProduct(seq), grid


def cmd_dist(args) -> int:
    B, grid = _boundary_samples(args)
    vals = blaschke.boundary_derivative_modulus(B, *grid.angles)
    prof = boundary.weak_quasinorm(vals, grid, args.p, points_per_decade=args.ppd)
    _emit(prof.to_csv(), args.output)
    print(f"quasinorm={prof.quasinorm!r} argmax_lambda={prof.argmax_lambda!r} nodes={len(grid)}",
          file=sys.stderr)
    return EXIT_OK


def cmd_tmean(args) -> int:
    B = BlaschkeProduct(read_zeros(args.zeros))
    curve = logmean.dyadic_increments(B, args.n_max, with_quadrature=args.quadrature)
    if args.output:
        Path(f"{args.output}_curve.csv").write_text(curve.curve_csv())
        Path(f"{args.output}_increments.csv").write_text(curve.increments_csv())
    else:
        sys.stdout.write(curve.increments_csv())
    print(f"M_observed={curve.M_observed!r}", file=sys.stderr)
    return EXIT_OK


def cmd_frostman(args) -> int:
    B, grid = _boundary_samples(args)
    base = boundary.weak_quasinorm(blaschke.boundary_derivative_modulus(B, *grid.angles), grid, 1.0,
                                   points_per_decade=args.ppd).quasinorm
    rows = []
    for s in args.a:
        a = experiments.parse_complex(s)
        vals = blaschke.frostman_shift_boundary(B, a, *grid.angles)
        q = boundary.weak_quasinorm(vals, grid, 1.0, points_per_decade=args.ppd).quasinorm
        rows.append({"a": [a.real, a.imag], "quasinorm": q, "ratio": q / base})
    _emit(_dump({"unshifted": base, "shifts": rows}), args.output)
    return EXIT_OK


def cmd_modelspace(args) -> int:
    f = modelspace.ModelFunction.from_json(Path(args.model).read_text())
    grid = boundary.make_grid(f.zeros, args.base_count, args.refine_factor)
    out = {
        "l2_norm": modelspace.l2_norm(f),
        "weak23_statistic": modelspace.weak23_statistic(f, args.r, grid, args.ppd),
        "r": args.r,
    }
    _emit(_dump(out), args.output)
    return EXIT_OK


def cmd_lemma1(args) -> int:
    seq = read_zeros(args.zeros)
    res = zeroseq.lemma1_construct(seq, args.mu)
    out = {
        "mu": args.mu, "S_c": res.S_c, "S_d": res.S_d, "K_observed": res.K_observed,
        "exponents": [int(n) for n in res.exponents], "lag": res.lag, "lag_ratio": res.lag_ratio,
    }
    _emit(_dump(out), args.output)
    return EXIT_OK if res.S_d <= args.mu else EXIT_FAIL


def cmd_run(args) -> int:
    cfg = experiments.load_config(args.config)
    summary = experiments.run(cfg, args.output)
    sys.stdout.write(experiments.report_render(summary))
    return EXIT_OK if summary["passed"] else EXIT_FAIL


def cmd_report(args) -> int:
    path = Path(args.summary)
    if path.is_dir():
        path = path / "summary.json"
    text = path.read_text().strip()
    summary = json.loads(text) if text else {}
    sys.stdout.write(experiments.report_render(summary))
    return EXIT_OK


def _grid_args(p):
    p.add_argument("--base-count", type=int, default=2**14)
    p.add_argument("--refine-factor", type=int, default=64)
    p.add_argument("--ppd", type=int, default=200, help="lambda grid points per decade")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="expblaschke", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a zero sequence")
    p.add_argument("kind", choices=["geometric", "power"])
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--angles", choices=["random", "equispaced"], default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="write JSON instead of text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("eval", help="evaluate B and |B'| at angles on a circle")
    p.add_argument("zeros")
    p.add_argument("--theta", type=float, action="append", required=True)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("dist", help="distribution profile of |B'| on the circle")
    p.add_argument("zeros")
    p.add_argument("--p", type=float, default=1.0)
    _grid_args(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("tmean", help="logarithmic means and dyadic increments")
    p.add_argument("zeros")
    p.add_argument("--n-max", type=int, default=35)
    p.add_argument("--quadrature", action="store_true")
    p.add_argument("-o", "--output", help="prefix for the two CSV files")
    p.set_defaults(func=cmd_tmean)

    p = sub.add_parser("frostman", help="weak-L1 quasinorms of Frostman shifts")
    p.add_argument("zeros")
    p.add_argument("--a", action="append", required=True, help="shift, e.g. 0.4j or 0.5+0.3j")
    _grid_args(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_frostman)

    p = sub.add_parser("modelspace", help="norm and weak-2/3 statistic of a model function")
    p.add_argument("model", help="model function JSON")
    p.add_argument("--r", type=float, default=1.0)
    _grid_args(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_modelspace)

    p = sub.add_parser("lemma1", help="exponent construction for a zero sequence")
    p.add_argument("zeros")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_lemma1)

    p = sub.add_parser("run", help="run a configured experiment")
    p.add_argument("config")
    p.add_argument("-o", "--output", help="override the configured output directory")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="render a summary as a text table")
    p.add_argument("summary", help="summary.json or its directory")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except experiments.ConfigError as exc:
        print(f"config error in field '{exc.field}': {exc}", file=sys.stderr)
    except zeroseq.Lemma1PreconditionError as exc:
        print(f"precondition ({exc.condition}) failed: {exc}", file=sys.stderr)
    except (ValueError, ArithmeticError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
