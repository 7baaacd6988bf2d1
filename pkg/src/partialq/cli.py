"""Command line front end.

Exit codes: 1 for usage errors, 2 for bad input data, 3 for numeric
failures (infeasible solves, empty grids, undefined quantities).
"""

import argparse
import json
import os
import sys

import numpy as np

from . import datasets
from .curves import QuantileCurve
from .errors import DataError, NumericError, PartialQError
from .estimators import (
    Sample,
    estimate_comparability,
    estimate_curve,
    estimate_index,
    estimate_point,
    read_observations_csv,
    write_observations_csv,
)
from .models import model_from_config
from .monotonize import monotonicity_diagnostic, rearrange
from .orders import (
    ConicOrder,
    DagOrder,
    IntervalOrder,
    ScoreOrder,
    finite_quantiles,
    load_cone_csv,
    load_edge_list,
)
from .regions import calibrate_theta, coverage_grid, field_values, region
from .solver import SolveProblem, anneal_optimize


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _emit(obj, output=None):
    text = json.dumps(obj, sort_keys=True)
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("PQ_SEED")
    return int(env) if env else 0


def _parse_taus(text):
    if ":" in text:
        a, b, step = (float(v) for v in text.split(":"))
        return np.arange(a, b + step / 2, step)
    return np.array([float(v) for v in text.split(",")])


def _load_sample(args):
    data = read_observations_csv(args.input)
    if isinstance(data, list):
        if not args.edges:
            raise DataError("labelled observations need --edges")
        labels, edges = load_edge_list(args.edges)
        extra = [lab for lab in set(data) if lab not in labels]
        order = DagOrder(labels + sorted(extra), edges,
                         transitive=not args.no_transitive)
        return Sample(data, order)
    kind = args.order
    if kind == "componentwise":
        order = ConicOrder(data.shape[1])
    elif kind == "cone":
        if not args.cone_file:
            raise DataError("--order cone needs --cone-file")
        order = load_cone_csv(args.cone_file)
    elif kind == "interval":
        order = IntervalOrder()
    elif kind == "score":
        order = ScoreOrder()
    else:
        raise DataError(f"unknown order {kind!r}")
    return Sample(data, order)


def _add_sample_args(p):
    p.add_argument("--input", required=True, help="observation CSV with header")
    p.add_argument("--order", default="componentwise",
                   choices=["componentwise", "cone", "interval", "score"])
    p.add_argument("--cone-file", help="CSV of cone generators, one per row")
    p.add_argument("--edges", help="edge list for labelled observations")
    p.add_argument("--no-transitive", action="store_true",
                   help="treat the edge list as the whole relation")


def _add_common(p):
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed; falls back to PQ_SEED, then 0")
    p.add_argument("--threads", type=int, default=None,
                   help="thread budget hint for numeric libraries")
    p.add_argument("--output", help="write results to this file")


def _point_estimate_dict(est):
    x = est.x.tolist() if isinstance(est.x, np.ndarray) else est.x
    return {"x": x, "tau": est.tau, "tau_hat": est.tau_hat, "p_hat": est.p_hat,
            "feasible": est.feasible, "slack": est.slack}


def cmd_simulate(args):
    model = model_from_config(args.model)
    rng = np.random.default_rng(_seed(args))
    draws = model.sample(args.n, rng)
    if isinstance(draws, list):
        with open(args.output, "w") as fh:
            fh.write("label\n")
            for lab in draws:
                fh.write(f"{lab}\n")
    else:
        write_observations_csv(args.output, draws)
    print(f"wrote {args.n} observations to {args.output}")


def cmd_indices(args):
    sample = _load_sample(args)
    pts = [np.array([float(v) for v in at.split(",")]) for at in args.at]
    entries = []
    for x in pts:
        est = estimate_index(sample, x if x.size > 1 else x)
        entries.append({
            "x": x.tolist(), "p_hat": est.p_hat, "tau_hat": est.tau_hat,
            "se": est.se, "below": est.below, "above": est.above,
            "comparable": est.comparable,
        })
        tau_txt = "undefined" if est.tau_hat is None else f"{est.tau_hat:.4f}"
        print(f"x={x.tolist()} tau_hat={tau_txt} p_hat={est.p_hat:.4f}")
    _emit({"schema": "pq-v1", "kind": "index-field", "n": sample.n,
           "entries": entries}, args.output)


def cmd_point(args):
    sample = _load_sample(args)
    est = estimate_point(sample, args.tau, candidates=args.candidates,
                         slack=args.slack)
    print(f"tau={args.tau} x={np.asarray(est.x).tolist()} "
          f"p_hat={est.p_hat:.4f} feasible={est.feasible}")
    _emit({"schema": "pq-v1", "kind": "quantile-point",
           **_point_estimate_dict(est)}, args.output)


def cmd_curve(args):
    sample = _load_sample(args)
    curve = estimate_curve(sample, _parse_taus(args.taus),
                           candidates=args.candidates, slack=args.slack)
    if args.output:
        curve.save(args.output)
        print(f"wrote curve with {len(curve.taus)} levels to {args.output}")
    else:
        print(curve.to_json())


def cmd_comparability(args):
    sample = _load_sample(args)
    taus = _parse_taus(args.taus) if args.taus else None
    est = estimate_comparability(sample, taus)
    print(f"comparability={est.value:.4f} at tau={est.tau_star:.4f} "
          f"se={est.se:.4f}")
    _emit({"schema": "pq-v1", "kind": "comparability", "value": est.value,
           "tau_star": est.tau_star, "se": est.se}, args.output)


def cmd_rearrange(args):
    curve = QuantileCurve.load(args.input)
    order = ConicOrder(curve.dim)
    fixed = rearrange(curve)
    diag = monotonicity_diagnostic(curve, order, kappa=args.kappa,
                                   error_bound=args.error_bound)
    print(f"distance={diag.distance:.6f} verdict={diag.verdict}")
    if args.output:
        fixed.save(args.output)
        print(f"wrote rearranged curve to {args.output}")


def cmd_region(args):
    if args.model:
        source = model_from_config(args.model)
    elif args.input:
        source = _load_sample(args)
    else:
        raise DataError("region needs --model or --input")
    pts = coverage_grid(source, shape=args.grid)
    values = field_values(source, pts)
    if args.kappa is not None:
        theta = calibrate_theta(source, args.kappa, values=values)
        eta = theta
        print(f"calibrated theta={theta:.4f} for coverage {args.kappa}")
    else:
        theta, eta = args.theta, args.eta
    reg = region(source, theta, eta, pts, values=values)
    print(f"theta={reg.theta:.4f} eta={reg.eta:.4f} "
          f"members={int(reg.member.sum())}/{len(pts)} "
          f"coverage={reg.coverage:.4f}")
    _emit({"schema": "pq-v1", "kind": "region", "theta": reg.theta,
           "eta": reg.eta, "coverage": reg.coverage,
           "member": reg.member.tolist()}, args.output)


def cmd_solve(args):
    model = model_from_config(args.model)
    problem = SolveProblem.from_model(model, args.tau, args.pbar)
    res = anneal_optimize(problem, eps=args.eps, delta=args.delta,
                          chains=args.chains, seed=_seed(args))
    print(f"tau={args.tau} x={res.x.tolist()} p={res.p:.4f} "
          f"phases={res.phases} evals={res.n_evals}")
    _emit({"schema": "pq-v1", "kind": "solve", "tau": res.tau,
           "x": res.x.tolist(), "p": res.p, "v": res.v, "trace": res.trace,
           "phases": res.phases}, args.output)


def cmd_oracle(args):
    model = model_from_config(args.model)
    taus = _parse_taus(args.taus)
    entries = []
    for t in taus:
        q = model.quantile(float(t))
        pts = [np.atleast_1d(p).tolist() for p in q.points]
        entries.append({"tau": float(t), "points": pts, "p": q.p})
        print(f"tau={float(t):.4f} points={pts} p={q.p:.6f}")
    value, tau_star = model.comparability()
    print(f"comparability={value:.6f} at tau={tau_star}")
    _emit({"schema": "pq-v1", "kind": "oracle", "model": args.model,
           "entries": entries, "comparability": value,
           "tau_star": tau_star}, args.output)


def cmd_thks_demo(args):
    dist, order = datasets.thks_study()
    table = finite_quantiles(dist, order, taus=[0.5])
    print("group                 mass     tau      p")
    for row in sorted(table.rows, key=lambda r: str(r.label)):
        tau_txt = f"{float(row.tau):.4f}" if row.tau is not None else "  n/a "
        print(f"{str(row.label):<20} {float(dist.mass(row.label)):.4f}"
              f"   {tau_txt}  {float(row.p):.4f}")
    median = table.argmax[0.5]
    print(f"median surface: {table.surfaces[0.5]}")
    print(f"partial median: {median}")
    _emit({"schema": "pq-v1", "kind": "finite-quantiles",
           "surface": table.surfaces[0.5],
           "median": median}, args.output)


def build_parser():
    parser = _Parser(prog="partialq",
                     description="Quantiles of multivariate data under partial orders")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="draw observations from a model")
    p.add_argument("--model", required=True)
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("indices", help="index estimates at chosen points")
    _add_sample_args(p)
    p.add_argument("--at", action="append", required=True,
                   help="point as comma-separated coordinates; repeatable")
    _add_common(p)
    p.set_defaults(func=cmd_indices)

    p = sub.add_parser("point", help="quantile point estimate at one level")
    _add_sample_args(p)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--slack", type=float, default=None)
    p.add_argument("--candidates", default="sample",
                   choices=["sample", "lattice"])
    _add_common(p)
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("curve", help="quantile curve over a grid of levels")
    _add_sample_args(p)
    p.add_argument("--taus", required=True,
                   help="comma list or start:stop:step")
    p.add_argument("--slack", type=float, default=None)
    p.add_argument("--candidates", default="sample",
                   choices=["sample", "lattice"])
    _add_common(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("comparability", help="minimum comparable mass over levels")
    _add_sample_args(p)
    p.add_argument("--taus", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_comparability)

    p = sub.add_parser("rearrange", help="monotonize a saved curve")
    p.add_argument("--input", required=True, help="curve JSON file")
    p.add_argument("--kappa", type=float, default=2.0)
    p.add_argument("--error-bound", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_rearrange)

    p = sub.add_parser("region", help="central dispersion region")
    p.add_argument("--model", default=None)
    _add_sample_args_optional(p)
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--eta", type=float, default=0.5)
    p.add_argument("--kappa", type=float, default=None,
                   help="calibrate theta to this coverage instead")
    p.add_argument("--grid", type=int, default=60)
    _add_common(p)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("solve", help="randomized search for a quantile point")
    p.add_argument("--model", required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--pbar", type=float, required=True)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--chains", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="closed-form values of a bundled model")
    p.add_argument("--model", required=True)
    p.add_argument("--taus", default="0.5")
    _add_common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("thks-demo", help="exact quantiles on the bundled study")
    _add_common(p)
    p.set_defaults(func=cmd_thks_demo)

    return parser


def _add_sample_args_optional(p):
    p.add_argument("--input", default=None, help="observation CSV with header")
    p.add_argument("--order", default="componentwise",
                   choices=["componentwise", "cone", "interval", "score"])
    p.add_argument("--cone-file")
    p.add_argument("--edges")
    p.add_argument("--no-transitive", action="store_true")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads:
        os.environ.setdefault("OMP_NUM_THREADS", str(args.threads))
    try:
        args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, PartialQError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
