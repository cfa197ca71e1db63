"""Command-line entry point: ``drsub gen|solve|check|meanfield|oracle``."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path


from .. import meanfield as mf
from .. import verify
from ..errors import DrsubError
from ..rng import resolve_seed
from ..setfunctions import model_from_spec
from ..solvers import SOLVERS, SolverConfig
from . import generators
from .io import InstanceSpec, RunReport, read_json, write_json

MEANFIELD_ALGS = {"dg-1/2": "1/2", "dg-1/3": "1/3", "coord": None}


def _emit(data: dict, out: str | None) -> None:
    text = write_json(data, out)
    if out is None:
        print(text)


def cmd_gen(args) -> int:
    fam = args.family
    if fam == "sqp":
        spec = generators.gen_sqp(args.n, args.m, args.seed).to_dict()
    elif fam == "softmax":
        spec = generators.gen_softmax(args.n, args.budget_frac, args.seed).to_dict()
    elif fam == "revenue":
        if args.graph is None:
            raise SystemExit("gen --family revenue needs --graph")
        spec = generators.gen_revenue(args.graph, args.q, args.budget_frac, args.u, args.undirected).to_dict()
    elif fam == "pathology":
        spec = generators.gen_pathology(args.c, args.b).to_spec()
        spec["fixture"] = list(generators.PATHOLOGY_POINT)
    else:
        spec = generators.gen_bipartite_influence(args.n_users, args.n_actions, args.seed, args.budget_frac).to_dict()
    _emit(spec, args.output)
    return 0


def _config(args) -> SolverConfig:
    return SolverConfig(
        iterations=args.iters,
        epochs=args.epochs,
        step_rule=args.step,
        gamma=args.gamma,
        lipschitz=args.L,
        seed=resolve_seed(args.seed),
        coordinate_order=args.order,
        initializer=args.init,
    )


def _solve_one(alg: str, instance_path: str, cfg: SolverConfig, f_star, grid, out, csv_path) -> str:
    inst = InstanceSpec.load(instance_path)
    obj, con = inst.build()
    if grid:
        f_star = verify.grid_max(obj, con, grid)[1]
    solver = SOLVERS[alg]
    report = solver(obj, con, cfg)
    run = RunReport.from_solve(report, inst.label, cfg, f_star)
    run.save(out) if out else print(json.dumps(run.to_dict(), indent=2))
    if csv_path:
        run.write_csv(csv_path)
    return inst.label


def cmd_solve(args) -> int:
    cfg = _config(args)
    if args.alg not in SOLVERS:
        raise SystemExit(f"unknown algorithm {args.alg}")
    if len(args.instance) == 1 and not args.batch:
        _solve_one(args.alg, args.instance[0], cfg, args.f_star, args.oracle_grid, args.output, args.csv)
        return 0
    outdir = Path(args.output or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    jobs = []
    with ProcessPoolExecutor(max_workers=args.jobs) as pool:
        for path in args.instance:
            stem = Path(path).stem
            jobs.append(pool.submit(
                _solve_one, args.alg, path, cfg, args.f_star, args.oracle_grid,
                str(outdir / f"{stem}.report.json"), str(outdir / f"{stem}.csv") if args.csv else None,
            ))
        for job in jobs:
            job.result()
    return 0


def cmd_check(args) -> int:
    obj, _ = InstanceSpec.load(args.instance).build()
    seed = resolve_seed(args.seed)
    if args.property == "alpha-dr":
        if args.alpha is None:
            raise SystemExit("--property alpha-dr needs --alpha")
        rep = verify.check_alpha_dr(obj, args.alpha, args.trials, args.tol, seed)
    else:
        rep = verify.CHECKS[args.property](obj, args.trials, args.tol, seed)
    _emit(rep.to_dict(), args.output)
    return 0


def cmd_meanfield(args) -> int:
    model = model_from_spec(read_json(args.model))
    cfg = SolverConfig(epochs=args.epochs, seed=resolve_seed(args.seed))
    out: dict = {"algorithm": args.alg}
    if args.model2:
        pa = mf.PaModel(model, model_from_spec(read_json(args.model2)), args.beta)
        obj = mf.build_pa_elbo(pa)
    else:
        obj = mf.build_elbo(model)
    variant = MEANFIELD_ALGS[args.alg]
    if variant is None:
        report = SOLVERS["coord-ascent"](obj, None, cfg if args.epochs is not None else SolverConfig(epochs=1))
    else:
        report = mf.dg_meanfield(obj, None, cfg, variant)
    out["x"] = report.solution.tolist()
    out["objective"] = report.solution_f
    if args.model2:
        bound = mf.pa_bound(pa, cfg)
        out["pa_lower_bound"] = bound.value
        out["upper_log_z"] = [bound.upper_a, bound.upper_b]
        if model.n <= mf.MAX_ENUM:
            out["log_pa_exact"] = mf.log_pa_exact(pa)
    elif model.n <= mf.MAX_ENUM:
        out["log_partition_exact"] = mf.log_partition_exact(model)
    _emit(out, args.output)
    return 0


def cmd_oracle(args) -> int:
    obj, con = InstanceSpec.load(args.instance).build()
    x, f = verify.grid_max(obj, con, args.grid)
    _emit({"x_star": x.tolist(), "f_star": f, "resolution": args.grid}, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="drsub", description="Continuous DR-submodular maximization toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance or model file")
    g.add_argument("--family", required=True, choices=["sqp", "softmax", "revenue", "pathology", "influence"])
    g.add_argument("--n", type=int, default=10)
    g.add_argument("--m", type=int, default=5)
    g.add_argument("--budget-frac", type=float, default=0.5)
    g.add_argument("--graph")
    g.add_argument("--q", type=float, default=0.75)
    g.add_argument("--u", type=float, default=1.0)
    g.add_argument("--undirected", action="store_true")
    g.add_argument("--c", type=float, default=50.0)
    g.add_argument("--b", type=float, default=10.0)
    g.add_argument("--n-users", type=int, default=20)
    g.add_argument("--n-actions", type=int, default=5)
    g.add_argument("--seed", type=int)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="run a solver on an instance")
    s.add_argument("--alg", required=True, choices=sorted(SOLVERS))
    s.add_argument("--instance", required=True, action="append")
    s.add_argument("--iters", type=int, default=100)
    s.add_argument("--epochs", type=int)
    s.add_argument("--step", choices=["constant", "oblivious", "lipschitz", "adaptive", "linesearch", "curvature"])
    s.add_argument("--gamma", type=float)
    s.add_argument("--L", type=float)
    s.add_argument("--seed", type=int)
    s.add_argument("--order", choices=["natural", "random"], default="natural")
    s.add_argument("--init", default="zeros", choices=["zeros", "ones", "uniform"])
    s.add_argument("--f-star", type=float)
    s.add_argument("--oracle-grid", type=int, help="compute f* with a grid of this resolution (n <= 4)")
    s.add_argument("--batch", action="store_true", help="treat -o as a directory and solve all instances")
    s.add_argument("--jobs", type=int, default=None)
    s.add_argument("-o", "--output")
    s.add_argument("--csv")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="sample a structural property")
    c.add_argument("--property", required=True, choices=["weak-dr", "dr", "submodular", "monotone", "alpha-dr"])
    c.add_argument("--instance", required=True)
    c.add_argument("--trials", type=int, default=1000)
    c.add_argument("--tol", type=float, default=1e-7)
    c.add_argument("--alpha", type=float, nargs="+")
    c.add_argument("--seed", type=int)
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_check)

    m = sub.add_parser("meanfield", help="mean-field inference on a set-function model")
    m.add_argument("--alg", required=True, choices=sorted(MEANFIELD_ALGS))
    m.add_argument("--model", required=True)
    m.add_argument("--model2")
    m.add_argument("--beta", type=float, default=1.0)
    m.add_argument("--epochs", type=int)
    m.add_argument("--seed", type=int)
    m.add_argument("-o", "--output")
    m.set_defaults(func=cmd_meanfield)

    o = sub.add_parser("oracle", help="grid-search maximum (n <= 4)")
    o.add_argument("--grid", type=int, default=201)
    o.add_argument("--instance", required=True)
    o.add_argument("-o", "--output")
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DrsubError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"drsub: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
