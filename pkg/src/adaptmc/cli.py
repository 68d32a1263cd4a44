"""Command-line harness: ``integrate``, ``essays``, ``compare``, ``mesh-dump``.

Exit codes: 0 success, 1 runtime or configuration error, 2 usage error.
Floats are written with 17 significant digits; an infinite efficiency is
written as ``inf``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .adaptive import AdaptiveConfig, ConfigError, algo1, algo2, mc_essays
from .core import RngStream, relative_error
from .integrands import REGISTRY, registry_lookup

COMPARE_FIELDS = ["N", "I_MC", "I_AMC", "E_MC", "E_AMC", "V_MC", "V_AMC",
                  "T_MC", "T_AMC", "Eff_MC", "Eff_AMC"]


def fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    if x is None:
        return ""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _jsonable(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _integrand(args):
    return registry_lookup(args.fn, alpha=args.alpha, c=args.c, dim=args.dim)


def _config(args, f, N=None) -> AdaptiveConfig:
    return AdaptiveConfig(N=N if N is not None else args.N, L=args.L, epsilon=args.eps,
                          C_m=args.Cm, M_rp=args.Mrp, N0=args.N0, dim=f.dim, seed=args.seed)


def _rel(f, estimate):
    return None if f.exact_value in (None, 0) else relative_error(f.exact_value, estimate)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_integrate(args) -> int:
    f = _integrand(args)
    rep = algo1(_config(args, f), f, threads=args.threads)
    result = {
        "fn": f.name, "dim": f.dim, "N": args.N, "estimate": rep.estimate,
        "exact": f.exact_value, "relative_error": _rel(f, rep.estimate),
        "stop_level": rep.stop_level, "variance_trace": list(rep.variance_trace),
        "strata": len(rep.mesh_final), "samples": rep.allocation_final.actual_total,
        "wall_time": rep.wall_time,
    }
    if args.format == "json" or args.out:
        _emit(json.dumps(result, indent=2) + "\n", args.out)
    else:
        for k, v in result.items():
            if isinstance(v, list):
                v = " ".join(fmt(x) for x in v)
            elif isinstance(v, float):
                v = fmt(v)
            print(f"{k}: {'' if v is None else v}")
    return 0


def cmd_essays(args) -> int:
    f = _integrand(args)
    rep = algo2(_config(args, f), args.Ness, f, threads=args.threads)
    result = {
        "fn": f.name, "N": args.N, "N_ess": args.Ness, "mean_estimate": rep.mean_estimate,
        "relative_error": _rel(f, rep.mean_estimate), "variance": rep.variance_estimate,
        "wall_time": rep.wall_time, "efficiency": rep.efficiency,
        "stop_level": rep.run.stop_level, "strata": len(rep.run.mesh_final),
    }
    if args.format == "json" or args.out:
        _emit(json.dumps({k: _jsonable(v) for k, v in result.items()}, indent=2) + "\n", args.out)
    else:
        for k, v in result.items():
            print(f"{k}: {fmt(v) if isinstance(v, float) else ('' if v is None else v)}")
    return 0


def compare_rows(f, cfg_for, n_values, n_ess, seed, threads=1):
    """One row per budget: crude MC replications against adaptive essays."""
    rows = []
    for N in n_values:
        cfg = cfg_for(N)
        mc = mc_essays(f, N, n_ess, RngStream(seed), f.dim, threads)
        amc = algo2(cfg, n_ess, f, RngStream(seed), threads)
        rows.append({
            "N": N, "I_MC": mc.mean_estimate, "I_AMC": amc.mean_estimate,
            "E_MC": _rel(f, mc.mean_estimate), "E_AMC": _rel(f, amc.mean_estimate),
            "V_MC": mc.variance_estimate, "V_AMC": amc.variance_estimate,
            "T_MC": mc.wall_time, "T_AMC": amc.wall_time,
            "Eff_MC": mc.efficiency, "Eff_AMC": amc.efficiency,
        })
    return rows


def cmd_compare(args) -> int:
    f = _integrand(args)
    n_values = args.sweep or [args.N]
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ConfigError("--sweep values must be strictly increasing")
    rows = compare_rows(f, lambda N: _config(args, f, N), n_values, args.Ness, args.seed,
                        args.threads)
    if args.format == "json":
        text = json.dumps([{k: _jsonable(v) for k, v in r.items()} for r in rows], indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COMPARE_FIELDS)
        for r in rows:
            w.writerow([fmt(r[k]) for k in COMPARE_FIELDS])
        text = buf.getvalue()
    _emit(text, args.out)
    return 0


def mesh_to_dict(mesh, iteration: int) -> dict:
    return {
        "dim": mesh.dim,
        "iteration": iteration,
        "strata": [
            {"lower": mesh.lower[i].tolist(), "upper": mesh.upper[i].tolist(),
             "n": int(mesh.n[i]), "sigma2_bar": float(mesh.sigma2[i]), "depth": int(mesh.depth[i])}
            for i in range(len(mesh))
        ],
    }


def mesh_from_dict(data: dict):
    from .core import Mesh

    s = data["strata"]
    return Mesh([e["lower"] for e in s], [e["upper"] for e in s], [e["n"] for e in s],
                [e["depth"] for e in s], sigma2=[e["sigma2_bar"] for e in s])


def cmd_mesh_dump(args) -> int:
    f = _integrand(args)
    rep = algo1(_config(args, f), f, threads=args.threads)
    _emit(json.dumps(mesh_to_dict(rep.mesh_final, rep.stop_level)) + "\n", args.out)
    return 0


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(float(t)) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("budgets must be positive")
    return vals


def _budget(text: str) -> int:
    # accept 1e6 style budgets
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer: {text!r}")
    if v != int(v):
        raise argparse.ArgumentTypeError(f"invalid integer: {text!r}")
    return int(v)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fn", choices=sorted(REGISTRY), default="disc")
    common.add_argument("--alpha", type=float, default=None)
    common.add_argument("--c", type=float, default=None)
    common.add_argument("--dim", type=int, default=None)
    common.add_argument("--N", type=_budget, default=10_000)
    common.add_argument("--L", type=int, default=4)
    common.add_argument("--eps", type=float, default=0.0)
    common.add_argument("--Cm", type=float, default=2.0)
    common.add_argument("--Mrp", type=int, default=2)
    common.add_argument("--N0", type=int, default=4)
    common.add_argument("--Ness", type=int, default=100)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--sweep", type=_int_list, default=None)
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=["csv", "json"], default=None)
    common.add_argument("--threads", type=int, default=1)

    parser = argparse.ArgumentParser(prog="adaptmc",
                                     description="Adaptive stratified Monte Carlo integration")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in [("integrate", cmd_integrate), ("essays", cmd_essays),
                     ("compare", cmd_compare), ("mesh-dump", cmd_mesh_dump)]:
        p = sub.add_parser(name, parents=[common])
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be positive")
    if args.command == "essays" and args.Ness < 2:
        parser.error("--Ness must be at least 2")
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"adaptmc: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
