"""Command-line interface: run one algorithm, run a sweep, or verify.

Examples:
    monobandit run --algo lgd --objective quad:center=1,curv=1,lo=0,hi=2 \\
        --T 1000000 --noise none --out out/demo
    monobandit sweep --config sweep.json --workers 4 --out out
    monobandit verify
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from monobandit import _backend, harness, verify
from monobandit.algorithms import run_variant
from monobandit.oracle import write_trace_csv

ALGO_ALIASES = {
    "lgd": "lgd_noiseless",
    "static": "static_lgd",
    "adaptive": "adaptive_lgd",
    "hybrid": "hybrid_lgd",
    "kw": "kw_baseline",
}


def parse_objective(text: str) -> dict:
    """'quad:center=1,curv=1,lo=0,hi=2' -> objective config dict."""
    family, _, body = text.partition(":")
    cfg = {"family": family.strip()}
    if body:
        for item in body.split(","):
            key, _, value = item.partition("=")
            if not _:
                raise ValueError(f"bad objective parameter {item!r} (want key=value)")
            cfg[key.strip()] = float(value)
    return cfg


def _add_run_parser(sub):
    par = sub.add_parser("run", help="run one algorithm and write run.json + trace.csv")
    par.add_argument("--algo", required=True, choices=sorted(ALGO_ALIASES))
    par.add_argument("--objective", required=True,
                     help="quad:center=..,curv=..,lo=..,hi=.. or quartic:center=..,a=..,b=..,lo=..,hi=..")
    par.add_argument("--T", required=True, type=int, help="total sample budget")
    par.add_argument("--seed", type=int, default=0)
    par.add_argument("--noise", default="uniform", choices=["none", "uniform", "rademacher"])
    par.add_argument("--noise-diameter", type=float, default=1.0)
    par.add_argument("--out", required=True, help="output directory")
    par.add_argument("--no-trace", action="store_true", help="skip writing trace.csv")
    par.add_argument("--deterministic", action="store_true",
                     help="single-sample averages with bias offsets kept (hand-trace mode)")
    for name in ("delta", "delta1", "gamma", "epsilon", "q", "p", "kappa",
                 "eta", "iota", "kw-a", "kw-c", "x1"):
        par.add_argument(f"--{name}", type=float, default=None)
    par.add_argument("--n", type=int, default=None, help="samples per point (static/hybrid)")
    return par


def cmd_run(args) -> int:
    variant = ALGO_ALIASES[args.algo]
    spec = harness.build_objective(parse_objective(args.objective))
    noise = harness.build_noise({"kind": args.noise, "diameter": args.noise_diameter})
    overrides = {}
    for name in ("delta", "delta1", "gamma", "epsilon", "n", "q", "p", "kappa",
                 "eta", "iota", "x1"):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    for cli_name, kw in (("kw_a", "kw_a"), ("kw_c", "kw_c")):
        value = getattr(args, cli_name)
        if value is not None:
            overrides[kw] = value
    if args.deterministic:
        overrides["deterministic"] = True
    result = run_variant(variant, spec, noise, args.T, seed=args.seed, **overrides)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = result.to_json_dict()
    if not args.no_trace:
        trace_path = out_dir / "trace.csv"
        write_trace_csv(result.trace, trace_path)
        report["trace_path"] = str(trace_path)
    with open(out_dir / "run.json", "w") as fh:
        json.dump(report, fh, indent=1)
    print(
        f"{variant}: T={args.T} seed={args.seed} backend={_backend.BACKEND} "
        f"final_x={result.final_x:.6g} cum_regret={report['cum_regret']:.6g} "
        f"terminated_by={result.terminated_by}"
    )
    print(f"wrote {out_dir / 'run.json'}")
    return 0


def cmd_sweep(args) -> int:
    result = harness.run_sweep(args.config, args.out, workers=args.workers)
    for label, summary in result.algos.items():
        slope = "n/a" if summary.slope is None else f"{summary.slope:.4f}"
        print(f"{label}: slope={slope} points={len(summary.points)} "
              f"excluded={summary.excluded} failed={len(summary.failed_cells)}")
    print(f"wrote {Path(result.out_dir) / 'summary.json'}")
    return 0


def cmd_verify(args) -> int:
    ok = verify.run_checks()
    print("verify:", "all checks passed" if ok else "FAILURES above")
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="monobandit",
        description="Monotone bandit minimization: runners, sweeps, and validators",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_parser(sub)
    par_sweep = sub.add_parser("sweep", help="run a sweep config across horizons and seeds")
    par_sweep.add_argument("--config", required=True)
    par_sweep.add_argument("--workers", type=int, default=1)
    par_sweep.add_argument("--out", required=True)
    sub.add_parser("verify", help="run the structural property suite")

    args = parser.parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    if args.command == "sweep":
        return cmd_sweep(args)
    return cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
