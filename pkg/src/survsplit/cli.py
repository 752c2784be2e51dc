"""Command-line interface: split search, simulation grid, probes, moments.

Exit codes: 0 on success, 1 on usage or input errors, 2 when no admissible
cutpoint exists.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import NoAdmissibleCut, SplitEngineError
from .logrank_hard import greedy_search
from .mc_harness import (
    DEFAULT_MASTER_SEED,
    PRESET_NULL,
    PRESET_WEAK,
    atomic_write_text,
    preset_config,
    run_experiment,
    variance_probe,
    write_histogram_csv,
    write_histogram_json,
    write_records_csv,
    write_records_json,
    write_summary_csv,
    write_summary_json,
    write_variance_csv,
    write_variance_json,
)
from .datagen import HazardModel, SeedSpec, generate_dataset
from .risk_model import build_risk_table, subjects_from_csv
from .sss_smooth import SigmoidParams, b_a_closed, psi_a_closed, sss_search

_LN2 = float(np.log(2.0))


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="survsplit",
                     description="Survival split-point engine and ECP harness.")
    parser.add_argument("--version", action="version", version=f"survsplit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", help="find the optimal cutpoint for one dataset",
                       parents=[], add_help=True)
    p.add_argument("input_csv", help="dataset CSV with header time,event,z")
    p.add_argument("--method", choices=("gs", "sss"), required=True)
    p.add_argument("--a", type=float, default=None,
                   help="sigmoid shape parameter (sss only)")
    p.add_argument("--a-adaptive", action="store_true",
                   help="use a = sqrt(n) (sss only)")
    p.add_argument("--min-child", type=int, default=0,
                   help="minimum subjects per child node (default: 0)")
    p.add_argument("--grid-points", type=int, default=1024,
                   help="sss grid size (default: 1024)")

    p = sub.add_parser("simulate", help="run the experiment grid and write result files")
    p.add_argument("--preset", choices=(PRESET_NULL, PRESET_WEAK), default=PRESET_NULL,
                   help="base configuration (default: paper-null)")
    p.add_argument("--n", type=int, default=None,
                   help="single sample size override (default: 50,100,500,1000)")
    p.add_argument("--reps", type=int, default=None,
                   help="replicates per sample size (default: 500)")
    p.add_argument("--beta0", type=float, default=None,
                   help="baseline log-hazard (default: 1.0)")
    p.add_argument("--beta1", type=float, default=None,
                   help="signal strength (default: 0.0 null, -0.1 weak preset)")
    p.add_argument("--c0", type=float, default=None,
                   help="true cutoff (default: 0.5)")
    p.add_argument("--a", type=float, action="append", default=None,
                   help="fixed shape parameter, repeatable (default: 50,60,...,100)")
    p.add_argument("--a-adaptive", action=argparse.BooleanOptionalAction, default=None,
                   help="also run a = sqrt(n) (default: enabled)")
    p.add_argument("--seed", type=int, default=None,
                   help=f"master seed (default: {DEFAULT_MASTER_SEED})")
    p.add_argument("--edge-eps", type=float, default=None,
                   help="edge-region threshold (default: 0.05)")
    p.add_argument("--min-child", type=int, default=None,
                   help="minimum subjects per child for GS (default: 0)")
    p.add_argument("--grid-points", type=int, default=None,
                   help="sss grid size (default: 1024)")
    p.add_argument("--out-dir", default="survsplit-out",
                   help="output directory (default: survsplit-out)")
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="csv only, or csv plus json mirrors (default: csv)")
    p.add_argument("--threads", type=int, default=0,
                   help="worker processes, 0 = all CPUs (default: 0)")
    p.add_argument("--dump-data", action="store_true",
                   help="also write every generated dataset as time,event,z CSV")

    p = sub.add_parser("variance-probe", help="Monte Carlo variance of q at fixed cutpoints")
    p.add_argument("--n", type=int, default=500, help="sample size (default: 500)")
    p.add_argument("--reps", type=int, default=4000,
                   help="null replicates (default: 4000)")
    p.add_argument("--c", type=float, action="append", default=None,
                   help="probe cutpoint, repeatable (default: 0.02, 0.5)")
    p.add_argument("--a", type=float, action="append", default=None,
                   help="sss shape parameter, repeatable (default: 50)")
    p.add_argument("--seed", type=int, default=DEFAULT_MASTER_SEED,
                   help=f"master seed (default: {DEFAULT_MASTER_SEED})")
    p.add_argument("--out-dir", default="survsplit-out",
                   help="output directory (default: survsplit-out)")
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="csv only, or csv plus json mirror (default: csv)")

    p = sub.add_parser("moments", help="closed-form sigmoid moments and bound slack")
    p.add_argument("--a", type=float, action="append", default=None,
                   help="shape parameter, repeatable (default: 1,10,50,100,1000)")
    p.add_argument("--c", type=float, action="append", default=None,
                   help="cutpoint, repeatable (default: 0.01..0.99 step 0.01)")
    p.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    return parser


def _cmd_split(args) -> int:
    try:
        data = subjects_from_csv(args.input_csv)
        rt = build_risk_table(data)
    except (ValueError, OSError, SplitEngineError) as exc:
        print(f"survsplit split: {exc}", file=sys.stderr)
        return 1
    try:
        if args.method == "gs":
            result = greedy_search(rt, data, min_child=args.min_child)
        else:
            if args.a is None and not args.a_adaptive:
                print("survsplit split: --method sss needs --a or --a-adaptive",
                      file=sys.stderr)
                return 1
            params = SigmoidParams(a=args.a, adaptive=args.a_adaptive)
            result = sss_search(rt, data, params, grid_points=args.grid_points)
    except NoAdmissibleCut as exc:
        print(f"survsplit split: {exc}", file=sys.stderr)
        return 2
    except SplitEngineError as exc:
        print(f"survsplit split: {exc}", file=sys.stderr)
        return 1
    print(json.dumps({
        "method": result.method.value,
        "c_hat": result.c_hat,
        "stat": result.stat,
        "a": result.a,
        "n_evaluations": result.n_evaluations,
        "tie_break": result.tie_break,
    }))
    return 0


_SIMULATE_OVERRIDES = ("n", "reps", "beta0", "beta1", "c0", "a", "a_adaptive",
                       "seed", "edge_eps", "min_child", "grid_points")


def _resolve_simulate_config(args):
    overrides = {}
    if args.n is not None:
        overrides["n_list"] = (args.n,)
    if args.reps is not None:
        overrides["reps"] = args.reps
    if args.beta0 is not None:
        overrides["beta0"] = args.beta0
    if args.beta1 is not None:
        overrides["beta1"] = args.beta1
    if args.c0 is not None:
        overrides["c0"] = args.c0
    if args.a is not None:
        overrides["a_fixed"] = tuple(args.a)
    if args.a_adaptive is not None:
        overrides["a_adaptive"] = args.a_adaptive
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.edge_eps is not None:
        overrides["edge_eps"] = args.edge_eps
    if args.min_child is not None:
        overrides["min_child"] = args.min_child
    if args.grid_points is not None:
        overrides["grid_points"] = args.grid_points
    flagged = [name for name in _SIMULATE_OVERRIDES if getattr(args, name) is not None]
    return preset_config(args.preset, **overrides), flagged


def _dump_datasets(cfg, out_dir: Path) -> None:
    model = HazardModel(beta0=cfg.beta0, beta1=cfg.beta1, c0=cfg.c0)
    for n_idx, n in enumerate(cfg.n_list):
        for rep in range(cfg.reps):
            data = generate_dataset(model, n, SeedSpec(cfg.master_seed, n_idx * cfg.reps + rep))
            lines = ["time,event,z"]
            lines.extend(f"{s.time!r},{int(s.event)},{s.z!r}" for s in data)
            atomic_write_text(out_dir / "datasets" / f"n{n}_rep{rep}.csv",
                              "\n".join(lines) + "\n")


def _cmd_simulate(args) -> int:
    try:
        cfg, flagged = _resolve_simulate_config(args)
    except ValueError as exc:
        print(f"survsplit simulate: {exc}", file=sys.stderr)
        return 1
    out_dir = Path(args.out_dir)
    records, summaries = run_experiment(cfg, max_workers=args.threads)
    write_records_csv(records, out_dir / "records.csv")
    write_summary_csv(summaries, out_dir / "summary.csv")
    write_histogram_csv(summaries, out_dir / "histogram.csv")
    if args.format == "json":
        write_records_json(records, out_dir / "records.json")
        write_summary_json(summaries, out_dir / "summary.json")
        write_histogram_json(summaries, out_dir / "histogram.json")
    if args.dump_data:
        _dump_datasets(cfg, out_dir)
    manifest = {
        "version": __version__,
        "command": "simulate",
        "preset": args.preset,
        "overrides": flagged,
        "format": args.format,
        "threads": args.threads,
        "seed": cfg.master_seed,
        "config": dataclasses.asdict(cfg),
    }
    atomic_write_text(out_dir / "manifest.json", json.dumps(manifest, indent=1) + "\n")
    return 0


def _cmd_variance_probe(args) -> int:
    c_grid = args.c if args.c is not None else [0.02, 0.5]
    a_list = args.a if args.a is not None else [50.0]
    try:
        rows = variance_probe(args.n, a_list, c_grid, args.reps, args.seed)
    except (ValueError, SplitEngineError) as exc:
        print(f"survsplit variance-probe: {exc}", file=sys.stderr)
        return 1
    out_dir = Path(args.out_dir)
    write_variance_csv(rows, out_dir / "variance.csv")
    if args.format == "json":
        write_variance_json(rows, out_dir / "variance.json")
    return 0


def _cmd_moments(args) -> int:
    a_list = args.a if args.a is not None else [1.0, 10.0, 50.0, 100.0, 1000.0]
    c_grid = args.c if args.c is not None else [round(0.01 * i, 2) for i in range(1, 100)]
    lines = ["c,a,b_a,psi_a,bound_slack"]
    for a in a_list:
        if a <= 0:
            print("survsplit moments: shape parameters must be positive", file=sys.stderr)
            return 1
        for c in c_grid:
            b = b_a_closed(c, a)
            psi = psi_a_closed(c, a)
            slack = 2.0 * _LN2 / a - abs(b - c)
            lines.append(f"{float(c)!r},{float(a)!r},{b!r},{psi!r},{slack!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        atomic_write_text(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse exits for usage errors, --help, --version
        return int(exc.code or 0)
    if args.command == "split":
        return _cmd_split(args)
    if args.command == "simulate":
        return _cmd_simulate(args)
    if args.command == "variance-probe":
        return _cmd_variance_probe(args)
    return _cmd_moments(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
