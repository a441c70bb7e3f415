"""Command line entry point: ``itemc {gen,solve,brute,anneal,bench,report}``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .baselines import brute_force, simulated_annealing
from .bench import ExperimentConfig, default_output_dir, run_experiment
from .instance import GraphSpec, load_instance, sample_random_ising, save_instance
from .report import FIGURE_KINDS, report
from .solver import MODES, SolverConfig, shot_budget, solve


def _out_path(args, default_name: str) -> Path:
    out = Path(args.out) if args.out else default_output_dir() / default_name
    out.parent.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(doc: dict, path: Path) -> None:
    path.write_text(json.dumps(doc, indent=1) + "\n")


def cmd_gen(args) -> int:
    spec = GraphSpec.parse(args.graph)
    if args.count == 1:
        path = _out_path(args, f"instance_n{args.n}_{spec.kind}_s{args.seed}.json")
        save_instance(sample_random_ising(args.n, spec, args.seed), path)
        print(path)
        return 0
    out_dir = Path(args.out) if args.out else default_output_dir()
    out_dir.mkdir(parents=True, exist_ok=True)
    for k in range(args.count):
        seed = args.seed + k
        path = out_dir / f"instance_n{args.n}_{spec.kind}_s{seed}.json"
        save_instance(sample_random_ising(args.n, spec, seed), path)
        print(path)
    return 0


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    doc = SolverConfig.load(args.config).to_dict() if args.config else {}
    for key in ("tau", "alpha", "shots", "shots_pauli", "mode", "sorting", "max_iters",
                "conv_tol", "seed"):
        value = getattr(args, key)
        if value is not None:
            doc[key] = value
    if args.track_entropy:
        doc["track_entropy"] = True
    config = SolverConfig.from_dict(doc)
    record = solve(inst, config)
    out = record.to_dict()
    out["shot_budget"] = shot_budget(inst, config, record)
    path = _out_path(args, "run_record.json")
    _write_json(out, path)
    print(f"cvar={record.final.cvar:.6f} best={record.best_energy:.6f} "
          f"bits={record.best_bitstring} ordering={record.ordering.kind} "
          f"iterations={len(record.iterations)} executions={record.circuit_executions}")
    print(path)
    return 0


def cmd_brute(args) -> int:
    inst = load_instance(args.instance)
    rep = brute_force(inst, args.k)
    path = _out_path(args, "optima.json")
    _write_json(rep.to_dict(), path)
    for bits, e in rep.solutions:
        print(f"{bits} {e:.6f}")
    return 0


def cmd_anneal(args) -> int:
    inst = load_instance(args.instance)
    samples = simulated_annealing(inst, args.reads, args.sweeps, args.seed)
    doc = {"kind": "sample_set", **samples.to_dict()}
    path = _out_path(args, "anneal.json")
    _write_json(doc, path)
    bits, e = samples.best()
    print(f"best {''.join(map(str, bits))} {e:.6f}")
    return 0


def cmd_bench(args) -> int:
    if args.config:
        config = ExperimentConfig.load(args.config)
    else:
        config = ExperimentConfig(
            sizes=args.sizes, graphs=args.graphs, instances_per_cell=args.instances,
            solver={"mode": args.mode} if args.mode else {},
        )
    if args.seed is not None:
        config.master_seed = args.seed
    if args.workers is not None:
        config.workers = args.workers
    path = _out_path(args, Path(config.output).name)
    rows = run_experiment(config, path)
    failed = sum(r["status"] != "done" for r in rows)
    print(f"{len(rows)} rows ({failed} failed) -> {path}")
    return 0


def cmd_report(args) -> int:
    out_dir = Path(args.out) if args.out else default_output_dir() / "report"
    kinds = args.figure or list(FIGURE_KINDS)
    for kind in kinds:
        paths = report(args.results, kind, out_dir, plot=not args.no_plot)
        for p in paths.values():
            print(p)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="itemc", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed_default=0):
        p.add_argument("--seed", type=int, default=seed_default)
        p.add_argument("--out", help=f"output path (default: ${{ITEMC_OUTPUT_DIR}} or .)")

    p = sub.add_parser("gen", help="generate random Ising instances")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--graph", default="complete",
                   help="complete | three_regular | density:<d>")
    p.add_argument("--count", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="run ITEMC on one instance")
    p.add_argument("instance")
    p.add_argument("--config", help="solver config JSON")
    p.add_argument("--tau", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--shots", type=int)
    p.add_argument("--shots-pauli", dest="shots_pauli", type=int)
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--sorting", help="adaptive | random | fixed:<ordering>")
    p.add_argument("--max-iters", dest="max_iters", type=int)
    p.add_argument("--conv-tol", dest="conv_tol", type=float)
    p.add_argument("--track-entropy", action="store_true")
    common(p, seed_default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("brute", help="exact lowest-energy bitstrings")
    p.add_argument("instance")
    p.add_argument("-k", type=int, default=3)
    common(p)
    p.set_defaults(func=cmd_brute)

    p = sub.add_parser("anneal", help="simulated annealing samples")
    p.add_argument("instance")
    p.add_argument("--reads", type=int, default=200)
    p.add_argument("--sweeps", type=int, default=1000)
    common(p)
    p.set_defaults(func=cmd_anneal)

    p = sub.add_parser("bench", help="run an experiment grid")
    p.add_argument("--config", help="experiment config (JSON or YAML)")
    p.add_argument("--sizes", type=int, nargs="+", default=[10])
    p.add_argument("--graphs", nargs="+", default=["complete"])
    p.add_argument("--instances", type=int, default=30)
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--workers", type=int)
    common(p, seed_default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="aggregate results into series, CSV and figures")
    p.add_argument("results")
    p.add_argument("--figure", action="append", choices=FIGURE_KINDS)
    p.add_argument("--no-plot", action="store_true")
    common(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"itemc {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
