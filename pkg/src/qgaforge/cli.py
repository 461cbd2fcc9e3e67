"""Command-line entry point: run, sweep, verify-paper, list-problems.

Exit codes: 0 success, 1 runtime or verification failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .errors import ConfigError, QgaForgeError
from .experiment import (
    ALGORITHMS,
    ExperimentConfig,
    atomic_write,
    run_experiment,
    run_sweep,
    write_report,
)
from .problems import list_problems
from .verify import verify_paper

BIT_ORDER_NOTE = "Bitstrings are most-significant-bit first: '1011' is 11."

# CLI flag dest -> params key
PARAM_FLAGS = {
    "population": "population_size",
    "generations": "max_generations",
    "rotation_delta": "rotation_delta",
    "mutation_prob": "mutation_prob",
    "crossover_prob": "crossover_prob",
    "target_fitness": "target_fitness",
    "elitism": "elitism",
    "policy": "policy",
    "iterations": "iterations",
    "scale": "scale",
    "word_bits": "word_bits",
    "qubits": "qubits",
    "marked": "marked",
}


def _marked_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _seed_range(text):
    for sep in ("..", "-", ":"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            try:
                lo, hi = int(lo), int(hi)
            except ValueError:
                break
            return list(range(lo, hi + 1))
    try:
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a seed or range like 1-100, got {text!r}")


def _add_experiment_flags(p):
    p.add_argument("--config", type=Path, help="JSON experiment config; flags override it")
    p.add_argument("--algorithm", choices=ALGORITHMS)
    p.add_argument("--problem", help="registered problem name (see list-problems)")
    p.add_argument("--shots", type=int, help="measurement shots for rqga/grover (default 10000)")
    p.add_argument("--output", help="report path (JSON); GA runs also write <stem>.csv")

    g = p.add_argument_group("algorithm parameters")
    g.add_argument("--population", type=int)
    g.add_argument("--generations", type=int)
    g.add_argument("--rotation-delta", type=float, help="qga rotation angle in radians")
    g.add_argument("--mutation-prob", type=float)
    g.add_argument("--crossover-prob", type=float)
    g.add_argument("--target-fitness", type=float)
    g.add_argument("--elitism", action=argparse.BooleanOptionalAction, default=None)
    g.add_argument("--policy", choices=("standard", "paper-compat", "explicit"),
                   help="Grover iteration policy")
    g.add_argument("--iterations", type=int, help="explicit Grover iteration count")
    g.add_argument("--scale", type=float, help="rqga fitness quantization scale")
    g.add_argument("--word-bits", type=int, help="rqga fitness word width")
    g.add_argument("--qubits", type=int, help="grover register size")
    g.add_argument("--marked", type=_marked_list, help="grover marked indices, e.g. 11 or 3,4")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qgaforge",
        description="Simulated classical, quantum-inspired and Grover-based genetic algorithms.",
        epilog=BIT_ORDER_NOTE,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one seeded experiment", epilog=BIT_ORDER_NOTE)
    _add_experiment_flags(run)
    run.add_argument("--seed", type=int)
    run.add_argument("--trace", action="store_true", help="print the per-step trace to stderr")

    sweep = sub.add_parser("sweep", help="run one config across a seed range",
                           epilog=BIT_ORDER_NOTE)
    _add_experiment_flags(sweep)
    sweep.add_argument("--seeds", type=_seed_range, required=True, help="e.g. 1-100 or 1..100")
    sweep.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    sweep.add_argument("--report-dir", type=Path, help="also write one report per seed here")

    sub.add_parser("verify-paper", help="recompute the published RQGA worked example")
    sub.add_parser("list-problems", help="list registered fitness problems")
    return parser


def config_from_args(args):
    data = {}
    if args.config is not None:
        try:
            data = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}", field="config")
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object", field="config")
    for key in ("algorithm", "problem", "shots", "output"):
        if getattr(args, key) is not None:
            data[key] = getattr(args, key)
    if getattr(args, "seed", None) is not None:
        data["seed"] = args.seed
    params = dict(data.get("params") or {})
    for dest, key in PARAM_FLAGS.items():
        value = getattr(args, dest)
        if value is not None:
            params[key] = value
    data["params"] = params
    if "algorithm" not in data:
        raise ConfigError("--algorithm is required", field="algorithm")
    return ExperimentConfig.from_dict(data)


def print_trace(report, out):
    if report.algorithm in ("sga", "qga"):
        for r in report.trace:
            print(f"gen {r['generation']:3d}  best {r['best_bitstring']}  "
                  f"fitness {r['best_fitness']:.6f}  mean {r['mean_fitness']:.6f}", file=out)
        return
    for s in report.trace:
        marked = ", ".join(f"{k}: {v:.6f}" for k, v in s["marked_amplitudes"].items())
        print(f"iter {s['iteration']}  marked {{{marked}}}  unmarked {s['unmarked_amplitude']:.6f}"
              f"  p_marked {s['marked_probability']:.6f}", file=out)


def cmd_run(args):
    config = config_from_args(args)
    report = run_experiment(config)
    if args.trace:
        print_trace(report, sys.stderr)
    if report.config["output"]:
        paths = write_report(report, report.config["output"])
        w = report.winner
        print(f"winner {w['bitstring']} ({w['index']}) -> {', '.join(map(str, paths))}")
    else:
        sys.stdout.write(report.to_json())
    return 0


def cmd_sweep(args):
    config = config_from_args(args)
    agg = run_sweep(config, args.seeds, jobs=max(1, args.jobs), report_dir=args.report_dir)
    text = json.dumps(agg, indent=2) + "\n"
    if config.output:
        atomic_write(config.output, text)
        print(f"success rate {agg['success_rate']} over {agg['n_runs']} seeds "
              f"({agg['n_failed']} failed) -> {config.output}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_list_problems(args):
    for p in list_problems():
        opt = "-" if p.optimum is None else f"{p.optimum_bitstring} ({p.optimum})"
        print(f"{p.name}\tbits={p.domain_bits}\toptimum={opt}\t{p.description}")
    return 0


def setup_logging():
    level = os.environ.get("QGAFORGE_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv=None):
    setup_logging()
    args = build_parser().parse_args(argv)
    commands = {
        "run": cmd_run,
        "sweep": cmd_sweep,
        "verify-paper": lambda a: verify_paper(),
        "list-problems": cmd_list_problems,
    }
    try:
        return commands[args.command](args)
    except ConfigError as exc:
        where = f"{exc.field}: " if exc.field else ""
        print(f"qgaforge: configuration error: {where}{exc}", file=sys.stderr)
        return 2
    except QgaForgeError as exc:
        print(f"qgaforge: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
