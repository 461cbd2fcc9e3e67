"""
Experiment configs, run dispatch, JSON/CSV reports and seed sweeps.

Bitstrings in reports are most-significant-bit first ("1011" == 11).
Histograms serialize as {bitstring: count}.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, QgaForgeError
from .grover import IterationPolicy, oracle_from_marked, run_grover
from .problems import QuantizationRule, get_problem
from .qga import DEFAULT_ROTATION_DELTA, QgaConfig, run_qga
from .rqga import DEFAULT_SHOTS, RqgaConfig, decode_winner, run_rqga
from .sga import SgaConfig, run_sga
from .statevector import check_qubit_count, measure_shots

log = logging.getLogger(__name__)

ALGORITHMS = ("sga", "qga", "rqga", "grover")

# algorithm -> {param name: default}
PARAM_DEFAULTS = {
    "sga": {
        "population_size": 16,
        "max_generations": 50,
        "crossover_prob": 0.8,
        "mutation_prob": 0.01,
        "elitism": True,
        "target_fitness": None,
    },
    "qga": {
        "population_size": 16,
        "max_generations": 50,
        "rotation_delta": DEFAULT_ROTATION_DELTA,
        "mutation_prob": 0.01,
        "elitism": True,
        "target_fitness": None,
    },
    "rqga": {"scale": 100.0, "word_bits": 10, "policy": "standard", "iterations": None},
    "grover": {"qubits": None, "marked": None, "policy": "standard", "iterations": None},
}

TRACE_CSV_COLUMNS = ("generation", "best_fitness", "mean_fitness", "best_bitstring")


@dataclass
class ExperimentConfig:
    algorithm: str
    problem: str | dict | None = "f1-paper"
    params: dict = field(default_factory=dict)
    seed: int = 0
    shots: int | None = None
    output: str | None = None

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config field(s): {', '.join(sorted(extra))}",
                              field=sorted(extra)[0])
        if "algorithm" not in data:
            raise ConfigError("config is missing 'algorithm'", field="algorithm")
        return cls(**data)

    def resolved(self):
        """Validate and fill defaults. The result reproduces the same run."""
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(
                f"algorithm must be one of {', '.join(ALGORITHMS)}, got {self.algorithm!r}",
                field="algorithm",
            )
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) \
                or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}",
                              field="seed")
        defaults = PARAM_DEFAULTS[self.algorithm]
        params = dict(self.params or {})
        unknown = set(params) - set(defaults)
        if unknown:
            raise ConfigError(
                f"parameter(s) {', '.join(sorted(unknown))} not valid for {self.algorithm}",
                field=f"params.{sorted(unknown)[0]}",
            )
        merged = {**defaults, **params}
        if merged.get("iterations") is not None and "policy" not in params:
            merged["policy"] = "explicit"

        shots = self.shots
        problem = self.problem
        if self.algorithm in ("rqga", "grover"):
            shots = DEFAULT_SHOTS if shots is None else shots
            if isinstance(shots, bool) or not isinstance(shots, int) or shots < 1:
                raise ConfigError(f"shots must be >= 1, got {shots!r}", field="shots")
        if self.algorithm == "grover":
            problem = None
            _check_grover_params(merged)
        else:
            if problem is None:
                raise ConfigError(f"{self.algorithm} needs a problem", field="problem")
            get_problem(problem)
        cfg = ExperimentConfig(self.algorithm, problem, merged, self.seed, shots, self.output)
        cfg._build()  # surfaces algorithm-level validation errors now
        return cfg

    def _build(self):
        p = self.params
        if self.algorithm == "grover":
            return None
        problem = get_problem(self.problem)
        if self.algorithm == "sga":
            return SgaConfig(n_genes=problem.domain_bits, seed=self.seed, **p)
        if self.algorithm == "qga":
            return QgaConfig(n_genes=problem.domain_bits, seed=self.seed, **p)
        return RqgaConfig(
            problem=problem,
            quantization=QuantizationRule(p["scale"], p["word_bits"]),
            policy=IterationPolicy(p["policy"], p["iterations"]),
            shots=self.shots,
            seed=self.seed,
        )


def _check_grover_params(p):
    if p["qubits"] is None:
        raise ConfigError("grover needs --qubits", field="qubits")
    check_qubit_count(p["qubits"])
    marked = p["marked"]
    if marked is None:
        raise ConfigError("grover needs --marked", field="marked")
    if isinstance(marked, int):
        marked = [marked]
    try:
        p["marked"] = sorted({int(m) for m in marked})
        oracle_from_marked(p["qubits"], p["marked"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid marked set: {exc}", field="marked") from exc
    IterationPolicy(p["policy"], p["iterations"])


@dataclass
class RunReport:
    algorithm: str
    config: dict
    winner: dict
    histogram: dict | None
    trace: list
    summary: dict
    timing: dict
    artifact_version: str = __version__

    def to_dict(self):
        return {
            "artifact_version": self.artifact_version,
            "algorithm": self.algorithm,
            "config": self.config,
            "winner": self.winner,
            "summary": self.summary,
            "histogram": self.histogram,
            "trace": self.trace,
            "timing": self.timing,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            algorithm=d["algorithm"],
            config=d["config"],
            winner=d["winner"],
            histogram=d["histogram"],
            trace=d["trace"],
            summary=d["summary"],
            timing=d["timing"],
            artifact_version=d["artifact_version"],
        )

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def masked(self):
        """Copy with wall-clock fields blanked, for byte comparisons."""
        d = json.loads(self.to_json())
        d["timing"] = {k: None for k in d["timing"]}
        return RunReport.from_dict(d)

    def trace_csv(self):
        if self.algorithm not in ("sga", "qga"):
            return None
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=TRACE_CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in self.trace:
            w.writerow({k: row[k] for k in TRACE_CSV_COLUMNS})
        return buf.getvalue()


def atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def write_report(report, path):
    """Write the JSON report, plus ``<stem>.csv`` with the convergence trace for GA runs."""
    path = Path(path)
    atomic_write(path, report.to_json())
    written = [path]
    text = report.trace_csv()
    if text is not None:
        csv_path = path.with_suffix(".csv")
        atomic_write(csv_path, text)
        written.append(csv_path)
    return written


def run_experiment(config):
    cfg = config.resolved()
    log.info("running %s seed=%d", cfg.algorithm, cfg.seed)
    start = time.perf_counter()
    if cfg.algorithm in ("sga", "qga"):
        report = _run_evolution(cfg)
    elif cfg.algorithm == "rqga":
        report = _run_rqga(cfg)
    else:
        report = _run_grover(cfg)
    report.timing = {"wall_seconds": time.perf_counter() - start}
    return report


def _run_evolution(cfg):
    problem = get_problem(cfg.problem)
    algo_cfg = cfg._build()
    runner = run_sga if cfg.algorithm == "sga" else run_qga
    result = runner(algo_cfg, problem)
    optimum = problem.optimum_bitstring
    return RunReport(
        algorithm=cfg.algorithm,
        config=cfg.to_dict(),
        winner={
            "index": result.best_index,
            "bitstring": result.best_bitstring,
            "fitness": result.best_fitness,
        },
        histogram=None,
        trace=[r.to_dict() for r in result.records],
        summary={
            "optimum": optimum,
            "generations_run": result.records[-1].generation,
            "generations_to_optimum": None if optimum is None else result.generations_to(optimum),
        },
        timing={},
    )


def _run_rqga(cfg):
    res = run_rqga(cfg._build())
    problem = get_problem(cfg.problem)
    return RunReport(
        algorithm="rqga",
        config=cfg.to_dict(),
        winner={"index": res.winner_index, "bitstring": res.winner_bitstring,
                "fitness": res.winner_fitness},
        histogram=res.histogram.to_bitstring_map(),
        trace=res.trace.to_list(),
        summary={
            "optimum": problem.optimum_bitstring,
            "marked": res.marked,
            "iterations": res.iterations,
            "marked_probability": res.trace.steps[-1].marked_probability,
            "winner_frequency": res.histogram.frequency(res.winner_index),
        },
        timing={},
    )


def _run_grover(cfg):
    p = cfg.params
    n = p["qubits"]
    oracle = oracle_from_marked(n, p["marked"])
    state, trace = run_grover(n, oracle, IterationPolicy(p["policy"], p["iterations"]))
    hist = measure_shots(state, cfg.shots, np.random.default_rng(cfg.seed))
    index, bits = decode_winner(hist)
    return RunReport(
        algorithm="grover",
        config=cfg.to_dict(),
        winner={"index": index, "bitstring": bits, "fitness": None},
        histogram=hist.to_bitstring_map(),
        trace=trace.to_list(),
        summary={
            "marked": list(p["marked"]),
            "iterations": trace.oracle_calls,
            "marked_probability": trace.steps[-1].marked_probability,
            "winner_frequency": hist.frequency(index),
        },
        timing={},
    )


def report_success(report):
    """True/False if the run found the known optimum, None if there is none to compare."""
    if report.algorithm == "grover":
        return report.winner["index"] in report.summary["marked"]
    optimum = report.summary.get("optimum")
    if optimum is None:
        return None
    return report.winner["bitstring"] == optimum


def _sweep_worker(config_dict):
    try:
        return "ok", run_experiment(ExperimentConfig.from_dict(config_dict)).to_dict()
    except QgaForgeError as exc:
        return "error", f"{type(exc).__name__}: {exc}"


def run_sweep(base, seeds, jobs=1, report_dir=None):
    """Run ``base`` once per seed and aggregate the outcomes.

    The base config is validated before any run starts. Per-seed failures
    are recorded and do not abort the sweep.
    """
    seeds = list(seeds)
    if not seeds:
        raise ConfigError("seed range is empty", field="seeds")
    base = base.resolved()
    configs = []
    for s in seeds:
        d = base.to_dict()
        d["seed"] = s
        d["output"] = None
        configs.append(d)

    if jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            outcomes = list(ex.map(_sweep_worker, configs))
    else:
        outcomes = [_sweep_worker(c) for c in configs]

    runs, failures, successes, gens = [], [], [], []
    for seed, (status, payload) in zip(seeds, outcomes):
        if status == "error":
            failures.append({"seed": seed, "error": payload})
            continue
        rep = RunReport.from_dict(payload)
        runs.append(payload)
        if report_dir is not None:
            write_report(rep, Path(report_dir) / f"seed_{seed}.json")
        ok = report_success(rep)
        if ok is not None:
            successes.append(ok)
        g = rep.summary.get("generations_to_optimum")
        if ok and g is not None:
            gens.append(g)

    return {
        "artifact_version": __version__,
        "algorithm": base.algorithm,
        "base_config": base.to_dict(),
        "seeds": seeds,
        "n_runs": len(seeds),
        "n_completed": len(runs),
        "n_failed": len(failures),
        "n_success": sum(successes) if successes else None,
        "success_rate": (sum(successes) / len(successes)) if successes else None,
        "mean_generations_to_optimum": (sum(gens) / len(gens)) if gens else None,
        "failures": failures,
        "runs": runs,
    }
