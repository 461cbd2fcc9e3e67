"""
Reduced quantum genetic algorithm: one Grover search replaces evolution.

Pipeline: exhaustive classical fitness table -> argmax marked set ->
phase oracle -> Grover loop on the n-qubit index register -> shot
sampling -> most frequent outcome wins.

The fitness register is treated as a classical sidecar. No construction
is known for a diffusion step acting on the joint index (x) fitness
register that keeps each index paired with its own fitness word, so
Grover runs on the index register only. :func:`build_entangled_state`
still builds the joint state for inspection.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, InvalidInputError
from .grover import GroverTrace, IterationPolicy, oracle_from_marked, run_grover
from .problems import (
    FitnessFunction,
    QuantizationRule,
    build_fitness_table,
    get_problem,
    last_argmax,
)
from .statevector import MAX_QUBITS, Histogram, Statevector, measure_shots

DEFAULT_SHOTS = 10_000


@dataclass(frozen=True)
class RqgaConfig:
    problem: FitnessFunction | str = "f1-paper"
    quantization: QuantizationRule = field(default_factory=QuantizationRule)
    policy: IterationPolicy = field(default_factory=IterationPolicy)
    shots: int = DEFAULT_SHOTS
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.shots, (int, np.integer)) or isinstance(self.shots, bool) \
                or self.shots < 1:
            raise ConfigError(f"shots must be >= 1, got {self.shots!r}", field="shots")
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}",
                              field="seed")


@dataclass
class FullRegisterState:
    """Joint index (x) fitness register, index word most significant."""

    index_bits: int
    fitness_bits: int
    state: Statevector

    def nonzero_positions(self):
        return [int(i) for i in np.flatnonzero(np.abs(self.state.amplitudes) > 0)]

    def index_marginal(self):
        """Probability of each index value after tracing out the fitness word."""
        probs = np.abs(self.state.amplitudes) ** 2
        return probs.reshape(2**self.index_bits, 2**self.fitness_bits).sum(axis=1)


@dataclass
class RqgaReport:
    winner_index: int
    winner_bitstring: str
    winner_fitness: float
    histogram: Histogram
    trace: GroverTrace
    marked: list
    iterations: int
    config: RqgaConfig
    duration: float = 0.0


def build_entangled_state(table):
    """State sum_x |x> |word(x)> / sqrt(2**n) that a fitness operator would produce."""
    n, m = table.n_bits, table.rule.word_bits
    if n + m > MAX_QUBITS:
        raise ConfigError(f"index + fitness register needs {n + m} qubits, limit is {MAX_QUBITS}",
                          field="word_bits")
    amps = np.zeros(2 ** (n + m), dtype=complex)
    positions = np.arange(2**n) * 2**m + table.words
    amps[positions] = 1 / np.sqrt(2**n)
    return FullRegisterState(n, m, Statevector(amps))


def decode_winner(hist):
    """Most frequent outcome; ties go to the smallest index."""
    if hist is None or not hist.counts:
        raise InvalidInputError("cannot decode a winner from an empty histogram")
    index = min(hist.counts, key=lambda k: (-hist.counts[k], k))
    return index, format(index, f"0{hist.n_qubits}b")


def marked_set(table, policy):
    if policy.mode == "paper-compat":
        return [last_argmax(table)]
    return list(table.argmax)


def run_rqga(config):
    start = time.perf_counter()
    problem = get_problem(config.problem)
    n = problem.domain_bits
    table = build_fitness_table(problem, config.quantization)
    marked = marked_set(table, config.policy)
    oracle = oracle_from_marked(n, marked)
    state, trace = run_grover(n, oracle, config.policy)
    rng = np.random.default_rng(config.seed)
    hist = measure_shots(state, config.shots, rng)
    index, bitstring = decode_winner(hist)
    return RqgaReport(
        winner_index=index,
        winner_bitstring=bitstring,
        winner_fitness=float(table.fitness[index]),
        histogram=hist,
        trace=trace,
        marked=marked,
        iterations=trace.oracle_calls,
        config=config,
        duration=time.perf_counter() - start,
    )
