"""
Hybrid quantum-inspired genetic algorithm.

A population is an array of shape (population_size, n_genes, 2) holding
real (alpha, beta) amplitude pairs. Each generation is observed into
classical bitstrings, scored classically, then updated by a rotation
toward the elite chromosome and a Pauli-X amplitude swap for mutation.
Observation samples the amplitudes without modifying them.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ShapeError
from .problems import bits_to_str, evaluate_population

log = logging.getLogger(__name__)

DEFAULT_ROTATION_DELTA = 0.05 * math.pi
_AXIS_TOL = 1e-15


@dataclass(frozen=True)
class QgaConfig:
    population_size: int = 16
    n_genes: int = 4
    max_generations: int = 50
    rotation_delta: float = DEFAULT_ROTATION_DELTA
    mutation_prob: float = 0.01
    elitism: bool = True
    target_fitness: float | None = None
    seed: int = 0

    def __post_init__(self):
        _check_int(self.population_size, "population_size", 2)
        _check_int(self.n_genes, "n_genes", 1)
        _check_int(self.max_generations, "max_generations", 0)
        if not self.rotation_delta > 0:
            raise ConfigError(f"rotation_delta must be > 0, got {self.rotation_delta!r}",
                              field="rotation_delta")
        _check_prob(self.mutation_prob, "mutation_prob")


def _check_int(value, name, lo):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < lo:
        raise ConfigError(f"{name} must be an integer >= {lo}, got {value!r}", field=name)


def _check_prob(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not 0 <= value <= 1:
        raise ConfigError(f"{name} must be in [0, 1], got {value!r}", field=name)


@dataclass
class GenerationRecord:
    generation: int
    best_bitstring: str
    best_fitness: float
    mean_fitness: float

    def to_dict(self):
        return {
            "generation": self.generation,
            "best_fitness": self.best_fitness,
            "mean_fitness": self.mean_fitness,
            "best_bitstring": self.best_bitstring,
        }


@dataclass
class EvolutionResult:
    """Outcome of an SGA or QGA run."""

    best_bitstring: str
    best_fitness: float
    records: list = field(default_factory=list)
    duration: float = 0.0

    @property
    def best_index(self):
        return int(self.best_bitstring, 2)

    def generations_to(self, bitstring):
        """First generation whose best chromosome equals ``bitstring``."""
        for r in self.records:
            if r.best_bitstring == bitstring:
                return r.generation
        return None


def rotate_genes(genes, theta):
    """Apply the rotation [[cos, -sin], [sin, cos]] to (alpha, beta) pairs."""
    genes = np.asarray(genes, dtype=float)
    c, s = np.cos(theta), np.sin(theta)
    alpha, beta = genes[..., 0], genes[..., 1]
    return np.stack([c * alpha - s * beta, s * alpha + c * beta], axis=-1)


def init_quantum_population(config, rng):
    """Every gene starts at (1/sqrt2, 1/sqrt2) and is rotated by U[0, pi/2)."""
    shape = (config.population_size, config.n_genes)
    base = np.full(shape + (2,), 1 / math.sqrt(2))
    theta = rng.uniform(0.0, math.pi / 2, size=shape)
    return rotate_genes(base, theta)


def observe_population(qpop, rng):
    """Collapse each gene to 1 with probability beta**2. ``qpop`` is untouched."""
    p_one = qpop[..., 1] ** 2
    return (rng.random(p_one.shape) < p_one).astype(np.int8)


def rotation_update(qpop, observed, fitness, best_bits, best_fitness, delta=DEFAULT_ROTATION_DELTA):
    """Rotate disagreeing genes of worse chromosomes toward the elite's bits.

    The step is signed so that the probability of observing the elite bit
    strictly grows, and is clipped so it never rotates past the basis
    axis (which would lower that probability again).
    """
    qpop = np.asarray(qpop, dtype=float)
    observed = np.asarray(observed)
    best_bits = np.asarray(best_bits)
    if observed.shape != qpop.shape[:2] or best_bits.shape != qpop.shape[1:2]:
        raise ShapeError("population, observation and elite shapes disagree")
    if delta == 0:
        return qpop.copy()

    mask = (np.asarray(fitness) < best_fitness)[:, None] & (observed != best_bits[None, :])
    phi = np.arctan2(qpop[..., 1], qpop[..., 0])
    # angle of the target axis: pi/2 (mod pi) favours bit 1, 0 (mod pi) favours bit 0
    target = np.where(best_bits[None, :] == 1, math.pi / 2, 0.0)
    ahead = np.mod(target - phi, math.pi)
    step = np.where(ahead <= math.pi / 2, np.minimum(delta, ahead), -np.minimum(delta, math.pi - ahead))
    step = np.where(mask & (np.abs(step) > _AXIS_TOL), step, 0.0)
    return rotate_genes(qpop, step)


def mutation_update(qpop, mutation_prob, rng, exempt=None):
    """Swap (alpha, beta) -> (beta, alpha) per gene with probability ``mutation_prob``."""
    qpop = np.array(qpop, dtype=float)
    flip = rng.random(qpop.shape[:2]) < mutation_prob
    if exempt is not None:
        flip[exempt] = False
    qpop[flip] = qpop[flip][:, ::-1]
    return qpop


def normalization_drift(qpop):
    return float(np.max(np.abs(qpop[..., 0] ** 2 + qpop[..., 1] ** 2 - 1.0)))


def run_qga(config, problem, on_generation=None):
    """Evolve a quantum population against ``problem``.

    ``on_generation(generation, qpop, observed, fitness)`` is called after
    every evaluation, if given.
    """
    if config.n_genes != problem.domain_bits:
        raise ShapeError(
            f"n_genes ({config.n_genes}) does not match problem width ({problem.domain_bits})"
        )
    start = time.perf_counter()
    rng = np.random.default_rng(config.seed)

    qpop = init_quantum_population(config, rng)
    observed = observe_population(qpop, rng)
    fitness = evaluate_population(observed, problem)
    elite_idx = int(np.argmax(fitness))
    best_bits, best_fit = observed[elite_idx].copy(), float(fitness[elite_idx])

    records = [_record(0, best_bits, best_fit, fitness)]
    if on_generation:
        on_generation(0, qpop, observed, fitness)

    gen = 0
    while gen < config.max_generations and not _reached(best_fit, config.target_fitness):
        gen += 1
        qpop = rotation_update(qpop, observed, fitness, best_bits, best_fit, config.rotation_delta)
        qpop = mutation_update(qpop, config.mutation_prob, rng,
                               exempt=elite_idx if config.elitism else None)
        observed = observe_population(qpop, rng)
        fitness = evaluate_population(observed, problem)

        gen_idx = int(np.argmax(fitness))
        if not config.elitism or fitness[gen_idx] > best_fit:
            elite_idx = gen_idx
            best_bits, best_fit = observed[gen_idx].copy(), float(fitness[gen_idx])

        records.append(_record(gen, best_bits, best_fit, fitness))
        if on_generation:
            on_generation(gen, qpop, observed, fitness)

    return EvolutionResult(
        best_bitstring=bits_to_str(best_bits),
        best_fitness=best_fit,
        records=records,
        duration=time.perf_counter() - start,
    )


def _reached(best, target):
    return target is not None and best >= target


def _record(gen, best_bits, best_fit, fitness):
    rec = GenerationRecord(gen, bits_to_str(best_bits), best_fit, float(np.mean(fitness)))
    log.info("gen %d best=%s fitness=%.6f mean=%.6f", gen, rec.best_bitstring,
             rec.best_fitness, rec.mean_fitness)
    return rec
