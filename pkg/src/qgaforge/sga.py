"""Classical simple genetic algorithm used as the baseline."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ShapeError
from .problems import bits_to_str, evaluate_population
from .qga import EvolutionResult, GenerationRecord, _check_int, _check_prob, _reached

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SgaConfig:
    population_size: int = 16
    n_genes: int = 4
    max_generations: int = 50
    crossover_prob: float = 0.8
    mutation_prob: float = 0.01
    elitism: bool = True
    target_fitness: float | None = None
    seed: int = 0

    def __post_init__(self):
        _check_int(self.population_size, "population_size", 2)
        if self.population_size % 2:
            raise ConfigError(f"population_size must be even, got {self.population_size}",
                              field="population_size")
        _check_int(self.n_genes, "n_genes", 1)
        _check_int(self.max_generations, "max_generations", 0)
        _check_prob(self.crossover_prob, "crossover_prob")
        _check_prob(self.mutation_prob, "mutation_prob")


def roulette_select(pop, fitness, rng):
    """Index drawn with probability fitness_i / sum(fitness).

    If every fitness is zero the draw is uniform.
    """
    fitness = np.asarray(fitness, dtype=float)
    total = fitness.sum()
    if total <= 0:
        return int(rng.integers(len(fitness)))
    cum = np.cumsum(fitness)
    idx = int(np.searchsorted(cum, rng.random() * total, side="right"))
    # guard the float edge where u * total rounds up to cum[-1]
    return min(idx, int(np.flatnonzero(fitness > 0)[-1]))


def one_point_crossover(a, b, point):
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise ShapeError(f"parents must be equal-width bit rows, got {a.shape} and {b.shape}")
    n = a.size
    if not 1 <= point <= n - 1:
        raise ShapeError(f"cut point must lie in [1, {n - 1}], got {point}")
    return (np.concatenate([a[:point], b[point:]]),
            np.concatenate([b[:point], a[point:]]))


def bit_flip_mutation(c, mutation_prob, rng):
    c = np.asarray(c)
    flips = rng.random(c.shape) < mutation_prob
    return np.where(flips, 1 - c, c).astype(c.dtype)


def run_sga(config, problem, on_generation=None, initial=None):
    """Generational GA with roulette selection and elitism of one.

    ``initial`` replaces the random starting population when given.
    ``on_generation(generation, population, fitness)`` is called after
    every evaluation, if given.
    """
    if config.n_genes != problem.domain_bits:
        raise ShapeError(
            f"n_genes ({config.n_genes}) does not match problem width ({problem.domain_bits})"
        )
    start = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    size, n = config.population_size, config.n_genes

    if initial is None:
        pop = rng.integers(0, 2, size=(size, n), dtype=np.int8)
    else:
        pop = np.array(initial, dtype=np.int8)
        if pop.shape != (size, n):
            raise ShapeError(f"initial population must have shape {(size, n)}, got {pop.shape}")
    fitness = evaluate_population(pop, problem)
    records = [_record(0, pop, fitness)]
    if on_generation:
        on_generation(0, pop, fitness)

    gen = 0
    while gen < config.max_generations and not _reached(records[-1].best_fitness,
                                                          config.target_fitness):
        gen += 1
        elite = pop[int(np.argmax(fitness))].copy()
        children = []
        while len(children) < size:
            a = pop[roulette_select(pop, fitness, rng)]
            b = pop[roulette_select(pop, fitness, rng)]
            if n > 1 and rng.random() < config.crossover_prob:
                a, b = one_point_crossover(a, b, int(rng.integers(1, n)))
            children.append(bit_flip_mutation(a, config.mutation_prob, rng))
            children.append(bit_flip_mutation(b, config.mutation_prob, rng))
        pop = np.array(children, dtype=np.int8)
        fitness = evaluate_population(pop, problem)
        if config.elitism:
            worst = int(np.argmin(fitness))
            pop[worst] = elite
            fitness = evaluate_population(pop, problem)

        records.append(_record(gen, pop, fitness))
        if on_generation:
            on_generation(gen, pop, fitness)

    best = records[-1]
    return EvolutionResult(
        best_bitstring=best.best_bitstring,
        best_fitness=best.best_fitness,
        records=records,
        duration=time.perf_counter() - start,
    )


def _record(gen, pop, fitness):
    i = int(np.argmax(fitness))
    rec = GenerationRecord(gen, bits_to_str(pop[i]), float(fitness[i]), float(np.mean(fitness)))
    log.info("gen %d best=%s fitness=%.6f mean=%.6f", gen, rec.best_bitstring,
             rec.best_fitness, rec.mean_fitness)
    return rec
