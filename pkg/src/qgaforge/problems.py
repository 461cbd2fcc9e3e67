"""
Fitness functions, quantization to fixed-width words, and argmax lookup.

A quantum fitness operator that writes f(x) into a second register
without collapsing the index register is not known. Here the whole
table is evaluated classically and exhaustively, which is what the
reference RQGA listing does too.
"""
from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigError, DomainError, QuantizationError, ShapeError


@dataclass(frozen=True)
class FitnessFunction:
    name: str
    domain_bits: int
    evaluator: Callable[[int], float]
    optimum: int | None = None
    description: str = ""

    def __call__(self, x):
        return self.evaluator(x)

    def values(self):
        """Fitness over the whole domain, index = chromosome integer."""
        vals = np.array([float(self.evaluator(x)) for x in range(2**self.domain_bits)])
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise DomainError(f"problem {self.name!r} yields negative or non-finite fitness")
        return vals

    @property
    def optimum_bitstring(self):
        if self.optimum is None:
            return None
        return format(self.optimum, f"0{self.domain_bits}b")


@dataclass(frozen=True)
class QuantizationRule:
    scale: float = 100.0
    word_bits: int = 10

    def __post_init__(self):
        if not self.scale > 0:
            raise ConfigError(f"scale must be positive, got {self.scale!r}", field="scale")
        if not isinstance(self.word_bits, (int, np.integer)) or self.word_bits < 1:
            raise ConfigError(f"word_bits must be a positive integer, got {self.word_bits!r}",
                              field="word_bits")

    @property
    def capacity(self):
        return 2**self.word_bits


@dataclass
class FitnessTable:
    rule: QuantizationRule
    fitness: np.ndarray
    words: np.ndarray
    argmax: list = field(default_factory=list)

    @property
    def n_bits(self):
        return int(self.fitness.size).bit_length() - 1

    @property
    def max_word(self):
        return int(self.words.max())

    def word_string(self, x):
        return format(int(self.words[x]), f"0{self.rule.word_bits}b")

    def rows(self):
        return [(x, float(self.fitness[x]), int(self.words[x])) for x in range(self.fitness.size)]


def benchmark_f1(x):
    """|(x - 5) / (2 + sin x)| on the integers 0..15, x in radians."""
    if isinstance(x, bool) or not isinstance(x, (int, np.integer)) or not 0 <= x <= 15:
        raise DomainError(f"benchmark_f1 is defined on integers 0..15, got {x!r}")
    return abs((x - 5) / (2 + math.sin(x)))


def quantize_fitness(value, rule=QuantizationRule()):
    """floor(scale * value) as an unsigned integer that fits in ``rule.word_bits``."""
    if value < 0 or not math.isfinite(value):
        raise QuantizationError(f"cannot quantize {value!r}: fitness must be finite and >= 0")
    word = math.floor(rule.scale * value)
    if word >= rule.capacity:
        raise QuantizationError(
            f"value {value!r} scales to {word}, which exceeds the {rule.word_bits}-bit "
            f"capacity (max {rule.capacity - 1})"
        )
    return word


def format_word(word, word_bits):
    return format(word, f"0{word_bits}b")


def argmax_set(table):
    """Every index reaching the maximum word. Ties are all kept."""
    return [int(i) for i in np.flatnonzero(table.words == table.words.max())]


def last_argmax(table):
    """Single winner by a last-wins ``>=`` scan, as the reference listing selects it."""
    best, best_word = 0, table.words[0]
    for i, w in enumerate(table.words):
        if w >= best_word:
            best, best_word = i, w
    return int(best)


def build_fitness_table(problem, rule=QuantizationRule()):
    fitness = problem.values()
    words = np.array([quantize_fitness(v, rule) for v in fitness], dtype=np.int64)
    table = FitnessTable(rule=rule, fitness=fitness, words=words)
    table.argmax = argmax_set(table)
    return table


def decode_bits(bits):
    """MSB-first bit rows to integers. Accepts one row or a 2-D array."""
    bits = np.asarray(bits, dtype=np.int64)
    weights = 1 << np.arange(bits.shape[-1] - 1, -1, -1, dtype=np.int64)
    return bits @ weights


def encode_int(x, n_bits):
    return np.array([(x >> (n_bits - 1 - j)) & 1 for j in range(n_bits)], dtype=np.int8)


def bits_to_str(bits):
    return "".join(str(int(b)) for b in bits)


def evaluate_population(pop, problem):
    """Real fitness of each classical chromosome (rows of bits)."""
    pop = np.atleast_2d(np.asarray(pop))
    if pop.shape[1] != problem.domain_bits:
        raise ShapeError(
            f"chromosome width {pop.shape[1]} does not match problem width {problem.domain_bits}"
        )
    table = _domain_values(problem)
    return table[decode_bits(pop)]


@lru_cache(maxsize=64)
def _domain_values(problem):
    vals = problem.values()
    vals.setflags(write=False)
    return vals


# -- registry ---------------------------------------------------------------

F1_PAPER = FitnessFunction(
    name="f1-paper",
    domain_bits=4,
    evaluator=benchmark_f1,
    optimum=11,
    description="|(x-5)/(2+sin x)| for x in 0..15; maximum at x=11 ('1011')",
)

_REGISTRY = {F1_PAPER.name: F1_PAPER}


def register(problem):
    _REGISTRY[problem.name] = problem
    return problem


def list_problems():
    return list(_REGISTRY.values())


def get_problem(spec):
    """Resolve a registered name, or build a table problem from a dict.

    A table problem looks like
    ``{"name": "...", "domain_bits": 3, "values": [...], "optimum": 7}``;
    ``optimum`` is optional and defaults to the unique argmax if there is one.
    """
    if isinstance(spec, FitnessFunction):
        return spec
    if isinstance(spec, str):
        try:
            return _REGISTRY[spec]
        except KeyError:
            known = ", ".join(sorted(_REGISTRY))
            raise ConfigError(f"unknown problem {spec!r} (registered: {known})", field="problem")
    if isinstance(spec, dict):
        extra = set(spec) - {"name", "domain_bits", "values", "optimum", "description"}
        if extra:
            raise ConfigError(f"unknown table problem field(s): {', '.join(sorted(extra))}",
                              field="problem")
        return table_problem(**spec)
    raise ConfigError(f"problem must be a name or a table definition, got {spec!r}", field="problem")


def table_problem(name="custom", domain_bits=None, values=None, optimum=None, description=""):
    if not isinstance(domain_bits, int) or domain_bits < 1:
        raise ConfigError("table problem needs a positive integer domain_bits",
                          field="problem.domain_bits")
    if values is None or len(values) != 2**domain_bits:
        raise ConfigError(f"table problem needs exactly {2**domain_bits} values",
                          field="problem.values")
    vals = tuple(float(v) for v in values)
    if any(v < 0 or not math.isfinite(v) for v in vals):
        raise ConfigError("table values must be finite and non-negative", field="problem.values")
    if optimum is None:
        best = max(vals)
        winners = [i for i, v in enumerate(vals) if v == best]
        optimum = winners[0] if len(winners) == 1 else None
    return FitnessFunction(
        name=name,
        domain_bits=domain_bits,
        evaluator=_TableLookup(vals),
        optimum=optimum,
        description=description,
    )


@dataclass(frozen=True)
class _TableLookup:
    values: tuple

    def __call__(self, x):
        return self.values[x]
