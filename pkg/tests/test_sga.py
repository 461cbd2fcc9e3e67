from collections import Counter

import numpy as np
import pytest

from qgaforge.errors import ConfigError, ShapeError
from qgaforge.problems import F1_PAPER, table_problem
from qgaforge.sga import (
    SgaConfig,
    bit_flip_mutation,
    one_point_crossover,
    roulette_select,
    run_sga,
)


def bits(s):
    return np.array([int(c) for c in s], dtype=np.int8)


def as_str(a):
    return "".join(map(str, a))


def test_roulette_all_mass_on_one():
    rng = np.random.default_rng(0)
    assert {roulette_select(None, [1, 0, 0], rng) for _ in range(1000)} == {0}


@pytest.mark.parametrize("fitness, expected0", [((1, 1), 0.5), ((3, 1), 0.75)])
def test_roulette_frequencies(fitness, expected0):
    rng = np.random.default_rng(1)
    draws = [roulette_select(None, fitness, rng) for _ in range(100_000)]
    assert abs(draws.count(0) / len(draws) - expected0) <= 0.01


def test_roulette_zero_fitness_is_uniform():
    rng = np.random.default_rng(2)
    counts = Counter(roulette_select(None, [0, 0, 0, 0], rng) for _ in range(40_000))
    assert set(counts) == {0, 1, 2, 3}
    assert all(abs(c / 40_000 - 0.25) <= 0.01 for c in counts.values())


def test_roulette_never_picks_zero_weight():
    rng = np.random.default_rng(3)
    picks = {roulette_select(None, [0, 2, 0, 5, 0], rng) for _ in range(5000)}
    assert picks == {1, 3}


@pytest.mark.parametrize("a, b, point, c1, c2", [
    ("00000", "11111", 2, "00111", "11000"),
    ("1010", "0101", 1, "1101", "0010"),
])
def test_one_point_crossover(a, b, point, c1, c2):
    x, y = one_point_crossover(bits(a), bits(b), point)
    assert (as_str(x), as_str(y)) == (c1, c2)


def test_crossover_identical_parents():
    a = bits("10110")
    for point in range(1, 5):
        x, y = one_point_crossover(a, a, point)
        assert as_str(x) == as_str(y) == "10110"


@pytest.mark.parametrize("a, b, point", [("101", "10", 1), ("101", "010", 0), ("101", "010", 3)])
def test_crossover_shape_errors(a, b, point):
    with pytest.raises(ShapeError):
        one_point_crossover(bits(a), bits(b), point)


def test_crossover_conserves_bits_per_position():
    rng = np.random.default_rng(4)
    for _ in range(500):
        n = int(rng.integers(2, 12))
        a, b = rng.integers(0, 2, n), rng.integers(0, 2, n)
        x, y = one_point_crossover(a, b, int(rng.integers(1, n)))
        np.testing.assert_array_equal(np.sort([a, b], axis=0), np.sort([x, y], axis=0))


def test_bit_flip_extremes():
    rng = np.random.default_rng(5)
    c = bits("1011001")
    np.testing.assert_array_equal(bit_flip_mutation(c, 0.0, rng), c)
    np.testing.assert_array_equal(bit_flip_mutation(c, 1.0, rng), 1 - c)


def test_bit_flip_binomial_mean():
    rng = np.random.default_rng(6)
    c = np.zeros(16, dtype=np.int8)
    flipped = [int(bit_flip_mutation(c, 0.5, rng).sum()) for _ in range(100_000)]
    assert abs(np.mean(flipped) - 8) <= 0.1


def test_run_sga_seed_7():
    assert run_sga(SgaConfig(seed=7), F1_PAPER).best_bitstring == "1011"


def test_run_sga_zero_generations():
    result = run_sga(SgaConfig(max_generations=0, seed=1), F1_PAPER)
    assert len(result.records) == 1


def test_identical_population_never_changes():
    prob = table_problem(domain_bits=4, values=[float(x) for x in range(16)])
    start = np.tile(bits("0110"), (8, 1))
    seen = []
    cfg = SgaConfig(population_size=8, mutation_prob=0.0, crossover_prob=1.0, seed=3,
                    max_generations=20)
    run_sga(cfg, prob, on_generation=lambda g, pop, f: seen.append(pop.copy()), initial=start)
    assert len(seen) == 21
    for pop in seen:
        np.testing.assert_array_equal(pop, start)


def test_run_sga_invariants():
    sizes, best = [], []

    def capture(gen, pop, fitness):
        sizes.append(len(pop))
        best.append(fitness.max())

    run_sga(SgaConfig(seed=21, max_generations=60), F1_PAPER, on_generation=capture)
    assert set(sizes) == {16}
    assert all(b >= a for a, b in zip(best, best[1:]))


def test_run_sga_deterministic():
    assert run_sga(SgaConfig(seed=5), F1_PAPER).records == run_sga(SgaConfig(seed=5), F1_PAPER).records


@pytest.mark.parametrize("kwargs", [{"population_size": 15}, {"crossover_prob": -0.1},
                                    {"mutation_prob": 2}])
def test_sga_config_validation(kwargs):
    with pytest.raises(ConfigError):
        SgaConfig(**kwargs)
