import math

import numpy as np
import pytest

from qgaforge.errors import ConfigError, InvalidInputError, InvalidOracleError
from qgaforge.grover import IterationPolicy
from qgaforge.problems import F1_PAPER, QuantizationRule, build_fitness_table, table_problem
from qgaforge.rqga import RqgaConfig, build_entangled_state, decode_winner, run_rqga
from qgaforge.statevector import Histogram

# measured counts printed by the reference circuit run
PRINTED_COUNTS = {"1011": 34, "0000": 13, "0010": 9, "1111": 9, "0001": 8, "0111": 7, "1000": 5,
                  "1101": 3, "1010": 3, "0100": 3, "0101": 3, "1110": 2, "0011": 1}


def test_entangled_state_benchmark():
    full = build_entangled_state(build_fitness_table(F1_PAPER))
    amps = full.state.amplitudes
    positions = full.nonzero_positions()
    assert len(positions) == 16
    assert 11 * 1024 + 599 in positions
    np.testing.assert_allclose(amps[positions], 0.25, atol=1e-15)
    np.testing.assert_allclose(full.index_marginal(), 1 / 16, atol=1e-15)


def test_entangled_state_degenerate():
    table = build_fitness_table(table_problem(domain_bits=1, values=[0, 0]), QuantizationRule(1, 1))
    full = build_entangled_state(table)
    assert full.nonzero_positions() == [0, 2]
    np.testing.assert_allclose(full.state.amplitudes[[0, 2]], 1 / math.sqrt(2), atol=1e-15)


def test_entangled_state_identity_pairing():
    table = build_fitness_table(table_problem(domain_bits=2, values=[0, 1, 2, 3]),
                                QuantizationRule(1, 2))
    full = build_entangled_state(table)
    assert full.nonzero_positions() == [0, 5, 10, 15]
    np.testing.assert_allclose(full.state.amplitudes[[0, 5, 10, 15]], 0.5, atol=1e-15)


def test_entangled_state_audit_random():
    rng = np.random.default_rng(17)
    for _ in range(50):
        n = int(rng.integers(1, 6))
        vals = rng.integers(0, 64, 2**n)
        table = build_fitness_table(table_problem(domain_bits=n, values=vals), QuantizationRule(1, 6))
        full = build_entangled_state(table)
        expected = sorted(x * 64 + int(vals[x]) for x in range(2**n))
        assert full.nonzero_positions() == expected
        np.testing.assert_allclose(full.index_marginal(), 2.0**-n, atol=1e-12)


def test_entangled_state_dimension_guard():
    table = build_fitness_table(F1_PAPER, QuantizationRule(100, 21))
    with pytest.raises(ConfigError):
        build_entangled_state(table)


def test_decode_winner_printed_counts():
    hist = Histogram(4, {int(k, 2): v for k, v in PRINTED_COUNTS.items()}, 100)
    assert decode_winner(hist) == (11, "1011")


def test_decode_winner_single_and_tie():
    assert decode_winner(Histogram(4, {5: 100}, 100)) == (5, "0101")
    assert decode_winner(Histogram(3, {3: 50, 4: 50}, 100)) == (3, "011")


def test_decode_winner_empty():
    with pytest.raises(InvalidInputError):
        decode_winner(Histogram(2, {}, 0))


@pytest.mark.parametrize("seed", [0, 1, 2, 123456789])
def test_run_rqga_benchmark(seed):
    rep = run_rqga(RqgaConfig(seed=seed))
    assert (rep.winner_index, rep.winner_bitstring) == (11, "1011")
    assert rep.iterations == 3
    assert rep.winner_fitness == pytest.approx(5.99994, abs=1e-5)
    assert rep.histogram.shots == 10_000
    assert max(rep.histogram.counts, key=rep.histogram.counts.get) == rep.winner_index


def test_run_rqga_constant_fitness():
    with pytest.raises(InvalidOracleError):
        run_rqga(RqgaConfig(problem=table_problem(domain_bits=3, values=[1.0] * 8)))


def test_run_rqga_two_peaks():
    prob = table_problem(domain_bits=3, values=[min(x, 7 - x) for x in range(8)])
    rep = run_rqga(RqgaConfig(problem=prob, quantization=QuantizationRule(1, 3), seed=4))
    assert rep.marked == [3, 4]
    assert rep.winner_index in (3, 4)
    freq = rep.histogram.frequency(3) + rep.histogram.frequency(4)
    assert freq >= 0.90
    assert rep.trace.steps[-1].marked_probability == pytest.approx(1.0, abs=1e-12)


def test_paper_compat_marks_last_tie():
    prob = table_problem(domain_bits=3, values=[min(x, 7 - x) for x in range(8)])
    rep = run_rqga(RqgaConfig(problem=prob, quantization=QuantizationRule(1, 3),
                              policy=IterationPolicy("paper-compat")))
    assert rep.marked == [4]


def test_run_rqga_deterministic():
    a, b = run_rqga(RqgaConfig(seed=77)), run_rqga(RqgaConfig(seed=77))
    assert a.histogram == b.histogram
    assert a.trace == b.trace


@pytest.mark.parametrize("n", range(1, 9))
def test_oracle_calls_within_sqrt_bound(n):
    vals = np.arange(2**n, dtype=float)
    rep = run_rqga(RqgaConfig(problem=table_problem(domain_bits=n, values=vals),
                              quantization=QuantizationRule(1, 9), shots=16))
    assert rep.trace.oracle_calls <= math.ceil(math.pi / 4 * math.sqrt(2**n))


@pytest.mark.parametrize("shots", [0, -5, 1.5])
def test_config_rejects_bad_shots(shots):
    with pytest.raises(ConfigError, match="shots"):
        RqgaConfig(shots=shots)
