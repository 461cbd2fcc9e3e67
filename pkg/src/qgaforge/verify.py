"""
Recompute the published RQGA worked example and compare it to the printed numbers.

The constants below are transcribed from the printed trace; everything
else is recomputed from scratch on each call.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass

import numpy as np

from .grover import IterationPolicy, grover_iteration_count, oracle_from_marked
from .problems import F1_PAPER, QuantizationRule, build_fitness_table
from .statevector import apply_diagonal, apply_inversion_about_mean, uniform_superposition

QUANT_SCALE = 100.0
QUANT_WORD_BITS = 10

# ten-bit fitness words for x = 0..15
FITNESS_WORDS = (
    "0011111010", "0010001100", "0001100111", "0001011101",
    "0001010000", "0000000000", "0000111010", "0001001011",
    "0001100100", "0010100101", "0101010111", "1001010111",
    "0111011110", "0101001010", "0100101100", "0101111001",
)
N_QUBITS = 4
WINNER = 11
UNIFORM_AMPLITUDE = 0.25
MARKED_AMPLITUDE = -0.25
DIFFUSED_MARKED = 0.6875
DIFFUSED_OTHER = 0.1875
ITERATIONS_STANDARD = 3
ITERATIONS_PAPER_COMPAT = 2

TOL = 1e-12


@dataclass
class Check:
    name: str
    passed: bool
    expected: object
    actual: object


def _vector(marked_value, other_value):
    v = np.full(2**N_QUBITS, other_value)
    v[WINNER] = marked_value
    return v


def _close(actual, expected):
    return bool(np.max(np.abs(np.asarray(actual) - np.asarray(expected))) <= TOL)


def run_checks():
    checks = []

    table = build_fitness_table(F1_PAPER, QuantizationRule(QUANT_SCALE, QUANT_WORD_BITS))
    words = [table.word_string(x) for x in range(2**N_QUBITS)]
    expected = list(FITNESS_WORDS)
    checks.append(Check("fitness words (10-bit, scale 100)", words == expected, expected, words))

    psi = uniform_superposition(N_QUBITS)
    amps = psi.amplitudes.real
    checks.append(Check("uniform superposition", _close(amps, np.full(16, UNIFORM_AMPLITUDE)),
                        [UNIFORM_AMPLITUDE] * 16, amps.tolist()))

    psi = apply_diagonal(psi, oracle_from_marked(N_QUBITS, [WINNER]))
    amps = psi.amplitudes.real
    want = _vector(MARKED_AMPLITUDE, UNIFORM_AMPLITUDE)
    checks.append(Check("oracle-marked state", _close(amps, want), want.tolist(), amps.tolist()))

    psi = apply_inversion_about_mean(psi)
    amps = psi.amplitudes.real
    want = _vector(DIFFUSED_MARKED, DIFFUSED_OTHER)
    checks.append(Check("state after one diffusion", _close(amps, want), want.tolist(),
                        amps.tolist()))

    counts = [
        grover_iteration_count(2**N_QUBITS, 1, IterationPolicy("standard")),
        grover_iteration_count(2**N_QUBITS, 1, IterationPolicy("paper-compat")),
    ]
    want = [ITERATIONS_STANDARD, ITERATIONS_PAPER_COMPAT]
    checks.append(Check("iteration counts (standard, paper-compat)", counts == want, want, counts))
    return checks


def verify_paper(out=None):
    """Print one line per check; return 0 if all pass, else 1."""
    out = out or sys.stdout
    checks = run_checks()
    for c in checks:
        print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}", file=out)
        if not c.passed:
            print(f"    expected: {c.expected}", file=out)
            print(f"    actual:   {c.actual}", file=out)
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed", file=out)
    return 0 if failed == 0 else 1
