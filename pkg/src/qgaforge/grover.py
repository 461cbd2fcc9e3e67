"""Grover amplitude amplification on a phase-oracle-marked register."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError, InvalidOracleError
from .statevector import (
    DiagonalOperator,
    apply_diagonal,
    apply_inversion_about_mean,
    check_qubit_count,
    state_probabilities,
    uniform_superposition,
)

POLICY_MODES = ("standard", "paper-compat", "explicit")


@dataclass(frozen=True)
class IterationPolicy:
    """How many oracle+diffusion rounds to run.

    ``standard`` uses floor(pi/4 * sqrt(N/M)). ``paper-compat`` replays the
    reference RQGA listing, whose ``range(1, iter)`` loop runs one round
    fewer than its own formula. ``explicit`` uses ``explicit_count``.
    """

    mode: str = "standard"
    explicit_count: int | None = None

    def __post_init__(self):
        if self.mode not in POLICY_MODES:
            raise ConfigError(
                f"policy must be one of {', '.join(POLICY_MODES)}, got {self.mode!r}", field="policy"
            )
        if self.mode == "explicit":
            if self.explicit_count is None:
                raise ConfigError("explicit policy requires an iteration count", field="iterations")
            if not isinstance(self.explicit_count, (int, np.integer)) or self.explicit_count < 0:
                raise ConfigError(
                    f"iterations must be a non-negative integer, got {self.explicit_count!r}",
                    field="iterations",
                )

    @classmethod
    def explicit(cls, k):
        return cls("explicit", k)


@dataclass
class GroverStep:
    iteration: int
    marked_amplitudes: dict
    unmarked_amplitude: float | None
    marked_probability: float


@dataclass
class GroverTrace:
    marked: list
    steps: list = field(default_factory=list)

    @property
    def oracle_calls(self):
        return len(self.steps) - 1

    def marked_probabilities(self):
        return [s.marked_probability for s in self.steps]

    def to_list(self):
        return [
            {
                "iteration": s.iteration,
                "marked_amplitudes": {str(k): v for k, v in s.marked_amplitudes.items()},
                "unmarked_amplitude": s.unmarked_amplitude,
                "marked_probability": s.marked_probability,
            }
            for s in self.steps
        ]


def oracle_from_marked(n_qubits, marked):
    check_qubit_count(n_qubits)
    marked = sorted({int(m) for m in marked})
    dim = 2**n_qubits
    if not marked:
        raise InvalidOracleError("marked set is empty")
    if marked[0] < 0 or marked[-1] >= dim:
        raise InvalidOracleError(f"marked index outside [0, {dim})")
    if len(marked) == dim:
        # Flipping every sign is a global phase; nothing can be amplified.
        raise InvalidOracleError("marked set covers the whole search space")
    phases = np.ones(dim, dtype=complex)
    phases[marked] = -1.0
    return DiagonalOperator(phases)


def _check_counts(n_states, n_marked):
    if n_states < 1 or n_marked < 1:
        raise DomainError(f"need n_states >= 1 and n_marked >= 1, got {n_states}, {n_marked}")
    if n_marked >= n_states:
        raise DomainError(f"n_marked ({n_marked}) must be smaller than n_states ({n_states})")


def grover_iteration_count(n_states, n_marked, policy=IterationPolicy()):
    _check_counts(n_states, n_marked)
    if policy.mode == "explicit":
        return int(policy.explicit_count)
    if policy.mode == "paper-compat":
        # iter = int(round(trunc(pi/4 * sqrt(N)))); for i in range(1, iter)
        return max(0, int(round(math.trunc(math.pi / 4 * math.sqrt(n_states)))) - 1)
    return math.floor(math.pi / 4 * math.sqrt(n_states / n_marked))


def success_probability_closed_form(n_states, n_marked, k):
    _check_counts(n_states, n_marked)
    if k < 0:
        raise DomainError(f"iteration count must be >= 0, got {k}")
    theta = math.asin(math.sqrt(n_marked / n_states))
    return math.sin((2 * k + 1) * theta) ** 2


def _record(state, iteration, marked, unmarked_idx):
    amps = state.amplitudes
    probs = state_probabilities(state)
    return GroverStep(
        iteration=iteration,
        marked_amplitudes={m: float(amps[m].real) for m in marked},
        unmarked_amplitude=None if unmarked_idx is None else float(amps[unmarked_idx].real),
        marked_probability=float(probs[marked].sum()),
    )


def run_grover(n_qubits, oracle, policy=IterationPolicy()):
    """Amplify the oracle's marked states starting from the uniform state.

    Returns the final state and a trace with one record per iteration,
    including iteration 0. Unmarked amplitudes stay equal to each other
    throughout, so the trace stores a single representative.
    """
    if oracle.n_qubits != n_qubits:
        raise DomainError(f"oracle acts on {oracle.n_qubits} qubits, register has {n_qubits}")
    marked = oracle.marked()
    k = grover_iteration_count(2**n_qubits, len(marked), policy)
    marked_set = set(marked)
    unmarked_idx = next(i for i in range(2**n_qubits) if i not in marked_set)

    state = uniform_superposition(n_qubits)
    trace = GroverTrace(marked=marked, steps=[_record(state, 0, marked, unmarked_idx)])
    for it in range(1, k + 1):
        state = apply_inversion_about_mean(apply_diagonal(state, oracle))
        trace.steps.append(_record(state, it, marked, unmarked_idx))
    return state, trace
