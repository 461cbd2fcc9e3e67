"""
Minimal state-vector simulation kernel.

Basis ordering: qubit 0 is the most significant bit, so the bitstring
"1011" is basis index 11. Every module in the package shares this.

Measurement here does NOT collapse the stored state. A simulator can
sample the same register as many times as it likes; real hardware
cannot. Histograms are therefore i.i.d. draws from one fixed state.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from .errors import ConfigError, InvalidInputError, ShapeError

MAX_QUBITS = 24
NORM_TOL = 1e-10
UNITARY_TOL = 1e-12

_R2 = 1 / sqrt(2)
HADAMARD = np.array([[_R2, _R2], [_R2, -_R2]], dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def check_qubit_count(n_qubits):
    if not isinstance(n_qubits, (int, np.integer)) or not 1 <= n_qubits <= MAX_QUBITS:
        raise ConfigError(
            f"n_qubits must be an integer in [1, {MAX_QUBITS}], got {n_qubits!r}",
            field="n_qubits",
        )


@dataclass(frozen=True)
class Statevector:
    """Complex amplitudes over the 2**n_qubits computational basis states."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        size = amps.size
        if size < 2 or size & (size - 1):
            raise ShapeError(f"amplitude vector length {size} is not a power of two >= 2")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidInputError(f"state is not normalized: sum |a|^2 = {norm!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_qubits(self):
        return int(self.amplitudes.size).bit_length() - 1

    @property
    def dim(self):
        return self.amplitudes.size

    @classmethod
    def basis(cls, index, n_qubits):
        check_qubit_count(n_qubits)
        if not 0 <= index < 2**n_qubits:
            raise IndexError(f"basis index {index} out of range for {n_qubits} qubits")
        amps = np.zeros(2**n_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(amps)

    @classmethod
    def from_bitstring(cls, bits):
        return cls.basis(int(bits, 2), len(bits))

    def norm_squared(self):
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True)
class DiagonalOperator:
    """Diagonal unitary given by its unit-modulus phases."""

    phases: np.ndarray

    def __post_init__(self):
        ph = np.asarray(self.phases, dtype=complex).reshape(-1)
        size = ph.size
        if size < 2 or size & (size - 1):
            raise ShapeError(f"diagonal length {size} is not a power of two >= 2")
        if np.max(np.abs(np.abs(ph) - 1.0)) > UNITARY_TOL:
            raise InvalidInputError("diagonal entries must have unit modulus")
        ph.setflags(write=False)
        object.__setattr__(self, "phases", ph)

    @property
    def n_qubits(self):
        return int(self.phases.size).bit_length() - 1

    def marked(self):
        """Indices carrying a -1 phase (the marked set of a phase oracle)."""
        return [int(i) for i in np.flatnonzero(np.isclose(self.phases, -1.0, atol=UNITARY_TOL))]

    def is_phase_oracle(self):
        return bool(np.all(np.isclose(np.abs(self.phases.imag), 0.0, atol=UNITARY_TOL))
                    and np.all(np.isclose(np.abs(self.phases.real), 1.0, atol=UNITARY_TOL)))

    def to_matrix(self):
        return np.diag(self.phases)


@dataclass(frozen=True)
class Histogram:
    n_qubits: int
    counts: dict = field(default_factory=dict)
    shots: int = 0

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise InvalidInputError("histogram counts do not sum to shots")
        if any(not 0 <= k < 2**self.n_qubits for k in self.counts):
            raise InvalidInputError("histogram key outside the register")

    def frequency(self, index):
        return self.counts.get(index, 0) / self.shots

    def most_common(self):
        return Counter(self.counts).most_common()

    def to_bitstring_map(self):
        """Bitstring-keyed counts (MSB first), sorted by index."""
        return {format(k, f"0{self.n_qubits}b"): v for k, v in sorted(self.counts.items())}


def check_gate(gate):
    g = np.asarray(gate, dtype=complex)
    if g.shape != (2, 2):
        raise ShapeError(f"single-qubit gate must be 2x2, got {g.shape}")
    if np.max(np.abs(g @ g.conj().T - np.eye(2))) > UNITARY_TOL:
        raise InvalidInputError("gate is not unitary")
    return g


def uniform_superposition(n_qubits):
    """Equal superposition, every amplitude 1/sqrt(2**n_qubits)."""
    check_qubit_count(n_qubits)
    dim = 2**n_qubits
    return Statevector(np.full(dim, 1 / sqrt(dim), dtype=complex))


def apply_diagonal(state, op):
    if state.dim != op.phases.size:
        raise ShapeError(
            f"dimension mismatch: state has {state.dim} amplitudes, operator has {op.phases.size}"
        )
    return Statevector(op.phases * state.amplitudes)


def apply_inversion_about_mean(state):
    """Grover diffusion 2|s><s| - I, applied as a_i -> 2*mean(a) - a_i."""
    amps = state.amplitudes
    return Statevector(2 * amps.mean() - amps)


def inversion_about_mean_matrix(n_qubits):
    """Dense diffusion matrix: 2/N everywhere minus the identity. Test use only."""
    dim = 2**n_qubits
    return np.full((dim, dim), 2 / dim) - np.eye(dim)


def apply_single_qubit_gate(state, gate, target):
    n = state.n_qubits
    if not 0 <= target < n:
        raise IndexError(f"target qubit {target} out of range for {n} qubits")
    g = check_gate(gate)
    psi = state.amplitudes.reshape([2] * n)
    psi = np.moveaxis(np.tensordot(g, psi, axes=([1], [target])), 0, target)
    return Statevector(psi.reshape(-1))


def state_probabilities(state):
    amps = state.amplitudes
    return amps.real**2 + amps.imag**2


def measure_shots(state, shots, rng):
    """Sample ``shots`` outcomes without touching ``state``."""
    if not isinstance(shots, (int, np.integer)) or shots < 1:
        raise ConfigError(f"shots must be >= 1, got {shots!r}", field="shots")
    p = state_probabilities(state)
    counts = rng.multinomial(int(shots), p / p.sum())
    nz = np.flatnonzero(counts)
    return Histogram(state.n_qubits, {int(i): int(counts[i]) for i in nz}, int(shots))
