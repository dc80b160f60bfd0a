"""Dense statevector simulation of the measurement circuits.

States are pure, stored as complex amplitude arrays of length 2^q with the
little-endian index convention (qubit j is bit j of the basis index), the
same convention as ``PauliString.to_matrix``.  All operations return new
states; nothing here mutates its inputs, so states, Hamiltonians, and
evolution caches can be shared freely across threads.

Hamiltonian evolution is exact via a cached eigendecomposition; joint
measurement of a commuting Pauli set enumerates the nonzero joint
eigensectors once and then samples shots from that exact distribution.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ContractViolationError,
    DegenerateBranchError,
    DimensionMismatchError,
    DomainError,
)
from .pauli import PauliString

_NORM_TOL = 1e-10
_H_GATE = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_SDG_GATE = np.array([[1, 0], [0, -1j]], dtype=complex)
# Rotations taking the X/Y/Z eigenbasis to the computational basis.
_BASIS_ROTATION = {0: _H_GATE, 1: _H_GATE @ _SDG_GATE, 2: np.eye(2, dtype=complex)}
BASIS_LETTERS = "XYZ"


@dataclass(frozen=True)
class StateVector:
    qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.amplitudes.shape != (2**self.qubits,):
            raise DimensionMismatchError(
                f"expected {2**self.qubits} amplitudes, got {self.amplitudes.shape}"
            )
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > _NORM_TOL:
            raise DomainError(f"state norm {norm} deviates from 1")

    @classmethod
    def basis_state(cls, qubits: int, index: int = 0) -> "StateVector":
        amps = np.zeros(2**qubits, dtype=complex)
        amps[index] = 1.0
        return cls(qubits, amps)

    @classmethod
    def from_amplitudes(cls, amps: np.ndarray) -> "StateVector":
        amps = np.asarray(amps, dtype=complex)
        q = int(np.log2(len(amps)))
        if 2**q != len(amps):
            raise DimensionMismatchError("amplitude length is not a power of two")
        return cls(q, amps / np.linalg.norm(amps))

    def expectation(self, p: PauliString) -> complex:
        return complex(np.vdot(self.amplitudes, _pauli_apply(p, self.amplitudes)))


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Product state with a on qubits 0..qa-1 and b on the block above."""
    return StateVector(a.qubits + b.qubits, np.kron(b.amplitudes, a.amplitudes))


# ---------------------------------------------------------------------------
# Matrix-free Pauli application
# ---------------------------------------------------------------------------

_POPCOUNT_PARITY: dict[int, np.ndarray] = {}


def _parity_table(dim: int) -> np.ndarray:
    table = _POPCOUNT_PARITY.get(dim)
    if table is None:
        table = (np.bitwise_count(np.arange(dim, dtype=np.uint64)) & 1).astype(np.int8)
        _POPCOUNT_PARITY[dim] = table
    return table


def _pauli_apply(p: PauliString, amps: np.ndarray) -> np.ndarray:
    """Apply P to one state (1-d) or to each column of a 2-d array."""
    dim = 2**p.qubits
    if amps.shape[0] != dim:
        raise DimensionMismatchError("state dimension does not match Pauli string")
    # P|i> = prefactor * (-1)^{parity(zbits & i)} |i ^ xbits>
    prefactor = p.phase * (1j) ** bin(p.xbits & p.zbits).count("1")
    idx = np.arange(dim, dtype=np.uint64)
    src = idx ^ np.uint64(p.xbits)
    signs = 1.0 - 2.0 * _parity_table(dim)[src & np.uint64(p.zbits)]
    if amps.ndim == 1:
        return prefactor * signs * amps[src]
    return prefactor * signs[:, None] * amps[src, :]


def apply_pauli(state: StateVector, p: PauliString) -> StateVector:
    return StateVector(state.qubits, _pauli_apply(p, state.amplitudes))


def apply_pauli_rotation(state: StateVector, b: PauliString) -> StateVector:
    """Apply exp(i pi/4 B) = (I + iB) / sqrt(2) for a Hermitian B."""
    if not b.is_hermitian:
        raise DomainError(f"rotation generator {b} is not Hermitian")
    rotated = (state.amplitudes + 1j * _pauli_apply(b, state.amplitudes)) / np.sqrt(2)
    return StateVector(state.qubits, rotated)


def _single_qubit_apply(amps: np.ndarray, gate: np.ndarray, qubit: int, qubits: int) -> np.ndarray:
    shaped = amps.reshape([2] * qubits, order="F")
    moved = np.moveaxis(shaped, qubit, 0)
    out = np.tensordot(gate, moved, axes=([1], [0]))
    return np.moveaxis(out, 0, qubit).reshape(-1, order="F")


# ---------------------------------------------------------------------------
# Hamiltonians and exact evolution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EvolutionCache:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def build(cls, dense: np.ndarray) -> "EvolutionCache":
        evals, evecs = np.linalg.eigh(dense)
        scale = max(np.linalg.norm(dense), 1e-30)
        residual = np.linalg.norm(evecs @ np.diag(evals) @ evecs.conj().T - dense)
        if residual > 1e-8 * scale:
            raise DomainError(f"eigendecomposition residual {residual:.3e} too large")
        return cls(evals, evecs)


class Hamiltonian:
    """Real linear combination of Hermitian Pauli strings."""

    def __init__(self, qubits: int, terms: list[tuple[float, PauliString]]):
        self.qubits = qubits
        checked = []
        for coeff, p in terms:
            if p.qubits != qubits:
                raise DimensionMismatchError("Hamiltonian term on wrong qubit count")
            if p.phase_k not in (0, 2):
                raise DomainError(f"term {p} is not Hermitian (phase must be +-1)")
            if abs(complex(coeff).imag) > 1e-12:
                raise DomainError(f"term coefficient {coeff} is not real")
            checked.append((float(complex(coeff).real), p))
        self.terms: tuple[tuple[float, PauliString], ...] = tuple(checked)
        self._dense: np.ndarray | None = None
        self._evolution: EvolutionCache | None = None

    def dense(self) -> np.ndarray:
        if self._dense is None:
            dim = 2**self.qubits
            h = np.zeros((dim, dim), dtype=complex)
            eye = np.eye(dim, dtype=complex)
            for coeff, p in self.terms:
                h += coeff * _pauli_apply(p, eye)
            self._dense = h
        return self._dense

    def evolution(self) -> EvolutionCache:
        if self._evolution is None:
            self._evolution = EvolutionCache.build(self.dense())
        return self._evolution

    def ground_state(self) -> tuple[float, StateVector]:
        cache = self.evolution()
        vec = cache.eigenvectors[:, 0]
        return float(cache.eigenvalues[0]), StateVector(self.qubits, vec.astype(complex))


def evolve(state: StateVector, h: Hamiltonian, t: float) -> StateVector:
    """Return exp(-iHt)|psi> via the cached eigendecomposition."""
    if state.qubits != h.qubits:
        raise DimensionMismatchError("state and Hamiltonian qubit counts differ")
    if t == 0.0:
        return state
    cache = h.evolution()
    coeffs = cache.eigenvectors.conj().T @ state.amplitudes
    coeffs *= np.exp(-1j * cache.eigenvalues * t)
    return StateVector(state.qubits, cache.eigenvectors @ coeffs)


# ---------------------------------------------------------------------------
# Ancilla-conditioned branch preparation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AncillaOutcome:
    bit: int
    post_state: StateVector
    probability: float


def projection_branches(
    state: StateVector, b: PauliString
) -> tuple[float, np.ndarray, float, np.ndarray]:
    """Unnormalized branches (I +- B)/2 |psi> with their squared norms.

    The two probabilities sum to 1 exactly up to floating error whenever
    B is a Hermitian involution.
    """
    if not b.is_hermitian:
        raise DomainError(f"branch operator {b} is not Hermitian")
    bpsi = _pauli_apply(b, state.amplitudes)
    plus = (state.amplitudes + bpsi) / 2
    minus = (state.amplitudes - bpsi) / 2
    p_plus = float(np.vdot(plus, plus).real)
    p_minus = float(np.vdot(minus, minus).real)
    return p_plus, plus, p_minus, minus


def prepare_rho_pm(
    state: StateVector,
    b: PauliString,
    h: Hamiltonian,
    t: float,
    rng: np.random.Generator,
) -> AncillaOutcome:
    """Sample the ancilla circuit once: bit 0 with probability C_plus^2.

    The post state is the normalized, time-evolved (I +- B)/2 branch.
    """
    p_plus, plus, p_minus, minus = projection_branches(state, b)
    bit = 0 if rng.random() < p_plus else 1
    prob, branch = (p_plus, plus) if bit == 0 else (p_minus, minus)
    if prob < 1e-14:
        raise DegenerateBranchError(
            f"sampled branch {bit} of {b} has probability {prob:.3e}"
        )
    normalized = StateVector(state.qubits, branch / np.sqrt(prob))
    return AncillaOutcome(bit, evolve(normalized, h, t), prob)


# ---------------------------------------------------------------------------
# Joint measurement of commuting Pauli sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MeasurementRecord:
    """Shot-indexed joint outcomes for a fixed list of observables."""

    observables: tuple[PauliString, ...]
    outcomes: np.ndarray = field(repr=False)  # (shots, m) of +-1 int8

    @property
    def shots(self) -> int:
        return self.outcomes.shape[0]

    def mean(self, i: int) -> float:
        return float(self.outcomes[:, i].mean())

    def stderr(self, i: int) -> float:
        if self.shots < 2:
            return 0.0
        return float(self.outcomes[:, i].std(ddof=1) / np.sqrt(self.shots))


def joint_outcome_distribution(
    state: StateVector, observables: list[PauliString]
) -> tuple[np.ndarray, np.ndarray]:
    """Exact joint +-1 outcome distribution of a commuting observable set.

    Returns (patterns, probabilities) where patterns has one column per
    observable.  Realized by splitting the state through the projector
    pair (I +- P)/2 of each observable in turn and pruning dead branches;
    distinct sign patterns are orthogonal sectors, so at most 2^q survive.
    """
    for i, p in enumerate(observables):
        if p.qubits != state.qubits:
            raise DimensionMismatchError(f"observable {i} acts on wrong qubit count")
        if not p.is_hermitian:
            raise DomainError(f"observable {i} ({p}) is not Hermitian")
        for j in range(i + 1, len(observables)):
            if not p.commutes_with(observables[j]):
                raise ContractViolationError(
                    f"observables {i} ({p}) and {j} ({observables[j]}) anticommute"
                )
    cols = state.amplitudes[:, None]
    patterns = np.zeros((1, 0), dtype=np.int8)
    for p in observables:
        pc = _pauli_apply(p, cols)
        plus = (cols + pc) / 2
        minus = (cols - pc) / 2
        cols = np.concatenate([plus, minus], axis=1)
        patterns = np.vstack(
            [
                np.hstack([patterns, np.ones((patterns.shape[0], 1), np.int8)]),
                np.hstack([patterns, -np.ones((patterns.shape[0], 1), np.int8)]),
            ]
        )
        weights = np.einsum("ij,ij->j", cols.conj(), cols).real
        alive = weights > 1e-13
        cols = cols[:, alive]
        patterns = patterns[alive]
    probs = np.einsum("ij,ij->j", cols.conj(), cols).real
    total = probs.sum()
    if abs(total - 1.0) > 1e-6:
        raise ContractViolationError(f"joint probabilities sum to {total}")
    return patterns, probs / total


def measure_commuting_set(
    state: StateVector,
    observables: list[PauliString],
    shots: int,
    rng: np.random.Generator,
) -> MeasurementRecord:
    """Draw joint +-1 outcomes for a mutually commuting observable list.

    Equivalent to sequential projective measurement per shot (the order is
    irrelevant for commuting observables); the exact joint distribution is
    computed once and sampled ``shots`` times.
    """
    if shots < 1:
        raise DomainError("shots must be positive")
    patterns, probs = joint_outcome_distribution(state, observables)
    draws = rng.choice(len(probs), size=shots, p=probs)
    return MeasurementRecord(tuple(observables), patterns[draws])


# ---------------------------------------------------------------------------
# Random single-qubit Pauli measurement (classical-shadow primitive)
# ---------------------------------------------------------------------------


def _rotated_probabilities(state: StateVector, basis_row: np.ndarray) -> np.ndarray:
    amps = state.amplitudes
    for j, basis in enumerate(basis_row):
        if basis != 2:
            amps = _single_qubit_apply(amps, _BASIS_ROTATION[int(basis)], j, state.qubits)
    return np.abs(amps) ** 2


def sample_random_pauli(
    state: StateVector, shots: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Batched random-Pauli measurement: per-shot bases and outcome bits.

    Bases are encoded 0=X, 1=Y, 2=Z.  Shots sharing a basis string are
    grouped so each distinct rotation is computed once.
    """
    if shots < 1:
        raise DomainError("shots must be positive")
    q = state.qubits
    bases = rng.integers(0, 3, size=(shots, q), dtype=np.int8)
    bits = np.zeros((shots, q), dtype=np.int8)
    uniq, inverse = np.unique(bases, axis=0, return_inverse=True)
    dim = 2**q
    idx = np.arange(dim, dtype=np.uint64)
    bit_table = np.zeros((dim, q), dtype=np.int8)
    for j in range(q):
        bit_table[:, j] = (idx >> np.uint64(j)) & np.uint64(1)
    for u, row in enumerate(uniq):
        members = np.nonzero(inverse == u)[0]
        probs = _rotated_probabilities(state, row)
        probs = probs / probs.sum()
        draws = rng.choice(dim, size=len(members), p=probs)
        bits[members] = bit_table[draws]
    return bases, bits


def random_pauli_shot(
    state: StateVector, rng: np.random.Generator
) -> tuple[str, tuple[int, ...]]:
    """One classical-shadow shot: uniform bases and post-rotation bits."""
    bases, bits = sample_random_pauli(state, 1, rng)
    letters = "".join(BASIS_LETTERS[int(b)] for b in bases[0])
    return letters, tuple(int(b) for b in bits[0])
