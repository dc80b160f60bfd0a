"""Symplectic Pauli-string algebra, commutation graphs, and greedy coloring.

A Pauli string on q qubits is stored as two q-bit masks plus an exact phase.
Bit j of ``xbits``/``zbits`` refers to qubit j, and the per-qubit letter is
determined by the (x, z) bit pair: (0,0) = I, (1,0) = X, (1,1) = Y,
(0,1) = Z.  The string denotes ``phase * letter_0 (x) letter_1 (x) ...``
with the phase kept as an exact power of i (never floating point), so all
products and commutation checks are exact.

Dense matrices use the little-endian index convention: qubit j corresponds
to bit j of the computational-basis index.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, DomainError

_LETTER_TO_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_TO_LETTER = {v: k for k, v in _LETTER_TO_BITS.items()}
_PHASE_PREFIX = {0: "", 1: "i", 2: "-", 3: "-i"}
_PHASE_VALUE = (1 + 0j, 1j, -1 + 0j, -1j)
_LABEL_RE = re.compile(r"^([+-]?)(i?)([IXYZ]+)$")

_DENSE_LETTER = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class PauliString:
    """An exact-phase Pauli string on a fixed number of qubits."""

    qubits: int
    xbits: int
    zbits: int
    phase_k: int = 0  # phase = i ** phase_k

    def __post_init__(self):
        if self.qubits < 1:
            raise DomainError("a Pauli string needs at least one qubit")
        mask = (1 << self.qubits) - 1
        if self.xbits & ~mask or self.zbits & ~mask:
            raise DomainError("mask bits outside the qubit range")
        object.__setattr__(self, "phase_k", self.phase_k % 4)

    # -- constructors -------------------------------------------------

    @classmethod
    def identity(cls, qubits: int) -> "PauliString":
        return cls(qubits, 0, 0, 0)

    @classmethod
    def from_label(cls, text: str) -> "PauliString":
        """Parse the textual format ``[+|-][i]s1 s2 ... sq`` with letters IXYZ."""
        m = _LABEL_RE.match(text.strip())
        if m is None:
            raise DomainError(f"malformed Pauli label: {text!r}")
        sign, imag, letters = m.groups()
        k = (2 if sign == "-" else 0) + (1 if imag == "i" else 0)
        x = z = 0
        for j, letter in enumerate(letters):
            xb, zb = _LETTER_TO_BITS[letter]
            x |= xb << j
            z |= zb << j
        return cls(len(letters), x, z, k)

    @classmethod
    def from_letters(cls, qubits: int, letters: dict[int, str], phase_k: int = 0) -> "PauliString":
        """Build from a sparse {qubit: letter} map; unlisted qubits are I."""
        x = z = 0
        for j, letter in letters.items():
            if not 0 <= j < qubits:
                raise DomainError(f"qubit index {j} out of range for {qubits} qubits")
            xb, zb = _LETTER_TO_BITS[letter]
            x |= xb << j
            z |= zb << j
        return cls(qubits, x, z, phase_k)

    # -- basic queries -------------------------------------------------

    @property
    def phase(self) -> complex:
        return _PHASE_VALUE[self.phase_k]

    @property
    def weight(self) -> int:
        return _popcount(self.xbits | self.zbits)

    @property
    def is_identity(self) -> bool:
        return self.xbits == 0 and self.zbits == 0 and self.phase_k == 0

    @property
    def is_hermitian(self) -> bool:
        return self.phase_k % 2 == 0

    def letter(self, j: int) -> str:
        return _BITS_TO_LETTER[((self.xbits >> j) & 1, (self.zbits >> j) & 1)]

    def support(self) -> tuple[int, ...]:
        occ = self.xbits | self.zbits
        return tuple(j for j in range(self.qubits) if (occ >> j) & 1)

    def label(self) -> str:
        letters = "".join(self.letter(j) for j in range(self.qubits))
        return _PHASE_PREFIX[self.phase_k] + letters

    def __str__(self) -> str:
        return self.label()

    # -- algebra -------------------------------------------------------

    def __mul__(self, other: "PauliString") -> "PauliString":
        """Exact Pauli group product a * b with full phase tracking."""
        if not isinstance(other, PauliString):
            return NotImplemented
        if self.qubits != other.qubits:
            raise DimensionMismatchError(
                f"qubit counts differ: {self.qubits} vs {other.qubits}"
            )
        x = self.xbits ^ other.xbits
        z = self.zbits ^ other.zbits
        # Convert each word to X^x Z^z form (one i per Y site), multiply,
        # commute Z of the left factor past X of the right, convert back.
        k = (
            self.phase_k
            + other.phase_k
            + _popcount(self.xbits & self.zbits)
            + _popcount(other.xbits & other.zbits)
            + 2 * _popcount(self.zbits & other.xbits)
            - _popcount(x & z)
        )
        return PauliString(self.qubits, x, z, k % 4)

    def adjoint(self) -> "PauliString":
        return PauliString(self.qubits, self.xbits, self.zbits, (-self.phase_k) % 4)

    def with_phase_k(self, phase_k: int) -> "PauliString":
        return PauliString(self.qubits, self.xbits, self.zbits, phase_k)

    def canonical(self) -> tuple[complex, "PauliString"]:
        """Split into (phase, word-with-phase +1)."""
        return self.phase, self.with_phase_k(0)

    def commutes_with(self, other: "PauliString") -> bool:
        """True iff ab = ba, via the symplectic inner-product parity."""
        if self.qubits != other.qubits:
            raise DimensionMismatchError(
                f"qubit counts differ: {self.qubits} vs {other.qubits}"
            )
        overlap = _popcount(self.xbits & other.zbits) + _popcount(self.zbits & other.xbits)
        return overlap % 2 == 0

    def tensor(self, other: "PauliString") -> "PauliString":
        """Concatenate: self acts on qubits 0..q-1, other on the next block."""
        q = self.qubits
        return PauliString(
            q + other.qubits,
            self.xbits | (other.xbits << q),
            self.zbits | (other.zbits << q),
            (self.phase_k + other.phase_k) % 4,
        )

    def to_matrix(self) -> np.ndarray:
        """Dense 2^q x 2^q matrix (little-endian: qubit 0 is the innermost factor)."""
        m = np.array([[1.0 + 0j]])
        for j in range(self.qubits):
            m = np.kron(_DENSE_LETTER[self.letter(j)], m)
        return self.phase * m


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Pauli group product; equivalent to ``a * b``."""
    return a * b


def commutes(a: PauliString, b: PauliString) -> bool:
    return a.commutes_with(b)


# ---------------------------------------------------------------------------
# Commutation graphs and coloring
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CommutationGraph:
    """Graph on Pauli observables; an edge joins every ANTIcommuting pair.

    With this convention an independent set is a mutually commuting family,
    so the color classes of any proper coloring can be measured jointly.
    """

    num_nodes: int
    adjacency: np.ndarray = field(repr=False)  # bool, symmetric, zero diagonal

    def degree(self, i: int) -> int:
        return int(self.adjacency[i].sum())

    def max_degree(self) -> int:
        if self.num_nodes == 0:
            return 0
        return int(self.adjacency.sum(axis=1).max())

    def neighbors(self, i: int) -> np.ndarray:
        return np.nonzero(self.adjacency[i])[0]


def build_commutation_graph(observables: list[PauliString]) -> CommutationGraph:
    """Edge (i, j) present iff observables i and j anticommute.

    All observables must be Hermitian and act on the same qubit count.
    An empty list yields the empty graph.
    """
    m = len(observables)
    adj = np.zeros((m, m), dtype=bool)
    if m == 0:
        return CommutationGraph(0, adj)
    q = observables[0].qubits
    for i, p in enumerate(observables):
        if not p.is_hermitian:
            raise DomainError(f"observable {i} ({p}) is not Hermitian")
        if p.qubits != q:
            raise DimensionMismatchError("observables act on different qubit counts")
    for i in range(m):
        for j in range(i + 1, m):
            if not observables[i].commutes_with(observables[j]):
                adj[i, j] = adj[j, i] = True
    return CommutationGraph(m, adj)


@dataclass(frozen=True)
class Coloring:
    color_of: tuple[int, ...]
    num_colors: int

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_colors)]
        for node, c in enumerate(self.color_of):
            out[c].append(node)
        return out


def greedy_color(graph: CommutationGraph) -> Coloring:
    """Proper coloring by ascending node index, smallest available color.

    Deterministic, and never uses more than max_degree + 1 colors.
    """
    colors = [-1] * graph.num_nodes
    for node in range(graph.num_nodes):
        taken = {colors[nb] for nb in graph.neighbors(node) if colors[nb] >= 0}
        c = 0
        while c in taken:
            c += 1
        colors[node] = c
    num = (max(colors) + 1) if colors else 0
    return Coloring(tuple(colors), num)
