"""Independent dense-matrix oracles used to check the package's algebra.

Everything here is built from first principles (explicit 2x2 matrices,
Kronecker products, occupation-number constructions) without going through
the package's own Pauli or mapping code paths, so the tests compare two
independent routes to the same operators.

Conventions match the package: little-endian basis indices (qubit/mode j is
bit j), |0> is the empty mode, and c_j carries the Jordan-Wigner sign
(-1)^(number of occupied modes below j).
"""
from __future__ import annotations

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
LETTERS = {"I": I2, "X": X, "Y": Y, "Z": Z}


def pauli_matrix(label: str) -> np.ndarray:
    """Dense matrix for a phase-prefixed label like '-iZX' (qubit 0 first)."""
    phase = 1.0 + 0j
    body = label
    if body.startswith("+"):
        body = body[1:]
    if body.startswith("-"):
        phase = -phase
        body = body[1:]
    if body.startswith("i"):
        phase *= 1j
        body = body[1:]
    m = np.array([[1.0 + 0j]])
    for ch in body:
        m = np.kron(LETTERS[ch], m)
    return phase * m


def kron_chain(mats) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(m, out)
    return out


def annihilation_matrix(n: int, j: int) -> np.ndarray:
    """Occupation-basis c_j with the JW sign convention, |0> empty."""
    dim = 2**n
    m = np.zeros((dim, dim), dtype=complex)
    below = (1 << j) - 1
    for idx in range(dim):
        if (idx >> j) & 1:
            sign = (-1) ** bin(idx & below).count("1")
            m[idx ^ (1 << j), idx] = sign
    return m


def creation_matrix(n: int, j: int) -> np.ndarray:
    return annihilation_matrix(n, j).conj().T


def number_matrix(n: int, j: int) -> np.ndarray:
    c = annihilation_matrix(n, j)
    return c.conj().T @ c


def hermitian_expm(generator: np.ndarray, scale: complex) -> np.ndarray:
    """exp(scale * G) for Hermitian G, via eigendecomposition."""
    evals, evecs = np.linalg.eigh(generator)
    return (evecs * np.exp(scale * evals)) @ evecs.conj().T


def heisenberg(op: np.ndarray, h: np.ndarray, t: float) -> np.ndarray:
    """A(t) = exp(iHt) A exp(-iHt)."""
    u = hermitian_expm(h, -1j * t)
    return u.conj().T @ op @ u


def ground_vector(h: np.ndarray) -> np.ndarray:
    _, evecs = np.linalg.eigh(h)
    return evecs[:, 0]


def commutator_value(psi: np.ndarray, a_t: np.ndarray, b: np.ndarray) -> complex:
    return complex(psi.conj() @ (a_t @ b - b @ a_t) @ psi)


def anticommutator_value(psi: np.ndarray, a_t: np.ndarray, b: np.ndarray) -> complex:
    return complex(psi.conj() @ (a_t @ b + b @ a_t) @ psi)


def expectation(psi: np.ndarray, op: np.ndarray) -> complex:
    return complex(psi.conj() @ op @ psi)
