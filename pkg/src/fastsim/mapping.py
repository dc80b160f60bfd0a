"""Fermion-to-qubit mappings and Majorana-monomial operator algebra.

Conventions, fixed once and used everywhere:

* modes and Majorana indices are 0-based; mode j owns the Majorana pair
  (gamma_{2j}, gamma_{2j+1});
* the annihilation operator is c_j = (gamma_{2j} + i gamma_{2j+1}) / 2,
  so the number operator is n_j = (I + i gamma_{2j} gamma_{2j+1}) / 2;
* under the Jordan-Wigner mapping qubit |0> is the empty mode, and
  gamma_{2j} = Z_0 ... Z_{j-1} X_j, gamma_{2j+1} = Z_0 ... Z_{j-1} Y_j.

The Bravyi-Kitaev mapping uses the standard Fenwick-tree (binary indexed
tree) update/parity/flip sets; the ternary-tree mapping uses a balanced
tree with nodes laid out in breadth-first order and legs enumerated
depth-first, dropping the last leg.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DimensionMismatchError, DomainError
from .pauli import PauliString


class MappingKind(enum.Enum):
    JW = "jw"
    BK = "bk"
    TT = "tt"

    @classmethod
    def parse(cls, text: str) -> "MappingKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise DomainError(f"unknown mapping kind: {text!r}") from None


# ---------------------------------------------------------------------------
# Majorana bases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MajoranaBasis:
    """2n pairwise-anticommuting Hermitian involutions realizing the Majoranas."""

    mapping: MappingKind
    modes: int
    gammas: tuple[PauliString, ...]

    @property
    def qubits(self) -> int:
        return self.gammas[0].qubits


def _jw_gammas(n: int) -> list[PauliString]:
    out = []
    for j in range(n):
        tail = {k: "Z" for k in range(j)}
        out.append(PauliString.from_letters(n, {**tail, j: "X"}))
        out.append(PauliString.from_letters(n, {**tail, j: "Y"}))
    return out


def _fenwick_sets(j: int, n: int) -> tuple[list[int], list[int], list[int]]:
    """Update / parity / remainder sets of mode j (0-based) for n modes.

    Standard binary-indexed-tree arithmetic on 1-based positions:
    the update set climbs i -> i + (i & -i), the parity set descends
    i -> i - (i & -i) from prefix length j, and the flip set (children of
    node j+1) is the initial segment of that descent above j+1's range.
    """
    p = j + 1
    update = []
    i = p + (p & -p)
    while i <= n:
        update.append(i - 1)
        i += i & -i
    parity = []
    i = j
    while i > 0:
        parity.append(i - 1)
        i -= i & -i
    children_stop = p - (p & -p)
    flip = []
    i = p - 1
    while i > children_stop:
        flip.append(i - 1)
        i -= i & -i
    remainder = [q for q in parity if q not in flip]
    return update, parity, remainder


def _bk_gammas(n: int) -> list[PauliString]:
    out = []
    for j in range(n):
        update, parity, remainder = _fenwick_sets(j, n)
        even = {k: "X" for k in update}
        even.update({k: "Z" for k in parity})
        even[j] = "X"
        odd = {k: "X" for k in update}
        odd.update({k: "Z" for k in remainder})
        odd[j] = "Y"
        out.append(PauliString.from_letters(n, even))
        out.append(PauliString.from_letters(n, odd))
    return out


def _tt_gammas(n: int) -> list[PauliString]:
    """Balanced ternary tree on n qubits; node i has children 3i+1..3i+3.

    Each root-to-leg path gives one Pauli string (the branch letter lands on
    the node it exits).  A tree with n nodes exposes 2n + 1 legs; the legs
    are enumerated depth-first with branch order X, Y, Z and the last one is
    dropped.
    """
    paths: list[dict[int, str]] = []

    def descend(node: int, prefix: dict[int, str]):
        for branch in "XYZ":
            child = 3 * node + ord(branch) - ord("X") + 1
            step = {**prefix, node: branch}
            if child < n:
                descend(child, step)
            else:
                paths.append(step)

    descend(0, {})
    assert len(paths) == 2 * n + 1
    return [PauliString.from_letters(n, p) for p in paths[: 2 * n]]


def tt_weight_bound(n: int) -> int:
    return math.ceil(math.log(2 * n, 3)) + 1


def majorana_basis(n: int, kind: MappingKind) -> MajoranaBasis:
    """Construct the 2n Majorana Pauli strings for the given mapping.

    Validates at construction time that the strings are Hermitian with
    phase +1, square to the identity, pairwise anticommute, and (for TT)
    respect the ceil(log3(2n)) + 1 weight bound.
    """
    if n < 1:
        raise DomainError("mode count must be at least 1")
    if kind is MappingKind.JW:
        gammas = _jw_gammas(n)
    elif kind is MappingKind.BK:
        gammas = _bk_gammas(n)
    elif kind is MappingKind.TT:
        gammas = _tt_gammas(n)
    else:  # pragma: no cover
        raise DomainError(f"unhandled mapping kind {kind}")

    for a, g in enumerate(gammas):
        if g.phase_k != 0:
            raise DomainError(f"gamma_{a} has nontrivial phase {g}")
        if not (g * g).is_identity:
            raise DomainError(f"gamma_{a} does not square to the identity")
        for b in range(a):
            if gammas[b].commutes_with(g):
                raise DomainError(f"gamma_{b} and gamma_{a} commute under {kind}")
    if kind is MappingKind.TT:
        bound = tt_weight_bound(n)
        worst = max(g.weight for g in gammas)
        if worst > bound:
            raise DomainError(f"TT weight {worst} exceeds bound {bound} at n={n}")
    return MajoranaBasis(kind, n, tuple(gammas))


# ---------------------------------------------------------------------------
# Fermionic operators as Majorana-monomial sums
# ---------------------------------------------------------------------------


def _normal_order(indices: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sort a Majorana index word, tracking the anticommutation sign.

    Equal adjacent indices cancel pairwise (gamma^2 = I).  Returns
    (sign, strictly increasing index tuple).
    """
    seq = list(indices)
    sign = 1
    # insertion sort, counting transpositions of distinct anticommuting factors
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
    out: list[int] = []
    for idx in seq:
        if out and out[-1] == idx:
            out.pop()
        else:
            out.append(idx)
    return sign, tuple(out)


@dataclass(frozen=True)
class FermionOperator:
    """Linear combination of ordered Majorana monomials on n modes.

    ``terms`` maps a strictly increasing tuple of Majorana indices in
    [0, 2n) to a complex coefficient; the empty tuple is the identity.
    """

    modes: int
    terms: tuple[tuple[tuple[int, ...], complex], ...]

    @classmethod
    def from_terms(cls, modes: int, raw: list[tuple[complex, tuple[int, ...]]]) -> "FermionOperator":
        acc: dict[tuple[int, ...], complex] = {}
        for coeff, indices in raw:
            for idx in indices:
                if not 0 <= idx < 2 * modes:
                    raise DomainError(
                        f"Majorana index {idx} out of range [0, {2 * modes})"
                    )
            sign, word = _normal_order(tuple(indices))
            acc[word] = acc.get(word, 0j) + sign * coeff
        kept = tuple(
            (word, c) for word, c in sorted(acc.items()) if abs(c) > 1e-15
        )
        return cls(modes, kept)

    @classmethod
    def zero(cls, modes: int) -> "FermionOperator":
        return cls(modes, ())

    @classmethod
    def identity(cls, modes: int) -> "FermionOperator":
        return cls.from_terms(modes, [(1.0 + 0j, ())])

    def __add__(self, other: "FermionOperator") -> "FermionOperator":
        if self.modes != other.modes:
            raise DimensionMismatchError("mode counts differ")
        raw = [(c, w) for w, c in self.terms] + [(c, w) for w, c in other.terms]
        return FermionOperator.from_terms(self.modes, raw)

    def __sub__(self, other: "FermionOperator") -> "FermionOperator":
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> "FermionOperator":
        return FermionOperator.from_terms(
            self.modes, [(scalar * c, w) for w, c in self.terms]
        )

    def __mul__(self, other: "FermionOperator") -> "FermionOperator":
        if not isinstance(other, FermionOperator):
            return NotImplemented
        if self.modes != other.modes:
            raise DimensionMismatchError("mode counts differ")
        raw = []
        for wa, ca in self.terms:
            for wb, cb in other.terms:
                raw.append((ca * cb, wa + wb))
        return FermionOperator.from_terms(self.modes, raw)

    def dagger(self) -> "FermionOperator":
        raw = []
        for word, c in self.terms:
            raw.append((c.conjugate(), tuple(reversed(word))))
        return FermionOperator.from_terms(self.modes, raw)


def annihilation(modes: int, j: int) -> FermionOperator:
    """c_j = (gamma_{2j} + i gamma_{2j+1}) / 2."""
    _check_mode(modes, j)
    return FermionOperator.from_terms(
        modes, [(0.5, (2 * j,)), (0.5j, (2 * j + 1,))]
    )


def creation(modes: int, j: int) -> FermionOperator:
    """c_j^dagger = (gamma_{2j} - i gamma_{2j+1}) / 2."""
    _check_mode(modes, j)
    return FermionOperator.from_terms(
        modes, [(0.5, (2 * j,)), (-0.5j, (2 * j + 1,))]
    )


def number(modes: int, j: int) -> FermionOperator:
    """n_j = c_j^dagger c_j = (I + i gamma_{2j} gamma_{2j+1}) / 2."""
    _check_mode(modes, j)
    return FermionOperator.from_terms(
        modes, [(0.5, ()), (0.5j, (2 * j, 2 * j + 1))]
    )


def hopping(modes: int, i: int, j: int) -> FermionOperator:
    """c_i^dagger c_j + c_j^dagger c_i."""
    return creation(modes, i) * annihilation(modes, j) + creation(modes, j) * annihilation(modes, i)


def current(modes: int, i: int, j: int, amplitude: float) -> FermionOperator:
    """J_ij = i * amplitude * (c_i^dagger c_j - c_j^dagger c_i)."""
    term = creation(modes, i) * annihilation(modes, j) - creation(modes, j) * annihilation(modes, i)
    return (1j * amplitude) * term


def _check_mode(modes: int, j: int):
    if not 0 <= j < modes:
        raise DomainError(f"mode index {j} out of range [0, {modes})")


# ---------------------------------------------------------------------------
# Encoding into Pauli strings
# ---------------------------------------------------------------------------


def encode(op: FermionOperator, basis: MajoranaBasis) -> list[tuple[complex, PauliString]]:
    """Substitute Majorana indices with their Pauli strings, exactly.

    Returns (coefficient, word) pairs with each word carrying phase +1;
    the monomial's accumulated i-powers are folded into the coefficient.
    Duplicate words are merged and near-zero coefficients dropped.
    """
    if op.modes != basis.modes:
        raise DimensionMismatchError(
            f"operator on {op.modes} modes vs basis on {basis.modes}"
        )
    q = basis.qubits
    acc: dict[tuple[int, int], complex] = {}
    for word, coeff in op.terms:
        p = PauliString.identity(q)
        for idx in word:
            p = p * basis.gammas[idx]
        phase, canonical = p.canonical()
        key = (canonical.xbits, canonical.zbits)
        acc[key] = acc.get(key, 0j) + coeff * phase
    out = []
    for (x, z), c in sorted(acc.items()):
        if abs(c) > 1e-14:
            out.append((c, PauliString(q, x, z, 0)))
    return out


def one_body_observables(n: int, basis: MajoranaBasis) -> list[PauliString]:
    """All distinct Hermitian words from i * gamma_a gamma_b, a < b.

    The list has n(2n - 1) entries, ordered by (a, b).  Words are returned
    in canonical +1-phase form; signs belong to whoever assembles
    expectation values from them.
    """
    out = []
    for a in range(2 * n):
        for b in range(a + 1, 2 * n):
            p = basis.gammas[a] * basis.gammas[b]
            word = p.with_phase_k(0)
            out.append(word)
    return out


def majorana_words(basis: MajoranaBasis) -> list[PauliString]:
    """The 2n Majorana strings themselves (already canonical)."""
    return list(basis.gammas)
