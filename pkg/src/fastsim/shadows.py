"""Shadow-tomography estimation strategies.

Four ways to turn a prepared state into expectation-value estimates for a
set of Hermitian Pauli words:

* random-Pauli classical shadows (single circuit, 3^weight variance factor);
* commuting-group measurement driven by greedy coloring of the
  anticommutation graph (one circuit per color);
* Bell-sampling magnitude estimation on two state copies, used to discard
  words of negligible magnitude;
* chained sign recovery for a pairwise-anticommuting family, which measures
  the commuting pair products P_i (x) P_{i+1} on two copies and propagates
  one directly-measured anchor sign down the chain.

Estimation runs are pure functions of (state, arguments, rng state); the
returned estimates carry honest standard errors.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolationError, DomainError, UnreliableLinkError
from .pauli import PauliString, build_commutation_graph, greedy_color
from .sim import StateVector, measure_commuting_set, sample_random_pauli, tensor


@dataclass(frozen=True)
class ShadowEstimate:
    observable: PauliString
    mean: float
    stderr: float
    shots_used: int


@dataclass(frozen=True)
class MagnitudeTable:
    """Estimated |tr(rho P)| per word, with the survival threshold."""

    order: tuple[PauliString, ...]
    entries: dict[PauliString, float] = field(repr=False)
    stderrs: dict[PauliString, float] = field(repr=False)
    threshold: float
    shots_used: int

    def survivors(self) -> list[PauliString]:
        return [p for p in self.order if self.entries[p] > self.threshold]


@dataclass(frozen=True)
class SignChain:
    """Signs of a pairwise-anticommuting family recovered from one anchor."""

    members: tuple[PauliString, ...]
    anchor_sign: int
    anchor_estimate: float
    pair_products: tuple[float, ...]
    recovered_signs: tuple[int, ...]

    def __post_init__(self):
        assert len(self.recovered_signs) == len(self.members)
        assert len(self.pair_products) == max(len(self.members) - 1, 0)


def _sign(value: float) -> int:
    # exact zeros resolve to +1 so repeated runs stay deterministic
    return -1 if value < 0 else 1


def propagate_signs(anchor_sign: int, pair_products: tuple[float, ...]) -> tuple[int, ...]:
    signs = [anchor_sign]
    for prod in pair_products:
        signs.append(signs[-1] * _sign(prod))
    return tuple(signs)


# ---------------------------------------------------------------------------
# Random-Pauli shadows
# ---------------------------------------------------------------------------


def estimate_by_shadows(
    state: StateVector,
    observables: list[PauliString],
    shots: int,
    rng: np.random.Generator,
) -> list[ShadowEstimate]:
    """Classical-shadow estimates from one batch of random-Pauli shots.

    The per-shot estimator for a weight-w word is 0 unless every support
    qubit was measured in the word's basis, in which case it is
    3^w times the outcome product; this inverts the measurement channel,
    so the mean is unbiased for tr(rho P).
    """
    for p in observables:
        if not p.is_hermitian:
            raise DomainError(f"observable {p} is not Hermitian")
        if p.qubits != state.qubits:
            raise DomainError("observable qubit count does not match the state")
    bases, bits = sample_random_pauli(state, shots, rng)
    values = 1.0 - 2.0 * bits
    out = []
    letter_code = {"X": 0, "Y": 1, "Z": 2}
    for p in observables:
        support = p.support()
        if not support:
            out.append(ShadowEstimate(p, float(p.phase.real), 0.0, shots))
            continue
        match = np.ones(shots, dtype=bool)
        prod = np.full(shots, float(p.phase.real) * 3.0 ** len(support))
        for j in support:
            match &= bases[:, j] == letter_code[p.letter(j)]
            prod *= values[:, j]
        est = np.where(match, prod, 0.0)
        stderr = est.std(ddof=1) / np.sqrt(shots) if shots > 1 else 0.0
        out.append(ShadowEstimate(p, float(est.mean()), float(stderr), shots))
    return out


# ---------------------------------------------------------------------------
# Commuting-group measurement
# ---------------------------------------------------------------------------


def estimate_by_groups(
    state: StateVector,
    observables: list[PauliString],
    shots_per_group: int,
    rng: np.random.Generator,
) -> tuple[list[ShadowEstimate], int]:
    """Greedy-color the anticommutation graph, measure one circuit per color.

    Returns the estimates in input order plus the circuit count (the number
    of colors).  A commuting-set violation inside a color class would be a
    coloring bug, so it propagates as ContractViolationError.
    """
    if not observables:
        return [], 0
    graph = build_commutation_graph(observables)
    coloring = greedy_color(graph)
    results: dict[int, ShadowEstimate] = {}
    for members in coloring.classes():
        group = [observables[i] for i in members]
        try:
            record = measure_commuting_set(state, group, shots_per_group, rng)
        except ContractViolationError as exc:  # pragma: no cover
            raise ContractViolationError(f"coloring produced a bad group: {exc}") from exc
        for slot, i in enumerate(members):
            results[i] = ShadowEstimate(
                observables[i],
                record.mean(slot),
                record.stderr(slot),
                shots_per_group,
            )
    return [results[i] for i in range(len(observables))], coloring.num_colors


# ---------------------------------------------------------------------------
# Bell magnitude estimation
# ---------------------------------------------------------------------------


def bell_magnitudes(
    state: StateVector,
    observables: list[PauliString],
    shots: int,
    rng: np.random.Generator,
    threshold: float = 0.0,
) -> MagnitudeTable:
    """Estimate |tr(rho P)| for every word by measuring {P (x) P} on rho (x) rho.

    The doubled words always commute pairwise, so a single two-copy circuit
    covers the whole list.  Negative sample means are clipped to zero before
    the square root.
    """
    if shots < 1:
        raise DomainError("shots must be positive")
    doubled = [p.tensor(p) for p in observables]
    record = measure_commuting_set(tensor(state, state), doubled, shots, rng)
    entries: dict[PauliString, float] = {}
    stderrs: dict[PauliString, float] = {}
    for i, p in enumerate(observables):
        mean_sq = record.mean(i)
        entries[p] = float(np.sqrt(max(mean_sq, 0.0)))
        stderrs[p] = record.stderr(i)
    return MagnitudeTable(tuple(observables), entries, stderrs, threshold, shots)


# ---------------------------------------------------------------------------
# Chained sign recovery
# ---------------------------------------------------------------------------


def _chain_for_family(
    state: StateVector,
    family: list[PauliString],
    label: str,
    eps: float,
    shots: int,
    anchor_shots: int,
    rng: np.random.Generator,
    strict: bool,
) -> SignChain:
    if not family:
        return SignChain((), 1, 0.0, (), ())
    anchor_rec = measure_commuting_set(state, [family[0]], anchor_shots, rng)
    anchor_est = anchor_rec.mean(0)
    if len(family) == 1:
        return SignChain(tuple(family), _sign(anchor_est), anchor_est, (), (_sign(anchor_est),))
    pair_words = [a.tensor(b) for a, b in zip(family, family[1:])]
    two = tensor(state, state)
    rec = measure_commuting_set(two, pair_words, shots, rng)
    products = tuple(rec.mean(i) for i in range(len(pair_words)))
    if strict:
        for pos, value in enumerate(products):
            if abs(value) < eps**2 / 8:
                raise UnreliableLinkError(label, pos, value)
    signs = propagate_signs(_sign(anchor_est), products)
    return SignChain(tuple(family), _sign(anchor_est), anchor_est, products, signs)


def chained_signs(
    state: StateVector,
    survivors_x: list[PauliString],
    survivors_y: list[PauliString],
    eps: float,
    shots: int,
    rng: np.random.Generator,
    strict: bool = True,
    anchor_shots: int | None = None,
) -> tuple[SignChain, SignChain]:
    """Recover the signs of two thresholded anticommuting families.

    Each nonempty family costs one single-copy anchor circuit plus (when it
    has at least two members) one two-copy circuit measuring the commuting
    pair products P_i (x) P_{i+1}.  With ``strict`` set, a pair-product
    estimate below eps^2 / 8 raises UnreliableLinkError naming the link.
    """
    anchor_shots = shots if anchor_shots is None else anchor_shots
    for family in (survivors_x, survivors_y):
        for a in range(len(family)):
            for b in range(a + 1, len(family)):
                if family[a].commutes_with(family[b]):
                    raise DomainError(
                        f"family members {family[a]} and {family[b]} commute; "
                        "the chain construction needs pairwise anticommutation"
                    )
    chain_x = _chain_for_family(state, survivors_x, "X", eps, shots, anchor_shots, rng, strict)
    chain_y = _chain_for_family(state, survivors_y, "Y", eps, shots, anchor_shots, rng, strict)
    return chain_x, chain_y


def chain_circuit_count(chain: SignChain) -> int:
    """Circuits consumed by one chain: anchor plus pair-product circuit."""
    if not chain.members:
        return 0
    return 1 + (1 if len(chain.members) > 1 else 0)
