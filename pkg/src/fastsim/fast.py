"""Orchestration of the two shadow-tomography correlation protocols.

Both protocols rewrite a correlation function of Hermitian Pauli words A, B
(B an involution) as a weighted sum of three direct expectation values:

* commutator:      tr(rho [A(t), B]) = -i (2 E1 - E2 - E3)
* anticommutator:  tr(rho {A(t), B}) = +-4 C^2 E1 -+ E2 -+ E3

where E_k = <A> on the prepared state rho_k.  For the commutator, rho_1 is
the exp(i pi/4 B)-rotated state; for the anticommutator, rho_1 is one of
the ancilla branches (I +- B)/2 rho (I +- B)/2, picked by a majority vote
over the ancilla outcomes, with C^2 the branch probability.  rho_2 is the
plain evolved state and rho_3 the B-conjugated one.

A protocol run loops over the Hermitian Pauli components of every fermionic
B target, estimates the whole A word family on each prepared state with the
regime's measurement strategy, and assembles any requested correlation
entry afterwards by linearity.  Runs are deterministic functions of
(state, arguments, seed): every B component gets its own seeded generator,
so thread counts never change the output.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, ValidationError
from .mapping import (
    FermionOperator,
    MajoranaBasis,
    MappingKind,
    encode,
    majorana_words,
    one_body_observables,
)
from .pauli import PauliString, build_commutation_graph, greedy_color
from .shadows import (
    bell_magnitudes,
    chain_circuit_count,
    chained_signs,
    estimate_by_groups,
    estimate_by_shadows,
)
from .sim import (
    Hamiltonian,
    StateVector,
    apply_pauli,
    apply_pauli_rotation,
    evolve,
    measure_commuting_set,
    projection_branches,
)

SHOT_FLOOR = 10

COMMUTATOR_WEIGHTS = (-2j, 1j, 1j)


# ---------------------------------------------------------------------------
# Regimes and strategies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegimeChoice:
    regime: str  # "small_n" | "large_n"
    strategy: str


def choose_regime(kind: str, mapping: MappingKind, n: int, eps: float) -> RegimeChoice:
    """Pick the measurement strategy for (kind, mapping, n, eps).

    The regime boundary is n <= 1/eps^2 with ties resolved to small_n.
    """
    if eps <= 0:
        raise ValidationError("eps must be positive")
    small = n <= 1.0 / eps**2
    regime = "small_n" if small else "large_n"
    if kind == "commutator":
        if small:
            strategy = "DC" if mapping is MappingKind.TT else "MMC"
        else:
            strategy = "Bell+MMC"
    elif kind == "anticommutator":
        if small:
            strategy = "DC" if mapping is MappingKind.TT else "NM"
        elif mapping is MappingKind.JW:
            strategy = "Bell+NM(chained)"
        else:
            strategy = "Bell+NM"
    else:
        raise DomainError(f"unknown correlation kind {kind!r}")
    return RegimeChoice(regime, strategy)


@dataclass(frozen=True)
class ShotBudget:
    """Per-circuit shot counts for the different measurement primitives."""

    per_group: int = 4000
    shadow: int = 30000
    bell: int = 40000
    anchor: int = 5000
    chain: int = 5000
    majority: int = 4000
    nm: int = 2000

    def validate(self, strategy: str):
        needed = {
            "MMC": ("per_group",),
            "DC": ("shadow",),
            "NM": ("nm",),
            "Bell+MMC": ("bell", "per_group"),
            "Bell+NM": ("bell", "nm"),
            "Bell+NM(chained)": ("bell", "anchor", "chain"),
        }[strategy]
        for name in needed:
            if getattr(self, name) < SHOT_FLOOR:
                raise ValidationError(
                    f"shot budget {name}={getattr(self, name)} is below the "
                    f"{SHOT_FLOOR}-shot floor required by strategy {strategy}"
                )


# ---------------------------------------------------------------------------
# Three-term plans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThreeTermPlan:
    """Recipe for the three prepared states behind one correlation value."""

    kind: str  # "commutator" | "anticommutator"
    a: PauliString | None
    b: PauliString
    t: float
    branch: str | None = None  # anticommutator only: "plus" | "minus"

    def weights(self, c_sq: float | None = None) -> tuple[complex, complex, complex]:
        if self.kind == "commutator":
            return COMMUTATOR_WEIGHTS
        if c_sq is None:
            raise DomainError("anticommutator weights need the branch probability")
        if self.branch == "plus":
            return (4 * c_sq, -1.0, -1.0)
        return (-4 * c_sq, 1.0, 1.0)

    def prepare(self, state: StateVector, h: Hamiltonian) -> tuple[StateVector, ...]:
        """Prepare (rho_1, rho_2, rho_3) for this plan's B and t.

        For the anticommutator, rho_1 is the exact chosen branch; sampling
        of the ancilla is the caller's job (majority_select).
        """
        rho2 = evolve(state, h, self.t)
        rho3 = evolve(apply_pauli(state, self.b), h, self.t)
        if self.kind == "commutator":
            rho1 = evolve(apply_pauli_rotation(state, self.b), h, self.t)
        else:
            p_plus, plus, p_minus, minus = projection_branches(state, self.b)
            prob, vec = (p_plus, plus) if self.branch == "plus" else (p_minus, minus)
            if prob < 1e-14:
                raise DomainError(f"branch {self.branch} of {self.b} has zero weight")
            rho1 = evolve(StateVector(state.qubits, vec / np.sqrt(prob)), h, self.t)
        return rho1, rho2, rho3

    def branch_probability(self, state: StateVector) -> float:
        p_plus, _, p_minus, _ = projection_branches(state, self.b)
        return p_plus if self.branch == "plus" else p_minus

    def evaluate_analytic(self, state: StateVector, h: Hamiltonian) -> complex:
        """Exact plan value with expectations computed analytically."""
        if self.a is None:
            raise DomainError("plan has no target observable to evaluate")
        c_sq = None
        if self.kind == "anticommutator":
            c_sq = self.branch_probability(state)
        states = self.prepare(state, h)
        weights = self.weights(c_sq)
        return sum(w * rho.expectation(self.a) for w, rho in zip(weights, states))


def _require_involution(b: PauliString):
    if not b.is_hermitian:
        raise DomainError(f"B = {b} is not Hermitian")
    if not (b * b).is_identity:
        raise DomainError(f"B = {b} does not square to the identity")


def reformulate_commutator(a: PauliString, b: PauliString, t: float) -> ThreeTermPlan:
    """Three-term plan for tr(rho [A(t), B]) with weights (-2i, +i, +i)."""
    _require_involution(b)
    return ThreeTermPlan("commutator", a, b, t)


def reformulate_anticommutator(
    a: PauliString, b: PauliString, t: float, branch: str = "plus"
) -> ThreeTermPlan:
    """Plan for tr(rho {A(t), B}) in the plus or minus branch representation."""
    _require_involution(b)
    if branch not in ("plus", "minus"):
        raise DomainError(f"branch must be 'plus' or 'minus', got {branch!r}")
    return ThreeTermPlan("anticommutator", a, b, t, branch)


# ---------------------------------------------------------------------------
# Majority rule
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BranchSelection:
    n_plus: int
    n_minus: int
    chosen: str
    c_plus_sq_hat: float
    c_minus_sq_hat: float

    @property
    def retained(self) -> int:
        return max(self.n_plus, self.n_minus)


def majority_select(ancilla_bits) -> BranchSelection:
    """Pick the branch observed more often; ties go to plus."""
    bits = np.asarray(ancilla_bits)
    if bits.size == 0:
        raise DomainError("majority selection needs at least one ancilla outcome")
    n_minus = int(bits.sum())
    n_plus = int(bits.size - n_minus)
    total = bits.size
    return BranchSelection(
        n_plus,
        n_minus,
        "plus" if n_plus >= n_minus else "minus",
        n_plus / total,
        n_minus / total,
    )


# ---------------------------------------------------------------------------
# Per-state word estimation, by strategy
# ---------------------------------------------------------------------------


@dataclass
class WordTable:
    means: dict[PauliString, float]
    stderrs: dict[PauliString, float]
    circuits: int
    shots: int


def _analytic_table(state: StateVector, words: list[PauliString], circuits: int) -> WordTable:
    means = {w: state.expectation(w).real for w in words}
    return WordTable(means, {w: 0.0 for w in words}, circuits, 0)


def _split_xy_families(words: list[PauliString]) -> tuple[list[PauliString], list[PauliString]]:
    fam_x, fam_y = [], []
    for w in words:
        top = max(w.support())
        letter = w.letter(top)
        if letter == "X":
            fam_x.append(w)
        elif letter == "Y":
            fam_y.append(w)
        else:
            raise DomainError(
                f"word {w} is not part of an X/Y Majorana family; the chained "
                "strategy only applies to the Jordan-Wigner Majorana set"
            )
    return fam_x, fam_y


def estimate_word_family(
    state: StateVector,
    words: list[PauliString],
    strategy: str,
    eps: float,
    budget: ShotBudget,
    rng: np.random.Generator | None,
    analytic: bool = False,
) -> WordTable:
    """Estimate <w> for every word on one prepared state.

    Dispatches on the strategy label; in analytic mode the expectations are
    exact but circuits are counted exactly as a sampled run would use them
    (Bell thresholds then act on exact magnitudes).
    """
    threshold = 3 * eps / 4

    if strategy == "MMC":
        graph = build_commutation_graph(words)
        num_colors = greedy_color(graph).num_colors
        if analytic:
            return _analytic_table(state, words, num_colors)
        ests, circuits = estimate_by_groups(state, words, budget.per_group, rng)
        return WordTable(
            {e.observable: e.mean for e in ests},
            {e.observable: e.stderr for e in ests},
            circuits,
            circuits * budget.per_group,
        )

    if strategy == "DC":
        if analytic:
            return _analytic_table(state, words, 1)
        ests = estimate_by_shadows(state, words, budget.shadow, rng)
        return WordTable(
            {e.observable: e.mean for e in ests},
            {e.observable: e.stderr for e in ests},
            1,
            budget.shadow,
        )

    if strategy == "NM":
        if analytic:
            return _analytic_table(state, words, len(words))
        means, errs = {}, {}
        for w in words:
            rec = measure_commuting_set(state, [w], budget.nm, rng)
            means[w] = rec.mean(0)
            errs[w] = rec.stderr(0)
        return WordTable(means, errs, len(words), len(words) * budget.nm)

    if strategy in ("Bell+MMC", "Bell+NM"):
        if analytic:
            exact = {w: state.expectation(w).real for w in words}
            survivors = [w for w in words if abs(exact[w]) > threshold]
            if strategy == "Bell+MMC":
                extra = greedy_color(build_commutation_graph(survivors)).num_colors
            else:
                extra = len(survivors)
            means = {w: (exact[w] if w in survivors else 0.0) for w in words}
            return WordTable(means, {w: 0.0 for w in words}, 1 + extra, 0)
        table = bell_magnitudes(state, words, budget.bell, rng, threshold)
        survivors = table.survivors()
        means = {w: 0.0 for w in words}
        errs = {w: 0.0 for w in words}
        if strategy == "Bell+MMC":
            ests, extra = estimate_by_groups(state, survivors, budget.per_group, rng)
            shots = budget.bell + extra * budget.per_group
            for e in ests:
                means[e.observable] = e.mean
                errs[e.observable] = e.stderr
        else:
            for w in survivors:
                rec = measure_commuting_set(state, [w], budget.nm, rng)
                means[w] = rec.mean(0)
                errs[w] = rec.stderr(0)
            extra = len(survivors)
            shots = budget.bell + extra * budget.nm
        return WordTable(means, errs, 1 + extra, shots)

    if strategy == "Bell+NM(chained)":
        fam_x, fam_y = _split_xy_families(words)
        if analytic:
            exact = {w: state.expectation(w).real for w in words}
            surv_x = [w for w in fam_x if abs(exact[w]) > threshold]
            surv_y = [w for w in fam_y if abs(exact[w]) > threshold]
            circuits = 1
            for fam in (surv_x, surv_y):
                circuits += (1 if fam else 0) + (1 if len(fam) > 1 else 0)
            means = {w: (exact[w] if w in surv_x + surv_y else 0.0) for w in words}
            return WordTable(means, {w: 0.0 for w in words}, circuits, 0)
        table = bell_magnitudes(state, words, budget.bell, rng, threshold)
        surv_x = [w for w in fam_x if w in set(table.survivors())]
        surv_y = [w for w in fam_y if w in set(table.survivors())]
        chain_x, chain_y = chained_signs(
            state, surv_x, surv_y, eps, budget.chain, rng, anchor_shots=budget.anchor
        )
        means = {w: 0.0 for w in words}
        errs = {w: 0.0 for w in words}
        shots = budget.bell
        for chain in (chain_x, chain_y):
            for w, sign in zip(chain.members, chain.recovered_signs):
                magnitude = table.entries[w]
                means[w] = sign * magnitude
                errs[w] = table.stderrs[w] / max(2 * magnitude, eps)
            shots += budget.anchor if chain.members else 0
            shots += budget.chain if len(chain.members) > 1 else 0
        circuits = 1 + chain_circuit_count(chain_x) + chain_circuit_count(chain_y)
        return WordTable(means, errs, circuits, shots)

    raise DomainError(f"unknown strategy {strategy!r}")


# ---------------------------------------------------------------------------
# Correlation estimates and protocol runs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CorrelationEstimate:
    kind: str
    a_label: str
    b_label: str
    t: float
    value: complex
    stderr: float
    shots_total: int
    circuits_total: int
    strategy: str
    branch: BranchSelection | None = None


@dataclass
class ProtocolRun:
    """Raw measurement tables of one protocol run, keyed by B component."""

    kind: str
    basis: MajoranaBasis
    t: float
    eps: float
    regime: RegimeChoice
    a_words: list[PauliString]
    b_words: list[PauliString]
    tables: dict[PauliString, tuple[WordTable, WordTable, WordTable]] = field(repr=False)
    branch_info: dict[PauliString, tuple[str, float, float]] = field(repr=False)
    selections: dict[PauliString, BranchSelection] = field(repr=False)
    shots_total: int = 0
    circuits_total: int = 0
    fermionic_b_count: int = 0

    def _family_expectation(
        self, a_terms: list[tuple[complex, PauliString]], table: WordTable
    ) -> tuple[complex, float]:
        value = 0j
        var = 0.0
        for alpha, word in a_terms:
            if word.is_identity:
                value += alpha
                continue
            if word not in table.means:
                raise DomainError(f"observable {word} was not measured in this run")
            value += alpha * table.means[word]
            var += abs(alpha) ** 2 * table.stderrs[word] ** 2
        return value, var

    def correlation(self, a: FermionOperator, b: FermionOperator) -> CorrelationEstimate:
        """Assemble tr(rho [A(t), B]) or tr(rho {A(t), B}) by linearity."""
        a_terms = encode(a, self.basis)
        b_terms = encode(b, self.basis)
        value = 0j
        var = 0.0
        used_branches = []
        for beta, bw in b_terms:
            if bw not in self.tables:
                if self.kind == "commutator" and bw.is_identity:
                    continue  # [A, I] = 0
                raise DomainError(f"B component {bw} was not covered by this run")
            t1, t2, t3 = self.tables[bw]
            if self.kind == "commutator":
                weights = COMMUTATOR_WEIGHTS
                csq_err = 0.0
            else:
                branch, c_sq, csq_err = self.branch_info[bw]
                sign = 1.0 if branch == "plus" else -1.0
                weights = (sign * 4 * c_sq, -sign, -sign)
                used_branches.append(self.selections.get(bw))
            e_vals = []
            for w, table in zip(weights, (t1, t2, t3)):
                ea, var_a = self._family_expectation(a_terms, table)
                e_vals.append(ea)
                value += beta * w * ea
                var += abs(beta * w) ** 2 * var_a
            if self.kind == "anticommutator" and csq_err > 0:
                var += abs(beta) ** 2 * (4 * abs(e_vals[0]) * csq_err) ** 2
        branch = used_branches[0] if len(used_branches) == 1 else None
        return CorrelationEstimate(
            self.kind,
            _fermion_label(a),
            _fermion_label(b),
            self.t,
            value,
            float(np.sqrt(var)),
            self.shots_total,
            self.circuits_total,
            self.regime.strategy,
            branch,
        )


def _fermion_label(op: FermionOperator) -> str:
    return " + ".join(
        f"({c.real:+.3g}{c.imag:+.3g}i) g{list(w)}" for w, c in op.terms
    )


def _task_rng(seed: int, stream: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, stream, index))))


def _map_tasks(worker, count: int, threads: int | None):
    threads = threads or 1
    if threads <= 1:
        return [worker(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, range(count)))


def run_commutator_protocol(
    state: StateVector,
    h: Hamiltonian,
    basis: MajoranaBasis,
    b_words: list[PauliString],
    a_words: list[PauliString],
    t: float,
    eps: float,
    budget: ShotBudget,
    seed: int,
    analytic: bool = False,
    threads: int | None = None,
    fermionic_b_count: int = 0,
) -> ProtocolRun:
    regime = choose_regime("commutator", basis.mapping, basis.modes, eps)
    if not analytic:
        budget.validate(regime.strategy)

    def worker(i: int):
        bw = b_words[i]
        plan = reformulate_commutator(None, bw, t)
        states = plan.prepare(state, h)
        rng = None if analytic else _task_rng(seed, 1, i)
        tables = tuple(
            estimate_word_family(rho, a_words, regime.strategy, eps, budget, rng, analytic)
            for rho in states
        )
        return bw, tables

    results = _map_tasks(worker, len(b_words), threads)
    run = ProtocolRun(
        "commutator", basis, t, eps, regime, a_words, list(b_words), {}, {}, {},
        fermionic_b_count=fermionic_b_count or len(b_words),
    )
    for bw, tables in results:
        run.tables[bw] = tables
        run.circuits_total += sum(tab.circuits for tab in tables)
        run.shots_total += sum(tab.shots for tab in tables)
    return run


def run_anticommutator_protocol(
    state: StateVector,
    h: Hamiltonian,
    basis: MajoranaBasis,
    b_words: list[PauliString],
    a_words: list[PauliString],
    t: float,
    eps: float,
    budget: ShotBudget,
    seed: int,
    analytic: bool = False,
    threads: int | None = None,
    fermionic_b_count: int = 0,
) -> ProtocolRun:
    regime = choose_regime("anticommutator", basis.mapping, basis.modes, eps)
    if not analytic:
        budget.validate(regime.strategy)
        if budget.majority < SHOT_FLOOR:
            raise ValidationError("majority-vote shot budget is below the floor")

    def branch_budget(retained: int) -> ShotBudget:
        """Split the retained branch states across the term-1 circuits."""
        strategy = regime.strategy
        if strategy == "NM":
            per = retained // len(a_words)
            scaled = replace(budget, nm=per)
        elif strategy == "DC":
            scaled = replace(budget, shadow=retained)
        elif strategy == "Bell+NM":
            half = retained // 2
            scaled = replace(budget, bell=half, nm=max(half // len(a_words), 1))
        else:  # chained: five measurement circuits share the budget
            per = retained // 5
            scaled = replace(budget, bell=per, anchor=per, chain=per)
        return scaled

    def worker(i: int):
        bw = b_words[i]
        rng = None if analytic else _task_rng(seed, 2, i)
        p_plus, plus_vec, p_minus, minus_vec = projection_branches(state, bw)
        n_s = budget.majority
        if analytic:
            chosen = "plus" if p_plus >= p_minus else "minus"
            n_plus = int(round(n_s * p_plus))
            selection = BranchSelection(n_plus, n_s - n_plus, chosen, p_plus, p_minus)
            c_sq, csq_err = (p_plus, 0.0) if chosen == "plus" else (p_minus, 0.0)
        else:
            bits = (rng.random(n_s) >= p_plus).astype(np.int8)
            selection = majority_select(bits)
            chosen = selection.chosen
            c_sq = selection.c_plus_sq_hat if chosen == "plus" else selection.c_minus_sq_hat
            csq_err = float(np.sqrt(max(c_sq * (1 - c_sq), 0.0) / n_s))
        plan = reformulate_anticommutator(None, bw, t, chosen)
        rho1, rho2, rho3 = plan.prepare(state, h)
        budget1 = budget if analytic else branch_budget(selection.retained)
        if not analytic:
            floor_fields = {
                "NM": budget1.nm, "DC": budget1.shadow,
                "Bell+NM": budget1.nm, "Bell+NM(chained)": budget1.chain,
            }[regime.strategy]
            if floor_fields < SHOT_FLOOR:
                raise ValidationError(
                    f"retained branch count {selection.retained} spreads below the "
                    f"{SHOT_FLOOR}-shot floor across the term-1 circuits"
                )
        t1 = estimate_word_family(rho1, a_words, regime.strategy, eps, budget1, rng, analytic)
        t2 = estimate_word_family(rho2, a_words, regime.strategy, eps, budget, rng, analytic)
        t3 = estimate_word_family(rho3, a_words, regime.strategy, eps, budget, rng, analytic)
        return bw, (t1, t2, t3), selection, (chosen, c_sq, csq_err)

    results = _map_tasks(worker, len(b_words), threads)
    run = ProtocolRun(
        "anticommutator", basis, t, eps, regime, a_words, list(b_words), {}, {}, {},
        fermionic_b_count=fermionic_b_count or len(b_words),
    )
    for bw, tables, selection, info in results:
        run.tables[bw] = tables
        run.selections[bw] = selection
        run.branch_info[bw] = info
        run.circuits_total += sum(tab.circuits for tab in tables)
        run.shots_total += sum(tab.shots for tab in tables) + budget.majority
    return run


def fast1(
    state: StateVector,
    h: Hamiltonian,
    basis: MajoranaBasis,
    t: float,
    eps: float,
    budget: ShotBudget,
    seed: int,
    analytic: bool = False,
    threads: int | None = None,
) -> ProtocolRun:
    """Commutator protocol over the full one-body target family.

    The distinct Hermitian Pauli components of every c_k^dag c_l are exactly
    the one-body observable words, which double as the measured A family;
    any one-body correlation entry can be assembled from the run afterwards.
    """
    n = basis.modes
    words = one_body_observables(n, basis)
    return run_commutator_protocol(
        state, h, basis, words, list(words), t, eps, budget, seed,
        analytic, threads, fermionic_b_count=n * n,
    )


def fast2(
    state: StateVector,
    h: Hamiltonian,
    basis: MajoranaBasis,
    t: float,
    eps: float,
    budget: ShotBudget,
    seed: int,
    analytic: bool = False,
    threads: int | None = None,
) -> ProtocolRun:
    """Anticommutator protocol over the Majorana word family.

    B components of every c_b^dag are single Majorana words; A targets are
    the same 2n words, so retarded Green's function entries for any (a, b)
    assemble from one run.
    """
    words = majorana_words(basis)
    return run_anticommutator_protocol(
        state, h, basis, words, list(words), t, eps, budget, seed,
        analytic, threads, fermionic_b_count=basis.modes,
    )


def general_correlation(
    commutator: CorrelationEstimate, anticommutator: CorrelationEstimate
) -> CorrelationEstimate:
    """tr(rho A(t) B) = (anticommutator + commutator) / 2 with propagated error."""
    if commutator.kind != "commutator" or anticommutator.kind != "anticommutator":
        raise DomainError("inputs must be one commutator and one anticommutator estimate")
    if (commutator.a_label, commutator.b_label, commutator.t) != (
        anticommutator.a_label,
        anticommutator.b_label,
        anticommutator.t,
    ):
        raise DomainError("estimates refer to different (A, B, t)")
    return CorrelationEstimate(
        "general",
        commutator.a_label,
        commutator.b_label,
        commutator.t,
        (commutator.value + anticommutator.value) / 2,
        float(np.sqrt(commutator.stderr**2 + anticommutator.stderr**2) / 2),
        commutator.shots_total + anticommutator.shots_total,
        commutator.circuits_total + anticommutator.circuits_total,
        f"{commutator.strategy}+{anticommutator.strategy}",
    )


# ---------------------------------------------------------------------------
# Closed-form circuit counters
# ---------------------------------------------------------------------------


def predicted_circuits_fast1(n: int, mapping: MappingKind, eps: float) -> int | None:
    """Exact circuit count of a fast1 run, when it is budget-independent."""
    regime = choose_regime("commutator", mapping, n, eps)
    words = n * (2 * n - 1)
    if regime.strategy == "MMC":
        basis_words = one_body_observables(n, _basis_cache(n, mapping))
        colors = greedy_color(build_commutation_graph(basis_words)).num_colors
        return 3 * words * colors
    if regime.strategy == "DC":
        return 3 * words
    return None  # Bell thresholding makes the count data-dependent


def predicted_circuits_fast2(n: int, mapping: MappingKind, eps: float) -> int | None:
    regime = choose_regime("anticommutator", mapping, n, eps)
    if regime.strategy == "NM":
        return 2 * n * 3 * (2 * n)
    if regime.strategy == "DC":
        return 2 * n * 3
    return None


def brute_force_commutator_circuits(n: int) -> int:
    """One observable pair per circuit: 3 circuits per (A-pair, B-pair)."""
    return 3 * n**2 * n**2


def brute_force_anticommutator_circuits(n: int) -> int:
    return 3 * n * n


_BASES: dict[tuple[int, MappingKind], MajoranaBasis] = {}


def _basis_cache(n: int, mapping: MappingKind) -> MajoranaBasis:
    key = (n, mapping)
    if key not in _BASES:
        from .mapping import majorana_basis

        _BASES[key] = majorana_basis(n, mapping)
    return _BASES[key]
