"""Exact-diagonalization oracle, model presets, and the experiment driver.

The oracle diagonalizes the encoded Hamiltonian once and evaluates
correlation functions exactly in the eigenbasis; estimator runs are then
compared entry by entry against it.  Ground-state degeneracy is broken
deterministically by taking the lowest eigenindex (a warning is logged).

Sign conventions for the emitted physics quantities, with theta(0) = 1:

* density/current response   chi(t)  = -i theta(t) tr(rho [A(t), B])
* retarded Green's function  G^R(t)  = -i theta(t) tr(rho {c_a(t), c_b^dag})
* particle-hole propagator   C(t)    = tr(rho c_i(t) c_j^dag)
* one_body family            raw commutator values tr(rho [A(t), B])

Experiment outputs are byte-reproducible given (config, seed) and do not
depend on the FAST_THREADS worker count; ``run_log.csv`` carries wall-clock
diagnostics and is the one output excluded from golden comparisons.
"""
from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .config import ExperimentConfig, ModelSpec, RequestConfig, SweepConfig
from .errors import CapacityError, DomainError, ValidationError
from .fast import (
    CorrelationEstimate,
    ProtocolRun,
    ShotBudget,
    brute_force_anticommutator_circuits,
    brute_force_commutator_circuits,
    choose_regime,
    fast1,
    fast2,
    general_correlation,
    predicted_circuits_fast1,
    predicted_circuits_fast2,
    run_anticommutator_protocol,
    run_commutator_protocol,
)
from .mapping import (
    FermionOperator,
    MajoranaBasis,
    MappingKind,
    annihilation,
    creation,
    current,
    encode,
    hopping,
    majorana_basis,
    majorana_words,
    number,
)
from .pauli import PauliString
from .sim import Hamiltonian, StateVector, _pauli_apply

logger = logging.getLogger(__name__)

MAX_MODES = 12
DEGENERACY_TOL = 1e-10


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


def fermionic_hamiltonian(spec: ModelSpec) -> FermionOperator:
    n = spec.n
    op = FermionOperator.zero(n)
    bonds = [(i, i + 1) for i in range(n - 1)]
    if spec.boundary == "periodic" and n > 2:
        bonds.append((n - 1, 0))
    for i, j in bonds:
        op = op + (-spec.t_hop) * hopping(n, i, j)
        if spec.u != 0.0:
            op = op + spec.u * (number(n, i) * number(n, j))
    if spec.mu != 0.0:
        for i in range(n):
            op = op + (-spec.mu) * number(n, i)
    return op


def build_hamiltonian(spec: ModelSpec, mapping: MappingKind) -> Hamiltonian:
    """Encode the model under the chosen mapping; Hermitian by construction."""
    if spec.name == "custom":
        terms = []
        for coeff, label in spec.terms:
            word = PauliString.from_label(label)
            if word.qubits != spec.n:
                raise ValidationError(
                    f"custom term {label!r} acts on {word.qubits} qubits, model has {spec.n}"
                )
            if word.phase_k % 2 != 0:
                raise ValidationError(f"custom term {label!r} is not Hermitian")
            terms.append((coeff, word))
        return Hamiltonian(spec.n, terms)
    basis = majorana_basis(spec.n, mapping)
    pairs = encode(fermionic_hamiltonian(spec), basis)
    terms = []
    for coeff, word in pairs:
        if abs(coeff.imag) > 1e-10:
            raise ValidationError(f"encoded term {word} has complex coefficient {coeff}")
        terms.append((coeff.real, word))
    return Hamiltonian(basis.qubits, terms)


# ---------------------------------------------------------------------------
# Correlation entry families
# ---------------------------------------------------------------------------


def theta(t: float) -> float:
    """Step function with theta(0) = 1."""
    return 1.0 if t >= 0 else 0.0


@dataclass(frozen=True)
class FamilyEntry:
    indices: tuple[int, ...]
    a: FermionOperator
    b: FermionOperator


def family_entries(request: RequestConfig, spec: ModelSpec) -> list[FamilyEntry]:
    n = spec.n
    fam = request.family
    out = []
    if fam == "density_density":
        for i in range(n):
            for j in range(n):
                out.append(FamilyEntry((i, j), number(n, i), number(n, j)))
    elif fam == "current_current":
        for i in range(n - 1):
            for j in range(n - 1):
                out.append(
                    FamilyEntry(
                        (i, j),
                        current(n, i, i + 1, spec.t_hop),
                        current(n, j, j + 1, spec.t_hop),
                    )
                )
    elif fam == "one_body":
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        out.append(
                            FamilyEntry(
                                (i, j, k, l),
                                creation(n, i) * annihilation(n, j),
                                creation(n, k) * annihilation(n, l),
                            )
                        )
    elif fam in ("green", "particle_hole"):
        for a in range(n):
            for b in range(n):
                out.append(FamilyEntry((a, b), annihilation(n, a), creation(n, b)))
    else:  # pragma: no cover
        raise DomainError(f"unknown family {fam}")
    return out


def _transform(family: str, kind: str, raw: complex, stderr: float, t: float) -> tuple[complex, float]:
    """Map raw (anti)commutator values onto the emitted physics convention."""
    if family in ("density_density", "current_current", "green"):
        return -1j * theta(t) * raw, theta(t) * stderr
    return raw, stderr


# ---------------------------------------------------------------------------
# Exact-diagonalization oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EntryRow:
    family: str
    kind: str
    indices: tuple[int, ...]
    t: float
    value: complex
    stderr: float
    shots: int
    circuits: int
    strategy: str


@dataclass
class OracleResult:
    ground_energy: float
    ground_state: StateVector
    rows: list[EntryRow] = field(default_factory=list)

    def lookup(self) -> dict[tuple, complex]:
        return {(r.indices, r.t): r.value for r in self.rows}


def _ground_state(h: Hamiltonian) -> tuple[float, StateVector]:
    cache = h.evolution()
    gap = cache.eigenvalues[1] - cache.eigenvalues[0] if len(cache.eigenvalues) > 1 else 1.0
    if gap < DEGENERACY_TOL:
        logger.warning(
            "degenerate ground space (gap %.2e); picking the lowest eigenindex", gap
        )
    return h.ground_state()


def oracle_correlations(
    spec: ModelSpec,
    mapping: MappingKind,
    request: RequestConfig,
    times: Sequence[float],
) -> OracleResult:
    """Exact correlation values for every family entry at every time."""
    if spec.n > MAX_MODES:
        raise CapacityError(f"dense diagonalization capped at {MAX_MODES} modes, got {spec.n}")
    h = build_hamiltonian(spec, mapping)
    # custom Pauli models still define fermionic observables via the mapping
    basis = majorana_basis(spec.n, mapping)
    energy, gs = _ground_state(h)
    psi = gs.amplitudes
    cache = h.evolution()
    v = cache.eigenvectors
    lam = cache.eigenvalues
    entries = family_entries(request, spec)
    dense_cache: dict = {}

    def dense_of(op: FermionOperator) -> np.ndarray:
        key = op.terms
        if key not in dense_cache:
            dim = 2**h.qubits
            m = np.zeros((dim, dim), dtype=complex)
            for coeff, word in encode(op, basis):
                m += coeff * _pauli_apply(word, np.eye(dim, dtype=complex))
            dense_cache[key] = m
        return dense_cache[key]

    result = OracleResult(energy, gs)
    for entry in entries:
        a_mat = dense_of(entry.a)
        b_mat = dense_of(entry.b)
        a_tilde = v.conj().T @ a_mat @ v
        psi_e = v.conj().T @ psi
        b_psi_e = v.conj().T @ (b_mat @ psi)
        bdag_psi_e = v.conj().T @ (b_mat.conj().T @ psi)
        for t in times:
            phases = np.exp(1j * lam * t)

            def heisenberg_apply(u):
                # A(t) = e^{iHt} A e^{-iHt}: (A(t))_mn = e^{i lam_m t} A_mn e^{-i lam_n t}
                return phases * (a_tilde @ (phases.conj() * u))

            x = complex(np.vdot(psi_e, heisenberg_apply(b_psi_e)))  # <psi| A(t) B |psi>
            y = complex(np.vdot(bdag_psi_e, heisenberg_apply(psi_e)))  # <psi| B A(t) |psi>
            if request.kind == "commutator":
                raw = x - y
            elif request.kind == "anticommutator":
                raw = x + y
            else:
                raw = x
            value, _ = _transform(request.family, request.kind, raw, 0.0, t)
            result.rows.append(
                EntryRow(request.family, request.kind, entry.indices, t, value, 0.0, 0, 0, "oracle")
            )
    return result


# ---------------------------------------------------------------------------
# Estimator-side entry assembly
# ---------------------------------------------------------------------------


def _entry_rows_from_runs(
    request: RequestConfig,
    spec: ModelSpec,
    t: float,
    comm_run: ProtocolRun | None,
    anti_run: ProtocolRun | None,
) -> list[EntryRow]:
    rows = []
    for entry in family_entries(request, spec):
        if request.kind == "commutator":
            est = comm_run.correlation(entry.a, entry.b)
        elif request.kind == "anticommutator":
            est = anti_run.correlation(entry.a, entry.b)
        else:
            est = general_correlation(
                comm_run.correlation(entry.a, entry.b),
                anti_run.correlation(entry.a, entry.b),
            )
        value, stderr = _transform(request.family, request.kind, est.value, est.stderr, t)
        rows.append(
            EntryRow(
                request.family,
                request.kind,
                entry.indices,
                t,
                value,
                stderr,
                est.shots_total,
                est.circuits_total,
                est.strategy,
            )
        )
    return rows


def _derived_seed(seed: int, *key: int) -> int:
    return int(np.random.SeedSequence((seed, *key)).generate_state(1, np.uint64)[0])


def _threads() -> int:
    raw = os.environ.get("FAST_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValidationError(f"FAST_THREADS must be an integer, got {raw!r}") from None


# ---------------------------------------------------------------------------
# Experiment driver
# ---------------------------------------------------------------------------


@dataclass
class RunLogLine:
    protocol: str
    t: float
    shots: int
    circuits: int
    wall_seconds: float


@dataclass
class ExperimentArtifacts:
    config: ExperimentConfig
    rows: list[EntryRow]
    oracle: OracleResult
    report: dict
    run_log: list[RunLogLine]

    def results_csv(self) -> str:
        return rows_to_csv(self.rows)

    def oracle_csv(self) -> str:
        return rows_to_csv(self.oracle.rows)

    def results_json(self) -> str:
        payload = {
            "config": json.loads(self.config.model_dump_json()),
            "ground_energy": self.oracle.ground_energy,
            "rows": [row_to_dict(r) for r in self.rows],
            "report": self.report,
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def rows_to_csv(rows: Iterable[EntryRow]) -> str:
    lines = ["family,kind,i,j,k,l,t,value_re,value_im,stderr,shots,circuits,strategy"]
    for r in rows:
        idx = list(r.indices) + [""] * (4 - len(r.indices))
        lines.append(
            f"{r.family},{r.kind},{idx[0]},{idx[1]},{idx[2]},{idx[3]},"
            f"{r.t:.12e},{r.value.real:.12e},{r.value.imag:.12e},{r.stderr:.12e},"
            f"{r.shots},{r.circuits},{r.strategy}"
        )
    return "\n".join(lines) + "\n"


def row_to_dict(r: EntryRow) -> dict:
    return {
        "family": r.family,
        "kind": r.kind,
        "indices": list(r.indices),
        "t": r.t,
        "value_re": r.value.real,
        "value_im": r.value.imag,
        "stderr": r.stderr,
        "shots": r.shots,
        "circuits": r.circuits,
        "strategy": r.strategy,
    }


def run_experiment(config: ExperimentConfig) -> ExperimentArtifacts:
    """Execute the configured protocol, compare to the oracle, build artifacts.

    Raises ValidationError for bad configs before any simulation starts and
    CapacityError when the mode count exceeds dense capacity.
    """
    shots = config.shots
    if min(
        shots.per_group, shots.shadow, shots.bell, shots.anchor,
        shots.chain, shots.majority, shots.nm,
    ) <= 0:
        raise ValidationError("all shot budgets must be positive")
    spec = config.model
    if spec.n > MAX_MODES:
        raise CapacityError(f"{spec.n} modes exceed the {MAX_MODES}-mode dense capacity")
    mapping = MappingKind.parse(config.mapping)
    basis = majorana_basis(spec.n, mapping)
    h = build_hamiltonian(spec, mapping)
    _, gs = _ground_state(h)
    budget = shots.budget()
    threads = _threads()
    request = config.request

    rows: list[EntryRow] = []
    run_log: list[RunLogLine] = []
    for t_idx, t in enumerate(config.times):
        comm_run = anti_run = None
        if request.kind in ("commutator", "general"):
            seed = _derived_seed(config.seed, 1, t_idx)
            start = time.perf_counter()
            if request.kind == "commutator":
                comm_run = fast1(gs, h, basis, t, request.eps, budget, seed, threads=threads)
                name = "fast1"
            else:
                words = majorana_words(basis)
                comm_run = run_commutator_protocol(
                    gs, h, basis, words, list(words), t, request.eps, budget, seed,
                    threads=threads, fermionic_b_count=spec.n,
                )
                name = "commutator_majorana"
            run_log.append(
                RunLogLine(name, t, comm_run.shots_total, comm_run.circuits_total,
                           time.perf_counter() - start)
            )
        if request.kind in ("anticommutator", "general"):
            seed = _derived_seed(config.seed, 2, t_idx)
            start = time.perf_counter()
            anti_run = fast2(gs, h, basis, t, request.eps, budget, seed, threads=threads)
            run_log.append(
                RunLogLine("fast2", t, anti_run.shots_total, anti_run.circuits_total,
                           time.perf_counter() - start)
            )
        rows.extend(_entry_rows_from_runs(request, spec, t, comm_run, anti_run))

    oracle = oracle_correlations(spec, mapping, request, config.times)
    report = comparison_report(rows, oracle, request.eps)
    artifacts = ExperimentArtifacts(config, rows, oracle, report, run_log)
    if config.output_path:
        write_artifacts(artifacts, Path(config.output_path))
    return artifacts


def comparison_report(rows: list[EntryRow], oracle: OracleResult, eps: float) -> dict:
    exact = oracle.lookup()
    errors = [abs(r.value - exact[(r.indices, r.t)]) for r in rows]
    within = sum(1 for e in errors if e <= eps)
    return {
        "eps": eps,
        "entries": len(rows),
        "within_eps": within,
        "fraction_within_eps": within / len(rows) if rows else 1.0,
        "max_abs_error": max(errors) if errors else 0.0,
    }


def write_artifacts(artifacts: ExperimentArtifacts, out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "results.csv").write_text(artifacts.results_csv())
    (out_dir / "oracle.csv").write_text(artifacts.oracle_csv())
    (out_dir / "results.json").write_text(artifacts.results_json())
    (out_dir / "report.json").write_text(json.dumps(artifacts.report, indent=2, sort_keys=True))
    log_lines = ["protocol,t,shots,circuits,wall_seconds"]
    for line in artifacts.run_log:
        log_lines.append(
            f"{line.protocol},{line.t:.12e},{line.shots},{line.circuits},{line.wall_seconds:.6f}"
        )
    (out_dir / "run_log.csv").write_text("\n".join(log_lines) + "\n")


# ---------------------------------------------------------------------------
# Scaling study
# ---------------------------------------------------------------------------

EXPECTED_EXPONENT = {
    ("fast1", "MMC"): 3.0,
    ("fast1", "DC"): 2.0,
    ("fast2", "NM"): 2.0,
    ("fast2", "DC"): 1.0,
    ("brute_commutator", "-"): 4.0,
    ("brute_anticommutator", "-"): 2.0,
}


@dataclass
class ScalingRow:
    protocol: str
    mapping: str
    strategy: str
    n: int
    circuits: int
    predicted: int | None
    shots: int


@dataclass
class ScalingReport:
    rows: list[ScalingRow]
    slopes: dict[str, dict]

    def to_json(self) -> str:
        return json.dumps(
            {
                "rows": [vars(r) for r in self.rows],
                "slopes": self.slopes,
            },
            indent=2,
            sort_keys=True,
        )

    def to_csv(self) -> str:
        lines = ["protocol,mapping,strategy,n,circuits,predicted,shots"]
        for r in self.rows:
            pred = "" if r.predicted is None else r.predicted
            lines.append(
                f"{r.protocol},{r.mapping},{r.strategy},{r.n},{r.circuits},{pred},{r.shots}"
            )
        return "\n".join(lines) + "\n"


def scaling_study(sweep: SweepConfig) -> ScalingReport:
    """Measure circuit counts vs n and fit log-log slopes per protocol."""
    if len(set(sweep.n_values)) < 3:
        raise ValidationError("a scaling study needs at least 3 distinct mode counts")
    if any(n < 1 or n > MAX_MODES for n in sweep.n_values):
        raise ValidationError(f"mode counts must lie in [1, {MAX_MODES}]")
    budget = sweep.shots.budget()
    rows: list[ScalingRow] = []
    for proto in sweep.protocols:
        mapping = MappingKind.parse(proto.mapping)
        for n in sorted(set(sweep.n_values)):
            spec = sweep.model.model_copy(update={"n": n})
            label = proto.protocol
            if label == "brute_commutator":
                count = brute_force_commutator_circuits(n)
                rows.append(ScalingRow(label, "-", "-", n, count, count, 0))
                continue
            if label == "brute_anticommutator":
                count = brute_force_anticommutator_circuits(n)
                rows.append(ScalingRow(label, "-", "-", n, count, count, 0))
                continue
            basis = majorana_basis(n, mapping)
            h = build_hamiltonian(spec, mapping)
            _, gs = _ground_state(h)
            seed = _derived_seed(sweep.seed, 3, n)
            if label == "fast1":
                run = fast1(gs, h, basis, sweep.t, sweep.eps, budget, seed)
                predicted = predicted_circuits_fast1(n, mapping, sweep.eps)
            else:
                run = fast2(gs, h, basis, sweep.t, sweep.eps, budget, seed)
                predicted = predicted_circuits_fast2(n, mapping, sweep.eps)
            rows.append(
                ScalingRow(
                    label, proto.mapping, run.regime.strategy, n,
                    run.circuits_total, predicted, run.shots_total,
                )
            )
    slopes = {}
    for proto in sweep.protocols:
        label = proto.protocol
        mine = [r for r in rows if r.protocol == label and (label.startswith("brute") or r.mapping == proto.mapping)]
        ns = np.array([r.n for r in mine], dtype=float)
        counts = np.array([r.circuits for r in mine], dtype=float)
        slope = float(np.polyfit(np.log(ns), np.log(counts), 1)[0])
        strategy = mine[0].strategy
        expected = EXPECTED_EXPONENT.get((label, strategy))
        key = f"{label}/{proto.mapping}" if not label.startswith("brute") else label
        slopes[key] = {
            "strategy": strategy,
            "slope": slope,
            "expected": expected,
            "prediction_exact": all(
                r.predicted is None or r.predicted == r.circuits for r in mine
            ),
        }
    return ScalingReport(rows, slopes)


def write_scaling(report: ScalingReport, out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "scaling.csv").write_text(report.to_csv())
    (out_dir / "scaling.json").write_text(report.to_json())


# ---------------------------------------------------------------------------
# Engineered states with prescribed anticommuting-family expectations
# ---------------------------------------------------------------------------


def chirality_word(basis: MajoranaBasis) -> PauliString:
    """Product of all 2n Majorana words, canonicalized; anticommutes with each."""
    p = PauliString.identity(basis.qubits)
    for g in basis.gammas:
        p = p * g
    return p.with_phase_k(0)


def state_with_target_expectations(
    family: Sequence[PauliString],
    targets: Sequence[float],
    aux: PauliString,
) -> StateVector:
    """Build a pure state with <family[k]> = targets[k] exactly.

    Requires family + aux to be pairwise anticommuting Hermitian involutions
    and ||targets||_2 <= 1; the residual weight sqrt(1 - ||targets||^2) ends
    up on the auxiliary word.  Construction: start from a +1 eigenvector of
    aux (which forces all family expectations to zero) and rotate weight into
    each family member with exp(phi/2 P_k aux), a plane rotation that leaves
    every other family expectation fixed.
    """
    targets = np.asarray(targets, dtype=float)
    if len(targets) != len(family):
        raise DomainError("one target per family member required")
    norm_sq = float(np.sum(targets**2))
    if norm_sq > 1.0 + 1e-12:
        raise DomainError(f"targets have norm {np.sqrt(norm_sq):.4f} > 1, not reachable")
    ops = list(family) + [aux]
    for i, p in enumerate(ops):
        if not p.is_hermitian or not (p * p).is_identity:
            raise DomainError(f"operator {p} is not a Hermitian involution")
        for j in range(i + 1, len(ops)):
            if p.commutes_with(ops[j]):
                raise DomainError(f"{p} and {ops[j]} commute; need anticommutation")
    dim = 2 ** aux.qubits
    vec = None
    for r in range(dim):
        trial = np.zeros(dim, dtype=complex)
        trial[r] = 1.0
        projected = (trial + _pauli_apply(aux, trial)) / 2
        norm = np.linalg.norm(projected)
        if norm > 0.25:
            vec = projected / norm
            break
    if vec is None:  # pragma: no cover
        raise DomainError("could not project onto the +1 eigenspace of aux")
    remaining = 1.0
    for k, x in enumerate(targets):
        if abs(x) < 1e-15:
            continue
        r_prev = np.sqrt(remaining)
        phi = np.arcsin(np.clip(x / r_prev, -1.0, 1.0))
        # exp(phi/2 * P_k aux) |v> = cos(phi/2)|v> + sin(phi/2) P_k aux |v>
        rotated = _pauli_apply(family[k], _pauli_apply(aux, vec))
        vec = np.cos(phi / 2) * vec + np.sin(phi / 2) * rotated
        remaining = max(remaining - x**2, 0.0)
    state = StateVector(aux.qubits, vec / np.linalg.norm(vec))
    for k, x in enumerate(targets):
        got = state.expectation(family[k]).real
        if abs(got - x) > 1e-9:
            raise DomainError(
                f"engineered state misses target {k}: wanted {x:.6f}, got {got:.6f}"
            )
    return state
