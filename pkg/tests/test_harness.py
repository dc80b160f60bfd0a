"""Harness checks: models, oracle identities, experiment driver, scaling."""
import json

import numpy as np
import pytest

from fastsim.config import (
    ExperimentConfig,
    ModelSpec,
    RequestConfig,
    ShotsConfig,
    SweepConfig,
    SweepProtocol,
)
from fastsim.errors import CapacityError, DomainError, ValidationError
from fastsim.harness import (
    build_hamiltonian,
    chirality_word,
    comparison_report,
    family_entries,
    oracle_correlations,
    run_experiment,
    scaling_study,
    state_with_target_expectations,
)
from fastsim.mapping import MappingKind, majorana_basis

import oracles


def model(n=2, u=0.0, mu=0.0, name=None, boundary="open"):
    if name is None:
        name = "spinless_hubbard_chain" if u else "tight_binding_chain"
    return ModelSpec(name=name, n=n, t_hop=1.0, u=u, mu=mu, boundary=boundary)


def dd_request(eps=0.1):
    return RequestConfig(kind="commutator", family="density_density", eps=eps)


def green_request(eps=0.1):
    return RequestConfig(kind="anticommutator", family="green", eps=eps)


class TestBuildHamiltonian:
    def test_two_site_spectrum(self):
        h = build_hamiltonian(model(2), MappingKind.JW)
        np.testing.assert_allclose(
            np.linalg.eigvalsh(h.dense()), [-1.0, 0.0, 0.0, 1.0], atol=1e-12
        )

    def test_free_model_trivial(self):
        spec = ModelSpec(name="tight_binding_chain", n=2, t_hop=0.0)
        h = build_hamiltonian(spec, MappingKind.JW)
        assert np.allclose(h.dense(), 0)

    def test_mapping_invariant_spectra(self):
        spec = model(4, u=2.0)
        jw = np.linalg.eigvalsh(build_hamiltonian(spec, MappingKind.JW).dense())
        tt = np.linalg.eigvalsh(build_hamiltonian(spec, MappingKind.TT).dense())
        bk = np.linalg.eigvalsh(build_hamiltonian(spec, MappingKind.BK).dense())
        np.testing.assert_allclose(jw, tt, atol=1e-9)
        np.testing.assert_allclose(jw, bk, atol=1e-9)

    def test_matches_occupation_oracle(self):
        spec = model(3, u=1.5, mu=0.3)
        h = build_hamiltonian(spec, MappingKind.JW).dense()
        want = np.zeros_like(h)
        for i, j in [(0, 1), (1, 2)]:
            want += -1.0 * (
                oracles.creation_matrix(3, i) @ oracles.annihilation_matrix(3, j)
                + oracles.creation_matrix(3, j) @ oracles.annihilation_matrix(3, i)
            )
            want += 1.5 * oracles.number_matrix(3, i) @ oracles.number_matrix(3, j)
        for i in range(3):
            want += -0.3 * oracles.number_matrix(3, i)
        np.testing.assert_allclose(h, want, atol=1e-12)

    def test_periodic_adds_wrap_bond(self):
        open_h = build_hamiltonian(model(4), MappingKind.JW).dense()
        per_h = build_hamiltonian(model(4, boundary="periodic"), MappingKind.JW).dense()
        assert not np.allclose(open_h, per_h)

    def test_custom_model(self):
        spec = ModelSpec(name="custom", n=2, terms=[(0.5, "ZZ"), (-0.25, "XI")])
        h = build_hamiltonian(spec, MappingKind.JW)
        want = 0.5 * oracles.pauli_matrix("ZZ") - 0.25 * oracles.pauli_matrix("XI")
        np.testing.assert_allclose(h.dense(), want, atol=1e-14)

    def test_custom_non_hermitian_rejected(self):
        spec = ModelSpec(name="custom", n=1, terms=[(1.0, "iX")])
        with pytest.raises(ValidationError):
            build_hamiltonian(spec, MappingKind.JW)


class TestOracle:
    def test_green_at_zero_is_minus_i_delta(self):
        res = oracle_correlations(model(3, u=1.0), MappingKind.JW, green_request(), [0.0])
        for row in res.rows:
            a, b = row.indices
            want = -1j if a == b else 0.0
            assert abs(row.value - want) < 1e-10

    def test_chi_at_zero_vanishes(self):
        res = oracle_correlations(model(3, u=0.8), MappingKind.JW, dd_request(), [0.0])
        for row in res.rows:
            assert abs(row.value) < 1e-10

    def test_self_consistency_comm_anti_general(self):
        spec = model(2, u=0.6)
        times = [0.4]
        req_g = RequestConfig(kind="general", family="particle_hole", eps=0.1)
        comm = oracle_correlations(
            spec, MappingKind.JW,
            RequestConfig(kind="commutator", family="one_body", eps=0.1), times,
        )
        # tr(rho c_i(t) c_j^dag): compare particle_hole against dense directly
        res = oracle_correlations(spec, MappingKind.JW, req_g, times)
        h = build_hamiltonian(spec, MappingKind.JW).dense()
        psi = oracles.ground_vector(h)
        for row in res.rows:
            i, j = row.indices
            a_t = oracles.heisenberg(oracles.annihilation_matrix(2, i), h, 0.4)
            want = oracles.expectation(psi, a_t @ oracles.creation_matrix(2, j))
            assert abs(row.value - want) < 1e-10
        assert comm.rows  # one_body family populated

    def test_time_reversal_conjugation(self):
        # real H, real A, B: commutator value at -t is the conjugate at +t
        spec = model(3, u=1.2)
        req = RequestConfig(kind="commutator", family="one_body", eps=0.1)
        plus = oracle_correlations(spec, MappingKind.JW, req, [0.7]).lookup()
        minus = oracle_correlations(spec, MappingKind.JW, req, [-0.7]).lookup()
        for (idx, _), val in plus.items():
            assert abs(minus[(idx, -0.7)] - val.conjugate()) < 1e-9

    def test_mapping_invariance_of_values(self):
        spec = model(3, u=2.0)
        vals = {}
        for kind in [MappingKind.JW, MappingKind.BK, MappingKind.TT]:
            res = oracle_correlations(spec, kind, dd_request(), [0.25, 1.0])
            vals[kind] = res.lookup()
        for key in vals[MappingKind.JW]:
            assert abs(vals[MappingKind.JW][key] - vals[MappingKind.BK][key]) < 1e-8
            assert abs(vals[MappingKind.JW][key] - vals[MappingKind.TT][key]) < 1e-8

    def test_capacity_error(self):
        with pytest.raises(CapacityError):
            oracle_correlations(model(13), MappingKind.JW, dd_request(), [0.0])

    def test_custom_model_matches_named_model(self):
        # the 2-site hopping model written out as explicit Pauli terms
        custom = ModelSpec(
            name="custom", n=2, terms=[(-0.5, "XX"), (-0.5, "YY")]
        )
        a = oracle_correlations(custom, MappingKind.JW, dd_request(), [0.4]).lookup()
        b = oracle_correlations(model(2), MappingKind.JW, dd_request(), [0.4]).lookup()
        for key, val in b.items():
            assert abs(a[key] - val) < 1e-10

    def test_vs_independent_dense_oracle(self):
        spec = model(4, u=2.0)
        res = oracle_correlations(spec, MappingKind.JW, dd_request(), [0.5])
        h = build_hamiltonian(spec, MappingKind.JW).dense()
        psi = oracles.ground_vector(h)
        for row in res.rows:
            i, j = row.indices
            a_t = oracles.heisenberg(oracles.number_matrix(4, i), h, 0.5)
            comm = oracles.commutator_value(psi, a_t, oracles.number_matrix(4, j))
            assert abs(row.value - (-1j) * comm) < 1e-10


class TestFamilies:
    def test_density_family_size(self):
        assert len(family_entries(dd_request(), model(3))) == 9

    def test_one_body_family_size(self):
        req = RequestConfig(kind="commutator", family="one_body", eps=0.1)
        assert len(family_entries(req, model(2))) == 16

    def test_current_family(self):
        req = RequestConfig(kind="commutator", family="current_current", eps=0.1)
        assert len(family_entries(req, model(3))) == 4


def experiment_config(tmp_path=None, **kw):
    defaults = dict(
        model=model(2),
        mapping="jw",
        request=dd_request(),
        times=[0.5],
        seed=42,
        shots=ShotsConfig(per_group=500, majority=500, nm=200, shadow=2000,
                          bell=500, anchor=200, chain=200),
        output_path=str(tmp_path) if tmp_path else None,
    )
    defaults.update(kw)
    return ExperimentConfig(**defaults)


class TestRunExperiment:
    def test_zero_shots_rejected_before_simulation(self):
        cfg = experiment_config(shots=ShotsConfig(per_group=0))
        with pytest.raises(ValidationError):
            run_experiment(cfg)

    def test_density_run_and_report(self, tmp_path):
        cfg = experiment_config(tmp_path)
        artifacts = run_experiment(cfg)
        assert len(artifacts.rows) == 4
        assert artifacts.report["entries"] == 4
        assert (tmp_path / "results.csv").exists()
        assert (tmp_path / "oracle.csv").exists()
        assert (tmp_path / "report.json").exists()
        assert (tmp_path / "run_log.csv").exists()
        payload = json.loads((tmp_path / "results.json").read_text())
        assert payload["rows"][0]["family"] == "density_density"

    def test_green_run(self, tmp_path):
        cfg = experiment_config(tmp_path, request=green_request(), times=[0.0])
        artifacts = run_experiment(cfg)
        exact = artifacts.oracle.lookup()
        for row in artifacts.rows:
            want = exact[(row.indices, row.t)]
            assert abs(row.value - want) < 4 * row.stderr + 0.02

    def test_green_n4_all_entries_within_eps(self, tmp_path):
        cfg = experiment_config(
            tmp_path,
            model=model(4, u=2.0),
            request=green_request(eps=0.25),
            times=[0.7],
            shots=ShotsConfig(majority=3000, nm=600),
        )
        artifacts = run_experiment(cfg)
        assert artifacts.report["entries"] == 16
        assert artifacts.report["fraction_within_eps"] == 1.0

    def test_particle_hole_run(self, tmp_path):
        cfg = experiment_config(
            tmp_path,
            request=RequestConfig(kind="general", family="particle_hole", eps=0.2),
            times=[0.3],
        )
        artifacts = run_experiment(cfg)
        assert artifacts.report["fraction_within_eps"] >= 0.75

    def test_byte_identical_reruns(self, tmp_path):
        cfg1 = experiment_config(tmp_path / "a")
        cfg2 = experiment_config(tmp_path / "b")
        a = run_experiment(cfg1)
        b = run_experiment(cfg2)
        assert a.results_csv() == b.results_csv()
        assert (tmp_path / "a" / "results.csv").read_bytes() == (
            tmp_path / "b" / "results.csv"
        ).read_bytes()

    def test_thread_env_invariance(self, tmp_path, monkeypatch):
        monkeypatch.setenv("FAST_THREADS", "1")
        a = run_experiment(experiment_config(tmp_path / "t1"))
        monkeypatch.setenv("FAST_THREADS", "8")
        b = run_experiment(experiment_config(tmp_path / "t8"))
        assert a.results_csv() == b.results_csv()

    def test_capacity_error(self):
        cfg = experiment_config(model=model(13))
        with pytest.raises(CapacityError):
            run_experiment(cfg)

    def test_custom_model_protocol_run(self, tmp_path):
        custom = ModelSpec(name="custom", n=2, terms=[(-0.5, "XX"), (-0.5, "YY")])
        got = run_experiment(experiment_config(tmp_path / "c", model=custom))
        want = run_experiment(experiment_config(tmp_path / "n", model=model(2)))
        assert got.results_csv() == want.results_csv()


class TestScaling:
    def test_needs_three_points(self):
        sweep = SweepConfig(
            model=model(2), n_values=[2, 4],
            protocols=[SweepProtocol(protocol="brute_commutator")],
        )
        with pytest.raises(ValidationError):
            scaling_study(sweep)

    def test_brute_force_slope_four(self):
        sweep = SweepConfig(
            model=model(2), n_values=[2, 4, 6, 8],
            protocols=[SweepProtocol(protocol="brute_commutator")],
        )
        report = scaling_study(sweep)
        assert abs(report.slopes["brute_commutator"]["slope"] - 4.0) < 1e-9

    def test_fast1_tt_slope_two(self):
        sweep = SweepConfig(
            model=model(2), n_values=[2, 4, 6, 8],
            protocols=[SweepProtocol(protocol="fast1", mapping="tt")],
        )
        report = scaling_study(sweep)
        info = report.slopes["fast1/tt"]
        assert info["strategy"] == "DC"
        assert info["prediction_exact"]
        assert abs(info["slope"] - 2.0) < 0.3

    def test_fast2_nm_slope_two(self):
        sweep = SweepConfig(
            model=model(2), n_values=[2, 4, 6, 8],
            protocols=[SweepProtocol(protocol="fast2", mapping="jw")],
        )
        report = scaling_study(sweep)
        info = report.slopes["fast2/jw"]
        assert info["strategy"] == "NM"
        assert info["prediction_exact"]
        assert abs(info["slope"] - 2.0) < 0.3


class TestEngineeredStates:
    def test_exact_targets_majorana_family(self):
        basis = majorana_basis(4, MappingKind.JW)
        family = list(basis.gammas)
        targets = [0.5, -0.45, 0.04, -0.02, 0.45, 0.3, -0.05, 0.0]
        aux = chirality_word(basis)
        state = state_with_target_expectations(family, targets, aux)
        for g, want in zip(family, targets):
            assert abs(state.expectation(g).real - want) < 1e-9

    def test_x_family_at_uniform_norm(self):
        basis = majorana_basis(6, MappingKind.JW)
        fam_x = [basis.gammas[2 * j] for j in range(6)]
        aux = basis.gammas[1]
        targets = [1 / np.sqrt(6)] * 6
        state = state_with_target_expectations(fam_x, targets, aux)
        for g in fam_x:
            assert abs(state.expectation(g).real - 1 / np.sqrt(6)) < 1e-9

    def test_overweight_targets_rejected(self):
        basis = majorana_basis(2, MappingKind.JW)
        with pytest.raises(DomainError):
            state_with_target_expectations(
                list(basis.gammas), [0.8, 0.8, 0.8, 0.8], chirality_word(basis)
            )

    def test_chirality_anticommutes(self):
        basis = majorana_basis(3, MappingKind.JW)
        gamma_all = chirality_word(basis)
        assert gamma_all.is_hermitian
        for g in basis.gammas:
            assert not gamma_all.commutes_with(g)
