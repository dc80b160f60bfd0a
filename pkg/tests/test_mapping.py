"""Mapping checks: Majorana algebra, encoding, and mapping invariance."""
import numpy as np
import pytest

from fastsim.errors import DomainError
from fastsim.mapping import (
    FermionOperator,
    MappingKind,
    annihilation,
    creation,
    current,
    encode,
    hopping,
    majorana_basis,
    number,
    one_body_observables,
    tt_weight_bound,
)

import oracles

ALL_KINDS = [MappingKind.JW, MappingKind.BK, MappingKind.TT]


def encoded_matrix(op, basis):
    dim = 2**basis.qubits
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, word in encode(op, basis):
        out += coeff * word.to_matrix()
    return out


class TestMajoranaBasis:
    def test_jw_n2_strings(self):
        basis = majorana_basis(2, MappingKind.JW)
        assert [g.label() for g in basis.gammas] == ["XI", "YI", "ZX", "ZY"]

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_n1_single_qubit_pair(self, kind):
        basis = majorana_basis(1, kind)
        assert len(basis.gammas) == 2
        assert all(g.qubits == 1 for g in basis.gammas)
        assert not basis.gammas[0].commutes_with(basis.gammas[1])

    def test_jw_n1_is_x_y(self):
        basis = majorana_basis(1, MappingKind.JW)
        assert [g.label() for g in basis.gammas] == ["X", "Y"]

    def test_zero_modes_rejected(self):
        with pytest.raises(DomainError):
            majorana_basis(0, MappingKind.JW)

    @pytest.mark.parametrize("kind", ALL_KINDS)
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_car_dense(self, kind, n):
        basis = majorana_basis(n, kind)
        mats = [g.to_matrix() for g in basis.gammas]
        dim = 2**n
        for a in range(2 * n):
            for b in range(a, 2 * n):
                anti = mats[a] @ mats[b] + mats[b] @ mats[a]
                want = 2 * np.eye(dim) if a == b else np.zeros((dim, dim))
                np.testing.assert_allclose(anti, want, atol=1e-12)

    def test_jw_weights(self):
        basis = majorana_basis(5, MappingKind.JW)
        for j in range(5):
            assert basis.gammas[2 * j].weight == j + 1
            assert basis.gammas[2 * j + 1].weight == j + 1

    def test_tt_n4_weight_bound(self):
        basis = majorana_basis(4, MappingKind.TT)
        assert max(g.weight for g in basis.gammas) <= 3

    def test_tt_weight_bound_up_to_64(self):
        for n in range(1, 65):
            basis = majorana_basis(n, MappingKind.TT)
            assert max(g.weight for g in basis.gammas) <= tt_weight_bound(n)

    def test_bk_weights_logarithmic(self):
        # BK locality grows like log2(n); spot-check a generous bound
        for n in [4, 8, 16, 32]:
            basis = majorana_basis(n, MappingKind.BK)
            assert max(g.weight for g in basis.gammas) <= int(np.log2(n)) + 2


class TestFermionOperator:
    def test_normal_order_cancellation(self):
        op = FermionOperator.from_terms(2, [(1.0, (1, 0, 1))])
        # gamma_1 gamma_0 gamma_1 = -gamma_0
        assert op.terms == (((0,), -1.0 + 0j),)

    def test_add_and_scalar(self):
        a = number(2, 0) + number(2, 1)
        b = 2.0 * number(2, 0)
        assert (a + a).terms == (2.0 * a).terms
        assert b.terms != a.terms

    def test_dagger(self):
        c = annihilation(3, 1)
        assert c.dagger().terms == creation(3, 1).terms

    def test_out_of_range_index(self):
        with pytest.raises(DomainError):
            FermionOperator.from_terms(2, [(1.0, (4,))])


class TestEncode:
    def test_number_operator_jw_n1(self):
        basis = majorana_basis(1, MappingKind.JW)
        got = encoded_matrix(number(1, 0), basis)
        want = (np.eye(2) - oracles.pauli_matrix("Z")) / 2
        np.testing.assert_allclose(got, want, atol=1e-14)

    def test_single_gamma_lookup(self):
        basis = majorana_basis(2, MappingKind.JW)
        pairs = encode(FermionOperator.from_terms(2, [(1.0, (2,))]), basis)
        assert len(pairs) == 1
        coeff, word = pairs[0]
        assert coeff == 1.0 and word.label() == "ZX"

    @pytest.mark.parametrize("kind", ALL_KINDS)
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_number_vs_occupation_oracle(self, kind, n):
        # spectra must match the occupation-number construction for every mapping
        basis = majorana_basis(n, kind)
        for j in range(n):
            got = np.linalg.eigvalsh(encoded_matrix(number(n, j), basis))
            want = np.linalg.eigvalsh(oracles.number_matrix(n, j))
            np.testing.assert_allclose(got, want, atol=1e-12)

    def test_jw_matches_occupation_oracle_exactly(self):
        # under JW the dense matrices agree entry by entry, not just spectrally
        n = 3
        basis = majorana_basis(n, MappingKind.JW)
        for j in range(n):
            np.testing.assert_allclose(
                encoded_matrix(annihilation(n, j), basis),
                oracles.annihilation_matrix(n, j),
                atol=1e-14,
            )

    def test_current_operator_jw_n2(self):
        basis = majorana_basis(2, MappingKind.JW)
        op = current(2, 0, 1, 1.0)
        pairs = encode(op, basis)
        assert len(pairs) == 2
        assert all(word.weight == 2 for _, word in pairs)
        want = 1j * (
            oracles.creation_matrix(2, 0) @ oracles.annihilation_matrix(2, 1)
            - oracles.creation_matrix(2, 1) @ oracles.annihilation_matrix(2, 0)
        )
        np.testing.assert_allclose(encoded_matrix(op, basis), want, atol=1e-14)

    @pytest.mark.parametrize("kind", ALL_KINDS)
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_hopping_spectra_mapping_invariant(self, kind, n):
        basis = majorana_basis(n, kind)
        jw = majorana_basis(n, MappingKind.JW)
        for i in range(n - 1):
            op = hopping(n, i, i + 1)
            got = np.linalg.eigvalsh(encoded_matrix(op, basis))
            want = np.linalg.eigvalsh(encoded_matrix(op, jw))
            np.testing.assert_allclose(got, want, atol=1e-10)


class TestOneBody:
    def test_n1_single_observable(self):
        basis = majorana_basis(1, MappingKind.JW)
        obs = one_body_observables(1, basis)
        assert len(obs) == 1
        assert obs[0].label() == "Z"

    def test_n2_jw_count_and_weight(self):
        basis = majorana_basis(2, MappingKind.JW)
        obs = one_body_observables(2, basis)
        assert len(obs) == 6
        assert all(o.is_hermitian for o in obs)
        assert all(o.weight <= 2 for o in obs)

    def test_n4_count(self):
        basis = majorana_basis(4, MappingKind.JW)
        assert len(one_body_observables(4, basis)) == 28

    def test_distinct_words(self):
        basis = majorana_basis(3, MappingKind.BK)
        obs = one_body_observables(3, basis)
        assert len({(o.xbits, o.zbits) for o in obs}) == len(obs)
