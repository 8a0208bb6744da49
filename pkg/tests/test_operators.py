"""Hamiltonian, jump, and measurement operator builders."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drivenchain import basis
from drivenchain.operators import (
    build_hamiltonian,
    build_jump_operators,
    current_operator,
    kinetic_operator,
    number_operator,
    total_number_operator,
)
from drivenchain.parameters import ChainParameters


def _dense(op):
    return np.asarray(op.todense())


class TestHamiltonian:
    def test_two_site_hopping_only(self):
        ham = _dense(build_hamiltonian(ChainParameters(n_sites=2)))
        expected = np.zeros((4, 4))
        expected[1, 2] = expected[2, 1] = 0.5
        assert np.allclose(ham, expected, atol=1e-14)

    def test_two_site_interaction_diagonal(self):
        with_int = build_hamiltonian(ChainParameters(n_sites=2, interaction=2.0))
        without = build_hamiltonian(ChainParameters(n_sites=2))
        diff = _dense(with_int) - _dense(without)
        assert np.allclose(diff, np.diag([0.5, -0.5, -0.5, 0.5]), atol=1e-14)

    def test_staggered_term_diagonal(self):
        b = 0.7
        with_b = build_hamiltonian(ChainParameters(n_sites=3, staggered=b))
        without = build_hamiltonian(ChainParameters(n_sites=3))
        diff = _dense(with_b) - _dense(without)
        signs = np.array([(-1) ** j for j in range(1, 4)])
        expected = np.diag(
            [b * float(signs @ basis.occupations(i, 3)) for i in range(8)]
        )
        assert np.allclose(diff, expected, atol=1e-14)

    @settings(max_examples=25, deadline=None)
    @given(
        n=st.integers(2, 6),
        delta=st.floats(-5, 5),
        stag=st.floats(-2, 2),
    )
    def test_hermitian_and_number_conserving(self, n, delta, stag):
        params = ChainParameters(n_sites=n, interaction=delta, staggered=stag)
        ham = _dense(build_hamiltonian(params))
        assert np.max(np.abs(ham - ham.conj().T)) < 1e-12
        total = _dense(total_number_operator(n))
        assert np.max(np.abs(ham @ total - total @ ham)) < 1e-12

    def test_sector_spectrum_flips_with_interaction_sign(self):
        from drivenchain.spectra import sector_spectrum

        pos = build_hamiltonian(ChainParameters(n_sites=6, interaction=3.0))
        neg = build_hamiltonian(ChainParameters(n_sites=6, interaction=-3.0))
        for sector in (2, 3):
            e_pos, _ = sector_spectrum(pos, sector)
            e_neg, _ = sector_spectrum(neg, sector)
            assert np.allclose(e_neg, -e_pos[::-1], atol=1e-10)

    def test_dimension_cap(self):
        with pytest.raises(ValueError):
            build_hamiltonian(ChainParameters(n_sites=15))


class TestJumpOperators:
    def test_four_boundary_operators_without_dephasing(self):
        jumps = build_jump_operators(ChainParameters(n_sites=3, bias=0.5))
        assert len(jumps) == 4
        labels = [label for _, label in jumps]
        assert labels == ["L+", "L-", "R+", "R-"]

    def test_dephasing_adds_one_operator_per_site(self):
        jumps = build_jump_operators(
            ChainParameters(n_sites=3, bias=0.5, dephasing=0.2)
        )
        assert len(jumps) == 7
        deph = [op for op, label in jumps if label.startswith("deph")]
        for op in deph:
            dense = _dense(op)
            assert np.allclose(dense, np.diag(np.diag(dense)))
            assert set(np.round(np.diag(dense) / np.sqrt(0.2), 12)) == {1.0, -1.0}

    def test_symmetric_driving_has_equal_rates(self):
        jumps = build_jump_operators(ChainParameters(n_sites=3, bias=0.0))
        for op, _ in jumps:
            assert np.isclose(np.abs(_dense(op)).max(), np.sqrt(0.5), atol=1e-14)

    def test_maximal_bias_zeroes_two_channels(self):
        jumps = dict(
            (label, op) for op, label in build_jump_operators(
                ChainParameters(n_sites=3, bias=1.0)
            )
        )
        assert np.abs(_dense(jumps["L+"])).max() == 0.0
        assert np.abs(_dense(jumps["R-"])).max() == 0.0
        assert np.abs(_dense(jumps["L-"])).max() > 0.0
        assert np.abs(_dense(jumps["R+"])).max() > 0.0

    def test_rates_scale_with_coupling_and_bias(self):
        f, coupling = 0.3, 2.5
        jumps = dict(
            (label, op) for op, label in build_jump_operators(
                ChainParameters(n_sites=2, bias=f, coupling=coupling)
            )
        )
        assert np.isclose(
            np.abs(_dense(jumps["L+"])).max(), np.sqrt(coupling * (1 - f) / 2)
        )
        assert np.isclose(
            np.abs(_dense(jumps["L-"])).max(), np.sqrt(coupling * (1 + f) / 2)
        )
        assert np.isclose(
            np.abs(_dense(jumps["R+"])).max(), np.sqrt(coupling * (1 + f) / 2)
        )
        assert np.isclose(
            np.abs(_dense(jumps["R-"])).max(), np.sqrt(coupling * (1 - f) / 2)
        )


class TestCurrentOperator:
    def test_two_site_action(self):
        op = _dense(current_operator(1, 2))
        ket10 = np.zeros(4)
        ket10[2] = 1.0
        ket01 = np.zeros(4)
        ket01[1] = 1.0
        assert np.allclose(op @ ket10, 1j * ket01)
        assert np.allclose(op @ ket01, -1j * ket10)

    @pytest.mark.parametrize("n", [2, 4])
    def test_hermitian(self, n):
        for j in range(1, n):
            op = _dense(current_operator(j, n))
            assert np.max(np.abs(op - op.conj().T)) < 1e-14

    def test_expectation_is_real(self, rng):
        from conftest import random_density_matrix

        rho = random_density_matrix(rng, 8)
        op = _dense(current_operator(2, 3))
        assert abs(np.trace(op @ rho).imag) < 1e-12

    def test_rejects_out_of_range_bond(self):
        with pytest.raises(ValueError):
            current_operator(0, 4)
        with pytest.raises(ValueError):
            current_operator(4, 4)


class TestNumberAndKinetic:
    def test_number_eigenvalues(self):
        op = _dense(number_operator(2, 3))
        for index in range(8):
            ket = np.zeros(8)
            ket[index] = 1.0
            occ = basis.occupations(index, 3)[1]
            assert np.isclose(ket @ op @ ket, occ)

    def test_number_infinite_temperature_mean(self):
        for j in range(1, 4):
            op = _dense(number_operator(j, 3))
            assert np.isclose(np.trace(op) / 8, 0.5)

    def test_kinetic_vacuum_zero(self):
        op = _dense(kinetic_operator(3))
        vacuum = np.zeros(8)
        vacuum[0] = 1.0
        assert np.isclose(vacuum @ op @ vacuum, 0.0)

    def test_kinetic_matches_bond_sum(self):
        n = 4
        op = _dense(kinetic_operator(n))
        assert np.max(np.abs(op - op.conj().T)) < 1e-14
        two_site = _dense(kinetic_operator(2))
        expected = np.zeros((4, 4))
        expected[1, 2] = expected[2, 1] = 1.0
        assert np.allclose(two_site, expected)

    def test_number_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            number_operator(0, 3)
        with pytest.raises(ValueError):
            number_operator(4, 3)
