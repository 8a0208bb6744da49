"""Observable extraction: densities, currents, entropy, sector statistics."""

import json
from math import comb, log2

import numpy as np
import pytest

from drivenchain import basis
from drivenchain.observables import (
    ObservableRecord,
    measure,
    operator_schmidt_entropy,
    smallest_eigenvalue,
    trace_distance,
)
from drivenchain.operators import (
    current_operator,
    kinetic_operator,
    number_operator,
)
from drivenchain.parameters import ChainParameters


def _expectation(op, rho):
    return float(np.trace(np.asarray(op.todense()) @ rho).real)


class TestInfiniteTemperatureState:
    """The maximally mixed state has fully known observables."""

    def test_all_fields(self):
        params = ChainParameters(n_sites=4, interaction=2.0, bias=0.5, dephasing=0.3)
        record = measure(np.eye(16) / 16, params)
        assert abs(record.entropy) < 1e-12
        assert np.allclose(record.density_profile, 0.5, atol=1e-12)
        off_diagonal = record.correlations - np.diag(np.diag(record.correlations))
        assert np.max(np.abs(off_diagonal)) < 1e-12
        assert np.allclose(np.diag(record.correlations), 0.25, atol=1e-12)
        assert abs(record.purity - 1 / 16) < 1e-12
        assert abs(record.current) < 1e-12
        assert abs(record.dissipation) < 1e-12
        expected_probs = [comb(4, n) / 16 for n in range(5)]
        assert np.allclose(record.sector_probs, expected_probs, atol=1e-12)


class TestMeasureAgainstDirectTraces:
    """Every record field re-derived with naive operator traces."""

    def test_density_and_correlations(self, interacting_ness):
        params, rho, _ = interacting_ness
        record = measure(rho, params)
        n = params.n_sites
        for i in range(1, n + 1):
            ni = _expectation(number_operator(i, n), rho)
            assert abs(record.density_profile[i - 1] - ni) < 1e-12
            for j in range(1, n + 1):
                nn = number_operator(i, n) @ number_operator(j, n)
                cij = _expectation(nn, rho) - ni * _expectation(number_operator(j, n), rho)
                assert abs(record.correlations[i - 1, j - 1] - cij) < 1e-12

    def test_current_profile_and_mean(self, interacting_ness):
        params, rho, _ = interacting_ness
        record = measure(rho, params)
        profile = [
            _expectation(current_operator(j, params.n_sites), rho)
            for j in range(1, params.n_sites)
        ]
        assert np.allclose(record.current_profile, profile, atol=1e-12)
        assert abs(record.current - np.mean(profile)) < 1e-12

    def test_dissipation_tracks_kinetic_energy(self, interacting_ness):
        params, rho, _ = interacting_ness
        record = measure(rho, params)
        kinetic = _expectation(kinetic_operator(params.n_sites), rho)
        assert abs(record.dissipation - (-2 * params.dephasing * kinetic)) < 1e-12

    def test_sector_probabilities(self, interacting_ness):
        params, rho, _ = interacting_ness
        record = measure(rho, params)
        counts = basis.particle_numbers(params.n_sites)
        for n in range(params.n_sites + 1):
            direct = float(np.trace(rho[np.ix_(counts == n, counts == n)]).real)
            assert abs(record.sector_probs[n] - direct) < 1e-12
        assert abs(sum(record.sector_probs) - 1) < 1e-10

    def test_purity(self, interacting_ness):
        params, rho, _ = interacting_ness
        record = measure(rho, params)
        assert abs(record.purity - np.trace(rho @ rho).real) < 1e-12
        assert 0 <= record.purity <= 1


class TestConvergedStateInvariants:
    def test_current_homogeneity(self, free_ness):
        params, rho, report = free_ness
        record = measure(rho, params)
        spread = np.max(np.abs(np.asarray(record.current_profile) - record.current))
        assert spread <= 10 * max(report.residual, 1e-10)

    def test_state_is_physical(self, insulating_ness):
        _, rho, _ = insulating_ness
        assert np.max(np.abs(rho - rho.conj().T)) < 1e-10
        assert abs(np.trace(rho).real - 1) < 1e-10
        assert smallest_eigenvalue(rho) > -1e-8


class TestEntropy:
    def test_product_operator_has_zero_entropy(self, rng):
        left = np.diag(rng.uniform(0.1, 1.0, size=4))
        right = np.diag(rng.uniform(0.1, 1.0, size=4))
        rho = np.kron(left / np.trace(left), right / np.trace(right))
        assert abs(operator_schmidt_entropy(rho, 4)) < 1e-12

    def test_two_term_schmidt_closed_form(self):
        alpha = 0.6
        sigma_z = np.diag([1.0, -1.0])
        rho = (np.eye(4) + alpha * np.kron(sigma_z, sigma_z)) / 4
        weights = np.array([1.0, alpha**2])
        weights = weights / weights.sum()
        expected = -sum(w * log2(w) for w in weights)
        assert abs(operator_schmidt_entropy(rho, 2) - expected) < 1e-12
        params = ChainParameters(n_sites=2, interaction=1.0)
        record = measure(rho, params)
        assert abs(record.entropy - expected) < 1e-12
        assert abs(record.correlations[0, 1] - alpha / 4) < 1e-12

    def test_entropy_nonnegative(self, insulating_ness):
        params, rho, _ = insulating_ness
        assert measure(rho, params).entropy >= 0


class TestDistanceHelpers:
    def test_trace_distance_extremes(self):
        ket0 = np.zeros((4, 1))
        ket0[0] = 1
        ket1 = np.zeros((4, 1))
        ket1[1] = 1
        rho0 = ket0 @ ket0.T
        rho1 = ket1 @ ket1.T
        assert abs(trace_distance(rho0, rho1) - 1) < 1e-12
        assert trace_distance(rho0, rho0) < 1e-14
        assert abs(trace_distance(rho0, rho1) - trace_distance(rho1, rho0)) < 1e-14

    def test_smallest_eigenvalue(self):
        assert abs(smallest_eigenvalue(np.eye(8) / 8) - 1 / 8) < 1e-14
        indefinite = np.diag([0.5, 0.7, -0.2])
        assert abs(smallest_eigenvalue(indefinite) + 0.2) < 1e-14


class TestRecordSerialization:
    def test_to_dict_round_trips_through_json(self, free_ness):
        params, rho, _ = free_ness
        record = measure(rho, params)
        assert isinstance(record, ObservableRecord)
        document = json.dumps(record.to_dict())
        parsed = json.loads(document)
        assert parsed["current"] == pytest.approx(record.current)
        assert len(parsed["density_profile"]) == params.n_sites
        assert len(parsed["sector_probs"]) == params.n_sites + 1
