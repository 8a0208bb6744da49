"""Vectorized generator, stationary-state solvers, and convergence reports."""

import numpy as np
import pytest
import scipy.sparse as sp

from conftest import random_density_matrix
from drivenchain.liouville import (
    DegenerateKernelError,
    evolve_to_ness,
    ness_nullspace,
    steady_state,
    vectorize,
)
from drivenchain.observables import measure, trace_distance
from drivenchain.operators import build_hamiltonian, build_jump_operators
from drivenchain.parameters import ChainParameters


def direct_master_equation(ham, jumps, rho):
    """Dense right-hand side of the master equation, the oracle for `vectorize`."""
    ham = np.asarray(ham.todense()) if sp.issparse(ham) else np.asarray(ham)
    out = -1j * (ham @ rho - rho @ ham)
    for op in jumps:
        op = np.asarray(op.todense()) if sp.issparse(op) else np.asarray(op)
        grad = op.conj().T @ op
        out += op @ rho @ op.conj().T - 0.5 * (grad @ rho + rho @ grad)
    return out


class TestVectorize:
    def test_matches_direct_evaluation(self, rng):
        params = ChainParameters(
            n_sites=3, interaction=1.7, bias=0.6, dephasing=0.3, staggered=0.4
        )
        ham = build_hamiltonian(params)
        jumps = build_jump_operators(params)
        gen = vectorize(ham, jumps)
        for _ in range(5):
            rho = random_density_matrix(rng, 8)
            direct = direct_master_equation(ham, [op for op, _ in jumps], rho)
            via_gen = (gen @ rho.flatten(order="F")).reshape((8, 8), order="F")
            assert np.max(np.abs(via_gen - direct)) < 1e-12

    def test_unitary_jump_fixes_identity(self, rng):
        dim = 4
        ham = sp.csr_matrix((dim, dim), dtype=complex)
        permutation = sp.csr_matrix(np.roll(np.eye(dim), 1, axis=0))
        gen = vectorize(ham, [permutation])
        residual = gen @ (np.eye(dim) / dim).flatten(order="F")
        assert np.max(np.abs(residual)) < 1e-14

        lower = sp.csr_matrix(np.diag([1.0], k=-1).astype(complex))
        gen = vectorize(sp.csr_matrix((2, 2), dtype=complex), [lower])
        got = (gen @ (np.eye(2) / 2).flatten(order="F")).reshape((2, 2), order="F")
        want = direct_master_equation(np.zeros((2, 2)), [np.diag([1.0], k=-1)], np.eye(2) / 2)
        assert np.max(np.abs(got - want)) < 1e-14

    def test_undriven_identity_is_stationary(self):
        for delta in (0.0, 2.0, -1.3):
            params = ChainParameters(n_sites=2, interaction=delta, dephasing=0.4)
            gen = vectorize(build_hamiltonian(params), build_jump_operators(params))
            residual = gen @ (np.eye(4) / 4).flatten(order="F")
            assert np.max(np.abs(residual)) < 1e-12

    def test_trace_preservation(self, rng):
        params = ChainParameters(n_sites=3, interaction=2.0, bias=0.8, dephasing=0.5)
        gen = vectorize(build_hamiltonian(params), build_jump_operators(params))
        identity_row = np.eye(8).flatten(order="F")
        assert np.max(np.abs(identity_row @ gen)) < 1e-10
        for _ in range(3):
            rho = random_density_matrix(rng, 8)
            image = (gen @ rho.flatten(order="F")).reshape((8, 8), order="F")
            assert abs(np.trace(image)) < 1e-10

    @pytest.mark.parametrize("gamma", [0.0, 0.3])
    def test_spectrum_left_half_plane_unique_kernel(self, gamma):
        params = ChainParameters(n_sites=3, interaction=1.0, bias=0.5, dephasing=gamma)
        gen = vectorize(build_hamiltonian(params), build_jump_operators(params))
        eigenvalues = np.linalg.eigvals(gen.toarray())
        assert eigenvalues.real.max() < 1e-10
        assert np.sum(np.abs(eigenvalues) < 1e-10) == 1

    def test_accepts_bare_and_labelled_jumps(self):
        params = ChainParameters(n_sites=2, bias=0.5)
        ham = build_hamiltonian(params)
        labelled = build_jump_operators(params)
        bare = [op for op, _ in labelled]
        assert (vectorize(ham, labelled) - vectorize(ham, bare)).nnz == 0

    def test_dimension_mismatch(self):
        ham = sp.identity(4, format="csr", dtype=complex)
        with pytest.raises(ValueError):
            vectorize(ham, [sp.identity(2, format="csr", dtype=complex)])

    def test_memory_cap(self):
        big = sp.identity(2048, format="csr", dtype=complex)
        with pytest.raises(ValueError):
            vectorize(big, [big])


class TestEvolveToNess:
    def test_undriven_chain_relaxes_to_identity(self, rng):
        params = ChainParameters(n_sites=3, interaction=1.5, dephasing=0.2)
        gen = vectorize(build_hamiltonian(params), build_jump_operators(params))
        rho0 = random_density_matrix(rng, 8)
        rho, report = evolve_to_ness(gen, rho0, tol=1e-9)
        assert report.converged
        assert trace_distance(rho, np.eye(8) / 8) < 1e-6
        assert abs(measure(rho, params).current) < 1e-8

    def test_noninteracting_current_formula(self):
        params = ChainParameters(n_sites=5, bias=0.5, dephasing=0.1)
        gen = vectorize(build_hamiltonian(params), build_jump_operators(params))
        rho, report = evolve_to_ness(gen, np.eye(32) / 32, tol=1e-9)
        assert report.converged
        current = measure(rho, params).current
        expected = -0.5 / (1.0 + 1.0 + 4 * 4 * 0.1)
        assert abs(current - expected) < 1e-6

    def test_reports_nonconvergence_without_raising(self):
        params = ChainParameters(n_sites=3, interaction=10.0, bias=1.0)
        gen = vectorize(build_hamiltonian(params), build_jump_operators(params))
        rho, report = evolve_to_ness(gen, np.eye(8) / 8, tol=1e-12, max_time=1.0)
        assert not report.converged
        assert report.model_time >= 1.0
        assert "insulating" in report.message
        assert abs(np.trace(rho) - 1) < 1e-10

    def test_rejects_invalid_initial_state(self):
        params = ChainParameters(n_sites=2, bias=0.5)
        gen = vectorize(build_hamiltonian(params), build_jump_operators(params))
        with pytest.raises(ValueError):
            evolve_to_ness(gen, np.eye(4))  # trace 4, not 1
        bad = np.eye(4) / 4
        bad = bad + 0.1j * np.eye(4)
        with pytest.raises(ValueError):
            evolve_to_ness(gen, bad)


class TestNullspaceAndSteadyState:
    def test_cross_method_agreement(self):
        params = ChainParameters(n_sites=4, interaction=2.0, bias=0.5, dephasing=0.1)
        gen = vectorize(build_hamiltonian(params), build_jump_operators(params))
        rho_null = ness_nullspace(gen)
        rho_evolved, report = evolve_to_ness(gen, np.eye(16) / 16, tol=1e-10)
        assert report.converged
        assert trace_distance(rho_null, rho_evolved) < 1e-8

    def test_cross_method_grid(self):
        for delta in (0.0, 0.5, 2.0):
            for bias in (0.25, 0.5, 1.0):
                for gamma in (0.1, 0.5):
                    params = ChainParameters(
                        n_sites=4, interaction=delta, bias=bias, dephasing=gamma
                    )
                    direct, _ = steady_state(params, method="direct")
                    evolved, report = steady_state(params, method="evolve", tol=1e-10)
                    assert report.converged, (delta, bias, gamma)
                    assert trace_distance(direct, evolved) < 1e-8, (delta, bias, gamma)

    def test_all_methods_agree(self):
        params = ChainParameters(n_sites=4, interaction=1.0, bias=0.8, dephasing=0.2)
        reference, _ = steady_state(params, method="direct")
        for method in ("auto", "ilu", "shift-invert"):
            rho, report = steady_state(params, method=method)
            assert report.converged
            assert trace_distance(rho, reference) < 1e-7, method

    def test_undriven_steady_state_is_identity(self):
        params = ChainParameters(n_sites=3, interaction=2.0, dephasing=0.3)
        rho, _ = steady_state(params)
        assert trace_distance(rho, np.eye(8) / 8) < 1e-9

    def test_degenerate_kernel_detected(self):
        with pytest.raises(DegenerateKernelError):
            ness_nullspace(sp.csr_matrix((16, 16), dtype=complex))

    def test_size_caps(self):
        with pytest.raises(ValueError):
            steady_state(ChainParameters(n_sites=9, bias=0.5))
        with pytest.raises(ValueError):
            steady_state(ChainParameters(n_sites=11, bias=0.5), method="evolve")

    def test_report_fields(self, interacting_ness):
        _, _, report = interacting_ness
        assert report.converged
        assert report.residual >= 0
        assert report.homogeneity >= 0
        assert report.method
