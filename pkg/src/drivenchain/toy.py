"""Few-level companion model of the driven chain.

A ladder of ``K`` configuration states with a single interaction-shifted
level at one end, refilled through an auxiliary reservoir state, mimics
the domain-wall dynamics of the interacting chain while staying small
enough for dense linear algebra at any parameter point. The model
reproduces the chain's negative differential conductance and admits a
closed-form current, a dark-state ansatz, and an exact correspondence
between bulk dephasing and backward pumping near maximal drive.

States are indexed ``0..K-1`` for the configuration ladder ``|1..K>``
and ``K`` for the auxiliary state ``|s>``.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .liouville import DegenerateKernelError, _hermitize, vectorize
from .parameters import ToyParameters

__all__ = [
    "toy_hamiltonian",
    "toy_jump_operators",
    "toy_current_operator",
    "toy_generator",
    "toy_steady_state",
    "toy_ness_current",
    "toy_closed_form",
    "toy_dark_state",
    "dark_state_overlap",
    "correspondence_check",
]


def toy_hamiltonian(params: ToyParameters) -> sp.csr_matrix:
    """Ladder Hamiltonian with the last configuration state shifted.

    ``H = 1/2 sum_k (|k><k+1| + h.c.) + Delta |K><K|`` on the
    configuration states; the auxiliary state carries no energy and no
    coherent coupling.
    """
    k_levels = params.n_levels
    dim = k_levels + 1
    ham = sp.lil_matrix((dim, dim))
    for k in range(k_levels - 1):
        ham[k, k + 1] = 0.5
        ham[k + 1, k] = 0.5
    ham[k_levels - 1, k_levels - 1] = params.interaction
    return ham.tocsr()


def toy_jump_operators(params: ToyParameters):
    """Drive and dephasing jumps of the companion model.

    The auxiliary state feeds the two ends of the ladder with
    bias-imbalanced rates, mirroring the boundary drives of the chain:
    emptying at ``|1>`` is favoured and refilling at ``|K>`` is
    favoured for positive bias. Dephasing acts on the shifted level as
    ``sqrt(gamma) (1 - 2 |K><K|)`` and is omitted at rate zero.

    Returns
    -------
    list of (csr_matrix, str)
        Jump operators with short labels.
    """
    k_levels = params.n_levels
    dim = k_levels + 1
    gamma_rate, f = params.coupling, params.bias
    sink = k_levels

    def ket_bra(i, j, weight):
        mat = sp.csr_matrix(
            (np.array([weight]), (np.array([i]), np.array([j]))), shape=(dim, dim)
        )
        return mat

    jumps = [
        (ket_bra(0, sink, np.sqrt(gamma_rate * (1 - f) / 2)), "L+"),
        (ket_bra(sink, 0, np.sqrt(gamma_rate * (1 + f) / 2)), "L-"),
        (ket_bra(k_levels - 1, sink, np.sqrt(gamma_rate * (1 + f) / 2)), "R+"),
        (ket_bra(sink, k_levels - 1, np.sqrt(gamma_rate * (1 - f) / 2)), "R-"),
    ]
    if params.dephasing > 0:
        deph = sp.identity(dim, format="lil")
        deph[k_levels - 1, k_levels - 1] = -1.0
        jumps.append((np.sqrt(params.dephasing) * deph.tocsr(), "deph"))
    return jumps


def toy_current_operator(n_levels: int) -> sp.csr_matrix:
    """Probability current along the ladder, ``-i sum_k (|k><k+1| - h.c.)``."""
    dim = n_levels + 1
    op = sp.lil_matrix((dim, dim), dtype=complex)
    for k in range(n_levels - 1):
        op[k, k + 1] = -1j
        op[k + 1, k] = 1j
    return op.tocsr()


def toy_generator(params: ToyParameters) -> sp.csr_matrix:
    """Vectorized master-equation generator of the companion model."""
    ham = toy_hamiltonian(params)
    max_sites = max(10, int(np.ceil(np.log2(params.n_levels + 1))))
    return vectorize(ham, toy_jump_operators(params), max_sites=max_sites)


def toy_steady_state(params: ToyParameters):
    """Exact stationary state by a dense bordered least-squares solve.

    The kernel equation ``M vec(rho) = 0`` is augmented with the trace
    row and solved by least squares; a rank deficiency of the bordered
    system signals a non-unique stationary state.

    Returns
    -------
    (ndarray, float)
        Hermitian trace-one stationary state and the supremum norm of
        ``M vec(rho)``.
    """
    gen = toy_generator(params).toarray()
    dim = params.n_levels + 1
    trace_row = np.zeros(dim * dim, dtype=complex)
    trace_row[np.arange(dim) * dim + np.arange(dim)] = 1.0
    bordered = np.vstack([gen, trace_row])
    rhs = np.zeros(dim * dim + 1, dtype=complex)
    rhs[-1] = 1.0
    solution, _, rank, _ = np.linalg.lstsq(bordered, rhs, rcond=None)
    if rank < dim * dim:
        raise DegenerateKernelError(
            f"bordered system rank {rank} < {dim * dim}; stationary state is not unique"
        )
    rho = _hermitize(solution, dim)
    residual = float(np.abs(gen @ rho.flatten(order="F")).max())
    return rho, residual


def toy_ness_current(params: ToyParameters) -> float:
    """Exact stationary current of the companion model.

    The expectation of the summed bond current; in the stationary
    state every bond carries the same share. Positive for positive
    bias: the drive refills at ``|K>`` and empties at ``|1>``, pushing
    probability down the ladder.
    """
    rho, _ = toy_steady_state(params)
    current = toy_current_operator(params.n_levels).toarray()
    return float(np.trace(current @ rho).real)


def toy_closed_form(params: ToyParameters) -> float:
    """Perturbative stationary current, exact in the large-shift limit.

    Evaluates

    ``<J> = (K-1) (8 gamma f + (1-f) f Gamma)
            / [(K+1) - 2(K-2) f + (K-1) f^2] / Delta^2``,

    valid for a large level shift, weak drive and weak dephasing. At
    maximal bias it reduces to ``2 (K-1) gamma / Delta^2``, and at zero
    dephasing near maximal bias to ``(K-1)(1-f) Gamma / (4 Delta^2)``.
    The caller owns the validity judgment; the formula is evaluated as
    stated for any parameters.
    """
    k_levels = params.n_levels
    f = params.bias
    numer = (k_levels - 1) * (8 * params.dephasing * f + (1 - f) * f * params.coupling)
    denom = (k_levels + 1) - 2 * (k_levels - 2) * f + (k_levels - 1) * f**2
    return numer / denom / params.interaction**2


def toy_dark_state(n_levels: int, interaction: float) -> np.ndarray:
    """Normalized dark-state ansatz of the maximally driven ladder.

    The state ``sum_{k=0}^{K-1} |2 Delta|^{-k} |K-k>`` concentrates on
    the shifted level with geometrically suppressed tails toward the
    ladder entrance; the amplitude on ``|1>`` scales as
    ``|2 Delta|^{1-K}`` irrespective of the sign of the shift. The
    auxiliary state carries no weight.
    """
    if abs(interaction) <= 0.5:
        raise ValueError("the dark-state ansatz needs |interaction| > 1/2")
    amplitudes = np.zeros(n_levels + 1)
    base = 1.0 / abs(2.0 * interaction)
    amplitudes[:n_levels] = base ** np.arange(n_levels - 1, -1, -1)
    return amplitudes / np.linalg.norm(amplitudes)


def dark_state_overlap(n_levels: int, interaction: float) -> float:
    """Overlap of the dark-state ansatz with the exact extremal eigenstate.

    Diagonalizes the configuration block of the ladder Hamiltonian and
    compares the ansatz against the eigenstate isolated by the level
    shift (highest for positive shift, lowest for negative).
    """
    params = ToyParameters(n_levels=n_levels, interaction=interaction)
    block = toy_hamiltonian(params).toarray()[:n_levels, :n_levels]
    _, vectors = np.linalg.eigh(block)
    exact = vectors[:, -1] if interaction >= 0 else vectors[:, 0]
    ansatz = toy_dark_state(n_levels, interaction)[:n_levels]
    return float(abs(np.dot(ansatz, exact)))


def correspondence_check(n_levels: int, interaction: float, coupling: float, gamma_grid):
    """Dephasing versus backward-pumping correspondence, point by point.

    Near maximal drive a small dephasing rate ``gamma`` acts like a
    reduced bias ``f = 1 - 8 gamma / Gamma``. For each requested rate
    the exact current of the dephased, maximally driven model is
    compared with the exact current of the clean model at the mapped
    bias.

    Parameters
    ----------
    n_levels, interaction, coupling : int, float, float
        Ladder size, level shift and drive rate.
    gamma_grid : sequence of float
        Dephasing rates; each must satisfy ``gamma <= Gamma / 8`` so
        the mapped bias stays in ``[0, 1]``.

    Returns
    -------
    list of dict
        Per-rate records with keys ``gamma``, ``mapped_bias``,
        ``dephased_current``, ``mapped_current``, ``mismatch`` (the
        relative difference, zero when both currents vanish).
    """
    records = []
    for gamma in gamma_grid:
        mapped_bias = 1.0 - 8.0 * gamma / coupling
        if not 0.0 <= mapped_bias <= 1.0:
            raise ValueError(
                f"dephasing {gamma} maps to bias {mapped_bias} outside [0, 1]"
            )
        dephased = toy_ness_current(
            ToyParameters(
                n_levels=n_levels,
                interaction=interaction,
                coupling=coupling,
                bias=1.0,
                dephasing=gamma,
            )
        )
        mapped = toy_ness_current(
            ToyParameters(
                n_levels=n_levels,
                interaction=interaction,
                coupling=coupling,
                bias=mapped_bias,
                dephasing=0.0,
            )
        )
        scale = max(abs(dephased), abs(mapped))
        mismatch = 0.0 if scale < 1e-14 else abs(dephased - mapped) / scale
        records.append(
            {
                "gamma": float(gamma),
                "mapped_bias": mapped_bias,
                "dephased_current": dephased,
                "mapped_current": mapped,
                "mismatch": mismatch,
            }
        )
    return records
