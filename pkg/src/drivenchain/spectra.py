"""Particle-number-sector spectra and domain-wall eigenstates.

For strong interaction the extremal eigenstate of each sector is a
slightly dressed particle domain pinned to the left boundary, isolated
from the rest of the sector by a gap of order the interaction strength.
These states govern the stationary state near maximal bias, and their
density deviation from the sharp domain admits the closed form in
`drivenchain.predictions.domain_deviation`; this module supplies the
exact side of that comparison.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.sparse as sp

from .basis import index_of, sector_indices
from .operators import build_hamiltonian
from .parameters import ChainParameters

__all__ = [
    "sector_spectrum",
    "domain_density",
    "domain_state_deviation",
]

DENSE_EIGENSOLVE_CAP = 5000


def sector_spectrum(hamiltonian, n_particles: int, max_dim: int = DENSE_EIGENSOLVE_CAP):
    """Eigenpairs of a particle-number block of the Hamiltonian.

    Parameters
    ----------
    hamiltonian : sparse matrix
        Number-conserving Hamiltonian on the full chain basis.
    n_particles : int
        Sector label ``n`` in ``0..N``.
    max_dim : int
        Largest sector dimension accepted for the dense eigensolve.

    Returns
    -------
    (ndarray, ndarray)
        Energies in ascending order and the matching eigenvectors as
        columns, both in the sector basis ordered by increasing
        basis index (see `drivenchain.basis.sector_indices`).
    """
    ham = sp.csr_matrix(hamiltonian)
    n_sites = ham.shape[0].bit_length() - 1
    if (1 << n_sites) != ham.shape[0]:
        raise ValueError("hamiltonian dimension is not a power of two")
    idx = sector_indices(n_sites, n_particles)
    if idx.size > max_dim:
        raise ValueError(
            f"sector dimension {idx.size} exceeds the dense-eigensolve cap {max_dim}"
        )
    block = ham[np.ix_(idx, idx)].toarray()
    energies, vectors = np.linalg.eigh(block)
    return energies, vectors


def domain_density(n_particles: int, n_sites: int) -> np.ndarray:
    """Density profile of the sharp left-pinned domain ``|1..10..0>``."""
    return np.array([1.0 if j <= n_particles else 0.0 for j in range(1, n_sites + 1)])


def domain_state_deviation(params: ChainParameters, n_particles: int, max_dim: int = DENSE_EIGENSOLVE_CAP):
    """Exact domain state of a sector and its deviation profile.

    Identifies the extremal eigenstate of the sector (highest for
    repulsive interaction, lowest for attractive; the magnitude of the
    deviation does not depend on the sign), and returns its site
    densities compared against the sharp domain.

    Left- and right-pinned domains are degenerate under reflection with
    a tunneling splitting far below machine precision, so the raw
    extremal eigenvector is an arbitrary mixture of the pair. The
    left-pinned state is recovered by projecting the sharp domain
    configuration onto the near-degenerate extremal eigenspace; when
    that projection is small (weak interaction, no localized domain
    state) the bare extremal eigenvector is returned instead.

    Parameters
    ----------
    params : ChainParameters
        Chain description; ``interaction`` selects which spectral edge
        carries the domain state.
    n_particles : int
        Sector label.

    Returns
    -------
    dict
        ``energies`` (sector spectrum), ``state`` (extremal
        eigenvector), ``densities`` (its site densities), and
        ``deviation`` (absolute density difference from the sharp
        domain, one entry per site).
    """
    n_sites = params.n_sites
    ham = build_hamiltonian(params)
    energies, vectors = sector_spectrum(ham, n_particles, max_dim=max_dim)
    idx = sector_indices(n_sites, n_particles)

    pick = -1 if params.interaction >= 0 else 0
    edge = energies[pick]
    scale = max(1.0, float(np.abs(energies).max()))
    degenerate = np.abs(energies - edge) <= 1e-8 * scale
    subspace = vectors[:, degenerate]

    sharp = domain_density(n_particles, n_sites)
    target = int(np.searchsorted(idx, index_of(sharp.astype(int))))
    state = subspace @ subspace[target, :].conj()
    norm = np.linalg.norm(state)
    if norm >= 0.5:
        state = state / norm
    else:
        state = vectors[:, pick]
    weights = np.abs(state) ** 2
    densities = np.zeros(n_sites)
    for j in range(1, n_sites + 1):
        bits = (idx >> (n_sites - j)) & 1
        densities[j - 1] = float(weights[bits == 1].sum())

    deviation = np.abs(densities - sharp)
    return {
        "energies": energies,
        "state": state,
        "densities": densities,
        "deviation": deviation,
    }
