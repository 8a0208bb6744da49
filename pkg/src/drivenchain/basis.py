"""Occupation-number basis conventions shared by every module.

A chain of ``N`` spinless-fermion sites is encoded in the computational
basis ``|n_1 n_2 ... n_N>`` with site 1 as the most significant bit:

    index(n_1 ... n_N) = sum_j n_j * 2**(N - j)

so ``|100...0>`` is index ``2**(N-1)`` and ``|00...01>`` is index 1.
Nearest-neighbour hopping carries no Jordan-Wigner string, so all
operators are built directly in this hardcore-boson (spin) picture.

Density matrices are vectorized by column stacking: the entry
``rho[row, col]`` of a ``d x d`` matrix sits at position ``col * d + row``
of ``vec(rho)``, which is ``rho.flatten(order="F")`` in NumPy terms.
Every superoperator in the package acts on vectors in this layout.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "dimension",
    "occupations",
    "index_of",
    "particle_numbers",
    "sector_indices",
    "sector_dimension",
    "vec_index",
    "number_conserving_vec_indices",
]


def dimension(n_sites: int) -> int:
    """Hilbert-space dimension ``2**n_sites`` of the full chain."""
    return 1 << n_sites


def occupations(index: int, n_sites: int) -> np.ndarray:
    """Occupation numbers ``(n_1, ..., n_N)`` of a basis index.

    Parameters
    ----------
    index : int
        Basis-state index in ``[0, 2**n_sites)``.
    n_sites : int
        Chain length ``N``.

    Returns
    -------
    numpy.ndarray
        Integer array of length ``n_sites`` with ``n_j`` at position
        ``j - 1`` (site labels are 1-based throughout the package).
    """
    if not 0 <= index < dimension(n_sites):
        raise ValueError(f"index {index} outside basis of {n_sites} sites")
    return np.array([(index >> (n_sites - j)) & 1 for j in range(1, n_sites + 1)])


def index_of(occs) -> int:
    """Basis index of an occupation pattern, inverse of `occupations`."""
    occs = np.asarray(occs)
    if occs.ndim != 1 or not np.all((occs == 0) | (occs == 1)):
        raise ValueError("occupations must be a flat 0/1 sequence")
    n_sites = occs.size
    return int(sum(int(n) << (n_sites - j) for j, n in enumerate(occs, start=1)))


def particle_numbers(n_sites: int) -> np.ndarray:
    """Total particle number of every basis state, as a vector of length 2**N."""
    states = np.arange(dimension(n_sites), dtype=np.uint64)
    return np.bitwise_count(states).astype(np.int64)


def sector_indices(n_sites: int, n_particles: int) -> np.ndarray:
    """Indices of all basis states with exactly ``n_particles`` fermions.

    The indices are returned in increasing order, which fixes the basis
    ordering used for sector-restricted spectra.
    """
    if not 0 <= n_particles <= n_sites:
        raise ValueError(f"sector {n_particles} outside 0..{n_sites}")
    return np.flatnonzero(particle_numbers(n_sites) == n_particles)


def sector_dimension(n_sites: int, n_particles: int) -> int:
    """Binomial dimension C(N, n) of a particle-number sector."""
    from math import comb

    return comb(n_sites, n_particles)


def vec_index(row: int, col: int, dim: int) -> int:
    """Position of matrix entry ``(row, col)`` in the column-stacked vector."""
    return col * dim + row


def number_conserving_vec_indices(n_sites: int) -> np.ndarray:
    """Vectorized positions ``(row, col)`` with equal particle number.

    The Lindblad generator of the driven chain maps this subspace into
    itself (the Hamiltonian conserves particle number and each jump
    operator changes the number on both sides of ``rho`` equally), and a
    driven chain relaxes into it, so stationary-state solvers may restrict
    the superoperator to these positions.  At ``N = 8`` this cuts the
    vectorized dimension from 65536 to 12870.
    """
    pn = particle_numbers(n_sites)
    d = dimension(n_sites)
    flat = np.arange(d * d)
    rows = flat % d
    cols = flat // d
    return np.flatnonzero(pn[rows] == pn[cols])
