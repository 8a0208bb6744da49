"""Sparse operator builders for the driven chain.

All builders are pure functions of `ChainParameters` (or plain sizes)
returning ``scipy.sparse.csr_matrix`` in the occupation basis defined in
`drivenchain.basis`.  Nearest-neighbour hopping needs no Jordan-Wigner
string, so matrices are assembled directly from on-site 2x2 blocks; the
result coincides with the XXZ spin-chain form of the same model.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .basis import dimension
from .parameters import ChainParameters

__all__ = [
    "site_operator",
    "bond_operator",
    "build_hamiltonian",
    "build_jump_operators",
    "current_operator",
    "number_operator",
    "kinetic_operator",
    "total_number_operator",
]

# On-site blocks in the {|0>, |1>} occupation basis.  LOWER removes a
# particle (c in the string-free picture), RAISE adds one.
IDENT2 = np.eye(2)
RAISE = np.array([[0.0, 0.0], [1.0, 0.0]])
LOWER = np.array([[0.0, 1.0], [0.0, 0.0]])
NUMBER = np.array([[0.0, 0.0], [0.0, 1.0]])

DENSE_BASIS_CAP = 14


def site_operator(block, site: int, n_sites: int) -> sp.csr_matrix:
    """Embed a 2x2 block at a single site (1-based) of the chain."""
    if not 1 <= site <= n_sites:
        raise ValueError(f"site {site} outside chain of {n_sites} sites")
    left = sp.identity(1 << (site - 1), format="csr", dtype=complex)
    right = sp.identity(1 << (n_sites - site), format="csr", dtype=complex)
    return sp.kron(left, sp.kron(sp.csr_matrix(block, dtype=complex), right), format="csr")


def bond_operator(block_left, block_right, site: int, n_sites: int) -> sp.csr_matrix:
    """Embed a product of 2x2 blocks on sites ``(site, site + 1)``."""
    if not 1 <= site <= n_sites - 1:
        raise ValueError(f"bond {site} outside chain of {n_sites} sites")
    pair = np.kron(np.asarray(block_left, dtype=complex), np.asarray(block_right, dtype=complex))
    left = sp.identity(1 << (site - 1), format="csr", dtype=complex)
    right = sp.identity(1 << (n_sites - site - 1), format="csr", dtype=complex)
    return sp.kron(left, sp.kron(sp.csr_matrix(pair), right), format="csr")


def build_hamiltonian(params: ChainParameters, max_sites: int = DENSE_BASIS_CAP) -> sp.csr_matrix:
    """Chain Hamiltonian in the full occupation basis.

    Implements

        H = sum_j [ (tau/2)(c_j^+ c_{j+1} + h.c.)
                    + Delta (n_j - 1/2)(n_{j+1} - 1/2) ]
            + B sum_j (-1)^j n_j

    with the interaction constant kept, so sector spectra carry the
    documented offset ``Delta (N-1)/4`` relative to the pure density
    product.  Hermitian by construction; commutes with the total particle
    number.

    Parameters
    ----------
    params : ChainParameters
        Physical parameters; ``hopping`` is ``tau``.
    max_sites : int
        Guard against accidental huge allocations; chains longer than
        this are rejected (matrix-product methods cover that regime).
    """
    n = params.n_sites
    if n > max_sites:
        raise ValueError(
            f"n_sites = {n} exceeds the dense-basis cap of {max_sites}; "
            "use the matrix-product engine for longer chains"
        )
    d = dimension(n)
    ham = sp.csr_matrix((d, d), dtype=complex)
    half_tau = 0.5 * params.hopping
    shifted = NUMBER - 0.5 * IDENT2
    for j in range(1, n):
        ham = ham + half_tau * (
            bond_operator(RAISE, LOWER, j, n) + bond_operator(LOWER, RAISE, j, n)
        )
        ham = ham + params.interaction * bond_operator(shifted, shifted, j, n)
    if params.staggered != 0.0:
        for j in range(1, n + 1):
            ham = ham + params.staggered * (-1) ** j * site_operator(NUMBER, j, n)
    return ham.tocsr()


def build_jump_operators(params: ChainParameters) -> list[tuple[sp.csr_matrix, str]]:
    """Boundary-drive and dephasing jump operators with labels.

    Returns the four boundary operators

        L+ = sqrt(Gamma (1 - f) / 2) c_1      (drain at site 1)
        L- = sqrt(Gamma (1 + f) / 2) c_1^+    (inject at site 1)
        R+ = sqrt(Gamma (1 + f) / 2) c_N      (drain at site N)
        R- = sqrt(Gamma (1 - f) / 2) c_N^+    (inject at site N)

    followed by one dephasing operator ``sqrt(gamma) (1 - 2 n_j)`` per
    site.  The dephasing operators are omitted entirely when
    ``gamma = 0``; boundary operators with zero prefactor (at ``|f| = 1``)
    are kept so the labelled set always has the same shape.
    """
    n = params.n_sites
    gam, f = params.coupling, params.bias
    ops = [
        (np.sqrt(gam * (1 - f) / 2) * site_operator(LOWER, 1, n), "L+"),
        (np.sqrt(gam * (1 + f) / 2) * site_operator(RAISE, 1, n), "L-"),
        (np.sqrt(gam * (1 + f) / 2) * site_operator(LOWER, n, n), "R+"),
        (np.sqrt(gam * (1 - f) / 2) * site_operator(RAISE, n, n), "R-"),
    ]
    if params.dephasing > 0:
        root = np.sqrt(params.dephasing)
        for j in range(1, n + 1):
            ops.append((root * site_operator(IDENT2 - 2 * NUMBER, j, n), f"deph{j}"))
    return ops


def current_operator(site: int, n_sites: int) -> sp.csr_matrix:
    """Particle-current operator on bond ``(site, site + 1)``.

    ``J_j = i (c_{j+1}^+ c_j - c_j^+ c_{j+1})`` in the string-free
    picture, so ``J_1 |10> = i |01>`` and ``J_1 |01> = -i |10>``.  The
    sign is fixed so that the stationary current of the driven
    noninteracting chain is negative for positive bias, matching the
    closed form in `drivenchain.predictions.delta0_current`.
    """
    if not 1 <= site <= n_sites - 1:
        raise ValueError(f"current bond {site} outside chain of {n_sites} sites")
    return (
        1j * (bond_operator(LOWER, RAISE, site, n_sites) - bond_operator(RAISE, LOWER, site, n_sites))
    ).tocsr()


def number_operator(site: int, n_sites: int) -> sp.csr_matrix:
    """On-site density ``n_j``."""
    return site_operator(NUMBER, site, n_sites)


def kinetic_operator(n_sites: int) -> sp.csr_matrix:
    """Bond-summed kinetic operator ``sum_j (c_j^+ c_{j+1} + h.c.)``.

    The dephasing energy-dissipation rate of a state is
    ``-2 gamma <kinetic>``, measured by `drivenchain.observables.measure`.
    """
    d = dimension(n_sites)
    op = sp.csr_matrix((d, d), dtype=complex)
    for j in range(1, n_sites):
        op = op + bond_operator(RAISE, LOWER, j, n_sites) + bond_operator(LOWER, RAISE, j, n_sites)
    return op.tocsr()


def total_number_operator(n_sites: int) -> sp.csr_matrix:
    """Total particle number ``sum_j n_j``."""
    d = dimension(n_sites)
    op = sp.csr_matrix((d, d), dtype=complex)
    for j in range(1, n_sites + 1):
        op = op + number_operator(j, n_sites)
    return op.tocsr()
