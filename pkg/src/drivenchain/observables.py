"""Observables of exact density matrices.

`measure` collects everything the analysis layer consumes into one
record: bond currents and their mean, the density profile, the full
density-density covariance, the operator-space entanglement entropy
across the central cut, purity, particle-number-sector weights, and the
dephasing energy-dissipation rate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .basis import particle_numbers
from .operators import current_operator, kinetic_operator
from .parameters import ChainParameters

__all__ = ["ObservableRecord", "measure", "trace_distance", "smallest_eigenvalue"]


@dataclass
class ObservableRecord:
    """Derived quantities of one stationary (or evolved) state."""

    current: float
    current_profile: np.ndarray
    density_profile: np.ndarray
    correlations: np.ndarray
    entropy: float
    purity: float
    sector_probs: np.ndarray
    dissipation: float
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        """JSON-friendly representation with lists instead of arrays."""
        return {
            "current": self.current,
            "current_profile": list(map(float, self.current_profile)),
            "density_profile": list(map(float, self.density_profile)),
            "correlations": [list(map(float, row)) for row in self.correlations],
            "entropy": self.entropy,
            "purity": self.purity,
            "sector_probs": list(map(float, self.sector_probs)),
            "dissipation": self.dissipation,
        }


def _expval(op: sp.spmatrix, rho: np.ndarray) -> complex:
    """tr(op @ rho) without forming the product."""
    return complex(op.multiply(rho.T).sum())


def operator_schmidt_entropy(rho: np.ndarray, n_sites: int) -> float:
    """Entanglement entropy of the state regarded as a vector of operators.

    The density matrix is reshaped into a map from left-half to
    right-half operator components (cut after site ``N // 2``; the
    single-site operator basis is Hilbert-Schmidt orthonormal, so the
    spectrum does not depend on the basis choice), its singular values
    are normalized to unit square sum, and the base-2 Shannon entropy of
    the squares is returned.  A product of half-chain operators, the
    identity in particular, gives exactly zero.
    """
    n_left = n_sites // 2
    dl, dr = 1 << n_left, 1 << (n_sites - n_left)
    reshaped = (
        rho.reshape(dl, dr, dl, dr).transpose(0, 2, 1, 3).reshape(dl * dl, dr * dr)
    )
    svals = np.linalg.svd(reshaped, compute_uv=False)
    weights = svals**2
    weights = weights / weights.sum()
    weights = weights[weights > 1e-300]
    return float(-(weights * np.log2(weights)).sum())


def measure(rho: np.ndarray, params: ChainParameters) -> ObservableRecord:
    """Populate an `ObservableRecord` from a dense density matrix.

    Parameters
    ----------
    rho : ndarray
        Hermitian, trace-one state of the chain.
    params : ChainParameters
        Chain description; sets the dephasing rate entering the
        dissipation observable and the chain length.

    Returns
    -------
    ObservableRecord
    """
    n = params.n_sites
    rho = np.asarray(rho, dtype=complex)

    diag = np.real(np.diag(rho))
    numbers = particle_numbers(n)

    # Diagonal observables come straight from the populations.
    occ_bits = np.array(
        [[(s >> (n - j)) & 1 for j in range(1, n + 1)] for s in range(rho.shape[0])]
    )
    density = occ_bits.T @ diag
    pair_mean = np.einsum("si,sj,s->ij", occ_bits, occ_bits, diag)
    correlations = pair_mean - np.outer(density, density)

    sector_probs = np.array([diag[numbers == k].sum() for k in range(n + 1)])

    profile = np.array(
        [float(_expval(current_operator(j, n), rho).real) for j in range(1, n)]
    )
    current = float(profile.mean()) if profile.size else 0.0

    kinetic = float(_expval(kinetic_operator(n), rho).real)
    dissipation = -2.0 * params.dephasing * kinetic

    return ObservableRecord(
        current=current,
        current_profile=profile,
        density_profile=density,
        correlations=correlations,
        entropy=operator_schmidt_entropy(rho, n),
        purity=float(np.sum(np.abs(rho) ** 2)),
        sector_probs=sector_probs,
        dissipation=dissipation,
        extra={"kinetic": kinetic},
    )


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Half the trace norm of the difference of two states."""
    diff = np.asarray(rho) - np.asarray(sigma)
    diff = 0.5 * (diff + diff.conj().T)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))


def smallest_eigenvalue(rho: np.ndarray) -> float:
    """Minimum eigenvalue, for numerical-positivity checks."""
    herm = 0.5 * (np.asarray(rho) + np.asarray(rho).conj().T)
    return float(np.linalg.eigvalsh(herm)[0])
