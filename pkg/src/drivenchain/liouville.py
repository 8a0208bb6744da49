"""Vectorized Lindblad generator and stationary-state solvers.

The master equation

    d rho / dt = -i [H, rho] + sum_k ( L_k rho L_k^+
                                       - (1/2) {L_k^+ L_k, rho} )

is mapped onto a sparse matrix ``M`` acting on the column-stacked vector
``vec(rho)`` (see `drivenchain.basis` for the layout), so finding the
nonequilibrium stationary state (NESS) becomes a kernel problem
``M x = 0``.  Three complementary routes are provided:

* `evolve_to_ness`, fixed-step fourth-order time integration.  The fixed
  point of the integration map is exactly the kernel of ``M`` (the
  stability polynomial factor is invertible inside the stability
  region), so accuracy of the trajectory is irrelevant; only stability
  constrains the step.
* `ness_nullspace`, a shift-inverted Arnoldi solve for the two smallest
  eigenvalues, which also certifies kernel uniqueness.
* `steady_state`, the high-level entry point.  It restricts ``M`` to the
  particle-number-conserving subspace (the NESS of the driven chain
  lives there), then solves the kernel by a bordered direct
  factorization, an incomplete-LU-preconditioned iteration, Arnoldi, or
  time evolution.

Near the insulating corner of parameter space (maximal bias, zero
dephasing, strong interaction) the spectral gap of ``M`` closes
exponentially; there time evolution and preconditioned iterations stall
and the direct factorization is the only reliable route.  `steady_state`
falls back automatically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .basis import number_conserving_vec_indices
from .operators import build_hamiltonian, build_jump_operators, current_operator
from .parameters import ChainParameters

__all__ = [
    "ConvergenceReport",
    "DegenerateKernelError",
    "NonConvergenceError",
    "vectorize",
    "suggested_step",
    "evolve_to_ness",
    "ness_nullspace",
    "steady_state",
]

VECTORIZE_CAP = 10  # largest n_sites for full vectorized superoperators
NULLSPACE_CAP = 8  # largest n_sites for kernel solves


class DegenerateKernelError(RuntimeError):
    """The generator has (numerically) more than one stationary state."""


class NonConvergenceError(RuntimeError):
    """A stationary-state solve failed to reach the requested tolerance."""


@dataclass
class ConvergenceReport:
    """Diagnostics of a stationary-state solve.

    ``residual`` is the supremum norm of ``M vec(rho)`` for the returned
    state, ``homogeneity`` the largest deviation of any bond current
    from the bond average, and ``model_time`` the simulated time (zero
    for algebraic solves).
    """

    converged: bool
    residual: float
    homogeneity: float
    model_time: float = 0.0
    steps: int = 0
    method: str = ""
    message: str = ""
    extra: dict = field(default_factory=dict)


def _as_matrices(jumps):
    """Accept jump operators either bare or as (matrix, label) pairs."""
    out = []
    for item in jumps:
        if isinstance(item, (tuple, list)):
            out.append(sp.csr_matrix(item[0]))
        else:
            out.append(sp.csr_matrix(item))
    return out


def vectorize(hamiltonian, jumps, max_sites: int = VECTORIZE_CAP) -> sp.csr_matrix:
    """Assemble the sparse superoperator of the master equation.

    Parameters
    ----------
    hamiltonian : sparse matrix
        Hermitian generator of the coherent part.
    jumps : sequence
        Jump operators, bare matrices or (matrix, label) pairs.
    max_sites : int
        Memory guard: superoperator dimension is the square of the
        Hilbert dimension, so chains beyond ``max_sites`` are rejected.

    Returns
    -------
    scipy.sparse.csr_matrix
        Matrix ``M`` with ``d vec(rho) / dt = M vec(rho)`` in the
        column-stacked layout.
    """
    ham = sp.csr_matrix(hamiltonian, dtype=complex)
    d = ham.shape[0]
    if ham.shape[0] != ham.shape[1]:
        raise ValueError("hamiltonian must be square")
    if d > (1 << max_sites):
        raise ValueError(
            f"Hilbert dimension {d} exceeds the vectorized-solver cap 2**{max_sites}"
        )
    ident = sp.identity(d, format="csr", dtype=complex)
    gen = -1j * (sp.kron(ident, ham) - sp.kron(ham.T, ident))
    for lop in _as_matrices(jumps):
        if lop.shape != (d, d):
            raise ValueError("jump operator dimension mismatch")
        ldl = (lop.conj().T @ lop).tocsr()
        gen = gen + sp.kron(lop.conj(), lop)
        gen = gen - 0.5 * sp.kron(ident, ldl)
        gen = gen - 0.5 * sp.kron(ldl.T, ident)
    return gen.tocsr()


def suggested_step(hamiltonian, params: ChainParameters) -> float:
    """Conservative integration step ``0.05 / (|H| + Gamma + N gamma)``.

    ``|H|`` is the row-sum norm of the Hamiltonian, an upper bound on
    its spectral range.  The returned step is far inside the stability
    region of the fourth-order scheme; `evolve_to_ness` with
    ``step=None`` instead derives a stability-limited step from the
    assembled superoperator, which is much larger and converges to the
    same fixed point.
    """
    hnorm = abs(sp.csr_matrix(hamiltonian)).sum(axis=1).max()
    scale = float(hnorm) + params.coupling + params.n_sites * params.dephasing
    return 0.05 / scale


def _stability_step(superop) -> float:
    """Step from the row-sum bound on the spectral radius of ``M``."""
    bound = float(abs(superop).sum(axis=1).max())
    return 2.0 / max(bound, 1e-12)


def _chain_sites_of(dim: int) -> int | None:
    """Number of chain sites if ``dim`` is a power of two, else None."""
    n = dim.bit_length() - 1
    return n if (1 << n) == dim and n >= 2 else None


def _current_matrices(dim: int):
    n = _chain_sites_of(dim)
    if n is None:
        return None
    return [current_operator(j, n) for j in range(1, n)]


def _bond_currents(rho: np.ndarray, current_ops) -> np.ndarray:
    return np.array([float(np.trace(op @ rho).real) for op in current_ops])


def _homogeneity(rho: np.ndarray, current_ops) -> float:
    if not current_ops:
        return 0.0
    currents = _bond_currents(rho, current_ops)
    return float(np.max(np.abs(currents - currents.mean())))


def _hermitize(vec: np.ndarray, dim: int) -> np.ndarray:
    rho = vec.reshape((dim, dim), order="F")
    rho = 0.5 * (rho + rho.conj().T)
    trace = float(np.trace(rho).real)
    if abs(trace) < 1e-12:
        raise NonConvergenceError("stationary vector has vanishing trace")
    return rho / trace


def evolve_to_ness(
    superop,
    rho0: np.ndarray,
    step: float | None = None,
    tol: float = 1e-8,
    max_time: float = 5000.0,
    current_ops=None,
):
    """Integrate the master equation to its stationary state.

    Fixed-step fourth-order Runge-Kutta on ``vec(rho)``.  Convergence
    requires both the generator residual ``|M vec(rho)|_inf`` and the
    bond-current homogeneity to fall below ``tol``; residual alone can
    look small long before the slowest mode has decayed, and an
    inhomogeneous current profile is the telltale.

    Parameters
    ----------
    superop : sparse matrix
        Generator from `vectorize`.
    rho0 : ndarray
        Initial density matrix (Hermitian, unit trace).
    step : float, optional
        Integration step.  Default derives a stability-limited step from
        the row-sum bound on the spectral radius of the generator.
    tol : float
        Convergence tolerance for residual and homogeneity.
    max_time : float
        Model-time budget.  Near the insulating corner the gap closes
        exponentially and the budget will run out; the report then has
        ``converged=False`` and the caller decides what to do.
    current_ops : sequence, optional
        Bond-current matrices for the homogeneity check.  Built
        automatically for chain-shaped dimensions; pass an empty list to
        skip the check for non-chain generators.

    Returns
    -------
    (ndarray, ConvergenceReport)
        Hermitized, trace-normalized final state and diagnostics.
    """
    mat = sp.csr_matrix(superop)
    dim = int(math.isqrt(mat.shape[0]))
    if dim * dim != mat.shape[0]:
        raise ValueError("superoperator dimension is not a perfect square")
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (dim, dim):
        raise ValueError(f"initial state must be {dim} x {dim}")
    if np.max(np.abs(rho0 - rho0.conj().T)) > 1e-8:
        raise ValueError("initial state is not Hermitian")
    trace0 = complex(np.trace(rho0))
    if abs(trace0 - 1.0) > 1e-8:
        raise ValueError("initial state is not trace-normalized")

    if step is None:
        step = _stability_step(mat)
    if step <= 0:
        raise ValueError("step must be positive")
    if current_ops is None:
        current_ops = _current_matrices(dim) or []

    x = rho0.flatten(order="F")
    diag_idx = np.arange(dim) * dim + np.arange(dim)
    check_every = max(1, int(round(1.0 / step)) if step < 1.0 else 1)
    steps = 0
    elapsed = 0.0
    residual = float(np.max(np.abs(mat @ x)))
    homog = _homogeneity(rho0, current_ops)

    while elapsed < max_time:
        for _ in range(check_every):
            k1 = mat @ x
            k2 = mat @ (x + 0.5 * step * k1)
            k3 = mat @ (x + 0.5 * step * k2)
            k4 = mat @ (x + step * k3)
            x = x + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            steps += 1
            elapsed += step
            if elapsed >= max_time:
                break
        x = x / x[diag_idx].sum().real  # undo roundoff trace drift
        residual = float(np.max(np.abs(mat @ x)))
        if residual <= tol:
            rho = _hermitize(x, dim)
            homog = _homogeneity(rho, current_ops)
            if homog <= tol:
                return rho, ConvergenceReport(
                    converged=True,
                    residual=residual,
                    homogeneity=homog,
                    model_time=elapsed,
                    steps=steps,
                    method="evolve",
                )

    rho = _hermitize(x, dim)
    homog = _homogeneity(rho, current_ops)
    return rho, ConvergenceReport(
        converged=False,
        residual=residual,
        homogeneity=homog,
        model_time=elapsed,
        steps=steps,
        method="evolve",
        message=(
            "time budget exhausted before residual and current homogeneity "
            f"reached {tol:g} (slow relaxation is expected near the "
            "maximal-bias, zero-dephasing insulating point)"
        ),
    )


def _bordered_system(block: sp.csr_matrix, norm_cols: np.ndarray):
    """Replace one redundant row with the trace constraint.

    The generator's left kernel is the trace functional, so any row at a
    position where that functional is nonzero (a diagonal entry of rho)
    may be traded for the normalization row without losing rank.  The
    bordered system ``A x = e_r`` then has the trace-one stationary
    vector as its unique solution.
    """
    r0 = int(norm_cols[0])
    coo = block.tocoo()
    keep = coo.row != r0
    rows = np.concatenate([coo.row[keep], np.full(norm_cols.size, r0)])
    cols = np.concatenate([coo.col[keep], norm_cols])
    data = np.concatenate([coo.data[keep], np.ones(norm_cols.size, dtype=complex)])
    bordered = sp.csr_matrix((data, (rows, cols)), shape=block.shape)
    rhs = np.zeros(block.shape[0], dtype=complex)
    rhs[r0] = 1.0
    return bordered, rhs


def _kernel_direct(block, norm_cols) -> np.ndarray:
    bordered, rhs = _bordered_system(block, norm_cols)
    lu = spla.splu(bordered.tocsc(), permc_spec="MMD_AT_PLUS_A")
    return lu.solve(rhs)


def _kernel_ilu(block, norm_cols, drop_tol=1e-4, fill_factor=10.0, maxiter=300) -> np.ndarray:
    bordered, rhs = _bordered_system(block, norm_cols)
    try:
        precond = spla.spilu(bordered.tocsc(), drop_tol=drop_tol, fill_factor=fill_factor)
    except RuntimeError as exc:  # singular incomplete factorization
        raise NonConvergenceError(f"incomplete factorization failed: {exc}") from exc
    op = spla.LinearOperator(bordered.shape, precond.solve)
    sol, info = spla.lgmres(bordered, rhs, M=op, rtol=1e-12, atol=0.0, maxiter=maxiter)
    res = np.linalg.norm(bordered @ sol - rhs)
    if info != 0 or res > 1e-9:
        raise NonConvergenceError(
            f"preconditioned iteration stalled (info={info}, residual={res:.2e}); "
            "typical near the insulating point where the gap closes"
        )
    return sol


def _kernel_arnoldi(block, sigma_scale: float, degeneracy_tol: float = 1e-10):
    """Two smallest-magnitude eigenpairs by shift-inverted Arnoldi.

    Returns the kernel vector and the magnitude of the subdominant
    eigenvalue, raising `DegenerateKernelError` when that too sits at
    zero within ``degeneracy_tol``.
    """
    sigma = -1e-6 * max(1.0, sigma_scale)
    vals, vecs = spla.eigs(block.tocsc(), k=2, sigma=sigma, which="LM")
    order = np.argsort(np.abs(vals))
    lead, sub = np.abs(vals[order])
    if lead > 1e-7 * max(1.0, sigma_scale):
        raise NonConvergenceError(
            f"no eigenvalue near zero (smallest magnitude {lead:.2e})"
        )
    if sub < degeneracy_tol:
        raise DegenerateKernelError(
            f"two eigenvalues within {degeneracy_tol:g} of zero "
            f"({lead:.2e}, {sub:.2e}); stationary state is not unique"
        )
    return vecs[:, order[0]], float(sub)


def ness_nullspace(superop, method: str = "shift-invert"):
    """Stationary state as the kernel vector of the generator.

    The kernel vector is reshaped, Hermitized as ``(rho + rho^+)/2``
    (it is only defined up to scale and phase), and trace-normalized.

    Parameters
    ----------
    superop : sparse matrix
        Full generator on a square-dimension space.
    method : str
        ``"shift-invert"`` (default) computes the two eigenvalues of
        smallest magnitude by shift-inverted Arnoldi iteration and
        raises `DegenerateKernelError` if both vanish within 1e-10.
        ``"direct"`` solves the trace-bordered linear system instead,
        which is faster but assumes uniqueness.

    Returns
    -------
    ndarray
        Hermitian, trace-one stationary density matrix.
    """
    mat = sp.csr_matrix(superop)
    dim = int(math.isqrt(mat.shape[0]))
    if dim * dim != mat.shape[0]:
        raise ValueError("superoperator dimension is not a perfect square")
    diag_positions = np.arange(dim) * dim + np.arange(dim)
    if method == "shift-invert":
        scale = float(np.abs(mat.diagonal()).max())
        vec, _ = _kernel_arnoldi(mat, scale)
    elif method == "direct":
        vec = _kernel_direct(mat, diag_positions)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _hermitize(vec, dim)


def _project_block(mat: sp.csr_matrix, indices: np.ndarray) -> sp.csr_matrix:
    """Restrict a sparse matrix to a subset of its index space."""
    lookup = -np.ones(mat.shape[0], dtype=np.int64)
    lookup[indices] = np.arange(indices.size)
    coo = mat.tocoo()
    keep = (lookup[coo.row] >= 0) & (lookup[coo.col] >= 0)
    return sp.csr_matrix(
        (coo.data[keep], (lookup[coo.row[keep]], lookup[coo.col[keep]])),
        shape=(indices.size, indices.size),
    )


def steady_state(
    params: ChainParameters,
    method: str = "auto",
    tol: float = 1e-10,
    max_time: float = 5000.0,
    max_sites: int = NULLSPACE_CAP,
):
    """Stationary state of the driven chain, restricted to the number-conserving block.

    The generator preserves the subspace of density-matrix entries whose
    row and column carry equal particle number, and for nonzero bias the
    unique stationary state lies inside it, so the kernel problem is
    solved on that block (dimension 12870 instead of 65536 at N=8) and
    embedded back.

    Parameters
    ----------
    params : ChainParameters
        Chain description.
    method : str
        ``"auto"`` picks a direct factorization for short chains and the
        preconditioned iteration with direct fallback at the cap;
        ``"direct"``, ``"ilu"``, ``"shift-invert"`` and ``"evolve"``
        force a specific route.
    tol : float
        Convergence tolerance (evolution route) and residual target.
    max_time : float
        Model-time budget for the evolution route.
    max_sites : int
        Kernel-solver size cap; chains beyond it need the
        matrix-product engine.

    Returns
    -------
    (ndarray, ConvergenceReport)
    """
    n = params.n_sites
    if method != "evolve" and n > max_sites:
        raise ValueError(
            f"n_sites = {n} exceeds the kernel-solver cap {max_sites}; "
            "use the matrix-product engine or method='evolve'"
        )
    if method == "evolve" and n > VECTORIZE_CAP:
        raise ValueError(f"n_sites = {n} exceeds the vectorized-evolution cap {VECTORIZE_CAP}")

    ham = build_hamiltonian(params)
    jumps = build_jump_operators(params)
    gen = vectorize(ham, jumps, max_sites=max(VECTORIZE_CAP, n))
    dim = ham.shape[0]
    block_idx = number_conserving_vec_indices(n)
    block = _project_block(gen, block_idx)
    diag_positions = np.arange(dim) * dim + np.arange(dim)
    norm_cols = np.searchsorted(block_idx, diag_positions)

    chosen = method
    if method == "auto":
        chosen = "direct" if n <= 7 else "ilu"

    vec_block = None
    message = ""
    subgap = None
    if chosen == "evolve":
        x = np.zeros(block_idx.size, dtype=complex)
        x[norm_cols] = 1.0 / dim
        step = _stability_step(block)
        steps = 0
        elapsed = 0.0
        check_every = max(1, int(round(1.0 / step)))
        residual = float(np.max(np.abs(block @ x)))
        while elapsed < max_time and residual > tol:
            for _ in range(check_every):
                k1 = block @ x
                k2 = block @ (x + 0.5 * step * k1)
                k3 = block @ (x + 0.5 * step * k2)
                k4 = block @ (x + step * k3)
                x = x + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                steps += 1
                elapsed += step
            x = x / x[norm_cols].sum().real
            residual = float(np.max(np.abs(block @ x)))
        vec_block = x
        if residual > tol:
            message = f"evolution stalled at residual {residual:.2e}"
        report_steps, report_time = steps, elapsed
    else:
        report_steps, report_time = 0, 0.0
        if chosen == "ilu":
            try:
                vec_block = _kernel_ilu(block, norm_cols)
            except NonConvergenceError as exc:
                message = f"preconditioned route fell back to direct ({exc})"
                chosen = "direct"
        if chosen == "direct":
            vec_block = _kernel_direct(block, norm_cols)
        elif chosen == "shift-invert":
            scale = float(np.abs(block.diagonal()).max())
            vec_block, subgap = _kernel_arnoldi(block, scale)
        elif vec_block is None:
            raise ValueError(f"unknown method {method!r}")

    full = np.zeros(dim * dim, dtype=complex)
    full[block_idx] = vec_block
    rho = _hermitize(full, dim)
    residual = float(np.max(np.abs(gen @ rho.flatten(order="F"))))
    homog = _homogeneity(rho, _current_matrices(dim) or [])
    converged = residual <= max(tol, 1e-8)
    report = ConvergenceReport(
        converged=converged,
        residual=residual,
        homogeneity=homog,
        model_time=report_time,
        steps=report_steps,
        method=chosen,
        message=message,
    )
    if subgap is not None:
        report.extra["subdominant_eigenvalue"] = subgap
    return rho, report
