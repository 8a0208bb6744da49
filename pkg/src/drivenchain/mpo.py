"""Matrix-product-operator evolution of the driven chain.

The density matrix is stored as a chain of 3-index site tensors over
the elementary operator basis ``E_mu = |sigma><sigma'|`` with
``mu = 2 sigma' + sigma``, the column-stacked layout of the on-site
2x2 block. The basis is Hilbert-Schmidt orthonormal, so singular
values across any bond are the operator Schmidt coefficients of the
state and the entanglement entropy built from them is
representation invariant.

Evolution Trotterizes the master-equation generator into two-site
bond gates (hopping, interaction, and the single-site drive,
dephasing and field terms split between the adjacent bonds) and
applies them in a symmetric second-order sweep with singular-value
truncation, the time-evolving block decimation scheme acting on the
vectorized state. Nearest-neighbour hopping carries no Jordan-Wigner
string, so gates come straight from on-site blocks and the measured
correlations need no sign bookkeeping.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg as sla

from .liouville import ConvergenceReport
from .observables import ObservableRecord
from .operators import IDENT2, LOWER, NUMBER, RAISE
from .parameters import ChainParameters

__all__ = [
    "TruncationPolicy",
    "EvolutionSchedule",
    "MpoState",
    "mpo_identity",
    "mpo_from_product",
    "mpo_to_dense",
    "mpo_trace",
    "trotter_sweep",
    "run_to_ness_mpo",
    "measure_mpo",
    "save_checkpoint",
    "load_checkpoint",
]

CHECKPOINT_FORMAT_VERSION = 1

# Contraction weights: tr(O E_mu) = O[sigma', sigma], i.e. the operator
# flattened row-major over (sigma', sigma).
TRACE_WEIGHTS = IDENT2.flatten(order="C").astype(complex)


def operator_weights(block) -> np.ndarray:
    """Per-site contraction weights giving ``tr(O rho)`` for a 2x2 op."""
    return np.asarray(block, dtype=complex).flatten(order="C")


@dataclass(frozen=True)
class TruncationPolicy:
    """Singular-value truncation knobs of the sweep.

    Attributes
    ----------
    chi_max : int
        Hard cap on every bond dimension.
    svd_cutoff : float
        Relative singular-value threshold; values below
        ``svd_cutoff * s_max`` are discarded before the cap applies.
    renormalize_trace : bool
        Rescale the state to unit trace after every sweep. The exact
        gates are trace preserving, so with this off the trace drift
        diagnoses truncation loss.
    """

    chi_max: int = 128
    svd_cutoff: float = 1e-10
    renormalize_trace: bool = True

    def __post_init__(self):
        if self.chi_max < 1:
            raise ValueError(f"chi_max must be at least 1, got {self.chi_max}")
        if not 0 <= self.svd_cutoff < 1:
            raise ValueError(f"svd_cutoff must lie in [0, 1), got {self.svd_cutoff}")


@dataclass(frozen=True)
class EvolutionSchedule:
    """Stepping plan for the relaxation toward the stationary state.

    Attributes
    ----------
    stages : tuple of (dt, duration) pairs
        Executed in order; earlier stages are coarse burn-in, the last
        stage runs until the drift criterion fires or its duration is
        exhausted.
    drift_tol : float
        Convergence threshold on the current drift per unit model time,
        monitored at the probe bonds (first, central, last).
    check_every : float
        Model time between drift evaluations.
    truncation_budget : float
        Cumulative discarded-weight budget; exceeding it flags the run
        as accuracy limited.
    """

    stages: tuple = ((0.1, 40.0), (0.02, 1960.0))
    drift_tol: float = 1e-6
    check_every: float = 5.0
    truncation_budget: float = 1e-3

    def __post_init__(self):
        stages = tuple((float(dt), float(dur)) for dt, dur in self.stages)
        if not stages:
            raise ValueError("schedule needs at least one stage")
        for dt, dur in stages:
            if dt <= 0 or dur <= 0:
                raise ValueError(f"stage ({dt}, {dur}) must have positive dt and duration")
        object.__setattr__(self, "stages", stages)
        if self.drift_tol <= 0 or self.check_every <= 0 or self.truncation_budget <= 0:
            raise ValueError("tolerances and budgets must be positive")


class MpoState:
    """Matrix-product form of the density matrix.

    Attributes
    ----------
    tensors : list of ndarray
        One ``(left bond, 4, right bond)`` tensor per site.
    center : int or None
        Orthogonality center; tensors to its left are left
        orthonormal, to its right right orthonormal. ``None`` means
        unknown, and consumers canonicalize before relying on it.
    truncation_weight : float
        Cumulative relative weight discarded by all truncations.
    spectra : dict
        Normalized singular values per bond from the latest sweep that
        touched it.
    center_spectrum : ndarray or None
        Spectrum of the most recently truncated bond.
    """

    def __init__(self, tensors, center=None, truncation_weight=0.0, spectra=None):
        self.tensors = [np.asarray(t, dtype=complex) for t in tensors]
        if any(t.ndim != 3 or t.shape[1] != 4 for t in self.tensors):
            raise ValueError("site tensors must have shape (left, 4, right)")
        self.center = center
        self.truncation_weight = float(truncation_weight)
        self.spectra = dict(spectra) if spectra else {}
        self.center_spectrum = None

    @property
    def n_sites(self) -> int:
        return len(self.tensors)

    @property
    def bond_dims(self) -> list:
        """Internal bond dimensions, one per bond."""
        return [t.shape[2] for t in self.tensors[:-1]]

    def copy(self) -> "MpoState":
        dup = MpoState(
            list(self.tensors), self.center, self.truncation_weight, self.spectra
        )
        dup.center_spectrum = self.center_spectrum
        return dup

    def __repr__(self):
        return (
            f"MpoState(n_sites={self.n_sites}, bond_dims={self.bond_dims}, "
            f"center={self.center})"
        )


def mpo_identity(n_sites: int) -> MpoState:
    """The infinite-temperature state ``I / 2^N`` at bond dimension one."""
    if n_sites < 2:
        raise ValueError("need at least two sites")
    site = 0.5 * TRACE_WEIGHTS.reshape(1, 4, 1)
    return MpoState([site.copy() for _ in range(n_sites)])


def mpo_from_product(occupations) -> MpoState:
    """Pure product configuration ``|n><n|`` as a bond-dimension-1 MPO."""
    occ = [int(x) for x in occupations]
    if len(occ) < 2:
        raise ValueError("need at least two sites")
    if any(x not in (0, 1) for x in occ):
        raise ValueError("occupations must be 0 or 1")
    tensors = []
    for x in occ:
        vec = np.zeros(4, dtype=complex)
        vec[3 if x else 0] = 1.0
        tensors.append(vec.reshape(1, 4, 1))
    return MpoState(tensors)


def mpo_trace(state: MpoState) -> complex:
    """Trace of the represented operator by direct contraction."""
    vec = np.ones(1, dtype=complex)
    for tensor in state.tensors:
        vec = np.einsum("a,ayb,y->b", vec, tensor, TRACE_WEIGHTS)
    return complex(vec[0])


def _expect(state: MpoState, inserts: dict) -> complex:
    """Contract the chain with operator weights at selected sites.

    ``inserts`` maps 0-based site index to a length-4 weight vector;
    every other site contributes the trace weights. Returns
    ``tr(O rho)`` unnormalized.
    """
    vec = np.ones(1, dtype=complex)
    for i, tensor in enumerate(state.tensors):
        weights = inserts.get(i, TRACE_WEIGHTS)
        vec = np.einsum("a,ayb,y->b", vec, tensor, weights)
    return complex(vec[0])


def mpo_to_dense(state: MpoState, max_sites: int = 10) -> np.ndarray:
    """Reconstruct the dense density matrix (small chains only)."""
    n = state.n_sites
    if n > max_sites:
        raise ValueError(f"refusing dense reconstruction of {n} sites (cap {max_sites})")
    arr = state.tensors[0][0]
    for tensor in state.tensors[1:]:
        arr = np.tensordot(arr, tensor, axes=(-1, 0))
    arr = arr[..., 0].reshape((2,) * (2 * n))
    perm = [2 * i + 1 for i in range(n)] + [2 * i for i in range(n)]
    return arr.transpose(perm).reshape(1 << n, 1 << n)


# -- gate construction -------------------------------------------------


def _site_shares(site: int, n_sites: int):
    """(left, right) bond shares of a single-site generator term."""
    if site == 1:
        return 0.0, 1.0
    if site == n_sites:
        return 1.0, 0.0
    return 0.5, 0.5


def _to_site_major(colstacked: np.ndarray) -> np.ndarray:
    """Reorder a two-site superoperator into site-major (mu1, mu2) indexing.

    The input indexes vectorized two-site matrices column-stacked as
    ``(s1' s2') (s1 s2)``; the output groups per-site operator indices
    ``mu = 2 sigma' + sigma`` so the matrix acts on the fused physical
    legs of two adjacent MPO tensors.
    """
    return (
        colstacked.reshape((2,) * 8)
        .transpose(0, 2, 1, 3, 4, 6, 5, 7)
        .reshape(16, 16)
    )


def _bond_superoperator(params: ChainParameters, bond: int) -> np.ndarray:
    """Generator of one bond in site-major layout (16x16 dense).

    Contains the full two-site Hamiltonian of the bond plus the shares
    of the single-site terms assigned to it: boundary drives fall
    entirely into the first and last bond, bulk dephasing and the
    staggered field split half and half between the two bonds of each
    interior site.
    """
    n = params.n_sites
    j = bond
    if not 1 <= j <= n - 1:
        raise ValueError(f"bond {j} outside chain of {n} sites")
    _, w_right = _site_shares(j, n)
    w_left, _ = _site_shares(j + 1, n)

    shifted = NUMBER - 0.5 * IDENT2
    ham = 0.5 * params.hopping * (np.kron(RAISE, LOWER) + np.kron(LOWER, RAISE))
    ham = ham + params.interaction * np.kron(shifted, shifted)
    if params.staggered != 0.0:
        ham = ham + w_right * params.staggered * (-1) ** j * np.kron(NUMBER, IDENT2)
        ham = ham + w_left * params.staggered * (-1) ** (j + 1) * np.kron(IDENT2, NUMBER)

    gam, f = params.coupling, params.bias
    jumps = []
    if j == 1:
        jumps.append(np.sqrt(gam * (1 - f) / 2) * np.kron(LOWER, IDENT2))
        jumps.append(np.sqrt(gam * (1 + f) / 2) * np.kron(RAISE, IDENT2))
    if j + 1 == n:
        jumps.append(np.sqrt(gam * (1 + f) / 2) * np.kron(IDENT2, LOWER))
        jumps.append(np.sqrt(gam * (1 - f) / 2) * np.kron(IDENT2, RAISE))
    if params.dephasing > 0:
        deph = IDENT2 - 2 * NUMBER
        jumps.append(np.sqrt(params.dephasing * w_right) * np.kron(deph, IDENT2))
        jumps.append(np.sqrt(params.dephasing * w_left) * np.kron(IDENT2, deph))

    ident = np.eye(4)
    gen = -1j * (np.kron(ident, ham) - np.kron(ham.T, ident))
    for lop in jumps:
        ldl = lop.conj().T @ lop
        gen = gen + np.kron(lop.conj(), lop)
        gen = gen - 0.5 * np.kron(ident, ldl)
        gen = gen - 0.5 * np.kron(ldl.T, ident)
    return _to_site_major(gen)


@lru_cache(maxsize=64)
def _gate_set(params: ChainParameters, dt: float) -> tuple:
    """Exponentiated bond gates for one time step, cached per (params, dt)."""
    return tuple(
        sla.expm(dt * _bond_superoperator(params, j))
        for j in range(1, params.n_sites)
    )


# -- canonical form ----------------------------------------------------


def _svd(mat: np.ndarray):
    """SVD with a fallback to the slower but sturdier LAPACK driver."""
    try:
        return np.linalg.svd(mat, full_matrices=False)
    except np.linalg.LinAlgError:
        return sla.svd(mat, full_matrices=False, lapack_driver="gesvd")


def _right_step(state: MpoState, i: int):
    """Left-orthonormalize tensor ``i``, pushing its factor rightward."""
    tensor = state.tensors[i]
    a, _, b = tensor.shape
    q, r = np.linalg.qr(tensor.reshape(a * 4, b))
    state.tensors[i] = q.reshape(a, 4, q.shape[1])
    state.tensors[i + 1] = np.tensordot(r, state.tensors[i + 1], axes=(1, 0))


def _left_step(state: MpoState, i: int):
    """Right-orthonormalize tensor ``i``, pushing its factor leftward."""
    tensor = state.tensors[i]
    a, _, b = tensor.shape
    q, r = np.linalg.qr(tensor.reshape(a, 4 * b).conj().T)
    state.tensors[i] = q.conj().T.reshape(q.shape[1], 4, b)
    state.tensors[i - 1] = np.tensordot(
        state.tensors[i - 1], r.conj().T, axes=(2, 0)
    )


def _move_center(state: MpoState, target: int):
    """Shift the orthogonality center to ``target`` by QR moves."""
    while state.center < target:
        _right_step(state, state.center)
        state.center += 1
    while state.center > target:
        _left_step(state, state.center)
        state.center -= 1


def _canonicalize(state: MpoState, site: int = 0):
    """Establish canonical form with the center at ``site`` from scratch."""
    for i in range(state.n_sites - 1, 0, -1):
        _left_step(state, i)
    state.center = 0
    _move_center(state, site)


def _apply_gate(state: MpoState, bond: int, gate: np.ndarray, policy: TruncationPolicy, absorb: str):
    """Apply a 16x16 gate at 0-based ``bond`` and truncate the new bond.

    The caller guarantees the center sits on one of the two touched
    sites, so the singular values of the recombined pair are the true
    Schmidt coefficients and truncation is optimal in the global norm.
    ``absorb`` chooses which side keeps the singular values, which is
    where the center ends up.
    """
    left = state.tensors[bond]
    right = state.tensors[bond + 1]
    a, c = left.shape[0], right.shape[2]
    theta = np.tensordot(left, right, axes=(2, 0)).reshape(a, 16, c)
    theta = np.tensordot(gate, theta, axes=(1, 1)).transpose(1, 0, 2)
    u, s, vh = _svd(theta.reshape(a * 4, 4 * c))

    total = float((s**2).sum())
    if total == 0.0:
        raise ValueError("state collapsed to zero during the sweep")
    keep = int((s > policy.svd_cutoff * s[0]).sum())
    keep = max(1, min(policy.chi_max, keep))
    state.truncation_weight += float((s[keep:] ** 2).sum()) / total

    s_kept = s[:keep]
    spectrum = s_kept / math.sqrt(float((s_kept**2).sum()))
    state.spectra[bond] = spectrum
    state.center_spectrum = spectrum

    if absorb == "right":
        state.tensors[bond] = u[:, :keep].reshape(a, 4, keep)
        state.tensors[bond + 1] = (s_kept[:, None] * vh[:keep]).reshape(keep, 4, c)
        state.center = bond + 1
    else:
        state.tensors[bond] = (u[:, :keep] * s_kept).reshape(a, 4, keep)
        state.tensors[bond + 1] = vh[:keep].reshape(keep, 4, c)
        state.center = bond


def trotter_sweep(state: MpoState, params: ChainParameters, dt: float, policy: TruncationPolicy) -> MpoState:
    """One symmetric second-order Trotter step of duration ``dt``.

    Odd bonds advance by ``dt/2`` sweeping right, even bonds by ``dt``
    sweeping left, odd bonds by ``dt/2`` sweeping right again; the
    orthogonality center rides along so every truncation happens in
    canonical form. Returns a new state, leaving the input untouched.
    """
    if dt <= 0:
        raise ValueError(f"time step must be positive, got {dt}")
    n = state.n_sites
    if n != params.n_sites:
        raise ValueError(f"state has {n} sites but parameters describe {params.n_sites}")
    new = state.copy()
    if new.center is None:
        _canonicalize(new, 0)

    half_gates = _gate_set(params, dt / 2)
    full_gates = _gate_set(params, dt)
    odd_bonds = range(0, n - 1, 2)
    even_bonds = range(1, n - 1, 2)

    for bond in odd_bonds:
        _move_center(new, bond)
        _apply_gate(new, bond, half_gates[bond], policy, absorb="right")
    for bond in reversed(even_bonds):
        _move_center(new, bond + 1)
        _apply_gate(new, bond, full_gates[bond], policy, absorb="left")
    for bond in odd_bonds:
        _move_center(new, bond)
        _apply_gate(new, bond, half_gates[bond], policy, absorb="right")

    if policy.renormalize_trace:
        trace = mpo_trace(new)
        if abs(trace) < 1e-300:
            raise ValueError("state trace vanished during the sweep")
        new.tensors[new.center] = new.tensors[new.center] / trace
    return new


# -- observables and the relaxation driver -----------------------------


def _current_profile(state: MpoState) -> np.ndarray:
    """Trace-normalized bond currents ``<J_j>`` for all bonds."""
    n = state.n_sites
    trace = mpo_trace(state)
    w_raise = operator_weights(RAISE)
    w_lower = operator_weights(LOWER)
    profile = np.empty(n - 1)
    for b in range(n - 1):
        hop_lr = _expect(state, {b: w_raise, b + 1: w_lower})
        hop_rl = _expect(state, {b: w_lower, b + 1: w_raise})
        profile[b] = (1j * (hop_rl - hop_lr) / trace).real
    return profile


def measure_mpo(state: MpoState, params: ChainParameters) -> ObservableRecord:
    """Observable record of an MPO state, matching the dense convention.

    Works on a canonicalized copy, so the input may be in any gauge.
    Densities, correlations and currents come from weighted chain
    contractions; sector weights from a discrete Fourier transform
    over on-site phase twists; entropy and purity from the singular
    values at the central bond.
    """
    n = state.n_sites
    if n != params.n_sites:
        raise ValueError(f"state has {n} sites but parameters describe {params.n_sites}")
    work = state.copy()
    if work.center is None:
        _canonicalize(work, 0)

    trace = mpo_trace(work)
    if abs(trace) < 1e-300:
        raise ValueError("state has vanishing trace")

    w_num = operator_weights(NUMBER)
    w_raise = operator_weights(RAISE)
    w_lower = operator_weights(LOWER)

    density = np.array(
        [(_expect(work, {i: w_num}) / trace).real for i in range(n)]
    )
    pair = np.zeros((n, n))
    for i in range(n):
        pair[i, i] = density[i]
        for j in range(i + 1, n):
            val = (_expect(work, {i: w_num, j: w_num}) / trace).real
            pair[i, j] = pair[j, i] = val
    correlations = pair - np.outer(density, density)

    profile = np.empty(n - 1)
    kinetic = 0.0
    for b in range(n - 1):
        hop_lr = _expect(work, {b: w_raise, b + 1: w_lower}) / trace
        hop_rl = _expect(work, {b: w_lower, b + 1: w_raise}) / trace
        profile[b] = (1j * (hop_rl - hop_lr)).real
        kinetic += (hop_lr + hop_rl).real

    # Sector weights: resolve the total-number distribution with an
    # (N+1)-point transform over uniform phase twists exp(i k theta n).
    omega = np.exp(2j * np.pi / (n + 1))
    twists = np.empty(n + 1, dtype=complex)
    for k in range(n + 1):
        w_k = operator_weights(np.diag([1.0, omega**k]))
        twists[k] = _expect(work, {i: w_k for i in range(n)}) / trace
    modes = np.arange(n + 1)
    sector_probs = (
        np.exp(-2j * np.pi * np.outer(modes, modes) / (n + 1)) @ twists
    ).real / (n + 1)

    center_bond = n // 2 - 1
    _move_center(work, center_bond)
    tensor = work.tensors[center_bond]
    a, _, b = tensor.shape
    svals = _svd(tensor.reshape(a * 4, b))[1]
    norm_sq = float((svals**2).sum())
    weights = svals**2 / norm_sq
    weights = weights[weights > 1e-300]
    entropy = float(-(weights * np.log2(weights)).sum())
    purity = norm_sq / float(trace.real) ** 2

    return ObservableRecord(
        current=float(profile.mean()) if profile.size else 0.0,
        current_profile=profile,
        density_profile=density,
        correlations=correlations,
        entropy=entropy,
        purity=purity,
        sector_probs=sector_probs,
        dissipation=-2.0 * params.dephasing * kinetic,
        extra={
            "kinetic": kinetic,
            "trace": float(trace.real),
            "bond_dims": work.bond_dims,
            "truncation_weight": state.truncation_weight,
            "center_spectrum": svals / math.sqrt(norm_sq),
        },
    )


def run_to_ness_mpo(
    params: ChainParameters,
    policy: TruncationPolicy | None = None,
    schedule: EvolutionSchedule | None = None,
    initial_state: MpoState | None = None,
):
    """Relax an MPO to the stationary state of the driven chain.

    Starts from the infinite-temperature state (or ``initial_state``)
    and applies staged Trotter sweeps. Convergence is declared in the
    final stage when the bond currents at the first, central and last
    bond drift by less than ``drift_tol`` per unit model time between
    checks. Exceeding the truncation budget is flagged in the report
    message as accuracy loss, not as failure.

    Returns
    -------
    (MpoState, ConvergenceReport)
        The relaxed state and diagnostics; ``residual`` carries the
        final drift rate, ``homogeneity`` the bond-current spread.
    """
    policy = policy or TruncationPolicy()
    schedule = schedule or EvolutionSchedule()
    state = initial_state.copy() if initial_state is not None else mpo_identity(params.n_sites)
    n = params.n_sites
    probes = sorted({0, max(0, n // 2 - 1), n - 2})

    elapsed = 0.0
    sweeps = 0
    drift = math.inf
    converged = False
    for stage_idx, (dt, duration) in enumerate(schedule.stages):
        final_stage = stage_idx == len(schedule.stages) - 1
        remaining = duration
        prev_currents = None
        prev_time = elapsed
        while remaining > 1e-12:
            chunk = min(schedule.check_every, remaining)
            nsteps = max(1, int(round(chunk / dt)))
            for _ in range(nsteps):
                state = trotter_sweep(state, params, dt, policy)
            advanced = nsteps * dt
            elapsed += advanced
            remaining -= advanced
            sweeps += nsteps
            currents = _current_profile(state)[probes]
            if prev_currents is not None:
                drift = float(np.abs(currents - prev_currents).max() / (elapsed - prev_time))
            prev_currents, prev_time = currents, elapsed
            if final_stage and drift <= schedule.drift_tol:
                converged = True
                break
        if converged:
            break

    profile = _current_profile(state)
    homogeneity = float(np.abs(profile - profile.mean()).max()) if profile.size else 0.0
    message = ""
    if state.truncation_weight > schedule.truncation_budget:
        message = (
            f"accuracy loss: cumulative truncation weight {state.truncation_weight:.3e} "
            f"exceeds the budget {schedule.truncation_budget:.3e}"
        )
    if not converged:
        tail = f"current drift {drift:.3e} above tolerance {schedule.drift_tol:.3e} at t={elapsed:g}"
        message = f"{message}; {tail}" if message else tail
    report = ConvergenceReport(
        converged=converged,
        residual=drift,
        homogeneity=homogeneity,
        model_time=elapsed,
        steps=sweeps,
        method="tebd",
        message=message,
        extra={
            "truncation_weight": state.truncation_weight,
            "probe_currents": profile[probes].tolist(),
            "bond_dims": state.bond_dims,
        },
    )
    return state, report


# -- checkpointing -----------------------------------------------------


def save_checkpoint(state: MpoState, path, params: ChainParameters | None = None, meta: dict | None = None):
    """Write the state and its run context to a compressed archive.

    The archive holds one array per site plus a JSON header with a
    format version, shape metadata and, when given, the physical
    parameters, so a checkpoint is self-describing.
    """
    header = {
        "format_version": CHECKPOINT_FORMAT_VERSION,
        "n_sites": state.n_sites,
        "center": state.center,
        "truncation_weight": state.truncation_weight,
        "bond_dims": state.bond_dims,
    }
    if params is not None:
        header["params"] = dataclasses.asdict(params)
    if meta:
        header["extra"] = meta
    payload = {f"site_{i:04d}": t for i, t in enumerate(state.tensors)}
    np.savez_compressed(path, header=json.dumps(header, sort_keys=True), **payload)


def load_checkpoint(path):
    """Read a checkpoint written by `save_checkpoint`.

    Returns
    -------
    (MpoState, dict)
        The reconstructed state and the JSON header.
    """
    with np.load(path) as archive:
        header = json.loads(str(archive["header"][()]))
        version = header.get("format_version")
        if version != CHECKPOINT_FORMAT_VERSION:
            raise ValueError(
                f"checkpoint format {version!r} not supported "
                f"(expected {CHECKPOINT_FORMAT_VERSION})"
            )
        tensors = [archive[f"site_{i:04d}"] for i in range(header["n_sites"])]
    state = MpoState(
        tensors,
        center=header.get("center"),
        truncation_weight=header.get("truncation_weight", 0.0),
    )
    return state, header
