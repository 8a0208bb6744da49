"""Parameter sweeps, optimal-dephasing search, and scaling fits.

The harness drives the exact and matrix-product solvers over parameter
grids, locates the dephasing rate that maximizes the current, fits
power laws with and without offsets, checks the diffusive-scaling
ratio, and extracts correlation profiles and the interaction threshold
of the enhancement regime. Results stream into deterministic CSV/JSON
files through `drivenchain.output`.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit

from .liouville import NULLSPACE_CAP, steady_state
from .mpo import EvolutionSchedule, MpoState, TruncationPolicy, measure_mpo, run_to_ness_mpo
from .observables import ObservableRecord, measure
from .output import SWEEP_COLUMNS, CsvReport, write_json
from .parameters import ChainParameters

__all__ = [
    "AnalysisError",
    "SweepConfig",
    "FitResult",
    "PURE_POWER",
    "POWER_PLUS_OFFSET",
    "run_sweep",
    "find_gamma_opt",
    "fit_power_law",
    "diffusion_table",
    "diffusion_check",
    "correlation_profile",
    "estimate_delta_threshold",
]

PURE_POWER = "pure-power"
POWER_PLUS_OFFSET = "power-plus-offset"

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class AnalysisError(RuntimeError):
    """Analysis-level failure carrying the offending scan data."""

    def __init__(self, message, data=None):
        super().__init__(message)
        self.data = data


@dataclass(frozen=True)
class SweepConfig:
    """Grid description and solver selection for `run_sweep`.

    Grids combine as a full product in the field order ``n_sites,
    interactions, biases, dephasings, staggers``. The ``auto-by-size``
    solver uses the exact kernel solve up to ``exact_cap`` sites and
    the matrix-product engine beyond.
    """

    n_sites: tuple
    interactions: tuple
    biases: tuple
    dephasings: tuple
    staggers: tuple = (0.0,)
    coupling: float = 1.0
    solver: str = "auto-by-size"
    exact_cap: int = NULLSPACE_CAP
    tol: float = 1e-10
    chi_max: int = 128
    mpo_schedule: EvolutionSchedule | None = None
    output_csv: str | None = None
    output_json: str | None = None
    workers: int = 1

    def __post_init__(self):
        for name in ("n_sites", "interactions", "biases", "dephasings", "staggers"):
            grid = tuple(getattr(self, name))
            if not grid:
                raise ValueError(f"grid {name} must not be empty")
            object.__setattr__(self, name, grid)
        if self.solver not in ("exact", "mpo", "auto-by-size"):
            raise ValueError(f"unknown solver {self.solver!r}")
        if not 2 <= self.exact_cap <= NULLSPACE_CAP:
            raise ValueError(
                f"exact_cap must lie in [2, {NULLSPACE_CAP}], got {self.exact_cap}"
            )
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


@dataclass(frozen=True)
class FitResult:
    """Power-law fit summary; ``offset`` is None for the pure model."""

    exponent: float
    prefactor: float
    offset: float | None
    residual: float

    def __post_init__(self):
        if self.residual < 0:
            raise ValueError("residual must be nonnegative")


def _solve_point(params: ChainParameters, config: SweepConfig):
    """One grid point: returns (solver name, record, report)."""
    use_exact = config.solver == "exact" or (
        config.solver == "auto-by-size" and params.n_sites <= config.exact_cap
    )
    if use_exact:
        rho, report = steady_state(params, method="auto", tol=config.tol)
        return "exact", measure(rho, params), report
    policy = TruncationPolicy(chi_max=config.chi_max)
    schedule = config.mpo_schedule or EvolutionSchedule(
        stages=((0.1, 40.0), (0.05, 760.0)), drift_tol=1e-7
    )
    state, report = run_to_ness_mpo(params, policy, schedule)
    return "mpo", measure_mpo(state, params), report


def _sweep_row(index, point, config):
    n, delta, f, gamma, stag = point
    row = {"N": n, "delta": delta, "f": f, "gamma": gamma, "B": stag}
    try:
        params = ChainParameters(
            n_sites=n,
            interaction=delta,
            coupling=config.coupling,
            bias=f,
            dephasing=gamma,
            staggered=stag,
        )
        solver, record, report = _solve_point(params, config)
        row.update(
            solver=solver,
            J=record.current,
            S=record.entropy,
            purity=record.purity,
            converged=report.converged,
            residual=report.residual,
            record=record.to_dict(),
            report={
                "method": report.method,
                "model_time": report.model_time,
                "steps": report.steps,
                "message": report.message,
                "homogeneity": report.homogeneity,
            },
        )
    except Exception as exc:  # noqa: BLE001 - per-point failures must not kill the sweep
        row.update(
            solver=config.solver,
            J=math.nan,
            S=math.nan,
            purity=math.nan,
            converged=False,
            residual=math.nan,
            error=f"{type(exc).__name__}: {exc}",
        )
    return index, row


def run_sweep(config: SweepConfig) -> list:
    """Solve every grid point and stream results to the output files.

    Rows are produced in grid order regardless of worker scheduling
    (completed rows wait in a reorder buffer until their turn), so the
    CSV is deterministic and a crashed sweep leaves a clean prefix.
    Individual solver failures are recorded in their row with
    ``converged = false`` and the sweep continues.

    Returns
    -------
    list of dict
        One row per grid point with scalar summary fields plus the
        full observable record and report under ``record``/``report``.
    """
    points = list(
        itertools.product(
            config.n_sites,
            config.interactions,
            config.biases,
            config.dephasings,
            config.staggers,
        )
    )
    config_doc = dataclasses.asdict(config)
    writer = (
        CsvReport(config.output_csv, columns=SWEEP_COLUMNS, config=config_doc)
        if config.output_csv
        else None
    )
    rows: list = [None] * len(points)
    try:
        if config.workers == 1:
            for index, point in enumerate(points):
                _, row = _sweep_row(index, point, config)
                rows[index] = row
                if writer:
                    writer.append(row)
        else:
            with ThreadPoolExecutor(max_workers=config.workers) as pool:
                futures = [
                    pool.submit(_sweep_row, index, point, config)
                    for index, point in enumerate(points)
                ]
                buffered = {}
                cursor = 0
                for future in as_completed(futures):
                    index, row = future.result()
                    rows[index] = row
                    buffered[index] = row
                    while writer and cursor in buffered:
                        writer.append(buffered.pop(cursor))
                        cursor += 1
    finally:
        if writer:
            writer.close()
    if config.output_json:
        write_json(config.output_json, rows, config=config_doc)
    return rows


# -- optimal dephasing -------------------------------------------------


def _golden_max(func, lo, hi, tol):
    """Golden-section maximization on [lo, hi] to absolute x tolerance."""
    a, b = lo, hi
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = func(c), func(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = func(d)
    return (a + b) / 2


def _local_maxima(values, rel_tol=1e-12):
    """Indices of strict local maxima, ignoring sub-tolerance wiggles."""
    vals = np.asarray(values, dtype=float)
    scale = max(vals.max(), 1e-300)
    peaks = []
    for i in range(len(vals)):
        left = vals[i] - vals[i - 1] if i > 0 else math.inf
        right = vals[i] - vals[i + 1] if i < len(vals) - 1 else math.inf
        if left > rel_tol * scale and right > rel_tol * scale:
            peaks.append(i)
    return peaks


def find_gamma_opt(
    interaction: float,
    bias: float,
    n_sites: int,
    coupling: float = 1.0,
    staggered: float = 0.0,
    tol: float = 1e-3,
    scan_range: tuple = (1e-3, 10.0),
    scan_points: int = 8,
    solver_method: str = "auto",
    solver_tol: float = 1e-10,
    current_fn=None,
):
    """Dephasing rate maximizing the current magnitude.

    Scans ``gamma = 0`` plus ``scan_points`` log-spaced rates over
    ``scan_range``, then refines the bracketed peak by golden section
    to absolute tolerance ``tol``. Returns ``(0.0, J(0))`` when the
    undephased chain already carries the largest current, the
    degrading regime below the enhancement threshold.

    Parameters
    ----------
    interaction, bias, n_sites : float, float, int
        Chain parameters; ``coupling`` and ``staggered`` complete them.
    current_fn : callable, optional
        Replacement for the exact solve, mapping ``gamma`` to the
        stationary current. Used by threshold scans and tests.

    Returns
    -------
    (float, float)
        The optimal rate and the (signed) current there.

    Raises
    ------
    AnalysisError
        If the scan shows several local maxima or the peak sits at the
        upper scan boundary; the scan table rides on ``exc.data``.
    """
    if current_fn is None:

        def current_fn(gamma):
            params = ChainParameters(
                n_sites=n_sites,
                interaction=interaction,
                coupling=coupling,
                bias=bias,
                dephasing=gamma,
                staggered=staggered,
            )
            rho, _ = steady_state(params, method=solver_method, tol=solver_tol)
            return measure(rho, params).current

    cache: dict = {}

    def magnitude(gamma):
        if gamma not in cache:
            cache[gamma] = current_fn(gamma)
        return abs(cache[gamma])

    gammas = [0.0] + list(np.geomspace(scan_range[0], scan_range[1], scan_points))
    values = [magnitude(g) for g in gammas]
    scan = list(zip(gammas, values))

    peaks = _local_maxima(values)
    if len(peaks) > 1:
        raise AnalysisError(
            "current magnitude is not unimodal in the dephasing rate", data=scan
        )
    best = int(np.argmax(values))
    if best == 0:
        return 0.0, cache[0.0]
    if best == len(gammas) - 1:
        raise AnalysisError(
            f"optimum at the upper scan boundary gamma={gammas[-1]:g}; widen scan_range",
            data=scan,
        )

    lo, hi = gammas[best - 1], gammas[best + 1]
    gamma_opt = _golden_max(magnitude, lo, hi, tol)
    current_opt = current_fn(gamma_opt)
    if abs(current_opt) <= magnitude(0.0):
        return 0.0, cache[0.0]
    return gamma_opt, current_opt


# -- fits ---------------------------------------------------------------


def fit_power_law(xs, ys, model: str = PURE_POWER) -> FitResult:
    """Fit ``y = a x^(-b)`` or ``y = a x^(-b) + c``.

    The pure model is solved by least squares in log space and needs
    strictly positive data; the offset model runs nonlinear least
    squares seeded from the tail value and a log-space estimate.
    ``exponent`` is the decay power ``b``, positive for decreasing
    data; ``residual`` is the root-mean-square misfit (log space for
    the pure model, linear for the offset model).
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size != ys.size or xs.size < 3:
        raise ValueError("need at least three (x, y) points")
    if np.any(xs <= 0):
        raise ValueError("x values must be positive")

    if model == PURE_POWER:
        if np.any(ys <= 0):
            raise ValueError("non-positive y data cannot be fitted in log space")
        slope, intercept = np.polyfit(np.log(xs), np.log(ys), 1)
        fitted = intercept + slope * np.log(xs)
        residual = float(np.sqrt(np.mean((np.log(ys) - fitted) ** 2)))
        return FitResult(
            exponent=float(-slope),
            prefactor=float(np.exp(intercept)),
            offset=None,
            residual=residual,
        )

    if model == POWER_PLUS_OFFSET:

        def shape(x, a, b, c):
            return a * x ** (-b) + c

        offset0 = float(ys[np.argmax(xs)])
        reduced = ys - offset0
        positive = reduced > 0
        if positive.sum() >= 2:
            slope, intercept = np.polyfit(np.log(xs[positive]), np.log(reduced[positive]), 1)
            p0 = [float(np.exp(intercept)), float(-slope), offset0]
        else:
            p0 = [float(ys.max() - offset0 + 1e-9), 1.0, offset0]
        popt, _ = curve_fit(shape, xs, ys, p0=p0, maxfev=20000)
        residual = float(np.sqrt(np.mean((ys - shape(xs, *popt)) ** 2)))
        return FitResult(
            exponent=float(popt[1]),
            prefactor=float(popt[0]),
            offset=float(popt[2]),
            residual=residual,
        )

    raise ValueError(f"unknown model {model!r}; use {PURE_POWER!r} or {POWER_PLUS_OFFSET!r}")


# -- diffusive scaling ---------------------------------------------------


def diffusion_table(
    n_list,
    interaction: float,
    bias: float,
    dephasing: float,
    coupling: float = 1.0,
    solver: str = "auto-by-size",
    exact_cap: int = NULLSPACE_CAP,
    chi_max: int = 128,
    mpo_schedule: EvolutionSchedule | None = None,
    tol: float = 1e-10,
) -> list:
    """Current over end-to-end density drop for a set of chain lengths.

    The density difference excludes the boundary sites,
    ``dn = <n_2> - <n_(N-1)>``, and the ratio carries the sign
    ``-J / dn`` so that it is positive for forward bias (the summed
    current is negative when ``f > 0``) and scales as ``(N-3)^(-alpha)``
    in the diffusive regime. Solver failures propagate; every returned
    row carries its convergence flag.
    """
    rows = []
    for n in n_list:
        if n < 5:
            raise ValueError(f"diffusive scaling needs N >= 5, got {n}")
        config = SweepConfig(
            n_sites=(n,),
            interactions=(interaction,),
            biases=(bias,),
            dephasings=(dephasing,),
            coupling=coupling,
            solver=solver,
            exact_cap=exact_cap,
            chi_max=chi_max,
            mpo_schedule=mpo_schedule,
            tol=tol,
        )
        params = ChainParameters(
            n_sites=n,
            interaction=interaction,
            coupling=coupling,
            bias=bias,
            dephasing=dephasing,
        )
        name, record, report = _solve_point(params, config)
        density = record.density_profile
        drop = float(density[1] - density[-2])
        rows.append(
            {
                "N": n,
                "solver": name,
                "J": record.current,
                "dn": drop,
                "ratio": -record.current / drop,
                "converged": report.converged,
                "residual": report.residual,
            }
        )
    return rows


def diffusion_check(
    n_list,
    interaction: float,
    bias: float,
    dephasing: float,
    **solver_options,
) -> FitResult:
    """Fit the diffusive ratio ``-J/dn`` against ``N - 3``.

    A fitted exponent near one signals diffusive transport; ballistic
    chains give an exponent near zero.
    """
    rows = diffusion_table(n_list, interaction, bias, dephasing, **solver_options)
    xs = np.array([row["N"] - 3 for row in rows], dtype=float)
    ys = np.array([row["ratio"] for row in rows], dtype=float)
    return fit_power_law(xs, ys, model=PURE_POWER)


# -- correlations and thresholds -----------------------------------------


def correlation_profile(source, params: ChainParameters | None = None) -> list:
    """Density-density correlations of symmetric pairs about the center.

    Accepts an `ObservableRecord`, a dense density matrix, or an
    `MpoState`; the latter two are measured first. Pairs ``(i, j)``
    sit symmetrically around the chain center, so the fractional
    separation ``r = |i - j| / N`` steps through odd (even N) or even
    (odd N) site distances.

    Returns
    -------
    list of dict
        Rows with 1-based ``i``, ``j``, separation, ``r``, the signed
        correlation ``C`` and ``|C|``, ordered by increasing ``r``.
    """
    if isinstance(source, ObservableRecord):
        record = source
        n = len(record.density_profile)
    elif isinstance(source, MpoState):
        record = measure_mpo(source, params or ChainParameters(n_sites=source.n_sites))
        n = source.n_sites
    else:
        rho = np.asarray(source)
        n = rho.shape[0].bit_length() - 1
        record = measure(rho, params or ChainParameters(n_sites=n))

    correlations = np.asarray(record.correlations)
    rows = []
    for distance in range(1, n):
        twice_i = n + 1 - distance
        if twice_i % 2 or twice_i < 2:
            continue
        i = twice_i // 2
        j = i + distance
        if j > n:
            continue
        value = float(correlations[i - 1, j - 1])
        rows.append(
            {
                "i": i,
                "j": j,
                "separation": distance,
                "r": distance / n,
                "C": value,
                "absC": abs(value),
            }
        )
    return rows


def estimate_delta_threshold(
    deltas,
    bias: float,
    n_sites: int,
    gamma_opt_fn=None,
    bisect_tol: float = 0.02,
    **gamma_opt_options,
) -> dict:
    """Interaction threshold where dephasing enhancement switches on.

    Evaluates the optimal dephasing rate over the given interactions,
    then locates the boundary of the ``gamma_opt = 0`` region two
    ways: bisection on the boundary interval, and a fit of
    ``gamma_opt = c1 (Delta - Delta_0)^beta`` to the points with
    positive ``gamma_opt``. Both estimates are reported; entries are
    None when the data cannot support them (no sign change, or fewer
    than three positive points).
    """
    if gamma_opt_fn is None:

        def gamma_opt_fn(delta):
            return find_gamma_opt(delta, bias, n_sites, **gamma_opt_options)[0]

    deltas = sorted(float(d) for d in deltas)
    table = [(d, float(gamma_opt_fn(d))) for d in deltas]

    zeros = [d for d, g in table if g == 0.0]
    positives = [(d, g) for d, g in table if g > 0.0]

    threshold_bisect = None
    if zeros and positives:
        lo = max(d for d in zeros if d < positives[0][0])
        hi = positives[0][0]
        while hi - lo > bisect_tol:
            mid = 0.5 * (lo + hi)
            if gamma_opt_fn(mid) > 0.0:
                hi = mid
            else:
                lo = mid
        threshold_bisect = 0.5 * (lo + hi)

    threshold_fit = exponent = prefactor = None
    if len(positives) >= 3:
        xs = np.array([d for d, _ in positives])
        ys = np.array([g for _, g in positives])
        upper = xs.min() - 1e-9

        def shape(x, c1, d0, beta):
            return c1 * np.clip(x - d0, 0.0, None) ** beta

        d0_seed = threshold_bisect if threshold_bisect is not None else upper - 0.1
        d0_seed = min(d0_seed, upper - 1e-6)
        c1_seed = ys.max() / max((xs.max() - d0_seed), 1e-6) ** 0.8
        popt, _ = curve_fit(
            shape,
            xs,
            ys,
            p0=[c1_seed, d0_seed, 0.8],
            bounds=([0.0, -np.inf, 0.05], [np.inf, upper, 5.0]),
            maxfev=20000,
        )
        prefactor, threshold_fit, exponent = map(float, popt)

    return {
        "table": table,
        "threshold_bisect": threshold_bisect,
        "threshold_fit": threshold_fit,
        "exponent": exponent,
        "prefactor": prefactor,
    }
