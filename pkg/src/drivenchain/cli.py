"""Command-line interface.

Eight subcommands cover single stationary-state solves (exact and
matrix-product), the companion toy model, parameter sweeps, the
optimal-dephasing search, diffusive-scaling fits, sector spectra with
domain-state deviations, and the closed-form predictions. Every run
can read a JSON configuration file whose values are overridden by
explicit flags, writes CSV and JSON result files on request (with the
effective configuration echoed into their headers), and prints a
one-line summary.

Exit codes: 0 success, 2 malformed configuration or invalid
parameters, 3 solver or analysis failure (partial results are still
written, marked unconverged).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys

import numpy as np

from . import predictions
from .analysis import (
    AnalysisError,
    SweepConfig,
    diffusion_table,
    find_gamma_opt,
    fit_power_law,
    run_sweep,
)
from .liouville import DegenerateKernelError, NonConvergenceError, steady_state
from .mpo import EvolutionSchedule, TruncationPolicy, measure_mpo, run_to_ness_mpo
from .observables import measure
from .parameters import ChainParameters, ToyParameters
from .output import write_csv, write_json
from .spectra import domain_state_deviation
from .toy import toy_closed_form, toy_ness_current

__all__ = ["main", "entry_point", "load_config", "ConfigError"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3


class ConfigError(ValueError):
    """Malformed configuration file or inconsistent option set."""


def load_config(path) -> dict:
    """Parse a JSON configuration file with line-level error reporting."""
    try:
        with open(path) as handle:
            document = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(document, dict):
        raise ConfigError(f"{path}: top-level value must be a JSON object")
    return document


def _merge(defaults: dict, file_cfg: dict, cli_args: dict, label: str) -> dict:
    """Layer file values over defaults, then explicit flags over both."""
    unknown = sorted(set(file_cfg) - set(defaults))
    if unknown:
        raise ConfigError(f"{label}: unknown configuration keys: {', '.join(unknown)}")
    effective = dict(defaults)
    effective.update(file_cfg)
    effective.update({k: v for k, v in cli_args.items() if v is not None})
    return effective


def _require(effective: dict, key: str, label: str):
    if effective.get(key) is None:
        raise ConfigError(f"{label}: required option '{key}' is missing")
    return effective[key]


def _parse_int_list(value) -> tuple:
    if isinstance(value, str):
        value = [part for part in value.replace(",", " ").split() if part]
    return tuple(int(v) for v in value)


def _parse_stages(value) -> tuple:
    """Stage list from '0.1:40,0.02:100' or [[0.1, 40], [0.02, 100]]."""
    if isinstance(value, str):
        pairs = []
        for chunk in value.split(","):
            dt, _, duration = chunk.partition(":")
            if not duration:
                raise ConfigError(f"bad stage {chunk!r}; expected dt:duration")
            pairs.append((float(dt), float(duration)))
        return tuple(pairs)
    return tuple((float(dt), float(duration)) for dt, duration in value)


def _chain_params(effective: dict) -> ChainParameters:
    return ChainParameters(
        n_sites=int(effective["n"]),
        interaction=float(effective["delta"]),
        coupling=float(effective["coupling"]),
        bias=float(effective["f"]),
        dephasing=float(effective["gamma"]),
        staggered=float(effective["b"]),
    )


def _summary_row(params: ChainParameters, solver: str, record, report) -> dict:
    return {
        "N": params.n_sites,
        "delta": params.interaction,
        "f": params.bias,
        "gamma": params.dephasing,
        "B": params.staggered,
        "solver": solver,
        "J": record.current,
        "S": record.entropy,
        "purity": record.purity,
        "converged": report.converged,
        "residual": report.residual,
    }


def _emit_point(effective, subcommand, params, solver, record, report) -> int:
    config_doc = {"subcommand": subcommand, **effective}
    row = _summary_row(params, solver, record, report)
    if effective.get("csv"):
        write_csv(effective["csv"], [row], config=config_doc)
    if effective.get("json"):
        payload = [
            {
                **row,
                "record": record.to_dict(),
                "report": {
                    "method": report.method,
                    "message": report.message,
                    "model_time": report.model_time,
                    "steps": report.steps,
                    "homogeneity": report.homogeneity,
                },
            }
        ]
        write_json(effective["json"], payload, config=config_doc)
    print(
        f"{subcommand} N={params.n_sites} delta={params.interaction:g} "
        f"f={params.bias:g} gamma={params.dephasing:g}: J={record.current:.8f} "
        f"S={record.entropy:.6f} purity={record.purity:.6f} converged={report.converged}"
    )
    return EXIT_OK if report.converged else EXIT_SOLVER


# -- subcommand handlers -------------------------------------------------


def _cmd_ness_exact(args, file_cfg) -> int:
    defaults = {
        "n": None,
        "delta": 0.0,
        "f": 0.0,
        "gamma": 0.0,
        "coupling": 1.0,
        "b": 0.0,
        "method": "auto",
        "tol": 1e-10,
        "max_time": 5000.0,
        "csv": None,
        "json": None,
    }
    effective = _merge(defaults, file_cfg, vars(args), "ness-exact")
    _require(effective, "n", "ness-exact")
    params = _chain_params(effective)
    rho, report = steady_state(
        params,
        method=effective["method"],
        tol=float(effective["tol"]),
        max_time=float(effective["max_time"]),
    )
    record = measure(rho, params)
    return _emit_point(effective, "ness-exact", params, "exact", record, report)


def _cmd_ness_mpo(args, file_cfg) -> int:
    defaults = {
        "n": None,
        "delta": 0.0,
        "f": 0.0,
        "gamma": 0.0,
        "coupling": 1.0,
        "b": 0.0,
        "chi": 128,
        "cutoff": 1e-10,
        "stages": ((0.1, 40.0), (0.02, 1960.0)),
        "drift_tol": 1e-6,
        "check_every": 5.0,
        "csv": None,
        "json": None,
    }
    effective = _merge(defaults, file_cfg, vars(args), "ness-mpo")
    _require(effective, "n", "ness-mpo")
    params = _chain_params(effective)
    policy = TruncationPolicy(chi_max=int(effective["chi"]), svd_cutoff=float(effective["cutoff"]))
    schedule = EvolutionSchedule(
        stages=_parse_stages(effective["stages"]),
        drift_tol=float(effective["drift_tol"]),
        check_every=float(effective["check_every"]),
    )
    state, report = run_to_ness_mpo(params, policy, schedule)
    record = measure_mpo(state, params)
    return _emit_point(effective, "ness-mpo", params, "mpo", record, report)


def _cmd_toy(args, file_cfg) -> int:
    defaults = {
        "k": None,
        "delta": 0.0,
        "f": 1.0,
        "gamma": 0.0,
        "coupling": 1.0,
        "grid": False,
        "f_points": 21,
        "gamma_points": 13,
        "csv": None,
        "json": None,
    }
    effective = _merge(defaults, file_cfg, vars(args), "toy")
    k = int(_require(effective, "k", "toy"))
    config_doc = {"subcommand": "toy", **effective}

    def point(f, gamma):
        params = ToyParameters(
            n_levels=k,
            interaction=float(effective["delta"]),
            coupling=float(effective["coupling"]),
            bias=f,
            dephasing=gamma,
        )
        closed = toy_closed_form(params) if params.interaction != 0 else math.nan
        return {
            "K": k,
            "delta": params.interaction,
            "coupling": params.coupling,
            "f": f,
            "gamma": gamma,
            "J": toy_ness_current(params),
            "J_closed": closed,
        }

    if effective["grid"]:
        fs = np.linspace(0.0, 1.0, int(effective["f_points"]))
        gammas = np.concatenate(
            [[0.0], np.geomspace(1e-3, 1.0, int(effective["gamma_points"]) - 1)]
        )
        rows = [point(float(f), float(g)) for f in fs for g in gammas]
        print(
            f"toy grid K={k} delta={effective['delta']:g}: {len(rows)} points, "
            f"max |J| = {max(abs(r['J']) for r in rows):.8f}"
        )
    else:
        rows = [point(float(effective["f"]), float(effective["gamma"]))]
        row = rows[0]
        print(
            f"toy K={k} delta={effective['delta']:g} f={row['f']:g} "
            f"gamma={row['gamma']:g}: J={row['J']:.8f} closed_form={row['J_closed']:.8f}"
        )
    columns = ("K", "delta", "coupling", "f", "gamma", "J", "J_closed")
    if effective.get("csv"):
        write_csv(effective["csv"], rows, columns=columns, config=config_doc)
    if effective.get("json"):
        write_json(effective["json"], rows, config=config_doc)
    return EXIT_OK


def _cmd_sweep(args, file_cfg) -> int:
    if not file_cfg:
        raise ConfigError("sweep: a --config file with the grid definition is required")
    overrides = {
        "output_csv": args.csv,
        "output_json": args.json,
        "workers": args.workers,
    }
    cfg = dict(file_cfg)
    if "mpo_schedule" in cfg and cfg["mpo_schedule"] is not None:
        schedule_doc = dict(cfg["mpo_schedule"])
        if "stages" in schedule_doc:
            schedule_doc["stages"] = _parse_stages(schedule_doc["stages"])
        try:
            cfg["mpo_schedule"] = EvolutionSchedule(**schedule_doc)
        except TypeError as exc:
            raise ConfigError(f"sweep: bad mpo_schedule: {exc}") from exc
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    try:
        config = SweepConfig(**cfg)
    except TypeError as exc:
        raise ConfigError(f"sweep: {exc}") from exc
    rows = run_sweep(config)
    ok = sum(1 for row in rows if row.get("converged"))
    print(f"sweep: {len(rows)} points, {ok} converged"
          + (f", csv={config.output_csv}" if config.output_csv else ""))
    return EXIT_OK if ok == len(rows) else EXIT_SOLVER


def _cmd_gamma_opt(args, file_cfg) -> int:
    defaults = {
        "n": None,
        "delta": None,
        "f": None,
        "coupling": 1.0,
        "b": 0.0,
        "tol": 1e-3,
        "csv": None,
        "json": None,
    }
    effective = _merge(defaults, file_cfg, vars(args), "gamma-opt")
    for key in ("n", "delta", "f"):
        _require(effective, key, "gamma-opt")
    config_doc = {"subcommand": "gamma-opt", **effective}
    try:
        gamma_opt, current = find_gamma_opt(
            float(effective["delta"]),
            float(effective["f"]),
            int(effective["n"]),
            coupling=float(effective["coupling"]),
            staggered=float(effective["b"]),
            tol=float(effective["tol"]),
        )
    except AnalysisError as exc:
        if effective.get("json") and exc.data is not None:
            write_json(
                effective["json"],
                [{"error": str(exc), "scan": [list(p) for p in exc.data]}],
                config=config_doc,
            )
        raise
    row = {
        "N": int(effective["n"]),
        "delta": float(effective["delta"]),
        "f": float(effective["f"]),
        "gamma_opt": gamma_opt,
        "J": current,
    }
    if effective.get("csv"):
        write_csv(effective["csv"], [row], columns=tuple(row), config=config_doc)
    if effective.get("json"):
        write_json(effective["json"], [row], config=config_doc)
    print(
        f"gamma-opt N={row['N']} delta={row['delta']:g} f={row['f']:g}: "
        f"gamma_opt={gamma_opt:.4f} J={current:.8f}"
    )
    return EXIT_OK


def _cmd_diffusion(args, file_cfg) -> int:
    defaults = {
        "n_list": None,
        "delta": None,
        "f": 1.0,
        "gamma": None,
        "coupling": 1.0,
        "solver": "auto-by-size",
        "chi": 128,
        "stages": None,
        "csv": None,
        "json": None,
    }
    effective = _merge(defaults, file_cfg, vars(args), "diffusion")
    for key in ("n_list", "delta", "gamma"):
        _require(effective, key, "diffusion")
    n_list = _parse_int_list(effective["n_list"])
    schedule = (
        EvolutionSchedule(stages=_parse_stages(effective["stages"]))
        if effective["stages"]
        else None
    )
    rows = diffusion_table(
        n_list,
        float(effective["delta"]),
        float(effective["f"]),
        float(effective["gamma"]),
        coupling=float(effective["coupling"]),
        solver=effective["solver"],
        chi_max=int(effective["chi"]),
        mpo_schedule=schedule,
    )
    fit = fit_power_law(
        [row["N"] - 3 for row in rows], [row["ratio"] for row in rows]
    )
    config_doc = {"subcommand": "diffusion", **effective, "n_list": list(n_list)}
    columns = ("N", "solver", "J", "dn", "ratio", "converged", "residual")
    if effective.get("csv"):
        write_csv(effective["csv"], rows, columns=columns, config=config_doc)
    if effective.get("json"):
        payload = {"rows": rows, "fit": dataclasses.asdict(fit)}
        write_json(effective["json"], payload, config=config_doc)
    print(
        f"diffusion delta={effective['delta']:g} gamma={effective['gamma']:g} "
        f"N={','.join(map(str, n_list))}: alpha={fit.exponent:.4f} "
        f"prefactor={fit.prefactor:.4f} residual={fit.residual:.2e}"
    )
    return EXIT_OK if all(row["converged"] for row in rows) else EXIT_SOLVER


def _cmd_spectrum(args, file_cfg) -> int:
    defaults = {
        "n": None,
        "delta": None,
        "sector": None,
        "max_dim": 5000,
        "csv": None,
        "json": None,
    }
    effective = _merge(defaults, file_cfg, vars(args), "spectrum")
    for key in ("n", "delta", "sector"):
        _require(effective, key, "spectrum")
    n = int(effective["n"])
    delta = float(effective["delta"])
    sector = int(effective["sector"])
    params = ChainParameters(n_sites=n, interaction=delta)
    result = domain_state_deviation(params, sector, max_dim=int(effective["max_dim"]))
    rows = []
    for j in range(1, n + 1):
        predicted = (
            predictions.domain_deviation(sector, n, delta, j)
            if abs(delta) > 0.5
            else math.nan
        )
        rows.append(
            {
                "site": j,
                "density": float(result["densities"][j - 1]),
                "deviation": float(result["deviation"][j - 1]),
                "predicted": predicted,
            }
        )
    energies = result["energies"]
    gap = math.nan
    if energies.size >= 2:
        gap = float(energies[-1] - energies[-2]) if delta >= 0 else float(energies[1] - energies[0])
    config_doc = {"subcommand": "spectrum", **effective}
    if effective.get("csv"):
        write_csv(effective["csv"], rows, columns=("site", "density", "deviation", "predicted"), config=config_doc)
    if effective.get("json"):
        payload = {"sites": rows, "energies": [float(e) for e in energies], "edge_gap": gap}
        write_json(effective["json"], payload, config=config_doc)
    print(
        f"spectrum N={n} delta={delta:g} sector={sector}: dim={energies.size} "
        f"edge_gap={gap:.6f} max_deviation={max(r['deviation'] for r in rows):.3e}"
    )
    return EXIT_OK


def _cmd_predict(args, file_cfg) -> int:
    defaults = {
        "n": None,
        "delta": None,
        "f": 0.5,
        "gamma": 0.0,
        "coupling": 1.0,
        "pn": False,
        "delta0": False,
        "purity": False,
        "xi": False,
        "csv": None,
        "json": None,
    }
    effective = _merge(defaults, file_cfg, vars(args), "predict")
    selected = {k for k in ("pn", "delta0", "purity", "xi") if effective[k]}
    everything = not selected
    results: dict = {}

    delta = effective["delta"]
    if "delta0" in selected or (everything and effective["n"] is not None):
        results["delta0_current"] = predictions.delta0_current(
            int(_require(effective, "n", "predict")),
            float(effective["f"]),
            float(effective["coupling"]),
            float(effective["gamma"]),
        )
    if "pn" in selected or (everything and delta is not None and effective["n"] is not None):
        n = int(_require(effective, "n", "predict"))
        d = float(_require(effective, "delta", "predict"))
        results["sector_probs_closed_form"] = predictions.sector_probs_closed_form(n, d).tolist()
        results["sector_probs_detailed_balance"] = predictions.sector_probs_detailed_balance(n, d).tolist()
    if "purity" in selected or (everything and delta is not None and abs(float(delta)) > 1):
        results["purity"] = predictions.purity_prediction(float(_require(effective, "delta", "predict")))
    if "xi" in selected or (everything and delta is not None and abs(float(delta)) > 0.5):
        results["localization_length"] = predictions.localization_length(
            float(_require(effective, "delta", "predict"))
        )
    if not results:
        raise ConfigError("predict: nothing to compute; pass --pn/--delta0/--purity/--xi with their inputs")

    config_doc = {"subcommand": "predict", **effective}
    if effective.get("csv"):
        if "sector_probs_closed_form" in results:
            rows = [
                {
                    "n": i,
                    "closed_form": c,
                    "detailed_balance": b,
                }
                for i, (c, b) in enumerate(
                    zip(
                        results["sector_probs_closed_form"],
                        results["sector_probs_detailed_balance"],
                    )
                )
            ]
            write_csv(effective["csv"], rows, columns=("n", "closed_form", "detailed_balance"), config=config_doc)
        else:
            scalars = {k: v for k, v in results.items() if isinstance(v, float)}
            write_csv(effective["csv"], [scalars], columns=tuple(scalars), config=config_doc)
    if effective.get("json"):
        write_json(effective["json"], results, config=config_doc)
    parts = ", ".join(
        f"{key}={value:.6g}" if isinstance(value, float) else f"{key}[{len(value)}]"
        for key, value in results.items()
    )
    print(f"predict: {parts}")
    return EXIT_OK


# -- parser --------------------------------------------------------------


def _add_chain_flags(sub):
    sub.add_argument("--n", type=int, help="chain length N")
    sub.add_argument("--delta", type=float, help="interaction strength")
    sub.add_argument("--f", type=float, help="drive bias in [-1, 1]")
    sub.add_argument("--gamma", type=float, help="bulk dephasing rate")
    sub.add_argument("--coupling", type=float, help="boundary rate Gamma")
    sub.add_argument("--b", type=float, help="staggered field amplitude")


def _add_output_flags(sub):
    sub.add_argument("--config", help="JSON configuration file")
    sub.add_argument("--csv", help="CSV output path")
    sub.add_argument("--json", dest="json", help="JSON output path")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drivenchain",
        description="Stationary transport in the boundary-driven, dephased fermion chain.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("ness-exact", help="exact stationary state at one parameter point")
    _add_chain_flags(sub)
    sub.add_argument("--method", choices=["auto", "direct", "ilu", "shift-invert", "evolve"])
    sub.add_argument("--tol", type=float, help="solver tolerance")
    sub.add_argument("--max-time", dest="max_time", type=float, help="model-time budget (evolve route)")
    _add_output_flags(sub)

    sub = commands.add_parser("ness-mpo", help="matrix-product stationary state at one point")
    _add_chain_flags(sub)
    sub.add_argument("--chi", type=int, help="maximum bond dimension")
    sub.add_argument("--cutoff", type=float, help="relative singular-value cutoff")
    sub.add_argument("--stages", help="time-step stages as dt:duration[,dt:duration...]")
    sub.add_argument("--drift-tol", dest="drift_tol", type=float, help="current drift tolerance")
    sub.add_argument("--check-every", dest="check_every", type=float, help="model time between checks")
    _add_output_flags(sub)

    sub = commands.add_parser("toy", help="companion few-level model")
    sub.add_argument("--k", type=int, help="number of configuration states")
    sub.add_argument("--delta", type=float, help="level shift")
    sub.add_argument("--f", type=float, help="drive bias in [0, 1]")
    sub.add_argument("--gamma", type=float, help="dephasing rate")
    sub.add_argument("--coupling", type=float, help="drive rate Gamma")
    sub.add_argument("--grid", action="store_const", const=True, help="emit an f-gamma surface")
    sub.add_argument("--f-points", dest="f_points", type=int, help="bias grid size")
    sub.add_argument("--gamma-points", dest="gamma_points", type=int, help="dephasing grid size")
    _add_output_flags(sub)

    sub = commands.add_parser("sweep", help="parameter-grid sweep from a config file")
    sub.add_argument("--config", help="JSON sweep configuration", required=False)
    sub.add_argument("--csv", help="CSV output path (overrides config)")
    sub.add_argument("--json", dest="json", help="JSON output path (overrides config)")
    sub.add_argument("--workers", type=int, help="parallel grid workers")

    sub = commands.add_parser("gamma-opt", help="dephasing rate maximizing the current")
    sub.add_argument("--n", type=int, help="chain length N")
    sub.add_argument("--delta", type=float, help="interaction strength")
    sub.add_argument("--f", type=float, help="drive bias")
    sub.add_argument("--coupling", type=float, help="boundary rate Gamma")
    sub.add_argument("--b", type=float, help="staggered field amplitude")
    sub.add_argument("--tol", type=float, help="absolute tolerance in gamma")
    _add_output_flags(sub)

    sub = commands.add_parser("diffusion", help="diffusive-scaling fit over chain lengths")
    sub.add_argument("--n-list", dest="n_list", help="chain lengths, e.g. 8,12,16,20")
    sub.add_argument("--delta", type=float, help="interaction strength")
    sub.add_argument("--f", type=float, help="drive bias")
    sub.add_argument("--gamma", type=float, help="dephasing rate")
    sub.add_argument("--coupling", type=float, help="boundary rate Gamma")
    sub.add_argument("--solver", choices=["exact", "mpo", "auto-by-size"])
    sub.add_argument("--chi", type=int, help="maximum bond dimension")
    sub.add_argument("--stages", help="MPO stages as dt:duration[,...]")
    _add_output_flags(sub)

    sub = commands.add_parser("spectrum", help="sector spectrum and domain-state deviations")
    sub.add_argument("--n", type=int, help="chain length N")
    sub.add_argument("--delta", type=float, help="interaction strength")
    sub.add_argument("--sector", type=int, help="particle number n")
    sub.add_argument("--max-dim", dest="max_dim", type=int, help="dense eigensolve cap")
    _add_output_flags(sub)

    sub = commands.add_parser("predict", help="closed-form reference values")
    sub.add_argument("--n", type=int, help="chain length N")
    sub.add_argument("--delta", type=float, help="interaction strength")
    sub.add_argument("--f", type=float, help="drive bias")
    sub.add_argument("--gamma", type=float, help="dephasing rate")
    sub.add_argument("--coupling", type=float, help="boundary rate Gamma")
    sub.add_argument("--pn", action="store_const", const=True, help="sector probabilities")
    sub.add_argument("--delta0", action="store_const", const=True, help="noninteracting current")
    sub.add_argument("--purity", action="store_const", const=True, help="purity prediction")
    sub.add_argument("--xi", action="store_const", const=True, help="localization length")
    _add_output_flags(sub)

    return parser


_HANDLERS = {
    "ness-exact": _cmd_ness_exact,
    "ness-mpo": _cmd_ness_mpo,
    "toy": _cmd_toy,
    "sweep": _cmd_sweep,
    "gamma-opt": _cmd_gamma_opt,
    "diffusion": _cmd_diffusion,
    "spectrum": _cmd_spectrum,
    "predict": _cmd_predict,
}


def main(argv=None) -> int:
    """Entry point returning an exit code instead of raising SystemExit."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        file_cfg = load_config(args.config) if getattr(args, "config", None) else {}
        return _HANDLERS[args.command](args, file_cfg)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NonConvergenceError, DegenerateKernelError, AnalysisError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def entry_point():
    sys.exit(main())
