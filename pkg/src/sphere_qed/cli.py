"""
``sphere-qed`` command line: JSON configuration in, CSV table out.

Exit codes: 0 success, 1 numerical failure, 2 configuration error. A
configuration error never leaves an output file behind.
"""
from __future__ import annotations

import argparse
import hashlib
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .exceptions import ConfigError, NumericalError
from .markov import markov_report
from .presets import debye_sphere, drude_sphere, vacuum_sphere
from .resonances import (
    DEBYE_DEFAULT_E_MODES,
    DEBYE_DEFAULT_H_MODES,
    DRUDE_DEFAULT_ORDERS,
    dielectric_modes,
    plasmonic_modes,
    plasmonic_resonance,
)
from .spectral import evaluate_series
from .thermal import DEFAULT_CUTOFF, SphereBaths, ThermalConfig, correlation_direct, correlation_fourier

log = logging.getLogger("sphere_qed")

EXIT_OK, EXIT_NUMERICAL, EXIT_CONFIG = 0, 1, 2
COMMANDS = ("density", "effective", "resonances", "markov", "correlation", "dynamics", "convergence")


# ---------------------------------------------------------------- config helpers

def _block(cfg: dict, name: str, defaults: dict, required: tuple = ()) -> dict:
    raw = cfg.get(name, {})
    if not isinstance(raw, dict):
        raise ConfigError(f"'{name}' must be an object")
    unknown = set(raw) - set(defaults) - set(required)
    if unknown:
        raise ConfigError(f"unknown key(s) in '{name}': {sorted(unknown)}")
    missing = [k for k in required if k not in raw]
    if missing:
        raise ConfigError(f"missing key(s) in '{name}': {missing}")
    out = dict(defaults)
    out.update(raw)
    return out


def _number(block: dict, key: str, where: str) -> float:
    v = block[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"'{where}.{key}' must be a finite number")
    return float(v)


def _integer(block: dict, key: str, where: str) -> int:
    v = block[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"'{where}.{key}' must be an integer")
    return v


MATERIAL_DEFAULTS = {
    "drude": {"model": "drude", "kpa": 1.0, "nu_over_wp": 0.01},
    "debye": {"model": "debye", "chi0": 15.0, "tau_wc": 0.01 / math.sqrt(15.0)},
    "vacuum": {"model": "vacuum", "kra": 1.0},
}
GEOMETRY_DEFAULTS = {"drude": 1.75, "debye": 1.5, "vacuum": 1.75}


def _sphere(cfg: dict, resolved: dict):
    raw = cfg.get("material")
    if not isinstance(raw, dict) or raw.get("model") not in MATERIAL_DEFAULTS:
        raise ConfigError("'material.model' must be one of " + ", ".join(MATERIAL_DEFAULTS))
    model = raw["model"]
    mat = _block(cfg, "material", MATERIAL_DEFAULTS[model])
    geo = _block(cfg, "geometry", {"d_over_a": GEOMETRY_DEFAULTS[model], "orientation": "tangential"})
    if geo["orientation"] not in ("tangential", "radial"):
        raise ConfigError("'geometry.orientation' must be 'tangential' or 'radial'")
    d = _number(geo, "d_over_a", "geometry")
    if model == "drude":
        pair = drude_sphere(_number(mat, "kpa", "material"), _number(mat, "nu_over_wp", "material"), d, geo["orientation"])
    elif model == "debye":
        pair = debye_sphere(_number(mat, "chi0", "material"), _number(mat, "tau_wc", "material"), d, geo["orientation"])
    else:
        pair = vacuum_sphere(_number(mat, "kra", "material"), d, geo["orientation"])
    resolved["material"], resolved["geometry"] = mat, geo
    return pair


def _grid(cfg: dict, resolved: dict, name: str, defaults: dict) -> np.ndarray:
    g = _block(cfg, name, defaults)
    if "values" in g and g["values"] is not None:
        vals = g["values"]
        if not isinstance(vals, list) or not vals:
            raise ConfigError(f"'{name}.values' must be a non-empty list")
        arr = np.array([float(v) for v in vals])
        g = {"values": vals}
    else:
        lo, hi, n = _number(g, "min", name), _number(g, "max", name), _integer(g, "count", name)
        if n < 1 or not hi >= lo:
            raise ConfigError(f"'{name}' needs count >= 1 and max >= min")
        if g["spacing"] == "linear":
            arr = np.linspace(lo, hi, n)
        elif g["spacing"] == "log":
            if not lo > 0:
                raise ConfigError(f"'{name}' log spacing needs min > 0")
            arr = np.geomspace(lo, hi, n)
        else:
            raise ConfigError(f"'{name}.spacing' must be 'linear' or 'log'")
        g = {k: v for k, v in g.items() if k != "values"}
    resolved[name] = g
    return arr


def _grid_defaults(lo, hi, n):
    return {"min": lo, "max": hi, "count": n, "spacing": "linear", "values": None}


def _thermal(cfg: dict, resolved: dict) -> ThermalConfig:
    t = _block(cfg, "thermal", {"cutoff": DEFAULT_CUTOFF}, required=("beta_M", "beta_S"))
    resolved["thermal"] = t
    return ThermalConfig(_number(t, "beta_M", "thermal"), _number(t, "beta_S", "thermal"), _number(t, "cutoff", "thermal"))


# ---------------------------------------------------------------- output


@dataclass
class Table:
    columns: list[str]
    rows: list[list[Any]]
    failures: int = 0
    notes: tuple = ()


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def render_csv(command: str, resolved: dict, table: Table) -> str:
    canonical = json.dumps(resolved, sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(canonical.encode()).hexdigest()
    buf = io.StringIO()
    buf.write(f"# sphere-qed {__version__} command={command}\n")
    buf.write(f"# config_sha256={digest}\n")
    buf.write(f"# config={canonical}\n")
    for note in table.notes:
        buf.write(f"# {note}\n")
    buf.write(",".join(table.columns) + "\n")
    for row in table.rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


# ---------------------------------------------------------------- commands


def cmd_density(cfg: dict, resolved: dict) -> Table:
    geometry, material = _sphere(cfg, resolved)
    grid = _grid(cfg, resolved, "grid", _grid_defaults(0.01, 3.0, 600))
    if np.any(grid <= 0):
        raise ConfigError("density grid must be strictly positive")
    res = evaluate_series(geometry, material, grid, strict=False)
    resid = np.abs(res.medium + res.scattering - res.total) / np.abs(res.total)
    rows = [list(r) for r in zip(grid, res.medium, res.scattering, grid**3, res.total, resid)]
    return Table(
        ["omega_norm", "j_medium", "j_scattering", "j_vacuum", "gamma_over_2pi", "sum_rule_residual"],
        rows, int(res.failed.sum()),
    )


def cmd_effective(cfg: dict, resolved: dict) -> Table:
    baths = SphereBaths(*_sphere(cfg, resolved))
    thermal = _thermal(cfg, resolved)
    w = thermal.cutoff
    grid = _grid(cfg, resolved, "grid", _grid_defaults(-w, w, 601))
    if np.any(np.abs(grid) > w):
        raise ConfigError("effective grid must lie within [-cutoff, cutoff]")
    tab = baths.effective_table(thermal, grid)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(tab.vacuum_td > 0, tab.values / tab.vacuum_td, np.nan)
    rows = [list(r) for r in zip(grid, tab.values, tab.medium_td, tab.scattering_td, tab.vacuum_td, ratio)]
    return Table(
        ["omega_norm", "j_eff", "j_medium_td", "j_scattering_td", "j_vacuum_td", "ratio_to_vacuum_td"],
        rows, int(np.sum(~np.isfinite(tab.values))),
    )


def cmd_resonances(cfg: dict, resolved: dict) -> Table:
    geometry, material = _sphere(cfg, resolved)
    model = resolved["material"]["model"]
    if model == "drude":
        m = _block(cfg, "modes", {"orders": list(DRUDE_DEFAULT_ORDERS)})
        preds = plasmonic_modes(m["orders"], resolved["material"]["kpa"], resolved["material"]["nu_over_wp"])
    elif model == "debye":
        m = _block(cfg, "modes", {"H": [list(x) for x in DEBYE_DEFAULT_H_MODES], "E": [list(x) for x in DEBYE_DEFAULT_E_MODES]})
        kca = 1.0 / math.sqrt(resolved["material"]["chi0"])
        wanted = [("H", n, l) for n, l in m["H"]] + [("E", n, l) for n, l in m["E"]]
        preds = dielectric_modes(wanted, kca, resolved["material"]["tau_wc"])
    else:
        raise ConfigError("resonances need a drude or debye material")
    resolved["modes"] = m
    rows = [
        [p.family, p.n, p.ell, p.label.replace(",", ";"), p.frequency, p.bandwidth.total, p.bandwidth.material, p.bandwidth.radiative]
        for p in preds
    ]
    return Table(["family", "n", "ell", "label", "omega_norm", "fbw_total", "fbw_material", "fbw_radiative"], rows)


def cmd_markov(cfg: dict, resolved: dict) -> Table:
    baths = SphereBaths(*_sphere(cfg, resolved))
    thermal = _thermal(cfg, resolved)
    grid = _grid(cfg, resolved, "frequencies", _grid_defaults(0.1, 2.0, 20))
    if np.any(np.abs(grid) >= thermal.cutoff):
        raise ConfigError("Markov frequencies must lie strictly inside the cutoff window")
    rep = markov_report(baths, thermal, grid)
    rows = [list(r) for r in zip(rep.omega, rep.gamma, rep.gamma_M, rep.gamma_S, rep.shift, rep.shift_M, rep.shift_S)]
    return Table(
        ["omega_norm", "gamma", "gamma_M", "gamma_S", "lamb_shift", "lamb_shift_M", "lamb_shift_S"],
        rows, notes=(f"cutoff={_fmt(thermal.cutoff)}",),
    )


def cmd_correlation(cfg: dict, resolved: dict) -> Table:
    baths = SphereBaths(*_sphere(cfg, resolved))
    thermal = _thermal(cfg, resolved)
    times = _grid(cfg, resolved, "times", _grid_defaults(0.0, 10.0, 101))
    if np.any(times < 0):
        raise ConfigError("correlation times must be non-negative")
    pts = baths.resonance_frequencies()
    direct = correlation_direct(baths.medium, thermal.beta_M, thermal.cutoff, times, pts) + correlation_direct(
        baths.scattering, thermal.beta_S, thermal.cutoff, times, pts
    )
    fourier = correlation_fourier(baths.effective(thermal), thermal.cutoff, times, pts)
    rows = [
        [t, d.real, d.imag, f.real, f.imag, abs(d - f)] for t, d, f in zip(times, np.atleast_1d(direct), np.atleast_1d(fourier))
    ]
    return Table(["time_norm", "c_direct_re", "c_direct_im", "c_fourier_re", "c_fourier_im", "abs_difference"], rows)


SIMULATION_DEFAULTS = {
    "dt": 0.02, "t_final": 50.0, "engine": "mps", "n_ph": 2, "max_bond": 64,
    "truncation": 1e-12, "krylov_dim": 16, "sample_every": 5,
}


def _dynamics_setup(cfg: dict, resolved: dict):
    from .dynamics import EmitterConfig, SimulationParams

    baths = SphereBaths(*_sphere(cfg, resolved))
    thermal = _thermal(cfg, resolved)
    em = _block(cfg, "emitter", {"omega_a": None, "plasmonic_mode": None, "initial_state": "x_minus"}, required=("eta",))
    if (em["omega_a"] is None) == (em["plasmonic_mode"] is None):
        raise ConfigError("give exactly one of 'emitter.omega_a' or 'emitter.plasmonic_mode'")
    if em["plasmonic_mode"] is not None:
        if resolved["material"]["model"] != "drude":
            raise ConfigError("'emitter.plasmonic_mode' needs a drude material")
        omega_a = plasmonic_resonance(_integer(em, "plasmonic_mode", "emitter"), resolved["material"]["kpa"])
    else:
        omega_a = _number(em, "omega_a", "emitter")
    emitter = EmitterConfig(omega_a, _number(em, "eta", "emitter"), em["initial_state"])
    sim = _block(cfg, "simulation", SIMULATION_DEFAULTS)
    params = SimulationParams(
        _number(sim, "dt", "simulation"), _number(sim, "t_final", "simulation"), sim["engine"],
        _integer(sim, "n_ph", "simulation"), _integer(sim, "max_bond", "simulation"),
        _number(sim, "truncation", "simulation"), _integer(sim, "krylov_dim", "simulation"),
        _integer(sim, "sample_every", "simulation"),
    )
    resolved["emitter"], resolved["simulation"] = em, sim
    return baths, thermal, emitter, params


def cmd_dynamics(cfg: dict, resolved: dict) -> Table:
    from .dynamics import discretize, simulate

    baths, thermal, emitter, params = _dynamics_setup(cfg, resolved)
    b = _block(cfg, "bath", {"n_plus": 32, "n_minus": 32, "rule": "midpoint"})
    resolved["bath"] = b
    bath = discretize(
        baths.effective(thermal), thermal.cutoff, _integer(b, "n_plus", "bath"), _integer(b, "n_minus", "bath"),
        emitter.eta, b["rule"],
    )
    traj = simulate(bath, emitter, params)
    rows = [list(r) for r in zip(traj.times, traj.sx, traj.sz, traj.norm_deviation, traj.max_bond)]
    notes = (
        f"omega_a={_fmt(emitter.omega_a)}",
        f"truncation_error={_fmt(traj.truncation_error)}",
        f"bond_exhausted={int(traj.bond_exhausted)}",
    )
    return Table(["time_norm", "sx", "sz", "norm_dev", "max_bond"], rows, notes=notes)


def cmd_convergence(cfg: dict, resolved: dict) -> Table:
    """Late-time observables versus the number of bath modes per sign."""
    from .dynamics import discretize, simulate

    baths, thermal, emitter, params = _dynamics_setup(cfg, resolved)
    b = _block(cfg, "bath", {"modes_per_sign": [4, 8, 16, 32], "rule": "midpoint", "late_fraction": 0.2})
    resolved["bath"] = b
    counts = b["modes_per_sign"]
    if not isinstance(counts, list) or not counts or any(isinstance(n, bool) or not isinstance(n, int) or n < 1 for n in counts):
        raise ConfigError("'bath.modes_per_sign' must be a list of positive integers")
    frac = _number(b, "late_fraction", "bath")
    if not 0 < frac <= 1:
        raise ConfigError("'bath.late_fraction' must lie in (0, 1]")
    rows = []
    for n in counts:
        bath = discretize(baths.effective(thermal), thermal.cutoff, n, n, emitter.eta, b["rule"])
        traj = simulate(bath, emitter, params)
        late = traj.times >= (1 - frac) * traj.times[-1]
        rows.append([
            2 * n, float(np.mean(traj.sz[late])), float(np.max(np.abs(traj.sx[late]))),
            int(traj.max_bond.max()), traj.truncation_error, int(traj.bond_exhausted),
        ])
    return Table(["n_modes", "late_sz_mean", "late_sx_max_abs", "max_bond", "truncation_error", "bond_exhausted"], rows)


HANDLERS: dict[str, Callable[[dict, dict], Table]] = {
    "density": cmd_density,
    "effective": cmd_effective,
    "resonances": cmd_resonances,
    "markov": cmd_markov,
    "correlation": cmd_correlation,
    "dynamics": cmd_dynamics,
    "convergence": cmd_convergence,
}

TOP_LEVEL_KEYS = {
    "command", "material", "geometry", "grid", "thermal", "modes", "frequencies",
    "times", "emitter", "simulation", "bath",
}


def run(command: str, cfg: dict) -> tuple[str, Table]:
    """Validate ``cfg`` for ``command``, compute, and return ``(csv_text, table)``."""
    if command not in HANDLERS:
        raise ConfigError(f"unknown command {command!r}")
    if not isinstance(cfg, dict):
        raise ConfigError("configuration must be a JSON object")
    if cfg.get("command", command) != command:
        raise ConfigError(f"config is for command {cfg.get('command')!r}, not {command!r}")
    unknown = set(cfg) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {sorted(unknown)}")
    resolved: dict = {"command": command}
    try:
        table = HANDLERS[command](cfg, resolved)
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        # library preconditions (bad enum values, out-of-range inputs) are config errors
        raise ConfigError(str(exc)) from exc
    return render_csv(command, resolved, table), table


def _set_threads(n: int | None):
    if n is None:
        env = os.environ.get("SPHERE_QED_THREADS")
        if env is None:
            return None
        try:
            n = int(env)
        except ValueError:
            raise ConfigError("SPHERE_QED_THREADS must be an integer") from None
    if n < 1:
        raise ConfigError("thread count must be at least 1")
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=n)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sphere-qed", description=__doc__.strip().splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, type=Path, help="JSON configuration file")
    p.add_argument("--out", required=True, type=Path, help="CSV output path")
    p.add_argument("--threads", type=int, default=None, help="BLAS threads (default: $SPHERE_QED_THREADS)")
    p.add_argument("--verbose", action="store_true")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    limiter = None
    try:
        limiter = _set_threads(args.threads)
        try:
            cfg = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        log.info("running %s", args.command)
        text, table = run(args.command, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    finally:
        if limiter is not None:
            limiter.restore_original_limits()
    args.out.write_text(text)
    if table.failures:
        print(f"numerical failure: {table.failures} point(s) did not converge", file=sys.stderr)
        return EXIT_NUMERICAL
    log.info("wrote %d rows to %s", len(table.rows), args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
