"""Config-driven command line interface: scenario parsing and file emission."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from . import _kernels
from .analysis import convergence_order, relative_l2_error, spacetime_spectrum
from .errors import ConfigError, DeadwaterError, DomainError
from .forcing import (
    ConstantSpeed,
    ForcingOperator,
    RampSpeed,
    ShipShape,
    load_speed_table,
)
from .physics import PhysicalParams, Regime, critical_speed, wake_geometry
from .solver import (
    IntegratorConfig,
    constant_speed_solution,
    initial_state,
    run,
    stationary_state,
)
from .spectral import Grid, RealField, recover_eta_phi, write_field
from .tuning import TuneConfig, scenario_measure, tune_epsilon

__all__ = ["ScenarioConfig", "parse_config", "load_config", "main"]


@dataclass
class ScenarioConfig:
    physical: PhysicalParams
    grid: Grid
    ship: ShipShape
    profile: object
    epsilon: object  # float or "auto"
    integrator: IntegratorConfig
    initial: str
    t_final: float
    output_dir: Path
    tuning: TuneConfig | None
    config_hash: str


def _section(doc: dict, key: str, required: bool = True):
    if key not in doc:
        if required:
            raise ConfigError(f"missing required key '{key}'")
        return None
    return doc[key]


def _build(key, factory, **kwargs):
    try:
        return factory(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"{key}: {exc}") from exc
    except DomainError as exc:
        raise ConfigError(f"{key}: {exc}") from exc


def _build_profile(entry, base: Path):
    if not isinstance(entry, dict) or "kind" not in entry:
        raise ConfigError("profile: must be a mapping with a 'kind'")
    kind = entry["kind"]
    rest = {k: v for k, v in entry.items() if k != "kind"}
    if kind == "constant":
        return _build("profile", ConstantSpeed, **rest)
    if kind == "ramp":
        return _build("profile", RampSpeed, **rest)
    if kind == "table":
        path = rest.pop("path", None)
        if path is None:
            raise ConfigError("profile: table profiles need a 'path'")
        return load_speed_table(base / path, **rest)
    raise ConfigError(f"profile: unknown kind {kind!r}")


def parse_config(text: str, base_dir=".") -> ScenarioConfig:
    """Parse and validate a YAML scenario document.

    Defaults: rule=rectangle, snapshot_every=50, front_window=0.9,
    output_dir=out. epsilon may be the string "auto", which requires a
    tuning section.
    """
    base = Path(base_dir)
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a mapping")

    physical = _build("physical", PhysicalParams, **_section(doc, "physical"))
    grid = _build("grid", Grid, **_section(doc, "grid"))
    ship = _build("ship", ShipShape, **_section(doc, "ship"))
    profile = _build_profile(_section(doc, "profile"), base)
    integrator = _build("integrator", IntegratorConfig, **_section(doc, "integrator"))

    epsilon = _section(doc, "epsilon")
    if epsilon != "auto":
        try:
            epsilon = float(epsilon)
        except (TypeError, ValueError):
            raise ConfigError(f"epsilon: expected a number or 'auto', got {epsilon!r}")
        if epsilon < 0:
            raise ConfigError("epsilon: damping must be nonnegative")

    tuning_spec = _section(doc, "tuning", required=False)
    tuning = _build("tuning", TuneConfig, **tuning_spec) if tuning_spec is not None else None
    if epsilon == "auto" and tuning is None:
        raise ConfigError("epsilon: 'auto' requires a tuning section")

    initial = doc.get("initial", "zero")
    if initial not in ("zero", "steady"):
        raise ConfigError(f"initial: must be 'zero' or 'steady', got {initial!r}")
    if initial == "steady" and not isinstance(profile, ConstantSpeed):
        raise ConfigError("initial: a steady start requires a constant profile")

    t_final = _section(doc, "t_final")
    try:
        t_final = float(t_final)
    except (TypeError, ValueError):
        raise ConfigError(f"t_final: expected a number, got {t_final!r}")
    if t_final < 0:
        raise ConfigError("t_final: must be nonnegative")

    if grid.dim == 2 and ship.beam is None:
        raise ConfigError("ship: 2D grids need a beam")

    digest = hashlib.sha256(
        json.dumps(doc, sort_keys=True, default=str).encode()
    ).hexdigest()[:16]
    return ScenarioConfig(
        physical=physical,
        grid=grid,
        ship=ship,
        profile=profile,
        epsilon=epsilon,
        integrator=integrator,
        initial=initial,
        t_final=t_final,
        output_dir=Path(doc.get("output_dir", "out")),
        tuning=tuning,
        config_hash=digest,
    )


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    return parse_config(path.read_text(), base_dir=path.parent)


def _write_csv(path: Path, header: str, columns, fmt="%.17g"):
    arr = np.column_stack(columns)
    np.savetxt(path, arr, delimiter=",", header=header, comments="", fmt=fmt)


def _emit_elevation(cfg: ScenarioConfig, out: Path, stem: str, field: RealField,
                    t: float, epsilon: float):
    if cfg.grid.dim == 1:
        _write_csv(out / f"{stem}.csv", "x_m,eta_m", (cfg.grid.x(), field.values))
    else:
        write_field(out / stem, field, time=t, epsilon=epsilon,
                    extra_meta={"config_hash": cfg.config_hash})


def _resolved_epsilon(cfg: ScenarioConfig) -> float:
    if cfg.epsilon == "auto":
        raise ConfigError("epsilon: run tune-epsilon first or set a numeric value")
    return float(cfg.epsilon)


def cmd_params(cfg: ScenarioConfig, out: Path) -> int:
    u = cfg.profile.limit_speed
    geo = wake_geometry(cfg.physical, u)
    lines = [
        f"critical_speed_m_per_s = {critical_speed(cfg.physical):.6f}",
        f"ship_speed_m_per_s = {u:.6f}",
        f"regime = {geo.regime.value}",
    ]
    if geo.regime is Regime.SUBCRITICAL:
        lines.append(f"critical_wavenumber_cycles_per_m = {geo.transverse_wavenumber:.6e}")
    elif geo.regime is Regime.SUPERCRITICAL:
        lines.append(f"limit_angle_rad = {geo.limit_angle:.6f}")
    print("\n".join(lines))
    (out / "params.txt").write_text("\n".join(lines) + "\n")
    return 0


def cmd_steady(cfg: ScenarioConfig, out: Path) -> int:
    if not isinstance(cfg.profile, ConstantSpeed):
        raise ConfigError("profile: the steady field requires a constant profile")
    epsilon = _resolved_epsilon(cfg)
    mu = stationary_state(cfg.physical, cfg.ship, cfg.profile.U, epsilon, cfg.grid, 0.0)
    rec = recover_eta_phi(mu, cfg.physical)
    if cfg.grid.dim == 1:
        _write_csv(out / "steady.csv", "x_m,eta_m,phi_kg_per_m_per_s",
                   (cfg.grid.x(), rec.elevation.values, rec.potential.values))
    else:
        _emit_elevation(cfg, out, "steady_elevation", rec.elevation, 0.0, epsilon)
        write_field(out / "steady_potential", rec.potential, time=0.0, epsilon=epsilon,
                    extra_meta={"config_hash": cfg.config_hash})
    print(f"steady state written to {out} (imag residue {rec.imag_residue:.2e})")
    return 0


def _run_scenario(cfg: ScenarioConfig, epsilon: float):
    state = initial_state(cfg.initial, cfg.physical, cfg.ship, cfg.profile,
                          epsilon, cfg.grid)
    op = ForcingOperator(cfg.physical, cfg.ship, cfg.profile, cfg.grid)
    return run(state, cfg.integrator, op, cfg.t_final)


def cmd_simulate(cfg: ScenarioConfig, out: Path) -> int:
    epsilon = _resolved_epsilon(cfg)
    result = _run_scenario(cfg, epsilon)
    for i, snap in enumerate(result.snapshots):
        _emit_elevation(cfg, out, f"snapshot_{i:04d}", snap.elevation, snap.t, epsilon)
    meta = dict(result.metadata)
    meta.update(
        config_hash=cfg.config_hash,
        snapshots=len(result.snapshots),
        snapshot_times=[s.t for s in result.snapshots],
    )
    (out / "run.json").write_text(json.dumps(meta, indent=2) + "\n")
    print(
        f"{meta['steps']} steps to t = {meta['t_final']} s; "
        f"{len(result.snapshots)} snapshots in {out}"
    )
    return 0


def cmd_tune_epsilon(cfg: ScenarioConfig, out: Path) -> int:
    if cfg.tuning is None:
        raise ConfigError("tuning: section required for tune-epsilon")
    measure = scenario_measure(cfg.physical, cfg.grid, cfg.ship, cfg.profile,
                               cfg.integrator, cfg.t_final, cfg.tuning,
                               initial=cfg.initial)
    result = tune_epsilon(cfg.tuning, measure)
    _write_csv(out / "tuning_trace.csv", "n,epsilon_n,M_n",
               (np.arange(result.iterations), result.epsilons, result.measures),
               fmt=["%d", "%.17g", "%.17g"])
    (out / "tuning.json").write_text(json.dumps({
        "epsilon_star": result.epsilon_star,
        "iterations": result.iterations,
        "config_hash": cfg.config_hash,
    }, indent=2) + "\n")
    print(f"epsilon_star = {result.epsilon_star:.6e} after {result.iterations} simulations")
    return 0


def cmd_convergence(cfg: ScenarioConfig, out: Path, levels: int) -> int:
    if not isinstance(cfg.profile, ConstantSpeed):
        raise ConfigError("profile: the convergence sweep needs a constant profile "
                          "(the analytic solution is its reference)")
    epsilon = _resolved_epsilon(cfg)
    state0 = initial_state(cfg.initial, cfg.physical, cfg.ship, cfg.profile,
                           epsilon, cfg.grid)
    op = ForcingOperator(cfg.physical, cfg.ship, cfg.profile, cfg.grid)
    reference = constant_speed_solution(
        cfg.physical, cfg.ship, cfg.profile.U, epsilon, cfg.grid,
        state0.spectrum, cfg.t_final)
    eta_ref = recover_eta_phi(reference, cfg.physical).elevation

    points = []
    for level in range(levels):
        dt = cfg.integrator.dt / 2**level
        config = IntegratorConfig(dt=dt, rule=cfg.integrator.rule,
                                  snapshot_every=10**9)
        result = run(state0, config, op, cfg.t_final)
        eta = recover_eta_phi(result.final.spectrum, cfg.physical).elevation
        points.append((dt, relative_l2_error(eta, eta_ref)))
        print(f"dt = {dt:g} s: relative l2 error = {points[-1][1]:.6e}")
    fit = convergence_order(points)
    _write_csv(out / "convergence.csv", "dt_s,rel_l2_error",
               ([p[0] for p in points], [p[1] for p in points]))
    print(f"fitted order = {fit.slope:.5f} (rule = {cfg.integrator.rule})")
    return 0


def cmd_spectrum(cfg: ScenarioConfig, out: Path) -> int:
    if cfg.grid.dim != 1:
        raise ConfigError("grid: the space-time spectrum needs a 1D scenario")
    epsilon = _resolved_epsilon(cfg)
    result = _run_scenario(cfg, epsilon)
    if len(result.snapshots) < 16:
        raise ConfigError("integrator: need at least 16 snapshots; "
                          "lower snapshot_every or raise t_final")
    spec = spacetime_spectrum([s.elevation for s in result.snapshots],
                              [s.t for s in result.snapshots],
                              cfg.physical, cfg.profile.limit_speed)
    _write_csv(out / "spectrum_kappa_axis.csv", "kappa_cycles_per_m", (spec.kappa,))
    _write_csv(out / "spectrum_freq_axis.csv", "f_hz", (spec.freq,))
    _write_csv(out / "spectrum_overlays.csv",
               "kappa_cycles_per_m,f_dispersion_hz,f_ship_hz",
               (spec.kappa, spec.f_dispersion, spec.f_ship))
    spec.magnitude.astype("<f8").tofile(out / "spectrum_magnitude.bin")
    (out / "spectrum_magnitude.json").write_text(json.dumps({
        "kind": "spectrum_magnitude",
        "rows_freq": len(spec.freq),
        "cols_kappa": len(spec.kappa),
        "dtype": "<f8",
        "config_hash": cfg.config_hash,
    }, indent=2) + "\n")
    print(f"spectrum over {len(spec.freq)} x {len(spec.kappa)} bins written to {out}")
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deadwater",
        description="Spectral simulator for ship-forced internal waves "
                    "in a two-layer fluid.",
    )
    parser.add_argument("--config", required=True, help="scenario YAML file")
    parser.add_argument("--output", default=None, help="override output directory")
    parser.add_argument("--threads", type=int, default=None,
                        help="compute threads for the compiled kernels")
    parser.add_argument("--seed", type=int, default=None,
                        help="reserved; the pipeline is deterministic")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("params", help="report critical speed and wake geometry")
    sub.add_parser("steady", help="emit the damped steady field")
    sub.add_parser("simulate", help="run the scenario and emit snapshots")
    sub.add_parser("tune-epsilon", help="search for the smallest usable damping")
    conv = sub.add_parser("convergence", help="dyadic time-step sweep vs analytic solution")
    conv.add_argument("--levels", type=int, default=4, help="number of dyadic levels")
    sub.add_parser("spectrum", help="run and emit the space-time spectrum")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.threads is not None and _kernels.numba_enabled():
            import numba

            numba.set_num_threads(args.threads)
        out = Path(args.output) if args.output else cfg.output_dir
        out.mkdir(parents=True, exist_ok=True)
        if args.command == "params":
            return cmd_params(cfg, out)
        if args.command == "steady":
            return cmd_steady(cfg, out)
        if args.command == "simulate":
            return cmd_simulate(cfg, out)
        if args.command == "tune-epsilon":
            return cmd_tune_epsilon(cfg, out)
        if args.command == "convergence":
            return cmd_convergence(cfg, out, args.levels)
        if args.command == "spectrum":
            return cmd_spectrum(cfg, out)
        raise ConfigError(f"unknown command {args.command!r}")
    except (DeadwaterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
