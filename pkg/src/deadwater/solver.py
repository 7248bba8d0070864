"""Exponential time integrator for the forced per-mode oscillator.

Each spectral mode evolves independently under

    d mu_k / dt = i (omega_k + i epsilon) mu_k - g_k(t),

which the integrator treats exactly in its homogeneous part; only the
forcing integral over a step is approximated by quadrature. The
homogeneous propagator has modulus exp(-epsilon dt) <= 1, so the scheme
is unconditionally stable and preserves the continuous dissipation and
dispersion of mode differences exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import CapabilityError, ContractError, DivergenceError, DomainError
from .forcing import ConstantSpeed, ForcingOperator, ShipShape, stationary_coefficient
from .physics import PhysicalParams, angular_frequency
from .spectral import (
    Grid,
    RealField,
    SpectralField,
    recover_eta_phi,
    zero_nyquist,
)

__all__ = [
    "RULES",
    "IntegratorConfig",
    "SimState",
    "Snapshot",
    "RunResult",
    "propagator",
    "quadrature",
    "step",
    "run",
    "initial_state",
    "stationary_state",
    "constant_speed_solution",
]

RULES = ("rectangle", "trapezoid", "simpson")
_RULE_ID = {name: i for i, name in enumerate(RULES)}


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    rule: str = "rectangle"
    snapshot_every: int = 50

    def __post_init__(self):
        if self.dt <= 0:
            raise DomainError("time step must be positive")
        if self.rule not in RULES:
            raise DomainError(f"rule must be one of {RULES}, got {self.rule!r}")
        if self.snapshot_every < 1:
            raise DomainError("snapshot_every must be at least 1")


@dataclass
class SimState:
    """Evolved complex spectrum plus its clock and damping."""

    spectrum: SpectralField
    t: float
    epsilon: float
    step_index: int = 0

    def __post_init__(self):
        if self.epsilon < 0:
            raise DomainError("damping must be nonnegative")


@dataclass
class Snapshot:
    t: float
    elevation: RealField
    imag_residue: float


@dataclass
class RunResult:
    final: SimState
    snapshots: list[Snapshot]
    metadata: dict = field(default_factory=dict)


def propagator(params: PhysicalParams, epsilon: float, s, dt: float):
    """Homogeneous one-step factor exp((i omega(s) - epsilon) dt)."""
    if dt < 0:
        raise DomainError("dt must be nonnegative")
    if epsilon < 0:
        raise DomainError("damping must be nonnegative")
    om = angular_frequency(params, s)
    out = np.exp((1j * np.asarray(om) - epsilon) * dt)
    return complex(out) if np.isscalar(s) else out


def _complex_frequency(params, grid, epsilon):
    return angular_frequency(params, grid.kappa_magnitude()) + 1j * epsilon


def _needs_lookahead(rule: str) -> bool:
    return rule != "rectangle"


def _check_lookahead(op: ForcingOperator, rule: str):
    strict = getattr(op.profile, "strict", False)
    if _needs_lookahead(rule) and strict:
        raise CapabilityError(
            f"the {rule} rule evaluates ship speeds beyond the current time, "
            "which this profile does not provide"
        )


def quadrature(rule: str, op: ForcingOperator, epsilon: float, t_k: float, dt: float):
    """Per-mode quadrature of the forcing integral over [t_k, t_k + dt].

    Rectangle samples only the current time; trapezoid and Simpson also
    need the ship speed at t_k + dt (and t_k + dt/2), so they raise a
    CapabilityError for profiles that cannot look ahead.
    """
    if rule not in RULES:
        raise DomainError(f"rule must be one of {RULES}, got {rule!r}")
    if dt <= 0:
        raise DomainError("dt must be positive")
    _check_lookahead(op, rule)
    g0 = op.spectrum(t_k)
    if rule == "rectangle":
        return dt * g0
    om_eps = _complex_frequency(op.params, op.grid, epsilon)
    if rule == "trapezoid":
        return 0.5 * dt * (g0 + np.exp(-1j * om_eps * dt) * op.spectrum(t_k + dt))
    gh = op.spectrum(t_k + dt / 2)
    g1 = op.spectrum(t_k + dt)
    return (dt / 6.0) * (
        g0
        + 4.0 * np.exp(-1j * om_eps * dt / 2) * gh
        + np.exp(-1j * om_eps * dt) * g1
    )


def step(state: SimState, config: IntegratorConfig, op: ForcingOperator) -> SimState:
    """One integrator step: mu <- exp(i omega_eps dt) (mu - Q)."""
    if op.grid != state.spectrum.grid:
        raise ContractError("state and forcing live on different grids")
    dt = config.dt
    q = quadrature(config.rule, op, state.epsilon, state.t, dt)
    prop = np.exp(1j * _complex_frequency(op.params, op.grid, state.epsilon) * dt)
    values = prop * (state.spectrum.values - q)
    zero_nyquist(values, op.grid)
    return SimState(
        SpectralField(op.grid, values),
        t=state.t + dt,
        epsilon=state.epsilon,
        step_index=state.step_index + 1,
    )


def _profile_samples(op, rule, t0, dt, nsteps):
    """Pre-sample U and X at the times the chosen rule needs."""
    times = t0 + dt * np.arange(nsteps)
    u0 = np.asarray(op.profile.speed(times), dtype=float)
    x0 = np.asarray(op.profile.position(times), dtype=float)
    empty = np.zeros(0)
    u1 = x1 = uh = xh = empty
    if _needs_lookahead(rule):
        u1 = np.asarray(op.profile.speed(times + dt), dtype=float)
        x1 = np.asarray(op.profile.position(times + dt), dtype=float)
        if rule == "simpson":
            uh = np.asarray(op.profile.speed(times + dt / 2), dtype=float)
            xh = np.asarray(op.profile.position(times + dt / 2), dtype=float)
    return u0, x0, u1, x1, uh, xh


def _advance_block(mu_flat, op, epsilon, rule, t0, dt, nsteps, k0):
    """Advance nsteps constant-dt steps in place via the kernel."""
    if nsteps == 0:
        return
    om_eps = _complex_frequency(op.params, op.grid, epsilon).ravel()
    prop = np.exp(1j * om_eps * dt)
    rule_id = _RULE_ID[rule]
    if rule_id == 0:
        prop_inv = prop_half_inv = np.ones(0, dtype=np.complex128)
    else:
        prop_inv = np.exp(-1j * om_eps * dt)
        prop_half_inv = np.exp(-1j * om_eps * dt / 2)
    u0, x0, u1, x1, uh, xh = _profile_samples(op, rule, t0, dt, nsteps)
    bad = _kernels.advance(
        mu_flat,
        op.amplitude.ravel(),
        np.asarray(op.kappa_x, dtype=float).ravel(),
        prop,
        prop_inv,
        prop_half_inv,
        u0, x0, u1, x1, uh, xh,
        dt,
        rule_id,
    )
    if bad >= 0:
        raise DivergenceError(k0 + bad)


def run(initial: SimState, config: IntegratorConfig, op: ForcingOperator, t_final: float) -> RunResult:
    """March the state to t_final, recording elevation snapshots.

    Snapshots are taken at step indices divisible by snapshot_every,
    including the initial state. If t_final is not an integer number of
    steps away, a single shortened final step is taken and flagged in the
    metadata.
    """
    if t_final < initial.t:
        raise DomainError("t_final must not precede the initial time")
    if op.grid != initial.spectrum.grid:
        raise ContractError("state and forcing live on different grids")
    _check_lookahead(op, config.rule)

    dt = config.dt
    span = t_final - initial.t
    n_total = int(np.ceil(span / dt - 1e-9)) if span > 0 else 0
    last_dt = span - (n_total - 1) * dt if n_total else dt
    partial = n_total > 0 and abs(last_dt - dt) > 1e-9 * max(1.0, dt)
    n_full = n_total if not partial else n_total - 1

    mu = initial.spectrum.values.copy()
    zero_nyquist(mu, op.grid)
    if not np.all(np.isfinite(mu)):
        raise DivergenceError(initial.step_index)
    mu_flat = mu.ravel()

    snapshots = []
    max_residue = 0.0

    def snap(t):
        nonlocal max_residue
        fields = recover_eta_phi(SpectralField(op.grid, mu.copy()), op.params)
        snapshots.append(Snapshot(t, fields.elevation, fields.imag_residue))
        max_residue = max(max_residue, fields.imag_residue)

    snap(initial.t)
    done = 0
    while done < n_full:
        block = min(config.snapshot_every - (done % config.snapshot_every),
                    n_full - done)
        _advance_block(mu_flat, op, initial.epsilon, config.rule,
                       initial.t + done * dt, dt, block, initial.step_index + done)
        done += block
        if done % config.snapshot_every == 0:
            snap(initial.t + done * dt)
    if partial:
        _advance_block(mu_flat, op, initial.epsilon, config.rule,
                       initial.t + n_full * dt, last_dt, 1, initial.step_index + n_full)
        done += 1
        if done % config.snapshot_every == 0:
            snap(t_final)

    final_t = t_final if n_total else initial.t
    zero_nyquist(mu, op.grid)
    final = SimState(
        SpectralField(op.grid, mu),
        t=final_t,
        epsilon=initial.epsilon,
        step_index=initial.step_index + n_total,
    )
    meta = {
        "dt": dt,
        "rule": config.rule,
        "epsilon": initial.epsilon,
        "steps": n_total,
        "t_final": final_t,
        "partial_last_step": bool(partial),
        "max_imag_residue": max_residue,
        "backend": "numba" if _kernels.numba_enabled() else "numpy",
    }
    return RunResult(final, snapshots, meta)


def initial_state(kind: str, params: PhysicalParams, shape: ShipShape, profile,
                  epsilon: float, grid: Grid) -> SimState:
    """Build the configured initial condition: 'zero' or 'steady'.

    The steady start is the damped stationary solution at t = 0 and is
    only defined for a constant-speed profile.
    """
    if kind == "zero":
        return SimState(SpectralField(grid, np.zeros(grid.shape, dtype=np.complex128)),
                        t=0.0, epsilon=epsilon)
    if kind == "steady":
        if not isinstance(profile, ConstantSpeed):
            raise DomainError("a steady start requires a constant-speed profile")
        mu = stationary_state(params, shape, profile.U, epsilon, grid, 0.0)
        return SimState(mu, t=0.0, epsilon=epsilon)
    raise DomainError(f"initial state must be 'zero' or 'steady', got {kind!r}")


def stationary_state(params: PhysicalParams, shape: ShipShape, Ux: float,
                     epsilon: float, grid: Grid, t: float) -> SpectralField:
    """Steady solution in the ship frame for constant speed Ux (damped).

    Requires epsilon > 0: without damping the denominator vanishes at the
    resonant wavenumbers in the subcritical regime and the steady spectrum
    is not square-summable.
    """
    if epsilon <= 0:
        raise DomainError("the stationary solution requires positive damping")
    d = stationary_coefficient(params, shape, Ux, grid).values
    kx = grid.kappa_x_grid()
    om_eps = _complex_frequency(params, grid, epsilon)
    mu = d / (1j * (2 * np.pi * kx * Ux + om_eps)) * np.exp(-2j * np.pi * kx * Ux * t)
    return SpectralField(grid, zero_nyquist(mu, grid))


def constant_speed_solution(params: PhysicalParams, shape: ShipShape, Ux: float,
                            epsilon: float, grid: Grid, mu0: SpectralField,
                            t: float) -> SpectralField:
    """Exact solution at time t for constant speed from the initial spectrum mu0.

    Valid for epsilon = 0 as well: where the resonant denominator z =
    2 pi kappa_x Ux + omega_eps vanishes on the grid, the removable
    singularity is evaluated through the two-term series of
    (1 - exp(-i z t))/z.
    """
    if t < 0:
        raise DomainError("time must be nonnegative")
    if epsilon < 0:
        raise DomainError("damping must be nonnegative")
    if mu0.grid != grid:
        raise ContractError("mu0 lives on a different grid")
    d = stationary_coefficient(params, shape, Ux, grid).values
    kx = grid.kappa_x_grid()
    om_eps = _complex_frequency(params, grid, epsilon)
    prop_t = np.exp(1j * om_eps * t)
    z = 2 * np.pi * kx * Ux + om_eps
    zt = z * t
    small = np.abs(zt) < 1e-8
    with np.errstate(divide="ignore", invalid="ignore"):
        term = d / (1j * z) * prop_t * (1.0 - np.exp(-1j * zt))
    series = d * prop_t * (t + z * t * t / 2j)
    term = np.where(small, series, term)
    mu = mu0.values * prop_t - term
    return SpectralField(grid, zero_nyquist(mu, grid))
