"""Ship hull spectrum, speed profiles, and the moving-ship forcing term."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CapabilityError, ContractError, DomainError
from .physics import PhysicalParams, _envelope_over_s
from .spectral import Grid, SpectralField, zero_nyquist

__all__ = [
    "ShipShape",
    "ConstantSpeed",
    "RampSpeed",
    "TabulatedSpeed",
    "load_speed_table",
    "ship_transform",
    "ForcingOperator",
    "forcing_hat",
    "stationary_coefficient",
]

# Gaussian hull steepness: f(x) = -draft * exp(-HULL_STEEPNESS (x/length)^2)
HULL_STEEPNESS = 18.0


@dataclass(frozen=True)
class ShipShape:
    """Gaussian hull: draft (m), waterline length (m) and beam (m, 2D only)."""

    draft: float
    length: float
    beam: float | None = None

    def __post_init__(self):
        if self.draft <= 0 or self.length <= 0:
            raise DomainError("draft and length must be positive")
        if self.beam is not None and self.beam <= 0:
            raise DomainError("beam must be positive")


class ConstantSpeed:
    """U(t) = U for all t; X(t) = U t."""

    def __init__(self, U: float):
        self.U = float(U)

    @property
    def limit_speed(self) -> float:
        return self.U

    def speed(self, t):
        u = self.U * np.ones_like(np.asarray(t, dtype=float))
        return float(u) if u.ndim == 0 else u

    def position(self, t):
        x = self.U * np.asarray(t, dtype=float)
        return float(x) if x.ndim == 0 else x


class RampSpeed:
    """Exponential approach to a terminal speed: U(t) = U_inf (1 - exp(-a t))."""

    def __init__(self, U_inf: float, rate: float):
        if rate <= 0:
            raise DomainError("ramp rate must be positive")
        self.U_inf = float(U_inf)
        self.rate = float(rate)

    @property
    def limit_speed(self) -> float:
        return self.U_inf

    def speed(self, t):
        t = np.asarray(t, dtype=float)
        u = self.U_inf * (1.0 - np.exp(-self.rate * t))
        return float(u) if u.ndim == 0 else u

    def position(self, t):
        t = np.asarray(t, dtype=float)
        x = self.U_inf * (t + (np.exp(-self.rate * t) - 1.0) / self.rate)
        return float(x) if x.ndim == 0 else x


class TabulatedSpeed:
    """Piecewise-linear speed from (t_i, U_i) samples; X by exact integration.

    Beyond the last sample the speed is clamped to its final value so
    simulations may slightly overshoot the table. strict=True instead
    marks the profile as not evaluable past its samples (the stand-in for
    speeds arriving in real time); quadrature rules that sample future
    speeds refuse such profiles.
    """

    def __init__(self, times, speeds, strict: bool = False):
        t = np.asarray(times, dtype=float)
        u = np.asarray(speeds, dtype=float)
        if t.ndim != 1 or t.shape != u.shape or t.size < 2:
            raise DomainError("speed table needs matching 1D arrays of length >= 2")
        if t[0] != 0.0:
            raise DomainError("speed table must start at t = 0")
        if np.any(np.diff(t) <= 0.0):
            raise DomainError("speed table times must be strictly increasing")
        self.times = t
        self.speeds = u
        self.strict = strict
        # exact integrals of the interpolant up to each knot
        self._pos = np.concatenate(
            ([0.0], np.cumsum(0.5 * (u[1:] + u[:-1]) * np.diff(t)))
        )

    @property
    def limit_speed(self) -> float:
        return float(self.speeds[-1])

    def _check(self, t: np.ndarray):
        if self.strict and np.any(t > self.times[-1]):
            raise CapabilityError(
                f"speed table ends at t = {self.times[-1]}; cannot evaluate beyond it"
            )

    def speed(self, t):
        t = np.asarray(t, dtype=float)
        self._check(t)
        u = np.interp(t, self.times, self.speeds)
        return float(u) if u.ndim == 0 else u

    def position(self, t):
        t = np.asarray(t, dtype=float)
        self._check(t)
        idx = np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, self.times.size - 2)
        t0 = self.times[idx]
        u0 = self.speeds[idx]
        slope = (self.speeds[idx + 1] - u0) / (self.times[idx + 1] - t0)
        tau = np.minimum(t, self.times[-1]) - t0
        x = self._pos[idx] + u0 * tau + 0.5 * slope * tau**2
        x = x + self.speeds[-1] * np.maximum(t - self.times[-1], 0.0)
        return float(x) if x.ndim == 0 else x


def load_speed_table(path, strict: bool = False) -> TabulatedSpeed:
    """Load a two-column CSV (t_seconds, Ux_m_per_s) speed profile."""
    data = np.loadtxt(Path(path), delimiter=",", comments="#", ndmin=2)
    if data.shape[1] != 2:
        raise DomainError(f"speed table must have two columns, got {data.shape[1]}")
    return TabulatedSpeed(data[:, 0], data[:, 1], strict=strict)


def ship_transform(shape: ShipShape, grid: Grid) -> SpectralField:
    """Continuum Fourier transform of the Gaussian hull at the grid wavenumbers.

    The closed form of the Gaussian integral is used rather than a sampled
    DFT: the hull is analytically known, there is no periodization error,
    and the sampled transform stays available as an independent
    cross-check. Values are real, even and nonpositive (units m^2 in 1D,
    m^3 in 2D).
    """
    c = np.pi**2 * shape.length**2 / HULL_STEEPNESS
    kx = grid.kappa_x()
    base = -shape.draft * shape.length * np.sqrt(np.pi / HULL_STEEPNESS)
    if grid.dim == 1:
        return SpectralField(grid, base * np.exp(-c * kx**2) + 0j)
    if shape.beam is None:
        raise ContractError("2D grid requires a hull beam")
    cy = np.pi**2 * shape.beam**2 / HULL_STEEPNESS
    ky = grid.kappa_y()
    vals = (
        base
        * shape.beam
        * np.sqrt(np.pi / HULL_STEEPNESS)
        * np.exp(-c * kx[None, :] ** 2 - cy * ky[:, None] ** 2)
    )
    return SpectralField(grid, vals + 0j)


class ForcingOperator:
    """Per-mode forcing spectrum for a ship moving along +x.

    The time-independent part is cached: spectrum(t) is the cached complex
    amplitude times U(t) exp(-2 pi i kappa_x X(t)). Amplitudes are divided
    by the domain measure so they live in the same grid-coefficient
    convention as the evolved field (the hull transform is a continuum
    amplitude).
    """

    def __init__(self, params: PhysicalParams, shape: ShipShape, profile, grid: Grid):
        self.params = params
        self.shape = shape
        self.profile = profile
        self.grid = grid
        s = grid.kappa_magnitude()
        self.kappa_x = grid.kappa_x_grid()
        hull = ship_transform(shape, grid).values
        amp = 1j * self.kappa_x * _envelope_over_s(params, s) * hull / grid.area
        self.amplitude = zero_nyquist(amp, grid)

    def spectrum(self, t: float) -> np.ndarray:
        u = self.profile.speed(t)
        if u == 0.0:
            return np.zeros_like(self.amplitude)
        x = self.profile.position(t)
        return self.amplitude * (u * np.exp(-2j * np.pi * self.kappa_x * x))


def forcing_hat(
    params: PhysicalParams, shape: ShipShape, profile, grid: Grid, t: float
) -> SpectralField:
    """Forcing spectrum at time t (zero at kappa_x = 0 and on Nyquist rows)."""
    if t < 0:
        raise DomainError("time must be nonnegative")
    return SpectralField(grid, ForcingOperator(params, shape, profile, grid).spectrum(t))


def stationary_coefficient(
    params: PhysicalParams, shape: ShipShape, Ux: float, grid: Grid
) -> SpectralField:
    """Constant-speed forcing amplitude: the forcing spectrum at t = 0.

    For speed Ux the forcing at any time is this field times
    exp(-2 pi i kappa_x Ux t).
    """
    return forcing_hat(params, shape, ConstantSpeed(Ux), grid, 0.0)
