"""Quantitative diagnostics: error norms, order fits, and wake spectra."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, ContractError, DomainError
from .forcing import ShipShape
from .physics import PhysicalParams, angular_frequency
from .spectral import RealField

__all__ = [
    "relative_l2_error",
    "OrderFit",
    "convergence_order",
    "SpacetimeSpectrum",
    "spacetime_spectrum",
    "ridge_frequencies",
    "ship_line_magnitude",
    "dominant_wake_wavenumber",
    "wake_cone_energy_fraction",
    "peak_positions",
]


def relative_l2_error(a: RealField, b: RealField) -> float:
    """|a - b| / |b| in the discrete l2 norm; b is the reference."""
    if a.grid != b.grid:
        raise ContractError("fields live on different grids")
    ref = np.linalg.norm(b.values)
    if ref == 0.0:
        raise DomainError("reference field has zero norm")
    return float(np.linalg.norm(a.values - b.values) / ref)


@dataclass(frozen=True)
class OrderFit:
    slope: float
    intercept: float
    residual: float


def convergence_order(errors: Sequence[tuple]) -> OrderFit:
    """Least-squares slope of log(error) against log(dt).

    errors is a sequence of (dt, error) pairs, all strictly positive,
    at least three of them. The residual is the RMS misfit of the line.
    """
    if len(errors) < 3:
        raise DomainError("need at least 3 (dt, error) points")
    dts = np.array([p[0] for p in errors], dtype=float)
    errs = np.array([p[1] for p in errors], dtype=float)
    if np.any(dts <= 0) or np.any(errs <= 0):
        raise DomainError("dt and error values must be positive")
    log_dt, log_err = np.log(dts), np.log(errs)
    slope, intercept = np.polyfit(log_dt, log_err, 1)
    fit = slope * log_dt + intercept
    residual = float(np.sqrt(np.mean((log_err - fit) ** 2)))
    return OrderFit(float(slope), float(intercept), residual)


@dataclass
class SpacetimeSpectrum:
    """Magnitude of the (x, t) double transform with overlay curves.

    kappa and freq are ascending axes (cycles/m, Hz); magnitude is indexed
    [freq, kappa]. A travelling crest cos(2 pi (kappa0 x - f0 t)) peaks at
    (kappa0, f0). The overlays give the free-wave frequency omega/(2 pi)
    and the ship line kappa * U_inf per kappa.
    """

    kappa: np.ndarray
    freq: np.ndarray
    magnitude: np.ndarray
    f_dispersion: np.ndarray
    f_ship: np.ndarray

    @property
    def kappa_bin(self) -> float:
        return float(self.kappa[1] - self.kappa[0])

    @property
    def freq_bin(self) -> float:
        return float(self.freq[1] - self.freq[0])


def spacetime_spectrum(
    snapshots: Sequence[RealField],
    times: Sequence[float],
    params: PhysicalParams,
    U_inf: float,
) -> SpacetimeSpectrum:
    """Double transform of uniformly spaced 1D elevation snapshots.

    Space uses the grid transform unchanged (the field is periodic); time
    gets a Hann window since the snapshot train is not. The temporal
    transform uses the opposite sign so rightward-travelling waves land at
    positive (kappa, f).
    """
    if len(snapshots) < 16:
        raise ContractError("need at least 16 snapshots in time")
    grid = snapshots[0].grid
    if grid.dim != 1:
        raise ContractError("space-time spectra are defined for 1D fields")
    if any(f.grid != grid for f in snapshots):
        raise ContractError("snapshots live on different grids")
    t = np.asarray(times, dtype=float)
    if t.shape != (len(snapshots),):
        raise ContractError("times must match snapshots one to one")
    steps = np.diff(t)
    if steps.size == 0 or not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12):
        raise ContractError("snapshots must be uniformly spaced in time")
    dt_snap = float(steps[0])

    data = np.stack([f.values for f in snapshots])  # [time, space]
    # periodic Hann: its transform occupies exactly three frequency bins
    window = 0.5 - 0.5 * np.cos(2 * np.pi * np.arange(data.shape[0]) / data.shape[0])
    spatial = np.fft.fft(data * window[:, None], axis=1) / grid.Nx
    coeffs = np.fft.ifft(spatial, axis=0)

    kappa = np.fft.fftshift(grid.kappa_x())
    freq = np.fft.fftshift(np.fft.fftfreq(data.shape[0], d=dt_snap))
    magnitude = np.abs(np.fft.fftshift(coeffs))
    f_disp = angular_frequency(params, np.abs(kappa)) / (2 * np.pi)
    return SpacetimeSpectrum(kappa, freq, magnitude, f_disp, kappa * U_inf)


def ridge_frequencies(spec: SpacetimeSpectrum) -> np.ndarray:
    """Positive frequency of maximum magnitude for each kappa."""
    pos = spec.freq > 0
    return spec.freq[pos][np.argmax(spec.magnitude[pos, :], axis=0)]


def ship_line_magnitude(spec: SpacetimeSpectrum) -> np.ndarray:
    """Spectrum magnitude sampled along the ship line f = kappa * U_inf."""
    rows = np.argmin(np.abs(spec.freq[:, None] - spec.f_ship[None, :]), axis=0)
    return spec.magnitude[rows, np.arange(spec.kappa.size)]


def dominant_wake_wavenumber(
    eta: RealField,
    ship_x: float,
    shape: ShipShape,
    back_window: float = 0.9,
    margin_lengths: float = 2.0,
) -> float:
    """Peak wavenumber of the wake segment behind the ship (cycles/m).

    The segment runs, in the periodic frame, from back_window * Lx/2
    behind the ship to margin_lengths hull lengths behind it (excluding
    the near field under the hull). The mean is removed and the raw
    segment transform's largest bin returned.
    """
    grid = eta.grid
    if grid.dim != 1:
        raise ContractError("wake wavenumber extraction is defined for 1D fields")
    x = grid.x()
    ahead = np.mod(x - ship_x + grid.Lx / 2, grid.Lx) - grid.Lx / 2
    mask = (ahead > -back_window * grid.Lx / 2) & (ahead < -margin_lengths * shape.length)
    if np.count_nonzero(mask) < 8:
        raise ConfigError("wake window is empty or too short")
    order = np.argsort(ahead[mask])
    segment = eta.values[mask][order]
    segment = segment - segment.mean()
    coeffs = np.abs(np.fft.rfft(segment))
    freqs = np.fft.rfftfreq(segment.size, d=grid.dx)
    return float(freqs[1 + np.argmax(coeffs[1:])])


def wake_cone_energy_fraction(
    eta: RealField,
    ship_x: float,
    phi_star: float,
    exclusion_radius: float,
) -> float:
    """Fraction of squared elevation behind the ship that escapes the wake cone.

    Points behind the ship (beyond the exclusion radius, in the periodic
    frame) lie inside the cone when |y| <= tan(phi_star) * distance
    behind. Returns 0 when no energy lies behind the ship.
    """
    grid = eta.grid
    if grid.dim != 2:
        raise ContractError("the wake cone is a 2D diagnostic")
    x = grid.x()
    ahead = np.mod(x - ship_x + grid.Lx / 2, grid.Lx) - grid.Lx / 2
    behind = ahead < -exclusion_radius
    yy = grid.y()[:, None]
    inside = np.abs(yy) <= np.tan(phi_star) * (-ahead[None, :])
    energy = eta.values**2
    total = float(energy[:, behind].sum())
    if total == 0.0:
        return 0.0
    outside = float((energy * ~inside)[:, behind].sum())
    return outside / total


def peak_positions(eta: RealField, count: int = 2, min_separation: float = 0.0) -> np.ndarray:
    """Positions of the largest local |elevation| extrema, descending by size.

    A record of where isolated wave packets sit (e.g. fast fore/aft
    transients); no acceptance bound is attached to these positions.
    """
    grid = eta.grid
    if grid.dim != 1:
        raise ContractError("peak positions are defined for 1D fields")
    v = np.abs(eta.values)
    interior = (v[1:-1] >= v[:-2]) & (v[1:-1] >= v[2:])
    idx = np.where(interior)[0] + 1
    idx = idx[np.argsort(v[idx])[::-1]]
    x = grid.x()
    chosen = []
    for i in idx:
        if len(chosen) == count:
            break
        if all(abs(x[i] - x[j]) >= min_separation for j in chosen):
            chosen.append(i)
    return x[np.array(chosen, dtype=int)] if chosen else np.empty(0)
