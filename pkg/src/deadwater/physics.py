"""Two-layer dispersion relation and derived wake quantities.

All wavenumbers are in cycles per meter; factors of 2*pi appear explicitly
in the formulas and are never folded into the wavenumber.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RootFindError

__all__ = [
    "PhysicalParams",
    "Regime",
    "WakeGeometry",
    "layer_coth",
    "angular_frequency",
    "phase_velocity",
    "critical_speed",
    "critical_wavenumber",
    "singularity_angle",
    "wake_geometry",
    "forcing_envelope",
    "potential_coupling",
]


@dataclass(frozen=True)
class PhysicalParams:
    """Densities (kg/m^3), layer depths (m) and gravity (m/s^2).

    The top layer (rho1, h1) must be lighter than the bottom layer
    (rho2, h2); the stratification is what supports interface waves.
    """

    rho1: float
    rho2: float
    h1: float
    h2: float
    g: float = 9.81

    def __post_init__(self):
        if not 0.0 < self.rho1 < self.rho2:
            raise DomainError(
                f"densities must satisfy 0 < rho1 < rho2, got {self.rho1}, {self.rho2}"
            )
        if self.h1 <= 0.0 or self.h2 <= 0.0:
            raise DomainError("layer depths must be positive")
        if self.g <= 0.0:
            raise DomainError("gravity must be positive")


class Regime(enum.Enum):
    SUBCRITICAL = "subcritical"
    SUPERCRITICAL = "supercritical"
    CRITICAL = "critical"


@dataclass(frozen=True)
class WakeGeometry:
    """Classification of the wake for a given ship speed.

    transverse_wavenumber is the wavenumber of the transverse wake wave
    (cycles/m, subcritical only); limit_angle is the half-opening angle of
    the cone containing the divergent waves (radians, supercritical only).
    """

    regime: Regime
    transverse_wavenumber: float | None = None
    limit_angle: float | None = None

    def __post_init__(self):
        if (self.transverse_wavenumber is not None) != (self.regime is Regime.SUBCRITICAL):
            raise DomainError("transverse wavenumber present iff subcritical")
        if (self.limit_angle is not None) != (self.regime is Regime.SUPERCRITICAL):
            raise DomainError("limit angle present iff supercritical")
        if self.limit_angle is not None and not 0.0 < self.limit_angle <= np.pi / 2:
            raise DomainError("limit angle must lie in (0, pi/2]")


def _x_coth_x(sigma: np.ndarray) -> np.ndarray:
    """sigma*coth(sigma), continuously extended to 1 at sigma = 0.

    Piecewise evaluation: a short series below 1e-4 avoids the 0/0
    cancellation, tanh saturates to 1 beyond 20 so the identity map is
    exact there to machine precision.
    """
    sigma = np.asarray(sigma, dtype=float)
    out = np.empty_like(sigma)
    small = sigma < 1e-4
    big = sigma > 20.0
    mid = ~small & ~big
    out[small] = 1.0 + sigma[small] ** 2 / 3.0
    out[big] = sigma[big]
    out[mid] = sigma[mid] / np.tanh(sigma[mid])
    return out


def _stiffness(params: PhysicalParams, s: np.ndarray) -> np.ndarray:
    """2*pi*s*(T1 + T2) written in the cancellation-free form.

    Equals rho1/h1 * E(2 pi s h1) + rho2/h2 * E(2 pi s h2) with
    E(x) = x*coth(x); finite and positive for all s >= 0, with the s -> 0
    limit rho1/h1 + rho2/h2.
    """
    s = np.asarray(s, dtype=float)
    return params.rho1 / params.h1 * _x_coth_x(2 * np.pi * s * params.h1) + (
        params.rho2 / params.h2 * _x_coth_x(2 * np.pi * s * params.h2)
    )


def _as_float_or_array(x, scalar_input):
    return float(x) if scalar_input else x


def layer_coth(params: PhysicalParams, s, layer: int):
    """rho_j * coth(2 pi s h_j) for layer j in {1, 2}.

    Diverges like rho_j/(2 pi s h_j) as s -> 0+, so s must be strictly
    positive; callers needing the s -> 0 behaviour should use
    angular_frequency / forcing_envelope, which are continuously extended.
    """
    scalar = np.isscalar(s)
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0.0):
        raise DomainError("layer_coth requires s > 0")
    if layer == 1:
        rho, h = params.rho1, params.h1
    elif layer == 2:
        rho, h = params.rho2, params.h2
    else:
        raise DomainError(f"layer must be 1 or 2, got {layer}")
    sigma = 2 * np.pi * s * h
    return _as_float_or_array(rho * _x_coth_x(sigma) / sigma, scalar)


def angular_frequency(params: PhysicalParams, s):
    """Dispersion relation: angular frequency (rad/s) of wavenumber magnitude s.

    Strictly increasing in s, zero at s = 0 (continuous extension).
    """
    scalar = np.isscalar(s)
    s = np.asarray(s, dtype=float)
    if np.any(s < 0.0):
        raise DomainError("wavenumber magnitude must be nonnegative")
    om = 2 * np.pi * s * np.sqrt((params.rho2 - params.rho1) * params.g / _stiffness(params, s))
    return _as_float_or_array(om, scalar)


def phase_velocity(params: PhysicalParams, s):
    """Crest speed omega/(2 pi s) in m/s; strictly decreasing, range (0, U_c)."""
    scalar = np.isscalar(s)
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0.0):
        raise DomainError("phase_velocity requires s > 0")
    v = np.sqrt((params.rho2 - params.rho1) * params.g / _stiffness(params, s))
    return _as_float_or_array(v, scalar)


def critical_speed(params: PhysicalParams) -> float:
    """Supremum of the phase velocities; separates the two wake regimes."""
    return float(
        np.sqrt(
            (params.rho2 - params.rho1)
            * params.g
            / (params.rho1 / params.h1 + params.rho2 / params.h2)
        )
    )


def critical_wavenumber(params: PhysicalParams, Ux: float, tol: float = 1e-10) -> float | None:
    """Wavenumber whose phase velocity equals the ship speed Ux.

    Returns None when Ux >= critical_speed (no such wavenumber exists).
    The root is found by bisection on a bracket grown geometrically from
    s = 1 cycle/m; monotonicity of the phase velocity guarantees
    convergence.
    """
    if Ux <= 0.0:
        raise DomainError("ship speed must be positive")
    if tol <= 0.0:
        raise DomainError("tolerance must be positive")
    if Ux >= critical_speed(params):
        return None

    lo = hi = 1.0
    if phase_velocity(params, 1.0) >= Ux:
        while phase_velocity(params, hi) >= Ux:
            hi *= 2.0
        lo = hi / 2.0
    else:
        while phase_velocity(params, lo) < Ux:
            lo /= 2.0
        hi = lo * 2.0

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        v = phase_velocity(params, mid)
        if abs(v - Ux) <= tol * Ux:
            return mid
        if v > Ux:
            lo = mid
        else:
            hi = mid
    raise RootFindError("critical wavenumber bisection did not converge")


def singularity_angle(params: PhysicalParams, Ux: float, r: float) -> float | None:
    """Polar angle of the steady-wake singularity curve at radius r.

    Defined where the phase velocity does not exceed the ship speed:
    arccos(v_p(r)/Ux); None otherwise.
    """
    if r <= 0.0:
        raise DomainError("radius must be positive")
    if Ux <= 0.0:
        raise DomainError("ship speed must be positive")
    ratio = phase_velocity(params, r) / Ux
    # tolerate rounding at the transverse radius, where the ratio is exactly 1
    if ratio > 1.0 + 1e-12:
        return None
    return float(np.arccos(min(ratio, 1.0)))


def wake_geometry(params: PhysicalParams, Ux: float) -> WakeGeometry:
    """Classify the wake regime for ship speed Ux.

    Subcritical speeds carry a transverse wave at the critical wavenumber;
    supercritical speeds confine the divergent waves to a cone of
    half-angle arcsin(U_c/Ux).
    """
    if Ux <= 0.0:
        raise DomainError("ship speed must be positive")
    uc = critical_speed(params)
    if Ux < uc:
        return WakeGeometry(
            Regime.SUBCRITICAL,
            transverse_wavenumber=critical_wavenumber(params, Ux, tol=1e-12),
        )
    if Ux > uc:
        return WakeGeometry(Regime.SUPERCRITICAL, limit_angle=float(np.arcsin(uc / Ux)))
    return WakeGeometry(Regime.CRITICAL)


def forcing_envelope(params: PhysicalParams, s):
    """Bound N(s) on the per-mode forcing response, in 1/m scale.

    N(s) = 2 pi rho1 s / (sinh(2 pi s h1) (T1 + T2)); positive, bounded,
    vanishing in both the s -> 0 and s -> infinity limits.
    """
    scalar = np.isscalar(s)
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0.0):
        raise DomainError("forcing_envelope requires s > 0")
    return _as_float_or_array(s * _envelope_over_s(params, s), scalar)


def _envelope_over_s(params: PhysicalParams, s: np.ndarray) -> np.ndarray:
    """N(s)/s, continuously extended to 2 pi rho1/(rho1 + rho2 h1/h2) at s = 0.

    Written as (2 pi)^2 rho1 s / (sinh(2 pi s h1) * stiffness(s)); the
    sinh argument overflows beyond ~700 where the ratio has long since
    underflowed, so that branch returns exactly 0.
    """
    s = np.asarray(s, dtype=float)
    sigma = 2 * np.pi * s * params.h1
    out = np.empty_like(s)
    small = sigma < 1e-6
    # beyond 650 the ratio is below 1e-270 while sinh * stiffness can
    # overflow, so return the underflowed value outright
    big = sigma > 650.0
    mid = ~small & ~big
    out[small] = 2 * np.pi * params.rho1 / (params.h1 * _stiffness(params, s[small]))
    out[big] = 0.0
    out[mid] = (
        (2 * np.pi) ** 2
        * params.rho1
        * s[mid]
        / (np.sinh(sigma[mid]) * _stiffness(params, s[mid]))
    )
    return out


def potential_coupling(params: PhysicalParams, s):
    """Scale factor mapping the potential spectrum into the evolved complex field.

    Equals angular_frequency(s) / ((rho2 - rho1) g); real, nonnegative and
    zero at s = 0, which is why the potential's mean is not recoverable.
    """
    scalar = np.isscalar(s)
    om = angular_frequency(params, s)
    return _as_float_or_array(
        np.asarray(om) / ((params.rho2 - params.rho1) * params.g), scalar
    )
