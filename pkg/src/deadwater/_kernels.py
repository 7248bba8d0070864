"""Hot time-stepping kernels: numba-compiled with a pure-numpy fallback.

The numba path is used when available; set DEADWATER_NUMBA=0 to force the
numpy fallback (the benchmark in benchmarks/ compares both). Both paths
advance the flattened spectrum in place through n constant-size steps of

    mu <- prop * (mu - Q_k)

where Q_k is the quadrature of the forcing integral over step k. Ship
speed U and position X are pre-sampled at the times each rule needs, so
the kernels stay free of Python callbacks.

Rules: 0 = rectangle, 1 = trapezoid, 2 = Simpson.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
    # numba probes TBB first and warns when it is too old; it then falls
    # back to OpenMP, so the message is noise here
    warnings.filterwarnings(
        "ignore", message=".*TBB.*", category=numba.NumbaWarning
    )
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

__all__ = ["HAVE_NUMBA", "numba_enabled", "advance"]


def numba_enabled() -> bool:
    """True when the compiled path is active (importable and not disabled)."""
    return HAVE_NUMBA and os.environ.get("DEADWATER_NUMBA", "1") != "0"


def _advance_numpy(mu, amp, kx, prop, prop_inv, prop_half_inv,
                   u0, x0, u1, x1, uh, xh, dt, rule):
    """Step-major reference path: one vectorized update per time step."""
    nsteps = u0.shape[0]
    forced = bool(np.any(amp != 0.0))
    for k in range(nsteps):
        if not forced:
            mu *= prop
            continue
        g0 = amp * (u0[k] * np.exp((-2j * np.pi * x0[k]) * kx))
        if rule == 0:
            q = dt * g0
        elif rule == 1:
            g1 = amp * (u1[k] * np.exp((-2j * np.pi * x1[k]) * kx))
            q = (0.5 * dt) * (g0 + prop_inv * g1)
        else:
            gh = amp * (uh[k] * np.exp((-2j * np.pi * xh[k]) * kx))
            g1 = amp * (u1[k] * np.exp((-2j * np.pi * x1[k]) * kx))
            q = (dt / 6.0) * (g0 + 4.0 * prop_half_inv * gh + prop_inv * g1)
        mu -= q
        mu *= prop
        if not np.all(np.isfinite(mu)):
            return k
    return -1


if HAVE_NUMBA:

    @numba.njit(parallel=True, cache=True)
    def _advance_numba(mu, amp, kx, prop, prop_inv, prop_half_inv,
                       u0, x0, u1, x1, uh, xh, dt, rule, bad):
        n = mu.shape[0]
        nsteps = u0.shape[0]
        for i in numba.prange(n):
            m = mu[i]
            a = amp[i]
            k = kx[i]
            p = prop[i]
            if rule == 0:
                # the lookahead propagators are not built for this rule
                pinv = np.complex128(0.0)
                ph = np.complex128(0.0)
            else:
                pinv = prop_inv[i]
                ph = prop_half_inv[i]
            first_bad = -1
            if a == 0.0:
                for s in range(nsteps):
                    m = p * m
            else:
                for s in range(nsteps):
                    g0 = a * (u0[s] * np.exp(-2j * np.pi * k * x0[s]))
                    if rule == 0:
                        q = dt * g0
                    elif rule == 1:
                        g1 = a * (u1[s] * np.exp(-2j * np.pi * k * x1[s]))
                        q = 0.5 * dt * (g0 + pinv * g1)
                    else:
                        gh = a * (uh[s] * np.exp(-2j * np.pi * k * xh[s]))
                        g1 = a * (u1[s] * np.exp(-2j * np.pi * k * x1[s]))
                        q = dt / 6.0 * (g0 + 4.0 * ph * gh + pinv * g1)
                    m = p * (m - q)
                    if first_bad < 0 and not (
                        np.isfinite(m.real) and np.isfinite(m.imag)
                    ):
                        first_bad = s
                        break
            mu[i] = m
            bad[i] = first_bad


def advance(mu, amp, kx, prop, prop_inv, prop_half_inv,
            u0, x0, u1, x1, uh, xh, dt, rule) -> int:
    """Advance mu in place through len(u0) steps; returns the first step index
    at which non-finite values appeared, or -1 if none did."""
    if numba_enabled():
        bad = np.full(mu.shape[0], -1, dtype=np.int64)
        _advance_numba(mu, amp, kx, prop, prop_inv, prop_half_inv,
                       u0, x0, u1, x1, uh, xh, dt, rule, bad)
        hit = bad[bad >= 0]
        return int(hit.min()) if hit.size else -1
    return _advance_numpy(mu, amp, kx, prop, prop_inv, prop_half_inv,
                          u0, x0, u1, x1, uh, xh, dt, rule)
