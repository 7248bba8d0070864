"""Automatic damping selection: smallest damping that kills fore oscillations.

The damping parameter regularizes the steady wake but, chosen too small,
lets the trailing wake wrap around the periodic domain and pollute the
water ahead of the ship. The search grows the damping geometrically and
stops at the first value whose fore-window oscillation measure drops
below tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError, DomainError, TuningError
from .forcing import ForcingOperator, ShipShape
from .physics import PhysicalParams
from .solver import IntegratorConfig, initial_state, run
from .spectral import Grid, RealField, recover_eta_phi

__all__ = [
    "TuneConfig",
    "TuneResult",
    "oscillation_measure",
    "tune_epsilon",
    "scenario_measure",
]


@dataclass(frozen=True)
class TuneConfig:
    """Geometric damping search parameters.

    front_margin and front_window bound the measuring window ahead of the
    ship as fractions of the half-domain; the lower bound never comes
    closer to the ship than twice the hull length. The fore margin skips
    the smooth near-field tail of the ship's response, which does not
    vanish with damping and is not an oscillation.
    """

    epsilon0: float = 1e-8
    delta: float = 1e-7
    gamma: float = 1.1
    max_iter: int = 200
    front_window: float = 0.9
    front_margin: float = 0.1

    def __post_init__(self):
        if self.epsilon0 <= 0:
            raise DomainError("epsilon0 must be positive")
        if self.delta <= 0:
            raise DomainError("delta must be positive")
        if self.gamma <= 1.0:
            raise DomainError("gamma must exceed 1")
        if self.max_iter < 1:
            raise DomainError("max_iter must be at least 1")
        if not 0.0 < self.front_window <= 1.0:
            raise DomainError("front_window must lie in (0, 1]")
        if not 0.0 <= self.front_margin < self.front_window:
            raise DomainError("front_margin must lie in [0, front_window)")


@dataclass
class TuneResult:
    epsilon_star: float
    iterations: int
    epsilons: list
    measures: list


def oscillation_measure(
    eta: RealField,
    ship_x: float,
    shape: ShipShape,
    front_window: float = 0.9,
    front_margin: float = 0.1,
) -> float:
    """Peak-to-trough elevation spread in the window ahead of the ship.

    The window, in the periodic frame, runs from
    max(2 * hull_length, front_margin * Lx/2) ahead of the ship to
    front_window * Lx/2 ahead. 2D fields are reduced to the centerline
    y = 0. Returns 0 for a geometrically empty window; a nonempty window
    covering fewer than 4 grid cells is a configuration error.
    """
    grid = eta.grid
    values = eta.values if grid.dim == 1 else eta.values[grid.Ny // 2, :]
    lead = max(2.0 * shape.length, front_margin * grid.Lx / 2.0)
    upper = front_window * grid.Lx / 2.0
    if lead >= upper:
        return 0.0
    x = grid.x()
    ahead = np.mod(x - ship_x + grid.Lx / 2, grid.Lx) - grid.Lx / 2
    mask = (ahead > lead) & (ahead < upper)
    count = int(np.count_nonzero(mask))
    if count < 4:
        raise ConfigError(
            f"fore window ({lead:.1f} m, {upper:.1f} m) covers {count} grid cells; need >= 4"
        )
    window = values[mask]
    return float(window.max() - window.min())


def tune_epsilon(config: TuneConfig, measure: Callable[[float], float]) -> TuneResult:
    """Grow damping geometrically until the oscillation measure drops below delta.

    measure maps a damping value to its oscillation measure (typically a
    full simulation; see scenario_measure). Returns the first iterate of
    the sequence epsilon0 * gamma^n below tolerance, with the full trace.
    Raises TuningError when max_iter iterations fail to reach tolerance.
    """
    epsilons, measures = [], []
    eps = config.epsilon0
    for n in range(config.max_iter):
        m = float(measure(eps))
        epsilons.append(eps)
        measures.append(m)
        if m < config.delta:
            return TuneResult(eps, n + 1, epsilons, measures)
        eps = config.gamma * eps
    raise TuningError(epsilons, measures)


def scenario_measure(
    params: PhysicalParams,
    grid: Grid,
    shape: ShipShape,
    profile,
    integrator: IntegratorConfig,
    t_final: float,
    config: TuneConfig,
    initial: str = "steady",
) -> Callable[[float], float]:
    """Oscillation measure of a full scenario as a function of damping.

    Each evaluation builds the initial state for that damping, runs the
    integrator to t_final, recovers the final elevation and measures the
    window ahead of the ship's final (periodically wrapped) position.
    """

    def measure(epsilon: float) -> float:
        state = initial_state(initial, params, shape, profile, epsilon, grid)
        op = ForcingOperator(params, shape, profile, grid)
        result = run(state, integrator, op, t_final)
        eta = result.snapshots[-1].elevation
        if result.snapshots[-1].t != result.final.t:
            eta = recover_eta_phi(result.final.spectrum, params).elevation
        ship_x = np.mod(profile.position(t_final) + grid.Lx / 2, grid.Lx) - grid.Lx / 2
        return oscillation_measure(
            eta, ship_x, shape, config.front_window, config.front_margin
        )

    return measure
