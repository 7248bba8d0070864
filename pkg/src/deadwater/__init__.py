"""Spectral simulation and diagnostics of ship-forced two-layer internal waves.

The interface elevation is evolved as a single complex spectral field per
wavenumber, driven by a moving Gaussian hull, with an exponential time
integrator that treats the homogeneous wave propagation exactly.
"""

from ._kernels import HAVE_NUMBA, numba_enabled
from .analysis import (
    OrderFit,
    SpacetimeSpectrum,
    convergence_order,
    dominant_wake_wavenumber,
    peak_positions,
    relative_l2_error,
    ridge_frequencies,
    ship_line_magnitude,
    spacetime_spectrum,
    wake_cone_energy_fraction,
)
from .errors import (
    CapabilityError,
    ConfigError,
    ContractError,
    DeadwaterError,
    DivergenceError,
    DomainError,
    RootFindError,
    TuningError,
)
from .forcing import (
    ConstantSpeed,
    ForcingOperator,
    RampSpeed,
    ShipShape,
    TabulatedSpeed,
    forcing_hat,
    load_speed_table,
    ship_transform,
    stationary_coefficient,
)
from .physics import (
    PhysicalParams,
    Regime,
    WakeGeometry,
    angular_frequency,
    critical_speed,
    critical_wavenumber,
    forcing_envelope,
    layer_coth,
    phase_velocity,
    potential_coupling,
    singularity_angle,
    wake_geometry,
)
from .solver import (
    IntegratorConfig,
    RunResult,
    SimState,
    Snapshot,
    constant_speed_solution,
    initial_state,
    propagator,
    quadrature,
    run,
    stationary_state,
    step,
)
from .spectral import (
    Grid,
    RealField,
    RecoveredFields,
    SpectralField,
    dft_forward,
    dft_inverse,
    read_field,
    recover_eta_phi,
    reflect_spectrum,
    write_field,
    zero_nyquist,
)
from .tuning import (
    TuneConfig,
    TuneResult,
    oscillation_measure,
    scenario_measure,
    tune_epsilon,
)

__version__ = "0.1.0"
