import numpy as np
import pytest

from deadwater import Grid, PhysicalParams, ShipShape


@pytest.fixture
def params():
    """Fresh water over salt water, the configuration used throughout."""
    return PhysicalParams(rho1=999.0, rho2=1022.3, h1=1.0, h2=6.0, g=9.81)


@pytest.fixture
def ship():
    return ShipShape(draft=0.02, length=10.0)


@pytest.fixture
def ship2d():
    return ShipShape(draft=0.02, length=10.0, beam=10.0)


@pytest.fixture
def grid_small():
    return Grid(Lx=400.0, Nx=256)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
