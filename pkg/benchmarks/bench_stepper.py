#!/usr/bin/env python3
"""Compare the numba-compiled stepper against the pure-numpy fallback.

The backend is chosen by the DEADWATER_NUMBA environment flag, which this
script toggles in-process. The first compiled call pays the JIT cost; it
is reported separately and cached for later runs.
"""

import os
import time

from deadwater import (
    ConstantSpeed,
    ForcingOperator,
    Grid,
    IntegratorConfig,
    PhysicalParams,
    RampSpeed,
    ShipShape,
    initial_state,
    run,
)
from deadwater._kernels import HAVE_NUMBA

PARAMS = PhysicalParams(rho1=999.0, rho2=1022.3, h1=1.0, h2=6.0, g=9.81)

CASES = {
    "1d subcritical (Nx=15000, 2000 steps)": dict(
        grid=Grid(Lx=6000.0, Nx=15000),
        ship=ShipShape(draft=0.02, length=10.0),
        profile=ConstantSpeed(0.43),
        epsilon=1e-4,
        initial="steady",
        config=IntegratorConfig(dt=1.0, rule="rectangle", snapshot_every=10**9),
        t_final=2000.0,
    ),
    "2d supercritical (1024x256, 600 steps)": dict(
        grid=Grid(Lx=2000.0, Nx=1024, Ly=600.0, Ny=256),
        ship=ShipShape(draft=0.02, length=10.0, beam=10.0),
        profile=RampSpeed(0.85, 0.02),
        epsilon=1e-12,
        initial="zero",
        config=IntegratorConfig(dt=0.5, rule="rectangle", snapshot_every=10**9),
        t_final=300.0,
    ),
}


def time_case(case, backend):
    os.environ["DEADWATER_NUMBA"] = "1" if backend == "numba" else "0"
    op = ForcingOperator(PARAMS, case["ship"], case["profile"], case["grid"])
    state = initial_state(
        case["initial"], PARAMS, case["ship"], case["profile"], case["epsilon"],
        case["grid"],
    )
    start = time.perf_counter()
    result = run(state, case["config"], op, case["t_final"])
    elapsed = time.perf_counter() - start
    assert result.metadata["backend"] == backend
    return elapsed


def main():
    if HAVE_NUMBA:
        print("warming up the compiled kernels (JIT compile + cache)...")
        warm = dict(CASES["2d supercritical (1024x256, 600 steps)"])
        warm["t_final"] = 1.0
        t = time_case(warm, "numba")
        print(f"  warm-up run: {t:.2f} s\n")

    print(f"{'case':45s} {'numpy':>10s} {'numba':>10s} {'speedup':>9s}")
    for name, case in CASES.items():
        t_numpy = time_case(case, "numpy")
        if HAVE_NUMBA:
            t_numba = time_case(case, "numba")
            print(f"{name:45s} {t_numpy:9.2f}s {t_numba:9.2f}s {t_numpy / t_numba:8.1f}x")
        else:
            print(f"{name:45s} {t_numpy:9.2f}s {'n/a':>10s} {'n/a':>9s}")
    os.environ.pop("DEADWATER_NUMBA", None)


if __name__ == "__main__":
    main()
