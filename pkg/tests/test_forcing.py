import mpmath as mp
import numpy as np
import pytest

from deadwater import (
    CapabilityError,
    ConstantSpeed,
    ContractError,
    DomainError,
    Grid,
    RampSpeed,
    TabulatedSpeed,
    forcing_envelope,
    forcing_hat,
    load_speed_table,
    reflect_spectrum,
    ship_transform,
    stationary_coefficient,
)

# frozen Gaussian integral: 0.02 * 10 * sqrt(pi/18)
HULL_PEAK = 0.083554275821033350081


def riemann_transform(shape, grid):
    """Independent oracle: trapezoidal (= rectangle, periodic) approximation
    of the continuum transform of the sampled hull."""
    x = grid.x()
    f = -shape.draft * np.exp(-18.0 * (x / shape.length) ** 2)
    kx = grid.kappa_x()
    return grid.dx * np.array(
        [np.sum(f * np.exp(-2j * np.pi * k * x)) for k in kx]
    )


class TestShipTransform:
    def test_zero_mode_is_gaussian_integral(self, ship):
        grid = Grid(Lx=400.0, Nx=64)
        vals = ship_transform(ship, grid).values
        assert vals[0].real == pytest.approx(-HULL_PEAK, rel=1e-14)
        assert vals[0].imag == 0.0

    def test_even_in_kappa(self, ship):
        grid = Grid(Lx=400.0, Nx=64)
        vals = ship_transform(ship, grid).values
        assert np.array_equal(vals, reflect_spectrum(vals))

    def test_everywhere_nonpositive_real(self, ship):
        grid = Grid(Lx=400.0, Nx=64)
        vals = ship_transform(ship, grid).values
        assert np.all(vals.real <= 0.0)
        assert np.all(vals.imag == 0.0)

    def test_matches_sampled_dft_oracle(self, ship):
        grid = Grid(Lx=4000.0, Nx=8192)
        closed = ship_transform(ship, grid).values
        sampled = riemann_transform(ship, grid)
        resolved = np.abs(grid.kappa_x()) <= grid.Nx / (4 * grid.Lx)
        err = np.abs(closed[resolved] - sampled[resolved])
        assert err.max() <= 1e-8 * np.abs(closed[resolved]).max()

    def test_2d_separable(self, ship2d):
        grid = Grid(Lx=200.0, Nx=32, Ly=100.0, Ny=16)
        vals = ship_transform(ship2d, grid).values
        corner = -ship2d.draft * ship2d.length * ship2d.beam * np.pi / 18.0
        assert vals[0, 0].real == pytest.approx(corner, rel=1e-14)

    def test_2d_requires_beam(self, ship):
        grid = Grid(Lx=200.0, Nx=32, Ly=100.0, Ny=16)
        with pytest.raises(ContractError):
            ship_transform(ship, grid)


class TestSpeedProfiles:
    @pytest.mark.parametrize(
        "profile",
        [
            ConstantSpeed(0.43),
            RampSpeed(0.25, 0.01),
            TabulatedSpeed([0.0, 10.0, 30.0, 100.0], [0.0, 0.3, 0.25, 0.4]),
        ],
        ids=["constant", "ramp", "table"],
    )
    @pytest.mark.parametrize("t0,dt", [(0.0, 7.3), (12.0, 55.0), (90.0, 40.0)])
    def test_position_is_speed_integral(self, profile, t0, dt):
        # high-precision quadrature oracle for X(t+dt) - X(t); the
        # integration interval is split at the table knots (kinks)
        knots = [
            float(k) for k in getattr(profile, "times", []) if t0 < k < t0 + dt
        ]
        expected = float(
            mp.quad(lambda tau: profile.speed(float(tau)), [t0, *knots, t0 + dt])
        )
        assert profile.position(t0 + dt) - profile.position(t0) == pytest.approx(
            expected, abs=1e-10 * max(1.0, abs(expected))
        )

    def test_positions_start_at_zero(self):
        for profile in (ConstantSpeed(0.4), RampSpeed(0.3, 0.02), TabulatedSpeed([0, 1], [0, 1])):
            assert profile.position(0.0) == 0.0

    def test_ramp_limit_speed(self):
        ramp = RampSpeed(0.25, 0.01)
        assert ramp.limit_speed == 0.25
        assert ramp.speed(1e6) == pytest.approx(0.25, rel=1e-12)

    def test_table_clamps_beyond_end(self):
        prof = TabulatedSpeed([0.0, 10.0], [0.0, 0.5])
        assert prof.speed(25.0) == 0.5
        assert prof.position(25.0) == pytest.approx(2.5 + 0.5 * 15.0)

    def test_strict_table_raises_beyond_end(self):
        prof = TabulatedSpeed([0.0, 10.0], [0.0, 0.5], strict=True)
        with pytest.raises(CapabilityError):
            prof.speed(10.5)
        with pytest.raises(CapabilityError):
            prof.position(11.0)

    def test_table_validation(self):
        with pytest.raises(DomainError):
            TabulatedSpeed([1.0, 2.0], [0.1, 0.2])  # must start at 0
        with pytest.raises(DomainError):
            TabulatedSpeed([0.0, 2.0, 2.0], [0.1, 0.2, 0.3])  # not increasing
        with pytest.raises(DomainError):
            TabulatedSpeed([0.0], [0.1])

    def test_load_speed_table(self, tmp_path):
        csv = tmp_path / "speeds.csv"
        csv.write_text("0.0,0.0\n100.0,0.3\n400.0,0.25\n")
        prof = load_speed_table(csv)
        assert prof.speed(50.0) == pytest.approx(0.15)
        assert prof.limit_speed == 0.25


class TestForcingHat:
    def test_zero_speed_gives_zero(self, params, ship):
        grid = Grid(Lx=400.0, Nx=128)
        g = forcing_hat(params, ship, ConstantSpeed(0.0), grid, 3.0)
        assert np.all(g.values == 0.0)

    def test_zero_mode_and_nyquist_vanish(self, params, ship):
        grid = Grid(Lx=400.0, Nx=128)
        g = forcing_hat(params, ship, ConstantSpeed(0.43), grid, 3.0)
        assert g.values[0] == 0.0
        assert g.values[grid.Nx // 2] == 0.0

    def test_envelope_bound(self, params, ship):
        # |g_k| * domain length <= N(|k|) |U| |f_hat|, with equality at
        # positive wavenumbers in 1D
        grid = Grid(Lx=400.0, Nx=128)
        t = 17.3
        profile = RampSpeed(0.25, 0.01)
        g = forcing_hat(params, ship, profile, grid, t)
        kx = grid.kappa_x()
        pos = kx > 0
        envelope = forcing_envelope(params, kx[pos])
        hull = np.abs(ship_transform(ship, grid).values[pos])
        bound = envelope * abs(profile.speed(t)) * hull
        lhs = np.abs(g.values[pos]) * grid.Lx
        assert np.all(lhs <= bound * (1 + 1e-12))
        assert np.allclose(lhs, bound, rtol=1e-12)

    def test_hermitian_symmetry(self, params, ship):
        grid = Grid(Lx=400.0, Nx=128)
        g = forcing_hat(params, ship, ConstantSpeed(0.3), grid, 11.0).values
        sym = np.conj(reflect_spectrum(g))
        assert np.abs(g - sym).max() <= 1e-13 * np.abs(g).max()

    def test_magnitude_independent_of_position(self, params, ship):
        grid = Grid(Lx=400.0, Nx=128)
        a = forcing_hat(params, ship, ConstantSpeed(0.3), grid, 0.0).values
        b = forcing_hat(params, ship, ConstantSpeed(0.3), grid, 123.456).values
        assert np.allclose(np.abs(a), np.abs(b), rtol=1e-13, atol=0.0)

    def test_2d_zero_kx_row_vanishes(self, params, ship2d):
        grid = Grid(Lx=200.0, Nx=32, Ly=100.0, Ny=16)
        g = forcing_hat(params, ship2d, ConstantSpeed(0.5), grid, 1.0).values
        assert np.all(g[:, 0] == 0.0)

    def test_rejects_negative_time(self, params, ship):
        grid = Grid(Lx=400.0, Nx=128)
        with pytest.raises(DomainError):
            forcing_hat(params, ship, ConstantSpeed(0.3), grid, -1.0)


class TestStationaryCoefficient:
    def test_phase_factorization(self, params, ship, rng):
        grid = Grid(Lx=400.0, Nx=128)
        ux = 0.43
        d = stationary_coefficient(params, ship, ux, grid).values
        kx = grid.kappa_x()
        for t in rng.uniform(0.0, 500.0, size=4):
            expected = d * np.exp(-2j * np.pi * kx * ux * t)
            actual = forcing_hat(params, ship, ConstantSpeed(ux), grid, t).values
            assert np.abs(actual - expected).max() <= 1e-12 * np.abs(d).max()

    def test_zero_speed(self, params, ship):
        grid = Grid(Lx=400.0, Nx=128)
        d = stationary_coefficient(params, ship, 0.0, grid).values
        assert np.all(d == 0.0)

    def test_reflection_conjugation(self, params, ship):
        grid = Grid(Lx=400.0, Nx=128)
        d = stationary_coefficient(params, ship, 0.43, grid).values
        assert np.abs(d - np.conj(reflect_spectrum(d))).max() <= 1e-13 * np.abs(d).max()
