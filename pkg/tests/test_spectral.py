import numpy as np
import pytest

from deadwater import (
    ContractError,
    DomainError,
    Grid,
    RealField,
    SpectralField,
    dft_forward,
    dft_inverse,
    potential_coupling,
    read_field,
    recover_eta_phi,
    reflect_spectrum,
    write_field,
    zero_nyquist,
)


class TestGrid:
    def test_samples_span_half_open_interval(self):
        g = Grid(Lx=10.0, Nx=8)
        x = g.x()
        assert x[0] == -5.0
        assert x[-1] == pytest.approx(5.0 - 10.0 / 8)

    def test_wavenumber_set(self):
        g = Grid(Lx=10.0, Nx=8)
        assert sorted(np.round(g.kappa_x() * g.Lx).astype(int)) == list(range(-4, 4))

    def test_rejects_odd_or_tiny_counts(self):
        with pytest.raises(DomainError):
            Grid(Lx=10.0, Nx=7)
        with pytest.raises(DomainError):
            Grid(Lx=10.0, Nx=2)
        with pytest.raises(DomainError):
            Grid(Lx=-1.0, Nx=8)
        with pytest.raises(DomainError):
            Grid(Lx=10.0, Nx=8, Ly=5.0)  # Ny missing

    def test_2d_shape_x_fastest(self):
        g = Grid(Lx=10.0, Nx=16, Ly=5.0, Ny=8)
        assert g.shape == (8, 16)
        assert g.kappa_magnitude().shape == (8, 16)


class TestForward:
    def test_constant_field(self, grid_small):
        coeffs = dft_forward(grid_small, np.ones(grid_small.Nx)).values
        assert coeffs[0] == pytest.approx(1.0, abs=1e-13)
        assert np.abs(coeffs[1:]).max() < 1e-13

    def test_cosine_splits_in_half(self, grid_small):
        kappa1 = 3.0 / grid_small.Lx
        samples = np.cos(2 * np.pi * kappa1 * grid_small.x())
        coeffs = dft_forward(grid_small, samples).values
        assert coeffs[3] == pytest.approx(0.5, abs=1e-13)
        assert coeffs[-3] == pytest.approx(0.5, abs=1e-13)
        rest = np.abs(np.delete(coeffs, [3, grid_small.Nx - 3]))
        assert rest.max() < 1e-13

    def test_pure_mode_gives_unit_coefficient(self, grid_small):
        m = 17
        mode = np.exp(2j * np.pi * (m / grid_small.Lx) * grid_small.x())
        coeffs = dft_forward(grid_small, mode).values
        assert coeffs[m] == pytest.approx(1.0, abs=1e-12)

    def test_real_field_is_hermitian(self, grid_small, rng):
        coeffs = dft_forward(grid_small, rng.standard_normal(grid_small.Nx)).values
        sym = np.conj(reflect_spectrum(coeffs))
        assert np.abs(coeffs - sym).max() <= 1e-12 * np.abs(coeffs).max()

    def test_size_mismatch_rejected(self, grid_small):
        with pytest.raises(ContractError):
            dft_forward(grid_small, np.ones(grid_small.Nx + 2))


class TestInverse:
    def test_delta_coefficient_is_pure_mode(self, grid_small):
        m = 5
        coeffs = np.zeros(grid_small.Nx, dtype=complex)
        coeffs[m] = 1.0
        samples = dft_inverse(SpectralField(grid_small, coeffs))
        expected = np.exp(2j * np.pi * (m / grid_small.Lx) * grid_small.x())
        assert np.abs(samples - expected).max() < 1e-12

    def test_roundtrip_identity(self, grid_small, rng):
        v = rng.standard_normal(grid_small.Nx)
        back = dft_inverse(dft_forward(grid_small, v))
        assert np.abs(back - v).max() <= 1e-12 * np.abs(v).max()

    def test_linearity(self, grid_small, rng):
        f = SpectralField(grid_small, rng.standard_normal(grid_small.Nx) + 1j * rng.standard_normal(grid_small.Nx))
        g = SpectralField(grid_small, rng.standard_normal(grid_small.Nx) + 1j * rng.standard_normal(grid_small.Nx))
        combo = SpectralField(grid_small, 2.5 * f.values - 1.25j * g.values)
        lhs = dft_inverse(combo)
        rhs = 2.5 * dft_inverse(f) - 1.25j * dft_inverse(g)
        assert np.abs(lhs - rhs).max() < 1e-12 * np.abs(lhs).max()

    def test_roundtrip_2d(self, rng):
        g = Grid(Lx=20.0, Nx=16, Ly=10.0, Ny=8)
        v = rng.standard_normal(g.shape)
        back = dft_inverse(dft_forward(g, v))
        assert np.abs(back - v).max() < 1e-12


class TestProperties:
    def test_parseval(self, grid_small, rng):
        v = rng.standard_normal(grid_small.Nx)
        coeffs = dft_forward(grid_small, v).values
        assert np.mean(v**2) == pytest.approx(np.sum(np.abs(coeffs) ** 2), rel=1e-12)

    def test_shift_theorem_on_grid(self, grid_small, rng):
        v = rng.standard_normal(grid_small.Nx)
        shift_cells = 13
        shift = shift_cells * grid_small.dx
        shifted = np.roll(v, shift_cells)  # v(x - shift) on the periodic lattice
        lhs = dft_forward(grid_small, shifted).values
        kx = grid_small.kappa_x()
        rhs = np.exp(-2j * np.pi * kx * shift) * dft_forward(grid_small, v).values
        assert np.abs(lhs - rhs).max() < 1e-12 * np.abs(rhs).max()


class TestRecovery:
    def _make_mu(self, grid, params, rng):
        eta = rng.standard_normal(grid.shape)
        phi = rng.standard_normal(grid.shape)
        phi -= phi.mean()
        eta_hat = dft_forward(grid, eta).values
        phi_hat = dft_forward(grid, phi).values
        zero_nyquist(eta_hat, grid)
        zero_nyquist(phi_hat, grid)
        alpha = potential_coupling(params, grid.kappa_magnitude())
        mu = SpectralField(grid, eta_hat + 1j * alpha * phi_hat)
        eta_clean = dft_inverse(SpectralField(grid, eta_hat)).real
        phi_clean = dft_inverse(SpectralField(grid, phi_hat)).real
        return mu, eta_clean, phi_clean

    def test_constructive_inverse(self, params, grid_small, rng):
        mu, eta, phi = self._make_mu(grid_small, params, rng)
        rec = recover_eta_phi(mu, params)
        assert np.abs(rec.elevation.values - eta).max() <= 1e-10 * np.abs(eta).max()
        assert np.abs(rec.potential.values - phi).max() <= 1e-10 * np.abs(phi).max()
        assert rec.imag_residue <= 1e-10

    def test_constructive_inverse_2d(self, params, rng):
        grid = Grid(Lx=50.0, Nx=32, Ly=30.0, Ny=16)
        mu, eta, phi = self._make_mu(grid, params, rng)
        rec = recover_eta_phi(mu, params)
        assert np.abs(rec.elevation.values - eta).max() <= 1e-10 * np.abs(eta).max()
        assert np.abs(rec.potential.values - phi).max() <= 1e-10 * np.abs(phi).max()

    def test_zero_gives_zero(self, params, grid_small):
        mu = SpectralField(grid_small, np.zeros(grid_small.Nx, dtype=complex))
        rec = recover_eta_phi(mu, params)
        assert np.all(rec.elevation.values == 0.0)
        assert np.all(rec.potential.values == 0.0)

    def test_hermitian_input_has_no_potential(self, params, grid_small, rng):
        # Hermitian mu means pure elevation content
        coeffs = dft_forward(grid_small, rng.standard_normal(grid_small.Nx)).values
        rec = recover_eta_phi(SpectralField(grid_small, coeffs), params)
        scale = np.abs(rec.elevation.values).max()
        assert np.abs(rec.potential.values).max() <= 1e-12 * scale


class TestFieldIO:
    def test_real_roundtrip(self, grid_small, rng, tmp_path):
        field = RealField(grid_small, rng.standard_normal(grid_small.Nx))
        write_field(tmp_path / "eta", field, time=12.5, epsilon=1e-4)
        loaded, meta = read_field(tmp_path / "eta")
        assert np.array_equal(loaded.values, field.values)
        assert meta["kind"] == "real"
        assert meta["time"] == 12.5
        assert meta["epsilon"] == 1e-4

    def test_complex_roundtrip_2d(self, rng, tmp_path):
        grid = Grid(Lx=20.0, Nx=16, Ly=10.0, Ny=8)
        vals = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        write_field(tmp_path / "mu", SpectralField(grid, vals), extra_meta={"config_hash": "ab"})
        loaded, meta = read_field(tmp_path / "mu")
        assert np.array_equal(loaded.values, vals)
        assert meta["dim"] == 2
        assert meta["config_hash"] == "ab"

    def test_binary_is_headerless_interleaved(self, grid_small, tmp_path):
        vals = np.arange(grid_small.Nx, dtype=complex) * (1 + 2j)
        write_field(tmp_path / "mu", SpectralField(grid_small, vals))
        raw = np.fromfile(tmp_path / "mu.bin", dtype="<f8")
        assert raw.size == 2 * grid_small.Nx
        assert np.array_equal(raw[0::2], vals.real)
        assert np.array_equal(raw[1::2], vals.imag)
