"""Periodic grids, the discrete Fourier transform contract, and field recovery.

Conventions
-----------
Sample points run from -L/2 with spacing L/N (the +L/2 endpoint is the
periodic image of the first point). Discrete wavenumbers are m/L cycles
per meter for m in {-N/2, ..., N/2 - 1}, stored in standard FFT order.
The forward transform divides by the sample count, so a pure mode
exp(2 pi i kappa x) carries a unit coefficient regardless of resolution.
2D arrays are indexed [iy, ix] (x is the fastest axis).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ContractError, DomainError
from .physics import PhysicalParams, potential_coupling

__all__ = [
    "Grid",
    "SpectralField",
    "RealField",
    "RecoveredFields",
    "dft_forward",
    "dft_inverse",
    "reflect_spectrum",
    "zero_nyquist",
    "recover_eta_phi",
    "write_field",
    "read_field",
]


def _check_axis(L, N, name):
    if L is None or N is None:
        raise DomainError(f"2D grid requires both L{name} and N{name}")
    if L <= 0:
        raise DomainError(f"L{name} must be positive")
    if N < 4 or N % 2 != 0:
        raise DomainError(f"N{name} must be even and at least 4, got {N}")


@dataclass(frozen=True)
class Grid:
    """Periodic spatial lattice, 1D or 2D."""

    Lx: float
    Nx: int
    Ly: float | None = None
    Ny: int | None = None

    def __post_init__(self):
        _check_axis(self.Lx, self.Nx, "x")
        if (self.Ly is None) != (self.Ny is None):
            raise DomainError("Ly and Ny must be given together")
        if self.Ly is not None:
            _check_axis(self.Ly, self.Ny, "y")

    @property
    def dim(self) -> int:
        return 1 if self.Ly is None else 2

    @property
    def shape(self) -> tuple:
        return (self.Nx,) if self.dim == 1 else (self.Ny, self.Nx)

    @property
    def dx(self) -> float:
        return self.Lx / self.Nx

    @property
    def dy(self) -> float:
        if self.dim == 1:
            raise ContractError("1D grid has no y spacing")
        return self.Ly / self.Ny

    @property
    def area(self) -> float:
        """Domain measure: length in 1D, area in 2D."""
        return self.Lx if self.dim == 1 else self.Lx * self.Ly

    def x(self) -> np.ndarray:
        return -self.Lx / 2 + np.arange(self.Nx) * self.dx

    def y(self) -> np.ndarray:
        if self.dim == 1:
            raise ContractError("1D grid has no y coordinates")
        return -self.Ly / 2 + np.arange(self.Ny) * self.dy

    def kappa_x(self) -> np.ndarray:
        """x-wavenumbers (cycles/m) in FFT order, as a 1D axis array."""
        return np.fft.fftfreq(self.Nx, d=self.dx)

    def kappa_y(self) -> np.ndarray:
        if self.dim == 1:
            raise ContractError("1D grid has no y wavenumbers")
        return np.fft.fftfreq(self.Ny, d=self.dy)

    def kappa_x_grid(self) -> np.ndarray:
        """x-wavenumber at every spectral slot, shaped like field values."""
        kx = self.kappa_x()
        if self.dim == 1:
            return kx
        return np.broadcast_to(kx[None, :], self.shape).copy()

    def kappa_magnitude(self) -> np.ndarray:
        if self.dim == 1:
            return np.abs(self.kappa_x())
        return np.hypot(
            self.kappa_x()[None, :], self.kappa_y()[:, None]
        )


def _check_same_grid(a: Grid, b: Grid):
    if a != b:
        raise ContractError("fields live on different grids")


@dataclass
class SpectralField:
    """Complex coefficients indexed by discrete wavenumber (FFT order)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != self.grid.shape:
            raise ContractError(
                f"spectral values shaped {self.values.shape}, grid wants {self.grid.shape}"
            )

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.values.copy())


@dataclass
class RealField:
    """Real samples on the grid points."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != self.grid.shape:
            raise ContractError(
                f"sample values shaped {self.values.shape}, grid wants {self.grid.shape}"
            )

    def copy(self) -> "RealField":
        return RealField(self.grid, self.values.copy())


def _offset_phase(grid: Grid, sign: int) -> np.ndarray:
    """exp(sign * 2 pi i kappa . x0) with x0 the lower-left corner."""
    px = np.exp(sign * 2j * np.pi * grid.kappa_x() * (-grid.Lx / 2))
    if grid.dim == 1:
        return px
    py = np.exp(sign * 2j * np.pi * grid.kappa_y() * (-grid.Ly / 2))
    return py[:, None] * px[None, :]


def dft_forward(grid: Grid, samples) -> SpectralField:
    """Forward transform of samples on the grid points.

    Normalized so a pure mode exp(2 pi i kappa_m x) maps to a unit
    coefficient at kappa_m; the phase factor accounts for the sample
    points starting at -L/2 rather than 0.
    """
    samples = np.asarray(samples)
    if samples.shape != grid.shape:
        raise ContractError(
            f"samples shaped {samples.shape}, grid wants {grid.shape}"
        )
    coeffs = np.fft.fftn(samples) / samples.size
    return SpectralField(grid, coeffs * _offset_phase(grid, -1))


def dft_inverse(field: SpectralField) -> np.ndarray:
    """Exact two-sided inverse of dft_forward; returns complex samples."""
    grid = field.grid
    shifted = field.values * _offset_phase(grid, +1)
    return np.fft.ifftn(shifted) * shifted.size


def reflect_spectrum(values: np.ndarray) -> np.ndarray:
    """Coefficient array evaluated at -kappa: index m -> (-m) mod N on each axis."""
    out = values
    for axis in range(values.ndim):
        out = np.roll(np.flip(out, axis=axis), 1, axis=axis)
    return out


def zero_nyquist(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Zero the m = -N/2 rows in place (no Hermitian partner on even grids)."""
    if grid.dim == 1:
        values[grid.Nx // 2] = 0.0
    else:
        values[:, grid.Nx // 2] = 0.0
        values[grid.Ny // 2, :] = 0.0
    return values


@dataclass
class RecoveredFields:
    elevation: RealField
    potential: RealField
    imag_residue: float


def recover_eta_phi(mu: SpectralField, params: PhysicalParams) -> RecoveredFields:
    """Recover the interface elevation and potential jump from the complex field.

    The elevation spectrum is the Hermitian part (mu_k + conj(mu_{-k}))/2
    and the potential spectrum the anti-Hermitian part divided by the
    coupling coefficient. The kappa = 0 potential mode is pinned to zero
    (a potential is defined up to a constant) and Nyquist rows are zeroed
    before inversion. The discarded imaginary residue is reported
    relative to the elevation's amplitude.
    """
    grid = mu.grid
    reflected = np.conj(reflect_spectrum(mu.values))
    eta_hat = 0.5 * (mu.values + reflected)
    diff = mu.values - reflected

    alpha = potential_coupling(params, grid.kappa_magnitude())
    phi_hat = np.zeros_like(diff)
    nonzero = alpha > 0.0
    phi_hat[nonzero] = diff[nonzero] / (2j * alpha[nonzero])

    zero_nyquist(eta_hat, grid)
    zero_nyquist(phi_hat, grid)

    eta_c = dft_inverse(SpectralField(grid, eta_hat))
    phi_c = dft_inverse(SpectralField(grid, phi_hat))
    scale = max(np.abs(eta_c.real).max(), np.abs(phi_c.real).max(), np.finfo(float).tiny)
    residue = max(np.abs(eta_c.imag).max(), np.abs(phi_c.imag).max()) / scale
    return RecoveredFields(
        RealField(grid, eta_c.real), RealField(grid, phi_c.real), float(residue)
    )


def _sidecar(grid: Grid, kind: str, time, epsilon, extra) -> dict:
    meta = {
        "dim": grid.dim,
        "Lx": grid.Lx,
        "Nx": grid.Nx,
        "Ly": grid.Ly,
        "Ny": grid.Ny,
        "kind": kind,
        "time": time,
        "epsilon": epsilon,
    }
    if extra:
        meta.update(extra)
    return meta


def write_field(base_path, field, *, time=None, epsilon=None, extra_meta=None) -> Path:
    """Dump a field as header-free little-endian binary plus a JSON sidecar.

    Real fields are written as 8-byte floats, complex fields as
    interleaved re/im pairs, row-major. Returns the binary path;
    the sidecar sits next to it with a .json suffix.
    """
    base = Path(base_path)
    if isinstance(field, RealField):
        kind, raw = "real", field.values.astype("<f8")
    elif isinstance(field, SpectralField):
        kind, raw = "complex", field.values.astype("<c16")
    else:
        raise ContractError(f"cannot dump {type(field).__name__}")
    bin_path = base.with_suffix(".bin")
    raw.tofile(bin_path)
    meta = _sidecar(field.grid, kind, time, epsilon, extra_meta)
    base.with_suffix(".json").write_text(json.dumps(meta, indent=2) + "\n")
    return bin_path


def read_field(base_path):
    """Read back a field written by write_field; returns (field, metadata)."""
    base = Path(base_path)
    meta = json.loads(base.with_suffix(".json").read_text())
    grid = Grid(meta["Lx"], meta["Nx"], meta["Ly"], meta["Ny"])
    raw = np.fromfile(base.with_suffix(".bin"), dtype="<c16" if meta["kind"] == "complex" else "<f8")
    values = raw.reshape(grid.shape)
    if meta["kind"] == "complex":
        return SpectralField(grid, values), meta
    return RealField(grid, values), meta
