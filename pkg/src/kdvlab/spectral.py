"""Fourier pseudospectral toolbox for real periodic fields.

Fields live on a uniform grid over [-L/2, L/2) and are represented either
by their N real samples or by a half-spectrum of normalized complex Fourier
coefficients c_k (k = 0 .. N/2) such that

    f(x) = c_0 + 2 Re sum_{k=1}^{N/2-1} c_k exp(i 2 pi k x / L) + Re c_{N/2} e^{i pi N x / L}.

With this normalization a unit-amplitude cosine mode carries c_k = 1/2,
i.e. the amplitude is split over the +k/-k pair.  The Nyquist mode (k = N/2)
is zeroed by odd-order differentiation and by the dealiased product so that
all derived fields stay real; well-resolved fields carry no Nyquist content
to begin with.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft


class NonFiniteDataError(ValueError):
    """Raised when a field contains NaN or infinite samples."""


class GridMismatchError(ValueError):
    """Raised when an operation combines fields on different grids."""


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [-L/2, L/2) with N collocation points."""

    L: float
    N: int

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError(f"domain length must be positive, got {self.L}")
        if self.N < 8 or self.N % 2 != 0:
            raise ValueError(f"N must be even and >= 8, got {self.N}")

    @property
    def dx(self) -> float:
        return self.L / self.N

    @property
    def x(self) -> np.ndarray:
        return -self.L / 2 + self.L * np.arange(self.N) / self.N

    @property
    def nmodes(self) -> int:
        """Length of the half-spectrum (k = 0 .. N/2)."""
        return self.N // 2 + 1

    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers 2 pi k / L for the half-spectrum."""
        return 2 * np.pi / self.L * np.arange(self.nmodes)


@dataclass(frozen=True)
class RealField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.grid.N,):
            raise ValueError("values must have shape (N,)")


@dataclass(frozen=True)
class SpectralField:
    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.shape != (self.grid.nmodes,):
            raise ValueError("coeffs must have shape (N//2 + 1,)")


def forward_transform(f: RealField) -> SpectralField:
    """Real field -> normalized half-spectrum coefficients."""
    if not np.all(np.isfinite(f.values)):
        raise NonFiniteDataError("cannot transform non-finite samples")
    return SpectralField(f.grid, sfft.rfft(f.values) / f.grid.N)


def inverse_transform(f: SpectralField) -> RealField:
    """Half-spectrum coefficients -> real samples."""
    return RealField(f.grid, sfft.irfft(f.coeffs * f.grid.N, n=f.grid.N))


def differentiate(f: SpectralField, order: int) -> SpectralField:
    """Spectral derivative: coefficient k is multiplied by (i 2 pi k / L)^order.

    The Nyquist mode is zeroed for odd orders so the inverse transform of a
    differentiated real field is real.
    """
    if order not in (1, 2, 3):
        raise ValueError(f"derivative order must be 1, 2, or 3, got {order}")
    mult = (1j * f.grid.wavenumbers()) ** order
    if order % 2 == 1:
        mult[-1] = 0.0
    return SpectralField(f.grid, f.coeffs * mult)


def dealias_product(a: SpectralField, b: SpectralField) -> SpectralField:
    """Alias-free product of two spectral fields via 3/2 zero padding.

    Both spectra are padded to a fine grid of 3N/2 points, multiplied
    pointwise, transformed back, and truncated to the original N modes.
    The result equals the mode-space convolution of the inputs restricted
    to the retained modes.  Nyquist modes are treated as zero.
    """
    if a.grid != b.grid:
        raise GridMismatchError("operands live on different grids")
    grid = a.grid
    nc = grid.nmodes
    m = 3 * grid.N // 2
    pad = np.zeros((2, m // 2 + 1), dtype=complex)
    pad[0, : nc - 1] = a.coeffs[:-1]
    pad[1, : nc - 1] = b.coeffs[:-1]
    fine = sfft.irfft(pad, n=m)
    prod = sfft.rfft(fine[0] * fine[1])[:nc] * m
    prod[-1] = 0.0
    return SpectralField(grid, prod)


def l2_norm(f) -> float:
    """Continuous L2 norm sqrt(integral f^2 dx), by quadrature or Parseval."""
    if isinstance(f, RealField):
        if not np.all(np.isfinite(f.values)):
            raise NonFiniteDataError("cannot take the norm of non-finite samples")
        return float(np.sqrt(np.sum(f.values**2) * f.grid.dx))
    if not np.all(np.isfinite(f.coeffs)):
        raise NonFiniteDataError("cannot take the norm of non-finite coefficients")
    mags = np.abs(f.coeffs) ** 2
    total = mags[0] + 2 * np.sum(mags[1:-1]) + mags[-1]
    return float(np.sqrt(f.grid.L * total))


def field_from_function(grid: Grid, fn) -> RealField:
    """Sample a callable f(x) on the grid."""
    return RealField(grid, np.asarray(fn(grid.x), dtype=float))
