"""Two-parameter stability regions for the IMEX schemes.

The scalar test problem du/dt = a_im u + a_ex u is advanced with the
implicit part applied to a_im and the explicit part to a_ex; the per-step
amplification modulus is scanned over the purely imaginary
(z_im, z_ex) = (a_im dt, a_ex dt) plane, where a frozen Fourier mode of the
soliton problem lands (z_im from dispersion, z_ex from advection at the
background amplitude).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .schemes import RkScheme, SbdfScheme, rk_scalar_step


class DegeneratePointError(ValueError):
    """Characteristic polynomial degenerates (leading coefficient vanishes)."""


@dataclass(frozen=True)
class ImexTestPoint:
    z_im: complex
    z_ex: complex

    def __post_init__(self):
        if not (np.isfinite(self.z_im) and np.isfinite(self.z_ex)):
            raise ValueError("test point must be finite")


def sbdf_amplification(scheme: SbdfScheme, pt: ImexTestPoint) -> float:
    """max |sigma| over roots of the s-step characteristic polynomial.

    The polynomial is sum_i a_i sigma^i - z_im sigma^s - z_ex sum_i beta_i
    sigma^i; roots come from the companion matrix (np.roots), uniform over
    s = 1..4 and robust near degenerate points.
    """
    s = scheme.s
    coeffs = np.zeros(s + 1, dtype=complex)  # ascending powers
    for i in range(s + 1):
        coeffs[i] = scheme.a[i]
    coeffs[s] -= pt.z_im
    for i in range(s):
        coeffs[i] -= pt.z_ex * scheme.beta[i]
    if abs(coeffs[s]) < 1e-14 * max(1.0, abs(pt.z_im)):
        raise DegeneratePointError(
            f"leading coefficient vanishes at z_im={pt.z_im} for {scheme.name}"
        )
    roots = np.roots(coeffs[::-1])
    return float(np.abs(roots).max())


def rk_amplification(scheme: RkScheme, pt: ImexTestPoint) -> float:
    """|R(z_im, z_ex)| from the scalar stage recursion."""
    at = scheme.a_tilde
    for i in range(1, scheme.q + 1):
        if abs(1.0 - at[i][i] * pt.z_im) < 1e-14:
            raise DegeneratePointError(
                f"singular stage factor at z_im={pt.z_im} for {scheme.name}"
            )
    return abs(rk_scalar_step(scheme, pt.z_im, pt.z_ex))


def amplification(scheme, pt: ImexTestPoint) -> float:
    if isinstance(scheme, SbdfScheme):
        return sbdf_amplification(scheme, pt)
    return rk_amplification(scheme, pt)


def region_scan(scheme, im_zim: np.ndarray, im_zex: np.ndarray) -> np.ndarray:
    """Raster of max|sigma| over a purely imaginary rectangle.

    Returns an array of shape (len(im_zim), len(im_zex)); degenerate points
    are recorded as NaN rather than aborting the scan.
    """
    out = np.empty((len(im_zim), len(im_zex)))
    for i, zi in enumerate(im_zim):
        for j, ze in enumerate(im_zex):
            try:
                out[i, j] = amplification(scheme, ImexTestPoint(1j * zi, 1j * ze))
            except DegeneratePointError:
                out[i, j] = np.nan
    return out


def frozen_mode_point(k_index: int, u0: float, alpha: float, L: float, dt: float) -> ImexTestPoint:
    """Test point for wavenumber index k frozen on a constant background u0.

    Dispersion u_t = -alpha u_xxx gives a_im = i alpha k^3, so
    z_im = i alpha (2 pi k / L)^3 dt; advection u_t = -u0 u_x gives
    z_ex = -i u0 (2 pi k / L) dt.
    """
    kk = 2 * np.pi * k_index / L
    return ImexTestPoint(z_im=1j * alpha * kk**3 * dt, z_ex=-1j * u0 * kk * dt)
