"""IMEX timestepping scheme coefficient tables.

Two families are provided:

* SBDF1-4 -- s-step semi-implicit backward differentiation schemes,

      (1/dt) sum_i a_i U^(n+i) + L U^(n+s) = sum_{i<s} beta_i f(U^(n+i)),

  with the linear term treated purely implicitly (gamma_s = 1).  The
  fixed-step coefficients follow Wang & Ruuth (2008).

* RK222 / RK443 -- paired ERK+DIRK Runge-Kutta schemes of Ascher, Ruuth &
  Spiteri (1997), schemes (2.6) and (2.8), sharing abscissae c_j:

      (1 + dt at[i][i] L) U^(n,i) = U^(n,0)
          + dt sum_{j<i} (ah[i][j] f(U^(n,j)) - at[i][j] L U^(n,j)),

  for stages i = 1..q, with U^(n+1) = U^(n,q).

Coefficients are built from exact rationals (and the radical gamma for
RK222) and materialized to float once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SbdfScheme:
    """s-step SBDF coefficients, oldest level first: a[i] weights U^(n+i)."""

    s: int
    a: tuple
    beta: tuple
    name: str

    @property
    def order(self) -> int:
        return self.s

    @property
    def gamma(self) -> tuple:
        return (0.0,) * self.s + (1.0,)


@dataclass(frozen=True)
class RkScheme:
    """q-stage ERK+DIRK tableau pair; row i of each tableau drives stage i."""

    q: int
    a_hat: tuple      # explicit tableau, (q+1) x (q+1), strictly lower
    a_tilde: tuple    # implicit tableau, (q+1) x (q+1), lower incl. diagonal
    c_tilde: tuple    # shared abscissae, length q+1
    order: int
    name: str

    def a_hat_arr(self) -> np.ndarray:
        return np.array(self.a_hat)

    def a_tilde_arr(self) -> np.ndarray:
        return np.array(self.a_tilde)


_SBDF_A = {
    1: (-1.0, 1.0),
    2: (1 / 2, -2.0, 3 / 2),
    3: (-1 / 3, 3 / 2, -3.0, 11 / 6),
    4: (1 / 4, -4 / 3, 3.0, -4.0, 25 / 12),
}
_SBDF_BETA = {
    1: (1.0,),
    2: (-1.0, 2.0),
    3: (1.0, -3.0, 3.0),
    4: (-1.0, 4.0, -6.0, 4.0),
}


def sbdf(order: int) -> SbdfScheme:
    """Fixed-step SBDF scheme of the given order (1..4)."""
    if order not in _SBDF_A:
        raise ValueError(f"unsupported SBDF order {order}; must be 1..4")
    return SbdfScheme(order, _SBDF_A[order], _SBDF_BETA[order], f"sbdf{order}")


def _rk222() -> RkScheme:
    g = (2 - math.sqrt(2)) / 2
    d = 1 - 1 / (2 * g)
    a_hat = ((0, 0, 0),
             (g, 0, 0),
             (d, 1 - d, 0))
    a_tilde = ((0, 0, 0),
               (0, g, 0),
               (0, 1 - g, g))
    return RkScheme(2, a_hat, a_tilde, (0.0, g, 1.0), 2, "rk222")


def _rk443() -> RkScheme:
    a_hat = ((0, 0, 0, 0, 0),
             (1 / 2, 0, 0, 0, 0),
             (11 / 18, 1 / 18, 0, 0, 0),
             (5 / 6, -5 / 6, 1 / 2, 0, 0),
             (1 / 4, 7 / 4, 3 / 4, -7 / 4, 0))
    a_tilde = ((0, 0, 0, 0, 0),
               (0, 1 / 2, 0, 0, 0),
               (0, 1 / 6, 1 / 2, 0, 0),
               (0, -1 / 2, 1 / 2, 1 / 2, 0),
               (0, 3 / 2, -3 / 2, 1 / 2, 1 / 2))
    return RkScheme(4, a_hat, a_tilde, (0.0, 1 / 2, 2 / 3, 1 / 2, 1.0), 3, "rk443")


_RK = {"rk222": _rk222, "rk443": _rk443}


def rk(name: str) -> RkScheme:
    """ERK+DIRK scheme by name ('rk222' or 'rk443')."""
    key = name.lower()
    if key not in _RK:
        raise ValueError(f"unknown RK scheme {name!r}; expected rk222 or rk443")
    return _RK[key]()


def by_name(name: str):
    """Scheme lookup used by CLI configs: sbdf1..sbdf4, rk222, rk443."""
    key = name.lower()
    if key.startswith("sbdf") and key[4:] in "1234" and len(key) == 5:
        return sbdf(int(key[4]))
    return rk(key)


# ---------------------------------------------------------------------------
# Scalar one-step application on dy/dt = (a_im + a_ex) y.
#
# The scheme sees L = -a_im (implicit) and f(y) = a_ex y (explicit); these
# also back the stability-region module.

def sbdf_scalar_step(scheme: SbdfScheme, z_im: complex, z_ex: complex,
                     history: np.ndarray) -> complex:
    """Advance one SBDF step given exact history y(t + i dt), i = 0..s-1.

    z_im = a_im * dt and z_ex = a_ex * dt are the nondimensional arguments.
    """
    a = scheme.a
    num = sum((z_ex * scheme.beta[i] - a[i]) * history[i] for i in range(scheme.s))
    den = a[scheme.s] - z_im
    if den == 0:
        raise ZeroDivisionError("degenerate SBDF step: a_s - z_im = 0")
    return num / den


def rk_scalar_step(scheme: RkScheme, z_im: complex, z_ex: complex) -> complex:
    """Update factor U^(n+1)/U^(n) of one ERK+DIRK step on the test problem."""
    ah = scheme.a_hat
    at = scheme.a_tilde
    u = np.zeros(scheme.q + 1, dtype=complex)
    u[0] = 1.0
    for i in range(1, scheme.q + 1):
        den = 1 - at[i][i] * z_im
        if den == 0:
            raise ZeroDivisionError("singular implicit stage factor")
        acc = u[0]
        for j in range(i):
            acc += (ah[i][j] * z_ex + at[i][j] * z_im) * u[j]
        u[i] = acc / den
    return complex(u[scheme.q])


def _one_step_error(scheme, z_im: complex, z_ex: complex, dt: float) -> float:
    """|one scheme step - exact exponential| on the scalar test problem."""
    z = (z_im + z_ex) * dt
    exact = np.exp(z)
    if isinstance(scheme, SbdfScheme):
        hist = np.exp((z_im + z_ex) * dt * np.arange(scheme.s))
        approx = sbdf_scalar_step(scheme, z_im * dt, z_ex * dt, hist)
        exact = np.exp((z_im + z_ex) * dt * scheme.s)
    else:
        approx = rk_scalar_step(scheme, z_im * dt, z_ex * dt)
    return abs(approx - exact)


@dataclass(frozen=True)
class OrderReport:
    declared_order: int
    observed_order: float
    max_residual: float


def verify_order_conditions(scheme, samples: int = 5, seed: int = 7) -> OrderReport:
    """Numerically verify the declared order via a Richardson slope fit.

    One step applied to dy/dt = (a_im + a_ex) y from exact data must match
    the exponential through the local order s+1; the observed slope of the
    one-step error against dt is fitted over a dt-halving sequence for
    randomized complex (a_im, a_ex) pairs.
    """
    order = scheme.s if isinstance(scheme, SbdfScheme) else scheme.order
    rng = np.random.default_rng(seed)
    # the ladder stays coarse enough that order-5 local errors sit well
    # above the double-precision noise floor
    dts = 2e-1 / 2 ** np.arange(5)
    slopes = []
    max_res = 0.0
    for _ in range(samples):
        a_im = 1j * rng.uniform(0.5, 2.0)
        a_ex = -1j * rng.uniform(0.2, 1.0)
        errs = np.array([_one_step_error(scheme, a_im, a_ex, dt) for dt in dts])
        slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
        slopes.append(slope)
        max_res = max(max_res, errs[-1] / dts[-1] ** (order + 1))
    return OrderReport(order, float(min(slopes)), float(max_res))
