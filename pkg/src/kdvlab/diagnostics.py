"""Error measurement against the exact soliton and growth-rate fitting."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kdv import SimulationTrace, SolitonParams, soliton_value
from .spectral import RealField, dealias_product, differentiate, forward_transform, l2_norm


@dataclass(frozen=True)
class ErrorSeries:
    """Per-sample deviation of a trace from the exact traveling soliton.

    phase_offsets are peak position minus the exact peak location, wrapped
    to [-L/2, L/2); amplitude_ratios are max u over the exact peak 3c.
    """

    times: np.ndarray
    l2_errors: np.ndarray
    phase_offsets: np.ndarray
    amplitude_ratios: np.ndarray

    def __post_init__(self):
        if np.any(self.l2_errors < 0):
            raise ValueError("l2 errors must be nonnegative")


def error_vs_exact(u: RealField, t: float, p: SolitonParams) -> float:
    """L2 distance from u to the periodically wrapped soliton at time t."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    diff = u.values - soliton_value(u.grid.x, t, p, L=u.grid.L)
    return math.sqrt(np.sum(diff**2) * u.grid.dx)


def error_series(trace: SimulationTrace) -> ErrorSeries:
    """Assemble an ErrorSeries from a trace run with track_error enabled."""
    if trace.l2_errors.size != trace.times.size:
        raise ValueError("trace was not run with track_error=True")
    p = trace.config.soliton
    L = trace.config.grid.L
    exact_peak = p.x0 + p.c * trace.times
    offsets = (trace.peak_positions - exact_peak + L / 2) % L - L / 2
    return ErrorSeries(
        times=trace.times,
        l2_errors=trace.l2_errors,
        phase_offsets=offsets,
        amplitude_ratios=trace.amplitudes / p.peak,
    )


def fit_growth_rate(series: ErrorSeries, window: tuple) -> float:
    """Least-squares exponential rate of the L2 error over a time window.

    Fits log(error) = a + lambda*t on samples with window[0] <= t <= window[1]
    and returns lambda.
    """
    t0, t1 = window
    mask = (series.times >= t0) & (series.times <= t1)
    if mask.sum() < 10:
        raise ValueError(f"window [{t0}, {t1}] holds {mask.sum()} samples; need >= 10")
    errs = series.l2_errors[mask]
    if np.any(errs <= 0):
        raise ValueError("window contains nonpositive errors; cannot fit log-growth")
    slope = np.polyfit(series.times[mask], np.log(errs), 1)[0]
    return float(slope)


def growth_window(
    trace: SimulationTrace,
    saturation_fraction: float = 0.1,
    floor_multiple: float = 0.0,
) -> tuple:
    """Fitting window for a tracked trace: after startup, before saturation.

    Startup samples (the multi-step history fill) are excluded, and the
    window ends where the error reaches saturation_fraction of the exact
    solution's norm -- beyond that the perturbation is no longer small and
    exponential fitting is meaningless.

    Before the unstable mode emerges the error sits on a flat plateau set by
    the scheme's truncation error; samples there dilute the fitted rate.  A
    positive floor_multiple additionally drops samples whose error is below
    floor_multiple times that plateau (estimated as the median of the first
    ten post-startup samples).
    """
    series = error_series(trace)
    cfg = trace.config
    u_ex_norm = l2_norm(
        RealField(cfg.grid, soliton_value(cfg.grid.x, 0.0, cfg.soliton, L=cfg.grid.L))
    )
    startup = getattr(cfg.scheme, "s", 1) * cfg.dt
    cap = saturation_fraction * u_ex_norm
    ok = (series.times > startup) & (series.l2_errors > 0) & (series.l2_errors < cap)
    if floor_multiple > 0.0 and ok.sum() >= 10:
        plateau = float(np.median(series.l2_errors[ok][:10]))
        ok &= series.l2_errors > floor_multiple * plateau
    if ok.sum() < 10:
        raise ValueError("fewer than 10 usable samples between startup and saturation")
    ts = series.times[ok]
    return (float(ts[0]), float(ts[-1]))


def nonlinear_term_norm(u: RealField, t: float, p: SolitonParams) -> float:
    """‖v dv/dx‖ where v = u - u_exact(t), with a dealiased product."""
    if t <= 0:
        raise ValueError("time must be positive")
    v = RealField(u.grid, u.values - soliton_value(u.grid.x, t, p, L=u.grid.L))
    vc = forward_transform(v)
    return l2_norm(dealias_product(vc, differentiate(vc, 1)))


def intermediate_l2(trace: SimulationTrace, fraction: float, t_ref: float) -> float:
    """Sampled L2 norm at t = fraction * t_ref, linearly interpolated."""
    t = fraction * t_ref
    if not (trace.times[0] <= t <= trace.times[-1]):
        raise ValueError(
            f"t={t} outside trace range [{trace.times[0]}, {trace.times[-1]}]"
        )
    return float(np.interp(t, trace.times, trace.l2_norms))
