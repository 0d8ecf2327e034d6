import numpy as np
import pytest

from kdvlab.kdv import SolitonParams, soliton_value
from kdvlab.schemes import rk, rk_scalar_step, sbdf
from kdvlab.spectral import Grid
from kdvlab.vn import (
    EigenProblem,
    EigenReport,
    assemble_rk_evp,
    assemble_sbdf_evp,
    background_operator,
    cutoff_study,
    drift_filter,
    leading_growth_rate,
    shift_diagonal,
    solve_spectrum,
    _full_wavenumbers,
)

P = SolitonParams(c=0.5, alpha=0.00697)
DT = 0.00324
SMALL = Grid(10.0, 32)
# wide soliton that the small grid resolves to machine precision
WIDE = SolitonParams(c=0.5, alpha=0.03)


def _match_spectra(a, b, atol):
    """Pair each eigenvalue of a with its nearest in b (order-insensitive)."""
    a = np.asarray(a)
    b = np.asarray(b)
    assert a.shape == b.shape
    worst = np.abs(a[:, None] - b[None, :]).min(axis=1).max()
    assert worst < atol, f"spectra differ by {worst:.3e}"


def test_shift_operator_unitary_and_translates():
    d = shift_diagonal(SMALL, 0.37)
    assert np.allclose(np.abs(d), 1.0)
    k = _full_wavenumbers(SMALL)[3]
    f = np.exp(1j * k * SMALL.x)
    shifted_spec = d * np.fft.fft(f) / SMALL.N
    expect = np.fft.fft(np.exp(1j * k * (SMALL.x - 0.37))) / SMALL.N
    np.testing.assert_allclose(shifted_spec, expect, atol=1e-12)


def test_background_operator_matches_grid_multiplication():
    bg = background_operator(SMALL, P)
    rng = np.random.default_rng(2)
    v = rng.standard_normal(SMALL.N) + 1j * rng.standard_normal(SMALL.N)
    vc = np.fft.fft(v) / SMALL.N
    got = bg.mult_u @ vc
    u = soliton_value(SMALL.x, 0.0, P, L=SMALL.L)
    want = np.fft.fft(u * v) / SMALL.N
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_background_operator_cutoff_zeroes_entries():
    g = Grid(10.0, 64)
    bg = background_operator(g, P, cutoff=1e-2)
    coeffs = np.fft.fft(soliton_value(g.x, 0.0, P, L=g.L)) / g.N
    n_kept = int(np.sum(np.abs(coeffs) >= 1e-2))
    assert 0 < n_kept < g.N
    assert np.count_nonzero(bg.mult_u[0]) == n_kept


def test_sbdf1_block_structure():
    prob = assemble_sbdf_evp(sbdf(1), P.alpha, DT, P, SMALL)
    assert prob.left.shape == (SMALL.N, SMALL.N)
    assert prob.blocks == 1


def test_rk222_block_structure():
    prob = assemble_rk_evp(rk("rk222"), P.alpha, DT, P, SMALL)
    assert prob.left.shape == (2 * SMALL.N, 2 * SMALL.N)
    assert prob.blocks == 2
    assert prob.rk_reduction.shape == (SMALL.N, SMALL.N)


def test_sbdf_zero_background_is_scalar_dispersion():
    # cutoff=inf truncates every background coefficient
    prob = assemble_sbdf_evp(sbdf(1), P.alpha, DT, P, SMALL, cutoff=np.inf)
    rep = solve_spectrum(prob)
    k = _full_wavenumbers(SMALL)
    shift = np.exp(-1j * k * P.c * DT)
    want = 1.0 / (1.0 + DT * P.alpha * (1j * k) ** 3) / shift
    _match_spectra(rep.sigmas, want, atol=1e-12)
    assert np.all(np.abs(rep.sigmas) <= 1.0 + 1e-12)


def test_rk_zero_background_is_scalar_stability_function():
    sch = rk("rk443")
    prob = assemble_rk_evp(sch, P.alpha, DT, P, SMALL, cutoff=np.inf)
    rep = solve_spectrum(prob)
    k = _full_wavenumbers(SMALL)
    shift = np.exp(-1j * k * P.c * DT)
    want = np.array(
        [rk_scalar_step(sch, -DT * P.alpha * (1j * kk) ** 3, 0.0) for kk in k]
    ) / shift
    _match_spectra(rep.sigmas, want, atol=1e-12)


def test_sigma_lambda_consistency():
    rep = solve_spectrum(assemble_sbdf_evp(sbdf(2), P.alpha, DT, P, SMALL))
    np.testing.assert_allclose(
        np.abs(rep.sigmas), np.exp(rep.lambdas.real * DT), rtol=1e-12
    )


def test_diagonal_toy_spectrum():
    # planted eigenvalues {2, 0.5, i} recovered exactly from a diagonal pair
    left = np.eye(3, dtype=complex)
    right = np.diag([2.0, 0.5, 1j]).astype(complex)
    prob = EigenProblem(left, right, "sbdf", Grid(1.0, 8), "toy", 1.0, 0.0, 1)
    rep = solve_spectrum(prob)
    _match_spectra(rep.sigmas, np.array([2.0, 0.5, 1j]), atol=1e-14)


def test_eigenpairs_satisfy_pencil():
    prob = assemble_sbdf_evp(sbdf(2), WIDE.alpha, 0.01, WIDE, SMALL)
    rep = solve_spectrum(prob, vectors=True)
    res = prob.right @ rep.vectors - prob.left @ rep.vectors * rep.sigmas[None, :]
    assert np.abs(res).max() < 1e-10


def _grid_space_advection(u, vc, k, n):
    """Spectrum of -(u v_x + u_x v) via grid-space products (independent route)."""
    ux = np.fft.ifft(1j * k * np.fft.fft(u)).real
    v = np.fft.ifft(vc * n)
    vx = np.fft.ifft(1j * k * vc * n)
    return -np.fft.fft(u * vx + ux * v) / n


def _sbdf_one_step_map(scheme, p, grid, dt):
    """Independent stationary-frame propagator over one step.

    State is the stacked mode-space history (v^0, ..., v^{s-1}); the map
    advances it to (v^1, ..., v^s) with the exact soliton background at each
    history time, building the matrix column-by-column through grid-space
    products.
    """
    n = grid.N
    s = scheme.s
    k = _full_wavenumbers(grid)
    inv = 1.0 / (scheme.a[s] + dt * p.alpha * (1j * k) ** 3)
    backgrounds = [soliton_value(grid.x, i * dt, p, L=grid.L) for i in range(s)]
    a0 = np.zeros((s * n, s * n), dtype=complex)
    for col in range(s * n):
        state = np.zeros(s * n, dtype=complex)
        state[col] = 1.0
        levels = [state[i * n : (i + 1) * n] for i in range(s)]
        acc = np.zeros(n, dtype=complex)
        for i in range(s):
            f = _grid_space_advection(backgrounds[i], levels[i], k, n)
            acc += dt * scheme.beta[i] * f - scheme.a[i] * levels[i]
        new = acc * inv
        a0[:, col] = np.concatenate(levels[1:] + [new])
    return a0


def _rk_one_step_map(scheme, p, grid, dt):
    n = grid.N
    k = _full_wavenumbers(grid)
    d3 = p.alpha * (1j * k) ** 3
    at = scheme.a_tilde_arr()
    ah = scheme.a_hat_arr()
    backgrounds = [
        soliton_value(grid.x, c * dt, p, L=grid.L) for c in scheme.c_tilde
    ]
    a0 = np.zeros((n, n), dtype=complex)
    for col in range(n):
        v = np.zeros(n, dtype=complex)
        v[col] = 1.0
        stages = [v]
        for i in range(1, scheme.q + 1):
            acc = v.copy()
            for j in range(i):
                acc += dt * (
                    ah[i][j] * _grid_space_advection(backgrounds[j], stages[j], k, n)
                    - at[i][j] * d3 * stages[j]
                )
            stages.append(acc / (1.0 + dt * at[i][i] * d3))
        a0[:, col] = stages[-1]
    return a0


def test_propagator_matrix_oracle_sbdf1():
    """The 1-step EVP matrix is exactly the shift-factored true propagator.

    One stationary step advances the perturbation by A_n, and translation
    covariance gives A_n = S^n A_0 S^{-n}, so the n-step propagator is
    S^n (S^{-1} A_0)^n: the per-step amplification factors are the
    eigenvalues of S^{-1} A_0 built from an independent grid-space stepper.
    """
    sch = sbdf(1)
    dt = 0.01
    g = Grid(10.0, 96)
    a0 = _sbdf_one_step_map(sch, WIDE, g, dt)
    b = a0 / shift_diagonal(g, WIDE.c * dt)[:, None]
    prob = assemble_sbdf_evp(sch, WIDE.alpha, dt, WIDE, g)
    m = prob.right / np.diagonal(prob.left)[:, None]
    np.testing.assert_allclose(b, m, atol=1e-13)


def test_propagator_oracle_sbdf2():
    """Spectrum of the multistep EVP matches the independent propagator.

    The bulk of these spectra sits in badly conditioned nonnormal clusters
    on the dispersion circle, so the full-spectrum comparison is loose; the
    isolated leading modes (the quantity of interest) agree to near machine
    precision.
    """
    sch = sbdf(2)
    dt = 0.01
    g = Grid(10.0, 96)
    a0 = _sbdf_one_step_map(sch, WIDE, g, dt)
    s_full = np.tile(shift_diagonal(g, WIDE.c * dt), sch.s)
    ev = np.linalg.eigvals(a0 / s_full[:, None])
    rep = solve_spectrum(assemble_sbdf_evp(sch, WIDE.alpha, dt, WIDE, g))
    _match_spectra(rep.sigmas, ev, atol=1e-3)
    lead = rep.sigmas[:10]
    worst = np.abs(lead[:, None] - ev[None, :]).min(axis=1).max()
    assert worst < 1e-10


def test_propagator_oracle_rk222():
    sch = rk("rk222")
    dt = 0.01
    g = Grid(10.0, 96)
    a0 = _rk_one_step_map(sch, WIDE, g, dt)
    b = a0 / shift_diagonal(g, WIDE.c * dt)[:, None]
    rep = solve_spectrum(assemble_rk_evp(sch, WIDE.alpha, dt, WIDE, g))
    _match_spectra(rep.sigmas, np.linalg.eigvals(b), atol=1e-10)


def test_spectrum_invariant_under_reference_time():
    g = Grid(10.0, 96)
    a = solve_spectrum(assemble_sbdf_evp(sbdf(2), WIDE.alpha, 0.01, WIDE, g, t_n=0.0))
    b = solve_spectrum(assemble_sbdf_evp(sbdf(2), WIDE.alpha, 0.01, WIDE, g, t_n=3.7))
    _match_spectra(a.sigmas, b.sigmas, atol=1e-10)


def test_sbdf1_fastest_mode_strictly_real():
    g = Grid(10.0, 256)
    rep = solve_spectrum(assemble_sbdf_evp(sbdf(1), P.alpha, DT, P, g))
    lam = rep.lambda_max
    assert lam.real > 0
    assert abs(lam.imag) < 1e-9 * lam.real


def _report_from(sigmas, n=16):
    s = np.asarray(sigmas, dtype=complex)
    return EigenReport(s, np.log(s), "toy", 0.01, 0.001, n, 1)


def test_drift_filter_identical_spectra():
    a = _report_from([1.0, 2.0, 3.0j])
    b = _report_from([1.0, 2.0, 3.0j], n=24)
    out = drift_filter(a, b)
    np.testing.assert_allclose(out.drift_ratios, 0.0, atol=0.0)
    assert out.resolved.all()
    assert out.metadata["rejection_fraction"] == 0.0


def test_drift_filter_flags_missing_mode():
    a = _report_from([1.0, 1.1, 1.2, 5.0])
    b = _report_from([1.0, 1.1, 1.2], n=24)
    out = drift_filter(a, b)
    assert np.argmax(out.drift_ratios) == 3
    assert not out.resolved[3]
    assert out.resolved[:3].all()


def test_drift_filter_requires_finer_companion():
    a = _report_from([1.0, 2.0])
    with pytest.raises(ValueError):
        drift_filter(a, a)


def test_drift_filter_rejects_bad_direction():
    a = _report_from([1.0, 2.0])
    b = _report_from([1.0, 2.0], n=24)
    with pytest.raises(ValueError):
        drift_filter(a, b, reject="sideways")


def test_drift_filter_rejection_fraction_at_soliton_parameters():
    g1, g2 = Grid(10.0, 256), Grid(10.0, 384)
    r1 = solve_spectrum(assemble_sbdf_evp(sbdf(2), P.alpha, DT, P, g1))
    r2 = solve_spectrum(assemble_sbdf_evp(sbdf(2), P.alpha, DT, P, g2))
    out = drift_filter(r1, r2)
    frac = out.metadata["rejection_fraction"]
    assert 0.1 <= frac <= 0.5
    # thresholding is consistent with the reported ratios
    np.testing.assert_array_equal(out.resolved, out.drift_ratios <= 1e-2)
    assert np.isfinite(out.drift_ratios).all()


def test_lambda_max_honors_resolved_mask():
    rep = _report_from([2.0, 1.5])
    rep.resolved = np.array([False, True])
    rep.drift_ratios = np.array([1.0, 0.0])
    assert rep.lambda_max == pytest.approx(np.log(1.5))


def test_cutoff_study_self_consistent_reference():
    g = Grid(10.0, 64)
    study = cutoff_study(sbdf(2), P.alpha, DT, P, g, [1e-8, 1e-16])
    ref = leading_growth_rate(sbdf(2), P.alpha, DT, P, g, cutoff=1e-16)
    assert study[1e-16] == ref


def test_cutoff_study_rejects_nonmonotone_cutoffs():
    g = Grid(10.0, 64)
    with pytest.raises(ValueError):
        cutoff_study(sbdf(2), P.alpha, DT, P, g, [1e-4, 1e-16, 1e-8])
