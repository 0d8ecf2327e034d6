import math

import numpy as np
import pytest

from kdvlab.schemes import (
    by_name,
    rk,
    rk_scalar_step,
    sbdf,
    sbdf_scalar_step,
    verify_order_conditions,
)


def test_sbdf_coefficient_tables():
    assert sbdf(1).a == (-1.0, 1.0)
    assert sbdf(1).beta == (1.0,)
    assert sbdf(2).a == (0.5, -2.0, 1.5)
    assert sbdf(2).beta == (-1.0, 2.0)
    assert sbdf(3).a == (-1 / 3, 1.5, -3.0, 11 / 6)
    assert sbdf(3).beta == (1.0, -3.0, 3.0)
    assert sbdf(4).a == (0.25, -4 / 3, 3.0, -4.0, 25 / 12)
    assert sbdf(4).beta == (-1.0, 4.0, -6.0, 4.0)


def test_sbdf_consistency_rows():
    # zeroth and first order conditions: sum a_i = 0, sum i*a_i = sum beta_i
    for s in range(1, 5):
        sch = sbdf(s)
        assert math.isclose(sum(sch.a), 0.0, abs_tol=1e-14)
        assert math.isclose(
            sum(i * a for i, a in enumerate(sch.a)), sum(sch.beta), rel_tol=1e-14
        )


def test_rk_tableau_shapes():
    r2 = rk("rk222")
    assert r2.q == 2 and len(r2.a_hat) == 3 and len(r2.c_tilde) == 3
    r4 = rk("rk443")
    assert r4.q == 4 and len(r4.a_hat) == 5
    # abscissae agree between tableaus
    for sch in (r2, r4):
        for i in range(sch.q + 1):
            assert math.isclose(sum(sch.a_hat[i]), sch.c_tilde[i], abs_tol=1e-15)
            assert math.isclose(sum(sch.a_tilde[i]), sch.c_tilde[i], abs_tol=1e-15)


def test_rk222_gamma():
    g = (2.0 - math.sqrt(2.0)) / 2.0
    r2 = rk("rk222")
    assert r2.a_tilde[1][1] == pytest.approx(g, rel=1e-15)
    assert r2.a_hat[2][0] == pytest.approx(1.0 - 1.0 / (2.0 * g), rel=1e-14)


def test_by_name():
    assert by_name("SBDF3").s == 3
    assert by_name("rk443").q == 4
    with pytest.raises(ValueError):
        by_name("sbdf5")
    with pytest.raises(ValueError):
        by_name("")


@pytest.mark.parametrize("name", ["sbdf1", "sbdf2", "sbdf3", "sbdf4", "rk222", "rk443"])
def test_declared_order_verified(name):
    sch = by_name(name)
    declared = sch.s if hasattr(sch, "s") else sch.order
    report = verify_order_conditions(sch)
    # one-step error slope must be at least order + 1
    assert report.observed_order > declared + 0.8


def test_sbdf1_scalar_step_closed_form():
    z_im, z_ex = 0.3j, -0.1j
    got = sbdf_scalar_step(sbdf(1), z_im, z_ex, np.array([1.0 + 0j]))
    assert got == pytest.approx((1.0 + z_ex) / (1.0 - z_im), rel=1e-15)


def test_rk_scalar_step_consistency():
    # R(z) = 1 + z + O(z^2)
    for name in ("rk222", "rk443"):
        z = 1e-5j
        got = rk_scalar_step(by_name(name), z, z)
        assert abs(got - (1.0 + 2 * z)) < 1e-9


def test_scalar_step_degenerate():
    with pytest.raises(ZeroDivisionError):
        sbdf_scalar_step(sbdf(1), 1.0 + 0j, 0.0, np.array([1.0 + 0j]))
    r2 = rk("rk222")
    bad = 1.0 / r2.a_tilde[1][1]
    with pytest.raises(ZeroDivisionError):
        rk_scalar_step(r2, bad, 0.0)
