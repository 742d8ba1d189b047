import random
from fractions import Fraction as F

import pytest
from mpmath import mp, mpc, mpf

import mirrorperiods.periods as periods
from helpers import agm
from mirrorperiods.hyperfun import PrecisionError, working_precision
from mirrorperiods.qseries import RationalSeries

DIGITS = 50


# ---------------------------------------------------------------------------
# exact series
# ---------------------------------------------------------------------------


def test_h_series_printed_coefficients():
    h = periods.h_series(4)
    assert [h.coefficient(k) for k in (1, 2, 3)] == [F(1, 2), F(21, 64), F(185, 768)]


def test_h_series_order_one():
    h = periods.h_series(2)
    assert h.coefficient(0) == 0 and h.coefficient(1) == F(1, 2)


def test_h_series_coefficient_from_period_integral():
    """Fit h's lambda^4 coefficient from varpi1 evaluated by quadrature.

    varpi1 = -(1/pi i) * integral_lam^1 dx/sqrt(x(1-x)(x-lam)) gives
    h(lam) = -Q(lam) - varpi0(lam) (log lam - log 16) at 30 sample points;
    a Vandermonde solve on the smallest nine points then recovers the
    leading coefficients.
    """
    with mp.workdps(110):
        n = 30
        a = mp.matrix(n, n)
        b = mp.matrix(n, 1)
        for i in range(n):
            lam = mpf(i + 1) * mpf("0.004")
            q = mp.quad(lambda x: 1 / mp.sqrt(x * (1 - x) * (x - lam)), [lam, 1])
            w0 = periods.legendre_periods(lam, 60).varpi0
            b[i] = -q - w0 * (mp.log(lam) - mp.log(16))
            for k in range(1, n + 1):
                a[i, k - 1] = lam ** k
        sol = mp.lu_solve(a, b)
        h = periods.h_series(6)
        assert abs(sol[0] - mpf(1) / 2) < mpf(10) ** -25
        h4 = h.coefficient(4)
        assert abs(sol[3] - mpf(h4.numerator) / h4.denominator) < mpf(10) ** -20


def test_lambda_q_series_paper_coefficients():
    lam = periods.lambda_q_series(7)
    assert [lam.coefficient(k) for k in range(1, 7)] == \
        [16, -128, 704, -3072, 11488, -38400]
    assert lam.coefficient(0) == 0


def test_lambda_q_series_truncation_stable():
    lo = periods.lambda_q_series(12)
    hi = periods.lambda_q_series(24)
    for k in range(7, 11):
        assert lo.coefficient(k) == hi.coefficient(k)


def test_lambda_q_coefficients_divisible_by_16():
    lam = periods.lambda_q_series(40)
    for k in range(1, 40):
        c = lam.coefficient(k)
        assert c.denominator == 1 and int(c) % 16 == 0


def test_lambda_q_composed_with_q_of_lambda_is_identity():
    n = 24
    lam = periods.lambda_q_series(n)
    q = periods.q_of_lambda_series(n)
    comp = q.compose(lam.normalize())
    assert (comp - RationalSeries.identity(comp.order)).is_provably_zero()
    comp2 = lam.compose(q.normalize())
    assert (comp2 - RationalSeries.identity(comp2.order)).is_provably_zero()


def test_w0_u_series_leading_terms():
    w = periods.w0_u_series(3)
    assert list(w.coeffs) == [1, 24, 2520]


def test_pi0_series_constant_term():
    assert periods.pi0_series(6).coefficient(0) == 1


def test_pi0_of_lambda_q_matches_theta_side():
    n = 20
    lam = periods.lambda_q_series(n)
    lhs = periods.pi0_series(n).compose(lam)
    one = RationalSeries.one(n)
    rhs = (one - lam * F(1, 2)) * periods.theta3_qseries(n) ** 4
    assert (lhs - rhs).is_provably_zero()


def test_bps_series_expansion():
    s = periods.bps_series(5)
    assert s.offset == -1
    assert list(s.coeffs) == [F(1), F(24), F(324), F(3200), F(25650)]


# ---------------------------------------------------------------------------
# numeric periods
# ---------------------------------------------------------------------------


def test_varpi0_agm_oracle():
    lp = periods.legendre_periods(F(1, 2), DIGITS)
    with working_precision(DIGITS):
        oracle = 1 / agm(1, mp.sqrt(mpf("0.5")), DIGITS)
        assert abs(lp.varpi0 - oracle) < mpf(10) ** (-DIGITS + 8)


def test_tau_special_value_inside_disk():
    with working_precision(DIGITS):
        lam = 2 * mp.sqrt(2) - 2
    lp = periods.legendre_periods(lam, DIGITS)
    with working_precision(DIGITS):
        assert abs(lp.tau - mp.mpc(0, 1) / mp.sqrt(2)) < mpf(10) ** -30


def test_legendre_periods_preconditions():
    with pytest.raises(PrecisionError):
        periods.legendre_periods(0, DIGITS)
    with pytest.raises(PrecisionError):
        periods.legendre_periods(F(95, 100), DIGITS)


def test_quad_map_values():
    r = periods.quad_map(0, DIGITS)
    assert r.t == 0
    with working_precision(DIGITS):
        lam = 2 * mp.sqrt(2) - 2
    r = periods.quad_map(lam, DIGITS)
    with working_precision(DIGITS):
        assert abs(r.t - 1) < mpf(10) ** (-DIGITS + 8)
        assert abs(r.psi - 1) < mpf(10) ** (-DIGITS + 8)
    pole = periods.quad_map(2, DIGITS)
    assert pole.is_pole and pole.psi == 0


def test_quad_map_product_relation():
    rng = random.Random(3)
    with working_precision(DIGITS):
        for _ in range(6):
            lam = mpc(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
            if abs(lam) < mpf("0.05"):
                continue
            r = periods.quad_map(lam, DIGITS)
            assert abs(r.t * r.psi ** 4 - 1) < mpf(10) ** (-DIGITS + 10)


def test_lambda_from_t_small_branch():
    with working_precision(DIGITS):
        lam0 = mpf("0.07")
    t = periods.quad_map(lam0, DIGITS).t
    lam = periods.lambda_from_t(t, DIGITS)
    with working_precision(DIGITS):
        assert abs(lam - lam0) < mpf(10) ** (-DIGITS + 8)


def test_dwork_w0_is_square_of_2f1():
    from mirrorperiods.hyperfun import hyp2f1
    dw = periods.dwork_periods(3, DIGITS)
    with working_precision(DIGITS):
        pi0 = hyp2f1(F(1, 8), F(3, 8), F(1), mpf(3) ** -4, DIGITS)
        assert abs(dw.w0 - pi0 ** 2) < mpf(10) ** (-DIGITS + 8)


def test_dwork_tau_equals_legendre_tau_at_psi_5():
    dw = periods.dwork_periods(5, DIGITS)
    lam = periods.lambda_from_t(dw.t, DIGITS)
    lp = periods.legendre_periods(lam, DIGITS)
    with working_precision(DIGITS):
        assert abs(dw.tau - lp.tau) < mpf(10) ** (-DIGITS + 15)


def test_dwork_divergence_region_rejected():
    with pytest.raises(PrecisionError):
        periods.dwork_periods(mpf("0.9"), DIGITS)


def test_pi_triple_relations():
    pt = periods.pi_triple(F(3, 10), DIGITS)
    lp = periods.legendre_periods(F(3, 10), DIGITS)
    with working_precision(DIGITS):
        assert abs(pt.pi1 / pt.pi0 - lp.tau) < mpf(10) ** (-DIGITS + 10)
        assert abs(pt.pi0 * pt.pi2 - pt.pi1 ** 2) < mpf(10) ** (-DIGITS + 10)


def test_pi_product_structure_as_series():
    # (1 - lam/2) varpi0^2 * (1 - lam/2) h^2 == ((1 - lam/2) varpi0 h)^2 etc.,
    # i.e. S0 * S2-parts = S1-parts squared in the log-polynomial ring
    n = 16
    half = RationalSeries([F(1), F(-1, 2)], 0, n)
    w0 = periods.varpi0_series(n)
    h = periods.h_series(n)
    s0 = periods.pi0_series(n)
    assert (s0 * (half * h * h) - (half * w0 * h) ** 2).is_provably_zero()
    assert (s0 * (half * w0 * h) * 2 - 2 * (half * w0 * h) * s0).is_provably_zero()


def test_mirror_map_residual_grid_sample():
    for pt in periods.MIRROR_GRID[:3]:
        res = periods.mirror_map_residual(pt, 40)
        assert res < mpf(10) ** -25


def test_tau_in_upper_half_plane_on_grid():
    for pt in periods.MIRROR_GRID:
        lp = periods.legendre_periods(pt, 40)
        assert lp.tau.imag > 0
        assert lp.varpi0 != 0


# ---------------------------------------------------------------------------
# identity registry
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["QT1", "QT2", "QT3"])
def test_quadratic_transformations_exact(name):
    rep = periods.check_identity(name, 24)
    assert rep.exact and rep.passed and rep.residual == "0"


@pytest.mark.parametrize("name", ["THETA-V", "THETA-24", "DLDTAU", "DELTA-LAMBDA", "BPS"])
def test_theta_registry_exact(name):
    rep = periods.check_identity(name, 18)
    assert rep.exact and rep.passed and rep.residual == "0"


def test_delta_theta_numeric():
    rep = periods.check_identity("DELTA-THETA", None, digits=40)
    assert rep.passed and not rep.exact


def test_w_pi_numeric_grid():
    rep = periods.check_identity("W-PI", None, digits=40)
    assert rep.passed


def test_w2_ratio_informational():
    rep = periods.check_identity("W2-RATIO", None, digits=40)
    assert rep.informational and rep.passed
    assert "w2_over_pi2" in rep.info


def test_selftest_identity_fails():
    rep = periods.check_identity("SELFTEST-FAIL", 10)
    assert not rep.passed


def test_unknown_identity():
    with pytest.raises(KeyError):
        periods.check_identity("NO-SUCH-ID")


def test_identity_report_roundtrip():
    rep = periods.check_identity("QT1", 10)
    d = rep.to_dict()
    assert d["identity"] == "QT1" and d["exact"] is True and d["passed"] is True
