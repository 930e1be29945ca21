"""Log-series coefficient recursion, series evaluation, Gaussian centre law."""

from fractions import Fraction

import pytest
from mpmath import mp

from gammapoly.exactpoly import eval_pp, gamma_exact
from gammapoly.hankel import dk_eval
from gammapoly.precision import PrecisionContext, PrecisionError
from gammapoly.toda import (
    CoeffTable,
    c_coeff,
    dk_series_eval,
    gaussian_gamma,
    next_order_envelope,
)

CTX = PrecisionContext(50)


@pytest.fixture(autouse=True)
def _ambient_precision():
    with CTX.workdps(20):
        yield


def test_seed_values():
    assert c_coeff(1, 4) == Fraction(-4, 2)
    assert c_coeff(2, 2) == Fraction(1, 15)
    for k in range(13):
        assert c_coeff(1, k) == Fraction(-k, 2)
        assert c_coeff(2, k) == Fraction(k * k, 4 * (4 * k * k - 1)) if k else True


def test_k_zero_convention():
    for m in range(1, 10):
        assert c_coeff(m, 0) == 0


def test_c3_vanishes():
    for k in range(13):
        assert c_coeff(3, k) == 0


def test_c4_closed_form():
    for k in range(1, 13):
        expect = Fraction(k * k, 16 * (4 * k * k - 1) ** 2 * (4 * k * k - 9))
        assert c_coeff(4, k) == expect


def test_higher_odd_coefficients_vanish():
    for k in range(1, 8):
        for m in (5, 7, 9, 11):
            assert c_coeff(m, k) == 0


def test_table_is_memoized_and_consistent():
    t = CoeffTable()
    a = t.get(12, 3)
    assert t.get(12, 3) == a == c_coeff(12, 3)


def test_series_matches_determinant_small_t():
    for k, t, M, need in [(2, mp.mpf(1) / 4, 20, 30), (4, mp.mpf(1) / 2, 30, 25), (3, mp.mpf(-1) / 4, 25, 30)]:
        v, bound = dk_series_eval(k, t, M, CTX, with_bound=True)
        with CTX.workdps():
            ref = dk_eval(k, t, CTX).real
            rel = abs(v - ref) / abs(ref)
        assert rel < mp.mpf(10) ** (-need), (k, t, rel)
        assert rel <= bound / abs(ref) + mp.mpf(10) ** (-CTX.working_dps + 5)


def test_series_value_at_zero():
    v = dk_series_eval(2, 0, 10, CTX)
    assert abs(v - mp.mpf(1) / 12) < CTX.tol()


def test_series_bound_is_honest():
    v, bound = dk_series_eval(3, mp.mpf(2) / 5, 16, CTX, with_bound=True)
    with CTX.workdps():
        ref = dk_eval(3, mp.mpf(2) / 5, CTX).real
        assert abs(v - ref) <= bound + mp.mpf(10) ** (-CTX.working_dps + 5)


def test_series_rejects_outside_radius():
    with pytest.raises(PrecisionError):
        dk_series_eval(2, 50, 10, CTX)


def test_log_derivative_taylor_cross_check():
    # first 8 Taylor coefficients of log(D_k(t)/D_k(0)) recovered by a
    # symmetric finite-difference stencil at high precision match c_m/m
    hctx = PrecisionContext(220, 30)
    N = 8  # stencil half-width: nodes j*h, j = -N..N
    h = mp.mpf(10) ** -4
    for k in (2, 3, 5):
        with hctx.workdps(30):
            d0 = dk_eval(k, 0, hctx).real
            vals = mp.matrix(
                [mp.log(dk_eval(k, j * h, hctx).real / d0) for j in range(-N, N + 1)]
            )
            # solve for Taylor coefficients in the scaled variable s = t/h
            V = mp.matrix(2 * N + 1, 2 * N + 1)
            for row, j in enumerate(range(-N, N + 1)):
                for r in range(2 * N + 1):
                    V[row, r] = mp.mpf(j) ** r
            a = mp.lu_solve(V, vals)
            for m in range(1, 9):
                cm = c_coeff(m, k)
                expect = mp.mpf(cm.numerator) / cm.denominator / m
                got = a[m] / h**m
                assert abs(got - expect) < mp.mpf(10) ** (-30), (k, m, got, expect)


def test_gaussian_leading_term_k2():
    # k=2, c=1: leading factor (1/12) sqrt(b_2/pi), b_2 = 15/2
    with CTX.workdps():
        b2 = mp.mpf(15) / 2
        lead = mp.sqrt(b2 / mp.pi) / 12
        got = gaussian_gamma(2, 1, CTX)
        corr = 1 + (mp.mpf(3) / 4) / ((4 * 4 - 9) * 4)
        assert abs(got - lead * corr) < CTX.tol(5)


def test_gaussian_correction_at_centre():
    # the correction factor at c = k/2 is 1 + (3/4)/((4k^2-9) k^2)
    for k in (2, 3, 5):
        with CTX.workdps():
            base = gaussian_gamma(k, mp.mpf(k) / 2, CTX)
            b = 8 * (1 - mp.mpf(1) / (4 * k * k))
            from gammapoly.exactpoly import barnes_g_int

            pref = barnes_g_int(k + 1) ** 2 / barnes_g_int(2 * k + 1)
            lead = mp.mpf(pref.numerator) / pref.denominator * mp.sqrt(b / mp.pi)
            corr = 1 + (mp.mpf(3) / 4) / ((4 * k * k - 9) * k * k)
            assert abs(base - lead * corr) < CTX.tol(5) * lead


@pytest.fixture(scope="module")
def centre_errors():
    errs = {}
    for k in (3, 4, 5, 6):
        g = gamma_exact(k)
        exact = eval_pp(g.pp, Fraction(k, 2))
        with CTX.workdps():
            exf = mp.mpf(exact.numerator) / exact.denominator
            errs[k] = abs(gaussian_gamma(k, mp.mpf(k) / 2, CTX) / exf - 1)
    return errs


def test_gaussian_vs_exact_within_envelope(centre_errors):
    for k in (4, 5, 6):
        env = next_order_envelope(k, CTX)
        assert centre_errors[k] <= 5 * env, (k, centre_errors[k], env)


def test_gaussian_error_monotone_in_k(centre_errors):
    assert centre_errors[3] > centre_errors[4] > centre_errors[5] > centre_errors[6]


def test_gaussian_two_percent_at_k6_centre():
    g = gamma_exact(6)
    exact = eval_pp(g.pp, 3)
    with CTX.workdps():
        exf = mp.mpf(exact.numerator) / exact.denominator
        rel = abs(gaussian_gamma(6, 3, CTX) / exf - 1)
    assert rel < mp.mpf("0.02")
