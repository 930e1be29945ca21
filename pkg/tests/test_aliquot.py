"""Semicircle-integral tests: Bessel evaluation, lattice/quadrature/asymptotic
routes for I(d), continued fractions, GL2 local factors."""

from fractions import Fraction

import pytest
from mpmath import mp

from gammapoly.aliquot import (
    ASYMPTOTIC_INV_D,
    BesselTermBound,
    ConvergentList,
    bessel_j1,
    c_aliquot_truncated,
    continued_fraction,
    gl2_local_factor,
    gl2_local_factor_naive,
    gl2_order,
    i_d_asymptotic,
    i_d_poisson,
    i_d_quadrature,
    i_d_riemann,
)
from gammapoly.precision import PrecisionContext, PrecisionError

CTX = PrecisionContext(50)

I3_REFERENCE = (
    "1.7053570421915038354985956872898996791331386909"
    "7890590667136169819331192007797559594679011"
)
CONV85_A = 14703927951211792459205597491632973549428444428
CONV85_B = 8622199098152613288048825699460716423721576467


@pytest.fixture(autouse=True)
def _ambient_precision():
    with CTX.workdps(20):
        yield


def tol(drop=10):
    return mp.mpf(10) ** (-(CTX.digits - drop))


# --- J_1 --------------------------------------------------------------------


def test_j1_zero():
    assert bessel_j1(0, CTX) == 0


def test_j1_against_mpmath():
    for y in (mp.mpf(1) / 3, mp.mpf(5), mp.mpf(42), mp.mpf(180)):
        assert abs(bessel_j1(y, CTX) - mp.besselj(1, y)) < tol()


def test_j1_small_limit():
    # J_1(2 pi y)/(2y) -> pi/2 as y -> 0
    y = mp.mpf(10) ** -8
    assert abs(bessel_j1(2 * mp.pi * y, CTX) / (2 * y) - mp.pi / 2) < mp.mpf(10) ** -14


def test_j1_semicircle_transform_identity():
    # int_-1^1 sqrt(1-t^2) e^(2 pi i y t) dt = J_1(2 pi y)/(2 y), by quadrature
    for y in (mp.mpf(1) / 3, mp.mpf(1), mp.mpf(2)):
        with CTX.workdps(10):
            lhs = mp.quad(
                lambda t: mp.sqrt(1 - t * t) * mp.cos(2 * mp.pi * y * t), [-1, 0, 1]
            )
            rhs = bessel_j1(2 * mp.pi * y, CTX) / (2 * y)
        assert abs(lhs - rhs) < tol()


def test_j1_cosine_asymptotic_check():
    # the large-argument cosine form holds to O(y^(-3/2)); not an evaluation path
    for y in (mp.mpf(50), mp.mpf(300)):
        lead = mp.sqrt(2 / (mp.pi * y)) * mp.cos(y - 3 * mp.pi / 4)
        assert abs(bessel_j1(y, CTX) - lead) < 2 * y ** mp.mpf("-1.5")


def test_term_bound_monotone():
    for d in (2, 3, 5):
        bounds = [BesselTermBound(n, d).bound() for n in range(1, 30)]
        assert all(a > b for a, b in zip(bounds, bounds[1:]))


# --- I(d) ---------------------------------------------------------------------


def test_i1_is_one():
    ctx = PrecisionContext(40)
    assert abs(i_d_poisson(1, ctx) - 1) < mp.mpf(10) ** -40


def test_i2_is_four_thirds():
    ctx = PrecisionContext(40)
    with ctx.workdps():
        assert abs(i_d_poisson(2, ctx) - mp.mpf(4) / 3) < mp.mpf(10) ** -40


def test_i3_matches_reference_digits():
    ctx = PrecisionContext(100)
    v = i_d_poisson(3, ctx)
    assert mp.nstr(v, 91, strip_zeros=False)[:91] == I3_REFERENCE


def test_poisson_vs_quadrature():
    for d in (1, 2, 3, 4, 6, 8):
        p = i_d_poisson(d, CTX)
        q = i_d_quadrature(d, CTX)
        with CTX.workdps():
            assert abs(p - q) <= mp.mpf(10) ** (-(CTX.digits - 8)) * max(1, abs(p)), d


def test_poisson_spacing_exactness():
    # spacings 1/d and 1/(2d) give the same value: no aliasing remainder
    for d in (2, 3):
        a = i_d_poisson(d, CTX)
        b = i_d_riemann(d, 2, CTX)
        with CTX.workdps():
            assert abs(a - b) <= mp.mpf(10) ** (-(CTX.digits - 8))


def test_asymptotic_leading_term():
    d = 7
    expect = (mp.pi / 2) ** (d - mp.mpf(1) / 2) / mp.sqrt(d)
    assert abs(i_d_asymptotic(d, 1) - expect) < tol()


def test_asymptotic_agreement_large_d():
    for d in (20, 50):
        a = i_d_asymptotic(d, 5)
        p = i_d_poisson(d, CTX)
        with CTX.workdps():
            rel = abs(a / p - 1)
            assert rel <= 10 * mp.mpf(d) ** -5, (d, rel)


def test_asymptotic_term_improvement():
    d = 20
    p = i_d_poisson(d, CTX)
    with CTX.workdps():
        r1 = abs(i_d_asymptotic(d, 1) / p - 1)
        r2 = abs(i_d_asymptotic(d, 2) / p - 1)
        # adding the 1/(8d) term shrinks the error roughly by that factor
        assert r2 < r1 / (2 * d)


def test_asymptotic_coefficients_derived_independently():
    # re-derive the 1/d series by Gaussian moments of the log-expansion
    # of (2/z) J_1(z); everything exact in Fractions with d symbolic
    M = 8  # orders of x = (pi y)^2 kept; the 1/d^r term needs n up to 2r

    # phi(y) = sum_m (-1)^m (pi y)^(2m) / (m! (m+1)!), log phi = sum L_m x^m
    phi = [Fraction((-1) ** m, _fact(m) * _fact(m + 1)) for m in range(M + 2)]
    L = _log_series(phi)  # L[0] = 0, L[1] = -1/2, ...

    # E = exp(A) with A = d sum_(m>=2) L_m x^m, coefficients in Q[d]
    # (dicts degree->Fraction); ODE recurrence n E_n = sum m a_m E_(n-m)
    a = [dict() for _ in range(M + 2)]
    for m in range(2, M + 2):
        if L[m]:
            a[m] = {1: L[m]}
    work = [dict() for _ in range(M + 2)]
    work[0][0] = Fraction(1)
    for n in range(1, M + 2):
        acc: dict = {}
        for m in range(2, n + 1):
            if not a[m]:
                continue
            for prod_deg, prod_co in _poly_mul_d(a[m], work[n - m]).items():
                acc[prod_deg] = acc.get(prod_deg, Fraction(0)) + m * prod_co
        work[n] = {deg: co / n for deg, co in acc.items() if co}

    # I = (pi/2)^(d-1/2) d^(-1/2) sum_j E_j(d) (2j-1)!! d^(-j); collect 1/d powers
    inv_d: dict = {}
    for j in range(M + 1):
        dfact = 1
        for t in range(1, 2 * j, 2):
            dfact *= t
        for deg, co in work[j].items():
            key = j - deg  # power of 1/d
            inv_d[key] = inv_d.get(key, Fraction(0)) + co * dfact
    # inv_d power r collects exactly the x-degrees n <= 2r, all present for r <= 4
    for r, expect in enumerate(ASYMPTOTIC_INV_D):
        assert inv_d.get(r, Fraction(0)) == expect, r


def _fact(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def _log_series(c):
    # log of a power series with c[0] = 1, exact
    n = len(c)
    out = [Fraction(0)] * n
    # out' = c'/c -> out_m via recurrence m c_0 out_m = m c_m - sum_{i<m} i out_i c_(m-i)
    for m in range(1, n):
        acc = Fraction(m) * c[m]
        for i in range(1, m):
            acc -= Fraction(i) * out[i] * c[m - i]
        out[m] = acc / m
    return out


def _poly_mul_d(a, b):
    out: dict = {}
    for da, ca in a.items():
        for db, cb in b.items():
            out[da + db] = out.get(da + db, Fraction(0)) + ca * cb
    return out


# --- continued fractions ---------------------------------------------------------


def test_cf_of_four_thirds():
    with CTX.workdps():
        x = mp.mpf(4) / 3
        cl = continued_fraction(x, CTX)
    assert list(cl.partial_quotients[:2]) == [1, 3]
    assert cl.fraction(1) == Fraction(4, 3)


def test_cf_alternation_and_monotone_denominators():
    ctx = PrecisionContext(60)
    with ctx.workdps():
        for x in (mp.pi, mp.sqrt(2), mp.e / 3):
            cl = continued_fraction(x, ctx)
            bs = [b for _, b in cl.convergents[: cl.reliable_count]]
            assert all(b1 <= b2 for b1, b2 in zip(bs, bs[1:]))
            signs = [
                mp.sign(mp.mpf(a) / b - x)
                for a, b in cl.convergents[1 : cl.reliable_count]
            ]
            assert all(s1 * s2 <= 0 for s1, s2 in zip(signs, signs[1:]))


def test_cf_reliability_cutoff():
    ctx = PrecisionContext(30)
    with ctx.workdps():
        cl = continued_fraction(mp.pi, ctx)
    for i in range(cl.reliable_count):
        assert cl.convergents[i][1] ** 2 <= 10**30
    with pytest.raises(PrecisionError):
        cl.denominator_bound(cl.reliable_count)


@pytest.fixture(scope="module")
def i3_hi():
    return i_d_poisson(3, PrecisionContext(110))


def test_reference_convergent_is_a_finite_precision_artifact(i3_hi):
    # the reference fraction is exactly the 85th convergent of I(3) truncated
    # to 90 significant digits ...
    with mp.workdps(120):
        s = mp.nstr(i3_hi, 120, strip_zeros=False)
    decimals = s.replace(".", "")[:90]
    frac = Fraction(int(decimals), 10**89)
    a, b = frac.numerator, frac.denominator
    A1, A0, B1, B0 = 1, 0, 0, 1
    found = None
    i = 0
    while b:
        q, r = divmod(a, b)
        A1, A0 = q * A1 + A0, A1
        B1, B0 = q * B1 + B0, B1
        if A1 == CONV85_A and B1 == CONV85_B:
            found = i
        a, b = b, r
        i += 1
    assert found == 85
    # ... but it is not a convergent of the true I(3): it misses by more than
    # 1/B^2, which no convergent can
    with mp.workdps(120):
        gap = abs(i3_hi - mp.mpf(CONV85_A) / CONV85_B)
        assert gap > 1 / mp.mpf(CONV85_B) ** 2


def test_i3_denominator_bound_certified(i3_hi):
    # a certified convergent with B > 1e45 shows any rational I(3) needs a
    # denominator beyond 1e45
    cl = continued_fraction(i3_hi, PrecisionContext(95, 35))
    assert cl.reliable_count > 85
    assert cl.convergents[85][1] > 10**45
    n = max(i for i in range(cl.reliable_count) if cl.convergents[i][1] > 10**45)
    assert cl.denominator_bound(n) > 10**45


# --- GL2 local factors -------------------------------------------------------------


def test_gl2_order_small():
    assert gl2_order(2) == 6
    assert gl2_order(3) == 48
    assert gl2_order(5) == 480


def test_gl2_factor_ell2_d1():
    # over F_2 the condition forces tr = 1; exactly the two order-3 elements
    assert gl2_local_factor(2, 1) == Fraction(2 * 2, 6)


def test_gl2_factor_matches_naive():
    for ell, d in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)]:
        assert gl2_local_factor(ell, d) == gl2_local_factor_naive(ell, d)


def test_gl2_guard():
    with pytest.raises(ValueError):
        gl2_local_factor(7, 4)
    with pytest.raises(ValueError):
        gl2_local_factor(4, 1)


def test_gl2_factors_positive():
    for ell in (2, 3, 5):
        for d in (1, 2, 3):
            f = gl2_local_factor(ell, d)
            assert f > 0


def test_c_aliquot_report():
    rep = c_aliquot_truncated(1, 1, CTX)  # no primes <= 1: empty product
    with CTX.workdps():
        assert abs(rep["value"] - 2 / mp.pi) < tol()
    assert rep["local_factors"] == {}
    rep2 = c_aliquot_truncated(2, 3, CTX)
    assert set(rep2["local_factors"]) == {2, 3}
    rep3 = c_aliquot_truncated(3, 3, CTX)
    assert rep3["value"] > 0
