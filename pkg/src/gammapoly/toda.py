"""Exact expansion coefficients of log D_k(t) and the Gaussian centre law.

Writing D_k(t) = D_k(0) exp( sum_{m>=1} c_m(k) t^m / m ), the Toda identity
D_(k-1) D_(k+1) / D_k^2 = (log D_k)'' turns into a closed recursion

    c_M(k) = 1/((M-1)(M-2)) sum_{m=0}^{M-3} (m+1) c_(m+2)(k)
             ( c_(M-m-2)(k-1) + c_(M-m-2)(k+1) - 2 c_(M-m-2)(k) ),   M > 2,

seeded by c_1(k) = -k/2 and c_2(k) = k^2/(4(4k^2-1)), with c_m(0) = 0 from
the empty-determinant convention D_0 = 1.  All values are exact rationals.

Keeping only the quadratic term of the series in the Fourier representation
of gamma_k gives a Gaussian around c = k/2 with rate b_k = 8(1 - 1/(4k^2));
the quartic term supplies the leading polynomial correction.
"""

from fractions import Fraction

from mpmath import mp

from .exactpoly import barnes_g_int
from .precision import PrecisionContext, PrecisionError

__all__ = ["CoeffTable", "c_coeff", "dk_series_eval", "gaussian_gamma"]


class CoeffTable:
    """Memoized c_m(k) values; grows on demand, reads are pure."""

    def __init__(self):
        self._values: dict = {}

    def get(self, m: int, k: int) -> Fraction:
        if m < 1 or k < 0:
            raise ValueError("need m >= 1 and k >= 0")
        got = self._values.get((m, k))
        if got is not None:
            return got
        if k == 0:
            v = Fraction(0)
        elif m == 1:
            v = Fraction(-k, 2)
        elif m == 2:
            v = Fraction(k * k, 4 * (4 * k * k - 1))
        else:
            total = Fraction(0)
            for mm in range(0, m - 2):
                inner = m - mm - 2  # >= 1, so c_0 never occurs
                lap = (
                    self.get(inner, k - 1)
                    + self.get(inner, k + 1)
                    - 2 * self.get(inner, k)
                )
                if lap:
                    total += (mm + 1) * self.get(mm + 2, k) * lap
            v = total / ((m - 1) * (m - 2))
        self._values[(m, k)] = v
        return v


_TABLE = CoeffTable()


def c_coeff(m: int, k: int) -> Fraction:
    """Exact c_m(k) from the recursion (shared memo table)."""
    return _TABLE.get(m, k)


def _ratio_bound(k: int, M: int) -> Fraction:
    """Empirical two-step growth bound max |c_(m+2)(k) / c_m(k)| near index M.

    Odd coefficients vanish from m = 3 on, so consecutive nonzero terms are
    two indices apart and the tail is compared against a geometric series in
    |t|^2 times this ratio.
    """
    best = Fraction(0)
    for m in range(max(2, M - 8), M + 2):
        a, b = c_coeff(m, k), c_coeff(m + 2, k)
        if a and b:
            r = abs(Fraction(b) / Fraction(a))
            if r > best:
                best = r
    return best


def dk_series_eval(k: int, t, M: int, ctx: PrecisionContext, with_bound: bool = False):
    """D_k(0) exp( sum_{m<=M} c_m(k) t^m / m ) with a reported truncation bound.

    The tail estimate uses the first two omitted terms and an empirical
    two-step ratio bound rho2 ~ |c_(m+2)/c_m|: it must satisfy |t|^2 rho2 < 1,
    and the bound is raised as a PrecisionError when it exceeds the target
    accuracy (unless the caller asked for the bound itself).
    """
    if k < 0 or M < 3:
        raise ValueError("need k >= 0 and M >= 3")
    with ctx.workdps(15):
        t = mp.mpf(t)
        d0f = barnes_g_int(k + 1) ** 4 / barnes_g_int(2 * k + 1)
        d0 = mp.mpf(d0f.numerator) / d0f.denominator
        s = mp.mpf(0)
        for m in range(1, M + 1):
            cm = c_coeff(m, k)
            if cm:
                s += mp.mpf(cm.numerator) / cm.denominator * t**m / m
        value = d0 * mp.exp(s)

        rho2 = _ratio_bound(k, M)
        rho2f = mp.mpf(rho2.numerator) / rho2.denominator
        geom = abs(t) ** 2 * rho2f
        if geom >= 1:
            raise PrecisionError(
                f"|t|={abs(t)} outside the certified radius for M={M} (ratio bound {rho2f})"
            )
        head = mp.mpf(0)
        for m in (M + 1, M + 2):
            cm = c_coeff(m, k)
            if cm:
                head = max(head, abs(mp.mpf(cm.numerator) / cm.denominator) * abs(t) ** m / m)
        log_tail = head / (1 - geom)
        # relative bound on D via |exp(x) - 1| <= 2|x| for small x
        bound = 2 * log_tail * abs(value)
    if with_bound:
        return value, bound
    if bound > ctx.tol() * abs(value):
        raise PrecisionError(
            f"series tail bound {mp.nstr(bound, 5)} exceeds target at digits={ctx.digits}"
        )
    return value


def _b_rate(k: int):
    return 8 * (1 - mp.mpf(1) / (4 * k * k))


def gaussian_gamma(k: int, c, ctx: PrecisionContext):
    """Gaussian centre approximation of gamma_k near c = k/2.

    Leading factor G(k+1)^2/G(2k+1) sqrt(b_k/pi) exp(-b_k (c-k/2)^2) times the
    first-order polynomial correction; the heuristic validity range is
    |c - k/2| <~ sqrt(k).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    with ctx.workdps(15):
        c = mp.mpf(c)
        w = c - mp.mpf(k) / 2
        b = _b_rate(k)
        pref_f = barnes_g_int(k + 1) ** 2 / barnes_g_int(2 * k + 1)
        pref = mp.mpf(pref_f.numerator) / pref_f.denominator
        base = pref * mp.sqrt(b / mp.pi) * mp.exp(-b * w * w)
        k2, k4, k6 = mp.mpf(k * k), mp.mpf(k**4), mp.mpf(k**6)
        corr = (
            (64 * w**4 - 24 * w**2 + mp.mpf(3) / 4) / k2
            - 2 * w**2 * (16 * w**2 - 3) / k4
            + 4 * w**4 / k6
        ) / (4 * k * k - 9)
        out = base * (1 + corr)
    return out


def next_order_envelope(k: int, ctx: PrecisionContext):
    """Magnitude of the first omitted correction term at c = k/2.

    Each series term c_m t^m/m acts on the Gaussian as (c_m/m) d^m/dw^m.  The
    block after the quartic leading correction is
    (c_6/6) D^6 + (c_8/8 + c_4^2/32) D^8, and at w = 0 the Gaussian derivative
    values are D^6 -> -120 b^3 and D^8 -> 1680 b^4; the envelope adds the
    magnitudes.
    """
    with ctx.workdps(15):
        b = _b_rate(k)

        def f(m):
            q = c_coeff(m, k)
            return mp.mpf(q.numerator) / q.denominator

        out = (
            abs(f(6) / 6 * 120 * b**3)
            + abs(f(4) ** 2 / 32 * 1680 * b**4)
            + abs(f(8) / 8 * 1680 * b**4)
        )
    return out
