"""Oscillatory power-law integrals and panel quadrature helpers.

The workhorse is power_tail: half-line integrals

    I_s = int_R^inf exp(i b u) u^(-s) du,

evaluated to the current working precision for a batch of orders s at fixed
real frequency b and cutoff R > 0.  Regimes, by z = |b| R:

  * b = 0: closed form R^(1-s)/(s-1).
  * z small: classical E_p series at the lowest integer order plus the stable
    upward recurrence E_(p+1)(w) = (exp(-w) - w E_p(w)) / p.
  * z large: integration-by-parts asymptotic series truncated at its smallest
    term, first-omitted-term remainder bound (optimal error ~ e^-z z^s/G(s)).
  * in between: rotate the contour into the decaying half-plane,
    I_s = i s0 e^(i b R) R^(1-s) int_0^inf e^(-z w) (1 + i s0 w)^(-s) dw
    with s0 = sign(b), and integrate the smooth exponentially decaying
    integrand with Gauss-Legendre panels, sharing nodes across orders.

mpmath.expint computes the same values but is two orders of magnitude slower;
it remains the test oracle.
"""

import math

from mpmath import mp

from .precision import PrecisionError

__all__ = ["gauss_legendre", "power_tail", "exact_fraction"]

_GL_CACHE: dict = {}

SERIES_MAX_Z = 40.0


def gauss_legendre(n: int):
    """Nodes and weights on [-1, 1] at the current precision (cached)."""
    key = (n, mp.prec)
    got = _GL_CACHE.get(key)
    if got is not None:
        return got
    nodes = [mp.mpf(0)] * n
    weights = [mp.mpf(0)] * n
    eps = mp.mpf(2) ** (-mp.prec + 8)
    for i in range(1, n // 2 + 1):
        x = mp.cos(mp.pi * (i - mp.mpf(1) / 4) / (n + mp.mpf(1) / 2))
        dp = mp.mpf(1)
        for _ in range(200):
            p0, p1 = mp.mpf(1), x
            for j in range(2, n + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            dp = n * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < eps:
                break
        nodes[i - 1] = -x
        nodes[n - i] = x
        w = 2 / ((1 - x * x) * dp * dp)
        weights[i - 1] = w
        weights[n - i] = w
    if n % 2:
        x = mp.mpf(0)
        p0, p1 = mp.mpf(1), x
        for j in range(2, n + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        dp = n * (x * p1 - p0) / (x * x - 1)
        nodes[n // 2] = mp.mpf(0)
        weights[n // 2] = 2 / (dp * dp)
    _GL_CACHE[key] = (nodes, weights)
    return nodes, weights


def exact_fraction(x):
    """Exact Fraction of an mpf (dyadic rational)."""
    from fractions import Fraction

    sign, man, exp, _ = mp.mpf(x)._mpf_
    if man == 0:
        return Fraction(0)
    v = Fraction(man) * Fraction(2) ** exp
    return -v if sign else v


def _consecutive_floats(orders):
    """Sorted order values if they form a step-1 ladder, else None."""
    vals = sorted(mp.mpf(s) for s in orders)
    for a, b in zip(vals, vals[1:]):
        if b - a not in (0, 1):
            return None
    return vals


def _e_p_series(p: int, z):
    """E_p(z) for integer p >= 1 by the convergent log series."""
    psi = -mp.euler + mp.fsum(mp.mpf(1) / j for j in range(1, p))
    mz = -z
    lead = mz ** (p - 1) / mp.factorial(p - 1) * (psi - mp.log(z))
    total = mp.mpc(0)
    term = mp.mpc(1)  # (-z)^r / r!
    r = 0
    floor = mp.mpf(10) ** (-(mp.dps + 5))
    while True:
        if r != p - 1:
            total += term / (r - p + 1)
        r += 1
        term *= mz / r
        if r > abs(z) + 10 and abs(term) < floor:
            break
    return lead - total


def _tails_small(beta, R, orders, z):
    """E_p series + upward recurrence; integer orders only (others fall back)."""
    if any(mp.mpf(s) != int(s) for s in orders):
        return {s: R ** (1 - mp.mpf(s)) * mp.expint(mp.mpf(s), mp.mpc(0, -beta) * R) for s in orders}
    p_min = min(int(s) for s in orders)
    p_max = max(int(s) for s in orders)
    guard = int(0.5 * float(z)) + 20
    with mp.workdps(mp.dps + guard):
        w = mp.mpc(0, -beta) * R
        e = {p_min: _e_p_series(p_min, w)}
        emw = mp.exp(-w)
        for p in range(p_min, p_max):
            e[p + 1] = (emw - w * e[p]) / p
        out = {s: R ** (1 - mp.mpf(s)) * e[int(s)] for s in orders}
    return out


def _tails_asymptotic(beta, R, orders, z):
    tol = mp.mpf(10) ** (-(mp.dps + 5))
    phase = mp.exp(mp.mpc(0, beta * R))
    ib = mp.mpc(0, beta * R)
    out = {}
    for s_key in orders:
        s = mp.mpf(s_key)
        pref = -phase * R ** (1 - s) / ib
        total = mp.mpc(0)
        term = mp.mpc(1)
        r = 0
        ok = False
        while r < 8 * mp.dps:
            nxt = term * (s + r) / ib
            total += term
            if abs(nxt) < tol:
                ok = True
                break
            if abs(nxt) > abs(term):
                break  # passed the smallest term without certification
            term = nxt
            r += 1
        if not ok:
            raise PrecisionError(
                f"asymptotic tail not certified at z={float(z):.3g}, s={float(s)}"
            )
        out[s_key] = pref * total
    return out


def _tails_contour(beta, R, orders, z):
    """Rotated-contour quadrature, nodes shared across a step-1 order ladder."""
    sgn = 1 if beta > 0 else -1
    ladder = _consecutive_floats(orders)
    s_top = max(float(s) for s in orders)
    with mp.workdps(mp.dps + 15):
        W = (mp.dps * mp.log(10) + 15) / z
        # uniform panels in decay units: (z + s_max) h per panel kept moderate,
        # so every panel sees the same e^-14-ish variation and GL64 stays spectral
        h = 14 / (z + s_top)
        n_panels = int(mp.ceil(W / h))
        brk = [W * i / n_panels for i in range(n_panels + 1)]
        nodes, weights = gauss_legendre(64)
        if ladder is not None:
            s_lo = ladder[0]
            count = int(ladder[-1] - ladder[0]) + 1
            sums = [mp.mpc(0)] * count
            for lo, hi in zip(brk[:-1], brk[1:]):
                half = (hi - lo) / 2
                mid = (lo + hi) / 2
                for x, wt in zip(nodes, weights):
                    w = mid + half * x
                    damp = wt * half * mp.exp(-z * w)
                    base = mp.mpc(1, sgn * w)
                    inv = 1 / base
                    if s_lo == int(s_lo):
                        val = inv ** int(s_lo)  # binary powering, no log/exp
                    else:
                        val = base ** (-s_lo)
                    for i in range(count):
                        sums[i] += damp * val
                        val *= inv
            table = {float(s_lo + i): sums[i] for i in range(count)}
        else:
            table = {}
            for s_key in orders:
                s = mp.mpf(s_key)
                acc = mp.mpc(0)
                for lo, hi in zip(brk[:-1], brk[1:]):
                    half = (hi - lo) / 2
                    mid = (lo + hi) / 2
                    for x, wt in zip(nodes, weights):
                        w = mid + half * x
                        acc += wt * half * mp.exp(-z * w) * mp.mpc(1, sgn * w) ** (-s)
                table[float(s)] = acc
        phase = mp.exp(mp.mpc(0, beta * R))
        pref = mp.mpc(0, sgn) * phase
        out = {s_key: pref * R ** (1 - mp.mpf(s_key)) * table[float(mp.mpf(s_key))] for s_key in orders}
    return out


def _asym_threshold(s_max: float) -> float:
    """Smallest z at which the asymptotic regime certifies mp.dps digits."""
    need = math.log(10) * (mp.dps + 8)
    z = need + 10
    for _ in range(3):
        z = need + s_max * math.log(max(z, 10.0)) - math.lgamma(max(s_max, 1.0)) + 10
    return max(z, SERIES_MAX_Z + 1)


def power_tail(beta, R, orders) -> dict:
    """int_R^inf exp(i beta u) u^(-s) du for each s in orders, current precision.

    beta real (may be 0), R > 0; every order must exceed 1 when beta == 0.
    """
    beta = mp.mpf(beta)
    R = mp.mpf(R)
    if R <= 0:
        raise ValueError("R must be positive")
    orders = list(orders)
    if not orders:
        return {}
    if beta == 0:
        out = {}
        for s_key in orders:
            s = mp.mpf(s_key)
            if s <= 1:
                raise PrecisionError("divergent tail: beta = 0 with order <= 1")
            out[s_key] = R ** (1 - s) / (s - 1)
        return out
    z = abs(beta) * R
    s_max = max(float(s) for s in orders)
    if z <= SERIES_MAX_Z:
        return _tails_small(beta, R, orders, z)
    if float(z) >= _asym_threshold(s_max):
        return _tails_asymptotic(beta, R, orders, z)
    return _tails_contour(beta, R, orders, z)
