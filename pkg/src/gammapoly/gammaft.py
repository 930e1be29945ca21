"""Numeric Fourier pipeline for gamma_k.

The sinc kernel h(u) = sin(pi u)/(pi u) has moment integrals
T_n(u) = int_{-1/2}^{1/2} x^n e^(-2 pi i u x) dx, and the real, even function

    I_k(u) = det_{k x k}( T_(i+j-2)(u) ) = det( h^(i+j-2)(u) ) / (2 pi i)^(k(k-1))

is the k-point ensemble average whose Fourier transform is gamma_k:

    gamma_k(c) = G(1+k)^(-2) int_R e^(2 pi i u (c - k/2)) I_k(u) du.

Each T_n has an exact finite closed form (repeated integration by parts), so
I_k(u) = sum q_(m,p) e^(i pi m u) (2 pi i u)^(-p) with rational q: the integral
is evaluated as Gauss-Legendre quadrature on [0, U] plus the exact tail,
term-by-term oscillatory power-law integrals on [U, inf).  Evaluating gamma at
k^2 rational nodes per unit interval and interpolating recovers the integer
coefficient tables of the exact engine.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp

from .exactpoly import Polynomial, barnes_g_int
from .oscint import exact_fraction, gauss_legendre, power_tail
from .precision import PrecisionContext, PrecisionError

__all__ = [
    "QuadratureConfig",
    "NuA",
    "h_deriv",
    "ik_eval",
    "sinc_det_expansion",
    "ik_asymptotic_check",
    "gamma_numeric",
    "interpolate_piece",
]

MAX_IK_SIZE = 8


@dataclass(frozen=True)
class QuadratureConfig:
    truncation: float = 16.0
    panels_per_period: int = 2
    nodes_per_panel: int = 32
    ctx: PrecisionContext = field(default_factory=PrecisionContext)

    def __post_init__(self):
        if self.truncation <= 0 or self.panels_per_period < 1 or self.nodes_per_panel < 2:
            raise ValueError("quadrature parameters must be positive")


def nu_exponent(c: int, k: int) -> int:
    return c * c + (k - c) * (k - c)


@dataclass(frozen=True)
class NuA:
    """Decay data of one exponential component of I_k: e^(i pi u (k-2c)) a / u^nu."""

    c: int
    k: int

    def __post_init__(self):
        if not 0 <= self.c <= self.k:
            raise ValueError("need 0 <= c <= k")

    @property
    def nu(self) -> int:
        return nu_exponent(self.c, self.k)

    def amplitude(self):
        """a(c,k) = (-1)^c (2 pi i)^(-nu) G(c+1)^2 G(k-c+1)^2 at current precision."""
        g = barnes_g_int(self.c + 1) ** 2 * barnes_g_int(self.k - self.c + 1) ** 2
        mag = mp.mpf(g.numerator) / g.denominator * (2 * mp.pi) ** (-self.nu)
        unit = mp.mpc(1, 0) * (-mp.mpc(0, 1)) ** (self.nu % 4)  # i^(-nu)
        return (-1) ** self.c * mag * unit


def min_nu(k: int) -> int:
    return (k * k + 1) // 2


# --- sinc moments and derivatives ---------------------------------------------


def _h_series(n: int, u):
    """h^(n)(u) = sum_r (-1)^r pi^(2r) u^(2r-n) / ((2r+1)(2r-n)!), entire in u."""
    total = mp.mpf(0)
    r0 = (n + 1) // 2
    r = r0
    floor = mp.mpf(10) ** (-(mp.dps + 5))
    while True:
        m = 2 * r - n
        term = (-1) ** r * mp.pi ** (2 * r) * u**m / ((2 * r + 1) * mp.factorial(m))
        total += term
        r += 1
        if r > r0 + 4 and abs(term) < floor * max(1, abs(total)):
            break
    return total


def _sinc_moments(n_max: int, u):
    """T_0..T_n_max at real u with |u| > 1/2, by the boundary-term recurrence."""
    guard = 10
    if n_max > 2 * mp.pi * abs(u):
        guard += int(n_max * math.log10(float(n_max / (2 * mp.pi * abs(u)))) + 10)
    with mp.workdps(mp.dps + guard):
        u = mp.mpf(u)
        twopiiu = mp.mpc(0, 2 * mp.pi * u)
        ep = mp.exp(mp.mpc(0, mp.pi * u))   # e^(i pi u)
        em = 1 / ep
        out = [mp.mpc(0)] * (n_max + 1)
        out[0] = (ep - em) / twopiiu
        half = mp.mpf(1) / 2
        for n in range(1, n_max + 1):
            boundary = (half**n * em - (-half) ** n * ep) / (-twopiiu)
            out[n] = boundary + n * out[n - 1] / twopiiu
    return out


def h_deriv(n: int, u, ctx: PrecisionContext):
    """n-th derivative of sin(pi u)/(pi u); real for real u, parity (-1)^n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    with ctx.workdps(15):
        u = mp.mpf(u)
        if abs(u) <= 1:
            val = mp.mpc(_h_series(n, u))
        else:
            t = _sinc_moments(n, u)[n]
            val = (mp.mpc(0, -2 * mp.pi)) ** n * t
            if abs(val.imag) > mp.mpf(10) ** (-(ctx.digits - 10)) * max(1, abs(val)):
                raise PrecisionError(f"h_deriv({n}, {u}) lost realness")
        out = mp.mpc(val.real, 0)
    return out


# --- I_k ------------------------------------------------------------------------


def _det_general(entries):
    k = len(entries)
    full = (1 << k) - 1
    memo = {0: mp.mpc(1)}

    def rec(mask: int, row: int):
        got = memo.get(mask)
        if got is not None:
            return got
        total = mp.mpc(0)
        sign = 1
        for col in range(k):
            bit = 1 << col
            if mask & bit:
                e = entries[row][col]
                if e:
                    total += sign * e * rec(mask ^ bit, row + 1)
                sign = -sign
        memo[mask] = total
        return total

    return rec(full, 0)


def _ik_boost(k: int) -> int:
    return int(0.8 * k * k) + 15


def ik_eval(k: int, u, ctx: PrecisionContext):
    """I_k(u), real; the imaginary part of the determinant is asserted small."""
    if not 1 <= k <= MAX_IK_SIZE:
        raise ValueError(f"k must be in 1..{MAX_IK_SIZE}")
    with ctx.workdps(_ik_boost(k)):
        u = mp.mpf(u)
        if abs(u) <= 1:
            hs = [_h_series(n, u) for n in range(2 * k - 1)]
            scale = mp.mpc(0, -2 * mp.pi)
            ts = [mp.mpc(h) / scale**n for n, h in enumerate(hs)]
        else:
            ts = _sinc_moments(2 * k - 2, u)
        det = _det_general([[ts[i + j] for j in range(k)] for i in range(k)])
        if abs(det.imag) > mp.mpf(10) ** (-(ctx.digits - 10)) * max(1, abs(det)):
            raise PrecisionError(f"I_{k}({u}): imaginary part not negligible")
        out = det.real
    return out


def sinc_det_expansion(k: int) -> dict:
    """Exact I_k(u) = sum q_(m,p) e^(i pi m u) (2 pi i u)^(-p), q rational.

    Keys are (m, p); built once per k from the finite closed form
    T_n = sum_r (n)_r 2^(r-n) [(-1)^(n+r) e^(i pi u) - e^(-i pi u)] (2 pi i u)^(-r-1)
    by a column-subset determinant expansion over the symbol ring.
    """
    if not 1 <= k <= MAX_IK_SIZE:
        raise ValueError(f"k must be in 1..{MAX_IK_SIZE}")
    got = _EXPANSION_CACHE.get(k)
    if got is not None:
        return got

    entries = []
    for n in range(2 * k - 1):
        poly: dict = {}
        falling = 1
        for r in range(n + 1):
            base = Fraction(falling, 2 ** (n - r))
            poly[(1, r + 1)] = Fraction((-1) ** (n + r)) * base
            poly[(-1, r + 1)] = poly.get((-1, r + 1), Fraction(0)) - base
            falling *= n - r
        entries.append(poly)

    def pmul(a: dict, b: dict) -> dict:
        out: dict = {}
        for (m1, p1), q1 in a.items():
            if not q1:
                continue
            for (m2, p2), q2 in b.items():
                key = (m1 + m2, p1 + p2)
                out[key] = out.get(key, Fraction(0)) + q1 * q2
        return out

    memo = {0: {(0, 0): Fraction(1)}}

    def rec(mask: int, row: int) -> dict:
        got = memo.get(mask)
        if got is not None:
            return got
        total: dict = {}
        sign = 1
        for col in range(k):
            bit = 1 << col
            if mask & bit:
                prod = pmul(entries[row + col], rec(mask ^ bit, row + 1))
                for key, q in prod.items():
                    total[key] = total.get(key, Fraction(0)) + sign * q
                sign = -sign
        memo[mask] = total
        return total

    det = rec((1 << k) - 1, 0)
    out = {key: q for key, q in det.items() if q}
    _EXPANSION_CACHE[k] = out
    return out


_EXPANSION_CACHE: dict = {}


def ik_asymptotic_check(k: int, u, ctx: PrecisionContext):
    """|I_k(u) - leading oscillatory sum| * u^(min nu + 1); bounded as u grows."""
    if mp.mpf(u) < 5:
        raise ValueError("asymptotic check needs u >= 5")
    with ctx.workdps(_ik_boost(k)):
        u = mp.mpf(u)
        main = mp.mpc(0)
        for c in range(k + 1):
            comp = NuA(c, k)
            main += mp.exp(mp.mpc(0, mp.pi * u * (k - 2 * c))) * comp.amplitude() / u**comp.nu
        if abs(main.imag) > mp.mpf(10) ** (-(ctx.digits - 10)) * max(1, abs(main)):
            raise PrecisionError("asymptotic main term lost realness")
        rem = abs(ik_eval(k, u, ctx) - main.real)
        out = rem * u ** (min_nu(k) + 1)
    return out


# --- gamma via quadrature + exact tails ----------------------------------------

_GRID_CACHE: dict = {}
_TAIL_CACHE: dict = {}


def _support_frequency(k: int, c) -> float:
    # cycles per unit u of e^(2 pi i u (c - k/2)) e^(i pi m u), |m| <= k
    w2 = abs(2 * float(c) - k)
    return (k + max(w2, k)) / 2.0


def _quadrature_grid(k: int, cfg: QuadratureConfig, freq: float):
    """Uniform panels on [0, U] with cached I_k values at the panel nodes."""
    U = mp.mpf(cfg.truncation)
    n_panels = max(1, int(math.ceil(float(U) * freq * cfg.panels_per_period)))
    key = (k, mp.prec, float(U), n_panels, cfg.nodes_per_panel, cfg.ctx.digits)
    got = _GRID_CACHE.get(key)
    if got is not None:
        return got
    nodes, weights = gauss_legendre(cfg.nodes_per_panel)
    half = U / (2 * n_panels)
    iks = []
    for p in range(n_panels):
        mid = U * (2 * p + 1) / (2 * n_panels)
        iks.append([ik_eval(k, mid + half * x, cfg.ctx) for x in nodes])
    grid = (U, n_panels, half, nodes, weights, iks)
    _GRID_CACHE[key] = grid
    return grid


def _oscillatory_quad_sum(grid, w):
    """sum of weights * I_k(u) * e^(2 pi i w u) using the uniform panel structure.

    Panel midpoints form a geometric phase ladder, so only the per-node offsets
    and one ladder ratio need exponentials.
    """
    U, n_panels, half, nodes, weights, iks = grid
    two_pi_w = 2 * mp.pi * w
    offs = [
        wt * half * mp.exp(mp.mpc(0, two_pi_w * half * x)) for x, wt in zip(nodes, weights)
    ]
    ratio = mp.exp(mp.mpc(0, two_pi_w * 2 * half))
    phase = mp.exp(mp.mpc(0, two_pi_w * half))  # midpoint of panel 0
    acc = mp.mpc(0)
    for p in range(n_panels):
        inner = mp.mpc(0)
        row = iks[p]
        for off, ik in zip(offs, row):
            inner += off * ik
        acc += phase * inner
        phase *= ratio
    return acc


def _phase_tail(delta: Fraction, cfg: QuadratureConfig, orders: tuple):
    """Tail integrals int_U^inf e^(2 pi i delta u) u^(-p) du, cached by exact delta.

    The full order ladder is computed in one shot: the ladder regimes price all
    orders at the cost of one, and sharing the cache entry across phases and
    pieces (whose deltas differ by integers and collide heavily) is the main
    speedup of table interpolation.
    """
    key = (delta, float(cfg.truncation), tuple(orders), mp.prec)
    got = _TAIL_CACHE.get(key)
    if got is not None:
        return got
    beta = 2 * mp.pi * mp.mpf(delta.numerator) / delta.denominator
    vals = power_tail(beta, mp.mpf(cfg.truncation), list(orders))
    _TAIL_CACHE[key] = vals
    return vals


def gamma_numeric(k: int, c, cfg: QuadratureConfig):
    """gamma_k(c) by Fourier inversion: quadrature on [0, U] plus exact tails.

    c may be a Fraction/int (exact tail caching across calls) or a real number.
    """
    ctx = cfg.ctx
    if not 1 <= k <= 6:
        raise ValueError("k must be in 1..6 at default precision")
    if isinstance(c, (int, str, Fraction)):
        c_frac = Fraction(c)
    else:
        c_frac = exact_fraction(mp.mpf(c))
    boost = _ik_boost(k) + 10
    with ctx.workdps(boost):
        cm = mp.mpf(c_frac.numerator) / c_frac.denominator
        w = cm - mp.mpf(k) / 2
        freq = _support_frequency(k, cm)
        grid = _quadrature_grid(k, cfg, freq)
        acc = _oscillatory_quad_sum(grid, w)

        expansion = sinc_det_expansion(k)
        by_phase: dict = {}
        for (m, p), q in expansion.items():
            by_phase.setdefault(m, {})[p] = q
        ladder = tuple(range(k, k * k + 1))
        tail = mp.mpc(0)
        for m, terms in sorted(by_phase.items()):
            delta = c_frac - Fraction(k - m, 2)
            if delta == 0 and min(terms) <= 1:
                raise PrecisionError(
                    "gamma at a support endpoint of the k=1 kernel is a jump midpoint"
                )
            tails = _phase_tail(delta, cfg, ladder)
            for p, q in sorted(terms.items()):
                ip = (-mp.mpc(0, 1)) ** (p % 4)  # i^(-p)
                coeff = mp.mpf(q.numerator) / q.denominator * (2 * mp.pi) ** (-p) * ip
                tail += coeff * tails[p]

        g = barnes_g_int(k + 1) ** 2
        total = 2 * (acc + tail).real / (mp.mpf(g.numerator) / g.denominator)
    return total


def _chebyshev_rational_nodes(k: int) -> list:
    """k^2 distinct rationals with denominator 4k^2 at Chebyshev-like spots in (0,1)."""
    n = k * k
    den = 4 * k * k
    taken = set()
    nodes = []
    for i in range(1, n + 1):
        x = (1 + math.cos((2 * i - 1) * math.pi / (2 * n))) / 2
        target = round(x * den)
        target = min(max(target, 1), den - 1)
        if target in taken:
            for off in range(1, den):
                for cand in (target - off, target + off):
                    if 1 <= cand <= den - 1 and cand not in taken:
                        target = cand
                        break
                else:
                    continue
                break
        taken.add(target)
        nodes.append(Fraction(target, den))
    return sorted(nodes)


def interpolate_piece(k: int, j: int, cfg: QuadratureConfig) -> Polynomial:
    """Integer-coefficient polynomial (k^2-1)! gamma_k on [j, j+1] by interpolation.

    Evaluates gamma_numeric at k^2 rational nodes inside (j, j+1), solves the
    monomial Vandermonde system at boosted precision, scales by (k^2-1)! and
    rounds; every rounding distance must be below 10^(-digits/4).
    """
    if not 0 <= j < k:
        raise ValueError("need 0 <= j < k")
    ctx = cfg.ctx
    # recovering integer coefficients sheds ~k^2 digits to basis conditioning
    inner_ctx = PrecisionContext(ctx.digits + 30 + k * k, ctx.guard)
    # a longer quadrature range pushes most tail phases into the cheap
    # asymptotic regime; the tail itself is exact either way
    inner_cfg = QuadratureConfig(
        max(cfg.truncation, 48.0), cfg.panels_per_period, cfg.nodes_per_panel, inner_ctx
    )
    xs = [Fraction(j) + x for x in _chebyshev_rational_nodes(k)]
    values = [gamma_numeric(k, x, inner_cfg) for x in xs]
    n = k * k
    scale = math.factorial(n - 1)
    with inner_ctx.workdps(20):
        V = mp.matrix(n, n)
        for row, x in enumerate(xs):
            xm = mp.mpf(x.numerator) / x.denominator
            V[row, 0] = mp.mpf(1)
            for col in range(1, n):
                V[row, col] = V[row, col - 1] * xm
        b = mp.matrix([v * scale for v in values])
        sol = mp.lu_solve(V, b)
        ints = []
        worst = mp.mpf(0)
        worst_at = 0
        for idx in range(n):
            nearest = mp.nint(sol[idx])
            dist = abs(sol[idx] - nearest)
            if dist > worst:
                worst, worst_at = dist, idx
            ints.append(int(nearest))
        limit = mp.mpf(10) ** (-ctx.digits / 4)
        if worst >= limit:
            raise PrecisionError(
                f"insufficient precision: coefficient c^{worst_at} rounded by "
                f"{mp.nstr(worst, 5)} (limit {mp.nstr(limit, 3)})"
            )
    return Polynomial([Fraction(v) for v in ints])
