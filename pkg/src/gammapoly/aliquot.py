"""Semicircle-convolution integrals and their arithmetic companions.

I(d) is the (d-1)-fold integral of a product of semicircle densities over a
simplex-like region; Fourier-separating it gives the one-dimensional form

    I(d) = int_R ( J_1(2 pi y) / (2 y) )^d dy,

and since the Fourier transform of the integrand is supported in |u| <= d,
the lattice sum with spacing 1/d (or finer) has no Poisson remainder:

    I(d) = (1/d) sum_n ( J_1(2 pi n/d) / (2 n/d) )^d.

Head terms are summed directly with the Maclaurin J_1; the tail substitutes
the Hankel asymptotic expansion of J_1 (certified first-omitted-term bounds),
whose lattice phases are periodic mod d, reducing the tail to residue-class
Hurwitz zeta values.  The quadrature route integrates the same expansion tail
with oscillatory power-law integrals instead, giving an independent method.

Also here: the large-d asymptotic series of I(d), continued-fraction
convergents with a precision-aware reliability cutoff, and the GL2 matrix
counts appearing as local factors of the aliquot-cycle constant.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .oscint import power_tail
from .precision import PrecisionContext, PrecisionError

__all__ = [
    "BesselTermBound",
    "ConvergentList",
    "bessel_j1",
    "i_d_poisson",
    "i_d_riemann",
    "i_d_quadrature",
    "i_d_asymptotic",
    "continued_fraction",
    "gl2_local_factor",
    "gl2_local_factor_naive",
    "c_aliquot_truncated",
]

ASYMPTOTIC_INV_D = (
    Fraction(1),
    Fraction(-1, 8),
    Fraction(-5, 384),
    Fraction(7, 3072),
    Fraction(3829, 491520),
)


# --- J_1 ---------------------------------------------------------------------


def bessel_j1(y, ctx: PrecisionContext):
    """J_1(y) by the Maclaurin series, guard digits proportional to |y|."""
    with ctx.workdps(int(0.46 * abs(float(y))) + 15):
        y = mp.mpf(y)
        if y == 0:
            return mp.mpf(0)
        half = y / 2
        term = half
        total = mp.mpf(0)
        m = 1
        floor = mp.mpf(10) ** (-(mp.dps + 5))
        while True:
            total += term
            term *= -half * half / (m * (m + 1))
            if abs(term) < floor * max(1, abs(total)) and 2 * m > abs(y):
                break
            m += 1
    return total


def _j1_hankel_coeffs(n: int) -> list:
    """a_r for J_1(z) ~ sqrt(2/(pi z)) Re[ e^(i(z - 3pi/4)) sum a_r (i/z)^r ]."""
    out = [Fraction(1)]
    for r in range(1, n + 1):
        out.append(out[-1] * Fraction(4 - (2 * r - 1) ** 2, 8 * r))
    return out


@dataclass(frozen=True)
class BesselTermBound:
    """Envelope (2 pi)^(-d) (n/d)^(-3d/2) of the n-th lattice summand."""

    n: int
    d: int

    def bound(self):
        return (2 * mp.pi) ** (-self.d) * (mp.mpf(self.n) / self.d) ** (
            -mp.mpf(3 * self.d) / 2
        )


# --- shared expansion machinery -----------------------------------------------


def _tail_plan(digits: int):
    """(z_min, M): asymptotic order and smallest usable argument for the tails."""
    lg_tol = -(digits + 9.0)
    z_min = max(40.0, 1.25 * math.log(10) * (digits + 12) / 2)
    while True:
        lg_z = math.log10(z_min)
        best = None
        best_m = None
        lg_a = 0.0  # log10 |a_r|
        r = 0
        while r < int(2.5 * z_min) + 4:
            lg_mag = lg_a - r * lg_z  # term r at z_min, in units of the lead
            if best is None or lg_mag < best:
                best, best_m = lg_mag, r
            if best < lg_tol:
                return z_min, best_m
            r += 1
            lg_a += math.log10(abs(4 - (2 * r - 1) ** 2) / (8 * r))
        z_min *= 1.3


def _phase_products(d: int, M: int) -> dict:
    """g_(b,r): coefficients of (C+)^b (C-)^(d-b) with C± = sum a_r (±i/z)^r.

    Returned as {b: [mpc indexed by r]}, r up to d*M: the product of the
    truncated factors carried at the current working precision, so the only
    analytic error is the per-factor truncation of the Hankel series.
    """
    a = _j1_hankel_coeffs(M)
    plus = []
    for r, ar in enumerate(a):
        arf = mp.mpf(ar.numerator) / ar.denominator
        plus.append(mp.mpc(0, 1) ** (r % 4) * arf)
    minus = [v.conjugate() for v in plus]

    def cmul(x, y):
        out = [mp.mpc(0)] * (len(x) + len(y) - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    out[i + j] += xi * yj
        return out

    powers = {}
    acc_plus = [mp.mpc(1)]
    for b in range(d + 1):
        acc = acc_plus
        for _ in range(d - b):
            acc = cmul(acc, minus)
        powers[b] = acc
        acc_plus = cmul(acc_plus, plus)
    return powers


def _factor_error_envelope(d: int, M: int, z_min: float):
    """Absolute bound on the summand error from truncating each J_1 factor."""
    a = _j1_hankel_coeffs(M + 2)
    zm = mp.mpf(z_min)
    eta = mp.mpf(0)
    for r in (M + 1, M + 2):
        q = a[r]
        eta += abs(mp.mpf(q.numerator)) / q.denominator * zm ** (-r)
    return mp.mpf(d) * mp.mpf("1.2") ** d * eta


def _plain_cutoff(d: int, md: int, digits: int):
    """Smallest N with the enveloped tail below target, or None if infeasible.

    With spacing 1/md the n-th summand sits at z = 2 pi n/md and obeys the
    envelope 1.1^d (2 pi)^-d (n/(md) * d/d)^(-3d/2) in the lattice variable;
    the summed tail is controlled by integral comparison.  Plain summation is
    used only when the cutoff keeps both the term count and the Maclaurin J_1
    arguments moderate.
    """
    lg_env0 = d * (math.log10(1.1) - math.log10(2 * math.pi))
    target = -(digits + 10.0)
    expn = 1.5 * d
    if expn <= 1.2:
        return None
    for sixteenth in range(4, 160):
        lg_w = sixteenth / 16.0  # log10 of w = n/md, the envelope variable
        # integral comparison: sum_(n>N) env(n) <= md (2pi)^-d 1.1^d w^(1-3d/2)/(3d/2-1)
        lg_tail = lg_env0 + (1 - expn) * lg_w - math.log10(expn - 1) + math.log10(md)
        if lg_tail < target:
            n = int(10**lg_w * md) + 1
            if n <= 4000 and 2 * math.pi * n / md <= 600:
                return n
            return None
    return None


def _lattice_sum(d: int, subdiv: int, ctx: PrecisionContext):
    """(1/(subdiv*d)) sum_n f(n/(subdiv*d)), f = (J_1(2 pi y)/(2y))^d, no remainder.

    subdiv >= 1 refines the spacing to 1/(subdiv*d); any spacing <= 1/d keeps
    the identity exact because the transform is supported in |u| <= d.  For
    large d the enveloped plain sum converges within a few hundred terms and
    is used directly; otherwise the head is summed and the tail uses the
    Hankel-expansion residue-class zeta form.
    """
    digits = ctx.digits
    md = subdiv * d
    n_plain = _plain_cutoff(d, md, digits)
    if n_plain is not None:
        with ctx.workdps(25):
            total = (mp.pi / 2) ** d
            for n in range(1, n_plain + 1):
                y = mp.mpf(n) / md
                total += 2 * (bessel_j1(2 * mp.pi * y, ctx) / (2 * y)) ** d
            out = total / md
        return out
    z_min, M = _tail_plan(digits)
    theta = 2 * math.pi / md
    n0 = int(math.ceil(z_min / theta)) + 1
    with ctx.workdps(25):
        # direct head
        head = (mp.pi / 2) ** d
        two = mp.mpf(2)
        for n in range(1, n0):
            y = mp.mpf(n) / md
            head += two * (bessel_j1(2 * mp.pi * y, ctx) / (2 * y)) ** d

        # expansion tail: sum_b C(d,b) e^(-3 pi i (2b-d)/4) sum_r g_(b,r)
        #                 theta^-(s) sum_(n>=n0) zeta-phase n^-s,  s = 3d/2 + r
        products = _phase_products(d, M)
        thetam = mp.mpf(2) * mp.pi / md
        pref = (mp.pi / 2) ** (mp.mpf(d) / 2)
        zcache: dict = {}

        def residue_sum(j: int, s):
            """sum_(n>=n0) e^(2 pi i j n / md) n^(-s) by residue classes mod md."""
            key = (j % md, float(s))
            got = zcache.get(key)
            if got is not None:
                return got
            total = mp.mpc(0)
            for rho in range(md):
                q0 = -((rho - n0) // md)  # ceil((n0 - rho)/md); n0 > rho here
                phase = mp.exp(mp.mpc(0, 2 * mp.pi * ((j * rho) % md) / md))
                total += phase * mp.mpf(md) ** (-s) * mp.zeta(s, q0 + mp.mpf(rho) / md)
            zcache[key] = total
            return total

        tail = mp.mpc(0)
        s_base = mp.mpf(3 * d) / 2
        lead_scale = float(thetam) ** (-float(s_base))
        cut = mp.mpf(10) ** (-(mp.dps + 10))
        for b, series in products.items():
            j = 2 * b - d
            rot = mp.exp(mp.mpc(0, -3 * mp.pi * j / 4))
            binom = mp.binomial(d, b)
            for r, g in enumerate(series):
                if not g:
                    continue
                s = s_base + r
                scale = thetam ** (-s)
                approx = abs(g) * scale * mp.mpf(n0) ** (1 - s) / (s - 1)
                if approx < cut * lead_scale:
                    continue
                tail += binom * rot * g * scale * residue_sum(j, s)
        tail = pref * tail
        if abs(tail.imag) > mp.mpf(10) ** (-(digits + 2)) * max(1, abs(tail.real)):
            raise PrecisionError("aliquot lattice tail lost realness")

        err = (
            pref
            * _factor_error_envelope(d, M, z_min)
            * thetam ** (-s_base)
            * mp.zeta(s_base, n0)
            * 10
        )
        if err > mp.mpf(10) ** (-(digits + 2)):
            raise PrecisionError(f"aliquot tail bound {mp.nstr(err, 3)} too large")
        out = (head + 2 * tail.real) / md
    return out


def i_d_poisson(d: int, ctx: PrecisionContext):
    """I(d) via the exact lattice identity at spacing 1/d."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return _lattice_sum(d, 1, ctx)


def i_d_riemann(d: int, subdiv: int, ctx: PrecisionContext):
    """Riemann sum with spacing 1/(subdiv*d); equals I(d) for every subdiv >= 1."""
    if d < 1 or subdiv < 1:
        raise ValueError("d and subdiv must be >= 1")
    return _lattice_sum(d, subdiv, ctx)


def i_d_quadrature(d: int, ctx: PrecisionContext):
    """I(d) by direct panel quadrature on [0, Y] plus the expansion tail."""
    if d < 1:
        raise ValueError("d must be >= 1")
    digits = ctx.digits
    n_plain = _plain_cutoff(d, d, digits)
    if n_plain is not None:
        # the envelope already certifies truncation at Y = n_plain/d
        z_min, M = 2 * math.pi * n_plain / d, 0
        plain = True
    else:
        z_min, M = _tail_plan(digits)
        plain = False
    with ctx.workdps(25):
        Y = mp.mpf(z_min) / (2 * mp.pi)
        from .oscint import gauss_legendre

        nodes, weights = gauss_legendre(32)
        n_panels = int(mp.ceil(Y * 2 * d)) + 1
        acc = mp.mpf(0)
        for p in range(n_panels):
            lo = Y * p / n_panels
            hi = Y * (p + 1) / n_panels
            half = (hi - lo) / 2
            mid = (lo + hi) / 2
            for x, wt in zip(nodes, weights):
                y = mid + half * x
                acc += wt * half * (bessel_j1(2 * mp.pi * y, ctx) / (2 * y)) ** d

        if plain:
            return 2 * acc
        # tail: int_Y^inf (pi/2)^(d/2) z^(-3d/2) sum_b C(d,b) e^(i j (z - 3pi/4))
        #       g_b(1/z) dy,  z = 2 pi y
        products = _phase_products(d, M)
        pref = (mp.pi / 2) ** (mp.mpf(d) / 2)
        s_base = mp.mpf(3 * d) / 2
        tail = mp.mpc(0)
        cut = mp.mpf(10) ** (-(mp.dps + 10))
        lead_scale = (2 * mp.pi * Y) ** (-s_base) * Y
        for b, series in products.items():
            j = 2 * b - d
            rot = mp.exp(mp.mpc(0, -3 * mp.pi * j / 4))
            binom = mp.binomial(d, b)
            orders = []
            gs = {}
            for r, g in enumerate(series):
                if not g:
                    continue
                s = s_base + r
                rough = abs(g) * (2 * mp.pi * Y) ** (-s) * Y
                if rough < cut * lead_scale:
                    continue
                orders.append(s)
                gs[s] = g
            if not orders:
                continue
            # int_Y^inf e^(i 2 pi j y) (2 pi y)^(-s) dy, per order
            tails = power_tail(2 * mp.pi * j, Y, orders)
            for s in orders:
                tail += binom * rot * gs[s] * (2 * mp.pi) ** (-s) * tails[s]
        err = (
            pref
            * _factor_error_envelope(d, M, z_min)
            * (2 * mp.pi) ** (-s_base)
            * Y ** (1 - s_base)
            / (s_base - 1)
            * 10
        )
        if err > mp.mpf(10) ** (-(digits + 2)):
            raise PrecisionError(f"quadrature tail bound {mp.nstr(err, 3)} too large")
        out = 2 * (acc + pref * tail.real)
    return out


def i_d_asymptotic(d: int, terms: int = 5):
    """Large-d form (pi/2)^(d-1/2) d^(-1/2) (1 - 1/(8d) - 5/(384 d^2) + ...)."""
    if d < 3:
        raise ValueError("the large-d form needs d >= 3")
    if not 1 <= terms <= 5:
        raise ValueError("terms must be in 1..5")
    series = mp.mpf(0)
    for j in range(terms):
        q = ASYMPTOTIC_INV_D[j]
        series += mp.mpf(q.numerator) / q.denominator / mp.mpf(d) ** j
    return (mp.pi / 2) ** (d - mp.mpf(1) / 2) / mp.sqrt(d) * series


# --- continued fractions --------------------------------------------------------


@dataclass(frozen=True)
class ConvergentList:
    """Partial quotients and convergents A_n/B_n (0-based: A_0/B_0 = a_0/1).

    reliable_count limits how many convergents the input precision certifies:
    convergent n is kept while B_n^2 <= 10^digits.
    """

    partial_quotients: tuple
    convergents: tuple
    reliable_count: int

    def fraction(self, n: int) -> Fraction:
        a, b = self.convergents[n]
        return Fraction(a, b)

    def denominator_bound(self, n: int) -> int:
        """Any rational closer to the input than A_n/B_n has denominator > B_n."""
        if n >= self.reliable_count:
            raise PrecisionError(f"convergent {n} is beyond the certified range")
        return self.convergents[n][1]


def continued_fraction(x, ctx: PrecisionContext) -> ConvergentList:
    """Euclidean partial quotients of x > 0 with a reliability cutoff."""
    with ctx.workdps():
        x = mp.mpf(x)
        if x <= 0:
            raise ValueError("x must be positive")
        limit = mp.mpf(10) ** ctx.digits
        eps = mp.mpf(10) ** (-(mp.dps - 8))
        quotients = []
        convergents = []
        A1, A0 = 1, 0
        B1, B0 = 0, 1
        frac = x
        reliable = 0
        while True:
            q = int(mp.floor(frac))
            if frac - q > 1 - eps:
                # representation boundary: [.., q, 1, huge] is [.., q+1]
                q += 1
            quotients.append(q)
            A1, A0 = q * A1 + A0, A1
            B1, B0 = q * B1 + B0, B1
            convergents.append((A1, B1))
            if mp.mpf(B1) ** 2 <= limit:
                reliable = len(convergents)
            rem = frac - q
            if rem < eps or len(quotients) > 4 * ctx.digits:
                break
            frac = 1 / rem
            if not mp.isfinite(frac):
                break
    return ConvergentList(tuple(quotients), tuple(convergents), reliable)


# --- GL2 local factors ------------------------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, int(n**0.5) + 1):
        if n % p == 0:
            return False
    return True


def _gl2_class_counts(ell: int) -> dict:
    """N(det, tr) = #matrices in GL2(Z/ell) with given determinant and trace."""
    counts: dict = {}
    for a in range(ell):
        for b in range(ell):
            for c in range(ell):
                for e in range(ell):
                    det = (a * e - b * c) % ell
                    if det == 0:
                        continue
                    key = (det, (a + e) % ell)
                    counts[key] = counts.get(key, 0) + 1
    return counts


def gl2_order(ell: int) -> int:
    return (ell * ell - 1) * (ell * ell - ell)


def gl2_local_factor(ell: int, d: int) -> Fraction:
    """ell^d N_cycle / |GL2(Z/ell)|^d, where N_cycle counts d-tuples with
    det(s_j) + 1 - tr(s_j) = det(s_(j+1)) cyclically.

    The condition only sees (det, tr), so matrices are enumerated once into
    class counts and the trace is forced by consecutive determinants.
    """
    if not _is_prime(ell):
        raise ValueError("ell must be prime")
    if (ell**4) ** d > 10**9:
        raise ValueError("enumeration guard exceeded: (ell^4)^d > 1e9")
    counts = _gl2_class_counts(ell)
    total = 0
    from itertools import product

    for dets in product(range(1, ell), repeat=d):
        prod = 1
        for j in range(d):
            tr = (dets[j] + 1 - dets[(j + 1) % d]) % ell
            prod *= counts.get((dets[j], tr), 0)
            if prod == 0:
                break
        total += prod
    return Fraction(ell**d * total, gl2_order(ell) ** d)


def gl2_local_factor_naive(ell: int, d: int) -> Fraction:
    """Full tuple enumeration; test oracle for small ell, d."""
    mats = []
    for a in range(ell):
        for b in range(ell):
            for c in range(ell):
                for e in range(ell):
                    if (a * e - b * c) % ell:
                        mats.append(((a * e - b * c) % ell, (a + e) % ell))
    from itertools import product

    total = 0
    for tup in product(mats, repeat=d):
        if all(
            (tup[j][0] + 1 - tup[j][1]) % ell == tup[(j + 1) % d][0] for j in range(d)
        ):
            total += 1
    return Fraction(ell**d * total, gl2_order(ell) ** d)


def c_aliquot_truncated(d: int, ell_max: int, ctx: PrecisionContext) -> dict:
    """(2/pi)^d I(d) times the finite product of GL2 local factors up to ell_max."""
    i_d = i_d_poisson(d, ctx)
    factors = {}
    ell = 2
    while ell <= ell_max:
        if _is_prime(ell):
            factors[ell] = gl2_local_factor(ell, d)
        ell += 1
    with ctx.workdps():
        value = (2 / mp.pi) ** d * i_d
        for f in factors.values():
            value *= mp.mpf(f.numerator) / f.denominator
    return {"d": d, "i_d": i_d, "local_factors": factors, "value": value}
