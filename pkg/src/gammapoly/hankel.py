"""High-precision engine for the moment determinant D_k(t).

D_k(t) is the k x k determinant with entries g^(i+j-2)(t), where
g(t) = int_0^1 exp(-t x) dx, so g^(n)(t) = int_0^1 (-x)^n exp(-t x) dx.
Derivatives of D_k are taken combinatorially: differentiating a row bumps
its offset by one; a row whose offset collides with a neighbour kills the
determinant, so d^m/dt^m D_k is a short signed sum over offset tuples.

On top of that sit the log-derivative quantity H_k(t) = t D'_k/D_k + k^2 and
residuals for its Painleve V sigma-form ODE and the Toda lattice identity
D_(k-1) D_(k+1) / D_k^2 = (log D_k)''.
"""

from dataclasses import dataclass

from mpmath import mp

from .precision import PrecisionContext, PrecisionError

__all__ = [
    "RowOffsetMatrix",
    "g_deriv",
    "det_row_offsets",
    "dk_eval",
    "dk_deriv",
    "hk_eval",
    "hk_deriv",
    "painleve_residual",
    "painleve_check",
    "toda_residual",
    "toda_check",
]

SERIES_SWITCH = 30  # |t| above which the upward recurrence replaces the series

MAX_DET_SIZE = 12


def _series_guard(t_abs: float) -> int:
    # series terms peak near exp(|t|); compensate the cancellation
    return int(0.45 * t_abs) + 10


def _cancellation_guard(k: int) -> int:
    # Hilbert-type moment determinants lose ~0.75 k^2 digits to cancellation
    return int(0.75 * k * k) + 10


def g_deriv(n: int, t, ctx: PrecisionContext):
    """g^(n)(t) = (-1)^n int_0^1 x^n exp(-t x) dx to ctx accuracy."""
    if n < 0:
        raise ValueError("n must be >= 0")
    t = mp.mpc(t)
    ta = abs(t)
    with ctx.workdps(_series_guard(float(ta)) + 10):
        if ta <= SERIES_SWITCH:
            # I_n = sum_m (-t)^m / (m! (n+m+1)), entire in t
            term = mp.mpc(1)
            total = mp.mpc(0)
            m = 0
            floor = mp.mpf(10) ** (-(mp.dps + 5))
            while True:
                total += term / (n + m + 1)
                m += 1
                term *= -t / m
                if abs(term) < floor and m > ta:
                    break
            val = total
        else:
            # upward recurrence I_n = (n I_(n-1) - e^(-t)) / t, stable for |t| > n
            et = mp.exp(-t)
            val = (1 - et) / t
            for j in range(1, n + 1):
                val = (j * val - et) / t
        out = (-1) ** n * val
    return out


@dataclass(frozen=True)
class RowOffsetMatrix:
    """k x k matrix whose (i, j) entry is g^(offsets_i + j - 1)(t), j = 1..k."""

    k: int
    offsets: tuple

    def __post_init__(self):
        if len(self.offsets) != self.k:
            raise ValueError("need one offset per row")
        if any(o < 0 for o in self.offsets):
            raise ValueError("offsets must be nonnegative")

    @staticmethod
    def initial(k: int) -> "RowOffsetMatrix":
        return RowOffsetMatrix(k, tuple(range(k)))

    def has_repeat(self) -> bool:
        return len(set(self.offsets)) != self.k


def _det_subset_expansion(entries) -> "mp.mpc":
    """Determinant by Laplace expansion memoized over column subsets."""
    k = len(entries)
    if k == 0:
        return mp.mpc(1)
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


def det_row_offsets(m: RowOffsetMatrix, t, ctx: PrecisionContext):
    """Determinant of the offset matrix; exact 0 on repeated offsets."""
    if m.k > MAX_DET_SIZE:
        raise ValueError(f"k must be <= {MAX_DET_SIZE}")
    if m.has_repeat():
        return mp.mpc(0)
    boost = _cancellation_guard(m.k) + _series_guard(float(abs(mp.mpc(t))))
    inner = PrecisionContext(ctx.digits, ctx.guard + boost)
    with ctx.workdps(boost):
        needed = sorted({o + j for o in m.offsets for j in range(m.k)})
        gcache = {n: g_deriv(n, t, inner) for n in needed}
        entries = [[gcache[o + j] for j in range(m.k)] for o in m.offsets]
        det = _det_subset_expansion(entries)
    return det


def dk_eval(k: int, t, ctx: PrecisionContext):
    """D_k(t); D_0 = 1 by the empty-determinant convention."""
    if k == 0:
        return mp.mpc(1)
    if not 1 <= k <= 10:
        raise ValueError("k must be in 0..10")
    return det_row_offsets(RowOffsetMatrix.initial(k), t, ctx)


def _deriv_offset_terms(k: int, order: int) -> dict:
    """Multiset of offset tuples with multiplicities for d^order/dt^order D_k."""
    terms = {tuple(range(k)): 1}
    for _ in range(order):
        nxt: dict = {}
        for offs, mult in terms.items():
            for i in range(k):
                cand = list(offs)
                cand[i] += 1
                if len(set(cand)) == k:
                    key = tuple(cand)
                    nxt[key] = nxt.get(key, 0) + mult
        terms = nxt
    return terms


def dk_deriv(k: int, t, order: int, ctx: PrecisionContext):
    """d^order/dt^order D_k(t) via the surviving row-offset tuples (order <= 3)."""
    if not 1 <= k <= 10:
        raise ValueError("k must be in 1..10")
    if not 0 <= order <= 3:
        raise ValueError("order must be in 0..3")
    with ctx.workdps(_cancellation_guard(k)):
        total = mp.mpc(0)
        for offs, mult in sorted(_deriv_offset_terms(k, order).items()):
            total += mult * det_row_offsets(RowOffsetMatrix(k, offs), t, ctx)
    return total


def _log_derivs(k: int, t, top_order: int, ctx: PrecisionContext):
    """(log D_k)', '', ''' at t, from D and its derivatives."""
    boost = _cancellation_guard(k) + 15
    with ctx.workdps(boost):
        d0 = dk_eval(k, t, ctx)
        ref = dk_eval(k, 0, ctx)
        if abs(d0) < mp.mpf(10) ** (-ctx.digits // 2) * abs(ref):
            raise PrecisionError(f"D_{k}({t}) too close to zero for log-derivatives")
        ratios = [dk_deriv(k, t, m, ctx) / d0 for m in range(1, top_order + 1)]
        out = []
        if top_order >= 1:
            out.append(ratios[0])
        if top_order >= 2:
            out.append(ratios[1] - ratios[0] ** 2)
        if top_order >= 3:
            out.append(ratios[2] - 3 * ratios[1] * ratios[0] + 2 * ratios[0] ** 3)
    return out


def hk_eval(k: int, t, ctx: PrecisionContext):
    """H_k(t) = t D'_k/D_k + k^2 (real t)."""
    t = mp.mpf(t)
    if t == 0:
        return mp.mpf(k * k)
    with ctx.workdps(_cancellation_guard(k) + 15):
        (l1,) = _log_derivs(k, t, 1, ctx)
        out = (t * l1).real + k * k
    return out


def hk_deriv(k: int, t, order: int, ctx: PrecisionContext):
    """H'_k or H''_k; needs D-derivatives one order higher."""
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    t = mp.mpf(t)
    with ctx.workdps(_cancellation_guard(k) + 15):
        ls = _log_derivs(k, t, order + 1, ctx)
        if order == 1:
            out = (ls[0] + t * ls[1]).real
        else:
            out = (2 * ls[1] + t * ls[2]).real
    return out


def _painleve_sides(k: int, t, ctx: PrecisionContext):
    t = mp.mpf(t)
    boost = _cancellation_guard(k) + 20
    with ctx.workdps(boost):
        h = hk_eval(k, t, ctx)
        h1 = hk_deriv(k, t, 1, ctx)
        h2 = hk_deriv(k, t, 2, ctx)
        lhs = (t * h2) ** 2
        rhs = (h + (2 * k - t) * h1) ** 2 - 4 * h1**2 * (k * k - h + t * h1)
    return lhs, rhs


def painleve_residual(k: int, t, ctx: PrecisionContext):
    """lhs - rhs of the sigma-form ODE
    (t H'')^2 = (H + (2k - t) H')^2 - 4 H'^2 (k^2 - H + t H')."""
    lhs, rhs = _painleve_sides(k, t, ctx)
    with ctx.workdps():
        return lhs - rhs


def painleve_check(k: int, t, ctx: PrecisionContext) -> dict:
    """Residual plus the scaled tolerance verdict used by the CLI and tests."""
    lhs, rhs = _painleve_sides(k, t, ctx)
    with ctx.workdps():
        residual = lhs - rhs
        tolerance = mp.mpf(10) ** (-(ctx.digits - 15)) * max(abs(lhs), abs(rhs), mp.mpf(1))
    return {
        "k": k,
        "t": mp.mpf(t),
        "residual": residual,
        "tolerance": tolerance,
        "pass": bool(abs(residual) <= tolerance),
    }


def _toda_sides(k: int, t, ctx: PrecisionContext):
    if k < 2:
        raise ValueError("Toda residual needs k >= 2")
    boost = _cancellation_guard(k + 1) + 20
    with ctx.workdps(boost):
        dk = dk_eval(k, t, ctx)
        ref = dk_eval(k, 0, ctx)
        if abs(dk) < mp.mpf(10) ** (-ctx.digits // 2) * abs(ref):
            raise PrecisionError(f"D_{k}({t}) too close to zero for the Toda ratio")
        lhs = dk_eval(k - 1, t, ctx) * dk_eval(k + 1, t, ctx) / dk**2
        r1 = dk_deriv(k, t, 1, ctx) / dk
        r2 = dk_deriv(k, t, 2, ctx) / dk
        rhs = r2 - r1**2
        out = (lhs.real, rhs.real)
    return out


def toda_residual(k: int, t, ctx: PrecisionContext):
    """D_(k-1) D_(k+1) / D_k^2 - (log D_k)''; vanishes identically."""
    lhs, rhs = _toda_sides(k, t, ctx)
    with ctx.workdps():
        return lhs - rhs


def toda_check(k: int, t, ctx: PrecisionContext) -> dict:
    lhs, rhs = _toda_sides(k, t, ctx)
    with ctx.workdps():
        residual = lhs - rhs
        tolerance = mp.mpf(10) ** (-(ctx.digits - 15)) * max(abs(lhs), abs(rhs), mp.mpf(1))
    return {
        "k": k,
        "t": mp.mpf(t),
        "residual": residual,
        "tolerance": tolerance,
        "pass": bool(abs(residual) <= tolerance),
    }
