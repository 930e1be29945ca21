"""Exact piecewise-polynomial engine.

Everything here is exact rational arithmetic (`fractions.Fraction`).  The
central object is the family gamma_k of densities obtained by expanding the
k x k Hankel determinant of unit-interval moments as a signed sum over
permutations and convolving the monomial inverse transforms

    gamma_k(c) = G(1+k)^(-2) * sum_sigma sign(sigma)
                 (x^(1+sigma(1)-2) 1_(0,1)) * ... * (x^(k+sigma(k)-2) 1_(0,1)) (c),

where * is convolution and G is the integer Barnes product.  Each gamma_k is
supported on (0, k), one polynomial piece of degree <= k^2-1 per unit
interval, and symmetric about k/2.
"""

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

__all__ = [
    "Polynomial",
    "PiecewisePolynomial",
    "GammaPolySet",
    "barnes_g_int",
    "convolve",
    "gamma_exact",
    "eval_pp",
    "smoothness_order",
    "integrate_pp",
    "andreief_check",
    "gamma_to_json",
    "gamma_to_latex",
]


def barnes_g_int(n: int) -> Fraction:
    """G(n) at a positive integer: the product 1! 2! ... (n-2)!  (empty for n <= 2)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = 1
    f = 1
    for j in range(1, n - 1):
        f *= j
        out *= f
    return Fraction(out)


class Polynomial:
    """Dense univariate polynomial over Fraction, ascending coefficients.

    The zero polynomial is the empty coefficient list; no trailing zeros
    otherwise, so ``degree`` is total.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        x = Fraction(x)
        v = Fraction(0)
        for c in reversed(self.coeffs):
            v = v * x + c
        return v

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    def scale(self, s):
        s = Fraction(s)
        return Polynomial([c * s for c in self.coeffs])

    def derivative(self):
        return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def antiderivative(self):
        return Polynomial([Fraction(0)] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    def shift(self, d):
        """P(x + d)."""
        d = Fraction(d)
        n = len(self.coeffs)
        out = [Fraction(0)] * n
        for p, a in enumerate(self.coeffs):
            if not a:
                continue
            dp = Fraction(1)
            for q in range(p, -1, -1):
                out[q] += a * math.comb(p, q) * dp
                dp *= d
        return Polynomial(out)

    def reflect(self):
        """P(-x)."""
        return Polynomial([(-1) ** i * c for i, c in enumerate(self.coeffs)])

    def compose_one_minus(self):
        """P(1 - x)."""
        return self.reflect().shift(-1)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Contiguous unit-interval pieces; piece i lives on [left_knot+i, left_knot+i+1].

    Pieces are stored in the global variable; the function is 0 outside the
    support.  Evaluation treats pieces as closed-left / open-right and, at
    interior knots, insists both neighbours agree.
    """

    left_knot: int
    pieces: tuple

    def __init__(self, left_knot: int, pieces):
        object.__setattr__(self, "left_knot", int(left_knot))
        object.__setattr__(self, "pieces", tuple(pieces))

    @property
    def right_knot(self) -> int:
        return self.left_knot + len(self.pieces)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.pieces)

    def derivative(self):
        return PiecewisePolynomial(self.left_knot, [p.derivative() for p in self.pieces])

    def __call__(self, c):
        return eval_pp(self, c)


ZERO_PP = PiecewisePolynomial(0, [])


def eval_pp(pp: PiecewisePolynomial, c) -> Fraction:
    """Exact value of a piecewise polynomial; asserts neighbour agreement at interior knots."""
    c = Fraction(c)
    if not pp.pieces or c < pp.left_knot or c >= pp.right_knot:
        return Fraction(0)
    offset = c - pp.left_knot
    i = int(offset)  # floor for nonnegative offset
    if offset == i and 0 < i < len(pp.pieces):
        left = pp.pieces[i - 1](c)
        right = pp.pieces[i](c)
        if left != right:
            raise AssertionError(
                f"pieces disagree at knot {pp.left_knot + i}: {left} vs {right}"
            )
        return right
    return pp.pieces[i](c)


def integrate_pp(pp: PiecewisePolynomial) -> Fraction:
    """Exact integral over the full support."""
    total = Fraction(0)
    for i, p in enumerate(pp.pieces):
        a = pp.left_knot + i
        anti = p.antiderivative()
        total += anti(a + 1) - anti(a)
    return total


# --- convolution ------------------------------------------------------------
#
# With both factors written in local coordinates on [0,1], the piece of f*g on
# [a+b+s, a+b+s+1] (local x) collects
#     sum_{i+j=s}   int_0^x F_i(t) G_j(x-t) dt
#   + sum_{i+j=s-1} int_x^1 F_i(t) G_j(1+x-t) dt,
# and the first integral has the closed form
#     sum_{p,q} F_p G_q  p! q! / (p+q+1)!  x^(p+q+1),
# while the second is the first applied to the reflections, composed with 1-x.

_BETA_CACHE: dict = {}


def _beta(p: int, q: int) -> Fraction:
    v = _BETA_CACHE.get((p, q))
    if v is None:
        v = Fraction(math.factorial(p) * math.factorial(q), math.factorial(p + q + 1))
        _BETA_CACHE[(p, q)] = v
    return v


def _conv_lower(F: Polynomial, G: Polynomial) -> Polynomial:
    out = [Fraction(0)] * (len(F.coeffs) + len(G.coeffs))
    for p, a in enumerate(F.coeffs):
        if not a:
            continue
        for q, b in enumerate(G.coeffs):
            if b:
                out[p + q + 1] += a * b * _beta(p, q)
    return Polynomial(out)


def _conv_upper(F: Polynomial, G: Polynomial) -> Polynomial:
    return _conv_lower(F.compose_one_minus(), G.compose_one_minus()).compose_one_minus()


def _conv_local(fp: list, gp: list) -> list:
    """Convolve two lists of local-coordinate pieces; returns local pieces."""
    if not fp or not gp:
        return []
    n = len(fp) + len(gp)
    out = [Polynomial() for _ in range(n)]
    for i, F in enumerate(fp):
        if F.is_zero():
            continue
        for j, G in enumerate(gp):
            if G.is_zero():
                continue
            out[i + j] = out[i + j] + _conv_lower(F, G)
            out[i + j + 1] = out[i + j + 1] + _conv_upper(F, G)
    return out


def _to_local(pp: PiecewisePolynomial) -> list:
    return [p.shift(pp.left_knot + i) for i, p in enumerate(pp.pieces)]


def _from_local(left_knot: int, local: list) -> PiecewisePolynomial:
    return PiecewisePolynomial(
        left_knot, [p.shift(-(left_knot + i)) for i, p in enumerate(local)]
    )


def convolve(f: PiecewisePolynomial, g: PiecewisePolynomial) -> PiecewisePolynomial:
    """Exact convolution (f*g)(c) = int f(t) g(c-t) dt.

    The support is the Minkowski sum of the supports; output knots are sums of
    input knots.
    """
    if f.is_zero() or g.is_zero():
        return ZERO_PP
    local = _conv_local(_to_local(f), _to_local(g))
    return _from_local(f.left_knot + g.left_knot, local)


# --- gamma_k ----------------------------------------------------------------


@dataclass(frozen=True)
class GammaPolySet:
    """gamma_k with its k unit-interval pieces on [0, k].

    Coefficients are stored for gamma_k itself; multiply by (k^2-1)! for the
    integer-coefficient form (see scaled_piece).
    """

    k: int
    pp: PiecewisePolynomial
    scale_note: str = "coefficients are for gamma_k itself, not (k^2-1)! gamma_k"

    def __post_init__(self):
        if self.pp.left_knot != 0 or len(self.pp.pieces) != self.k:
            raise ValueError("gamma_k must have k pieces with left knot 0")
        bound = self.k * self.k - 1
        for p in self.pp.pieces:
            if p.degree > bound:
                raise ValueError("piece degree exceeds k^2 - 1")

    def piece(self, j: int) -> Polynomial:
        return self.pp.pieces[j]

    def scaled_piece(self, j: int) -> list:
        """Integer coefficients of (k^2-1)! * piece j, ascending."""
        s = math.factorial(self.k * self.k - 1)
        out = []
        for c in self.pp.pieces[j].coeffs:
            v = c * s
            if v.denominator != 1:
                raise AssertionError("scaled gamma coefficient is not an integer")
            out.append(v.numerator)
        return out

    def __call__(self, c):
        return eval_pp(self.pp, c)


def _perm_sign(perm) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def gamma_exact(k: int, max_k: int = 7) -> GammaPolySet:
    """Exact gamma_k via the signed permutation sum of convolved monomials.

    Permutations are collected by their (sorted) exponent multiset first:
    convolution is commutative, so every permutation with the same multiset
    contributes the same piecewise polynomial.  Cost still grows like k!
    through the collection loop plus one convolution chain per multiset; k is
    capped (default 7) to keep runtimes sane.
    """
    if not 1 <= k <= max_k:
        raise ValueError(f"k must be in 1..{max_k}")

    weights: dict = {}
    for perm in permutations(range(k)):
        key = tuple(sorted(i + perm[i] for i in range(k)))
        weights[key] = weights.get(key, 0) + _perm_sign(perm)

    chain_cache: dict = {(): None}

    def chain(exps: tuple) -> list:
        got = chain_cache.get(exps)
        if got is not None:
            return got
        mono = [Polynomial([Fraction(0)] * exps[-1] + [Fraction(1)])]
        if len(exps) == 1:
            res = mono
        else:
            res = _conv_local(chain(exps[:-1]), mono)
        chain_cache[exps] = res
        return res

    acc = [Polynomial() for _ in range(k)]
    for exps, w in sorted(weights.items()):
        if w == 0:
            continue
        pieces = chain(exps)
        for s in range(k):
            acc[s] = acc[s] + pieces[s].scale(w)

    norm = 1 / barnes_g_int(k + 1) ** 2
    local = [p.scale(norm) for p in acc]
    return GammaPolySet(k, _from_local(0, local))


def smoothness_order(g: GammaPolySet, j: int) -> int:
    """Largest n with derivatives 0..n of the two pieces at knot j agreeing exactly."""
    if not 0 < j < g.k:
        raise ValueError("need an interior knot, 0 < j < k")
    left = g.piece(j - 1)
    right = g.piece(j)
    cap = max(left.degree, right.degree, 0) + 1
    order = -1
    while order < cap:
        if left(j) != right(j):
            break
        order += 1
        left = left.derivative()
        right = right.derivative()
    return order


# --- Andreief's integration identity ----------------------------------------


def _frac_det(rows: list) -> Fraction:
    """Exact determinant by fraction Gaussian elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                for c2 in range(col, n):
                    m[r][c2] -= f * m[col][c2]
    return det


def andreief_check(N: int, A_degrees, B_degrees, r: Polynomial) -> bool:
    """Exact equality of the two sides of the N-fold integration identity

        (1/N!) int_[0,1]^N prod r(t_j) det(t_j^a_i) det(t_j^b_i) dt
            = det( int_0^1 r(t) t^(a_j + b_k) dt )

    for monomial families; the left side is expanded as the brute-force double
    permutation sum, the right as a moment determinant.
    """
    if not 2 <= N <= 4:
        raise ValueError("N must be in 2..4")
    A = list(A_degrees)
    B = list(B_degrees)
    if len(A) != N or len(B) != N:
        raise ValueError("degree lists must have length N")

    def moment(e: int) -> Fraction:
        return sum(
            (Fraction(c, e + i + 1) for i, c in enumerate(r.coeffs)), Fraction(0)
        )

    lhs = Fraction(0)
    for sg in permutations(range(N)):
        ssg = _perm_sign(sg)
        for tau in permutations(range(N)):
            term = Fraction(ssg * _perm_sign(tau))
            for jj in range(N):
                term *= moment(A[sg[jj]] + B[tau[jj]])
            lhs += term
    lhs /= math.factorial(N)

    rhs = _frac_det([[moment(A[a] + B[b]) for b in range(N)] for a in range(N)])
    return lhs == rhs


# --- serialization ----------------------------------------------------------


def gamma_to_json(g: GammaPolySet, indent=None) -> str:
    doc = {
        "k": g.k,
        "pieces": [
            {
                "interval": [j, j + 1],
                "coeffs_scaled": g.scaled_piece(j),
                "scale": "(k^2-1)!",
            }
            for j in range(g.k)
        ],
    }
    return json.dumps(doc, indent=indent, sort_keys=True)


def _poly_latex_scaled(coeffs: list) -> str:
    """Integer polynomial in c, descending powers, table style."""
    terms = []
    for power in range(len(coeffs) - 1, -1, -1):
        a = coeffs[power]
        if a == 0:
            continue
        sign = "-" if a < 0 else ("+" if terms else "")
        mag = abs(a)
        if power == 0:
            body = str(mag)
        else:
            cpow = "c" if power == 1 else f"c^{{{power}}}"
            body = cpow if mag == 1 else f"{mag} {cpow}"
        terms.append(sign + body)
    return "".join(terms) if terms else "0"


def gamma_to_latex(g: GammaPolySet) -> str:
    """Tabular with columns k, j, (k^2-1)! gamma_k(c), one row per piece."""
    lines = [
        r"\begin{tabular}{|c|c|l|}",
        r"\hline",
        r"$k$ & $j$ & $(k^2-1)!\gamma_k(c)$ \\",
        r"\hline",
    ]
    for j in range(g.k):
        kcell = str(g.k) if j == 0 else ""
        lines.append(rf"${kcell}$ & ${j}$ & ${_poly_latex_scaled(g.scaled_piece(j))}$ \\")
        lines.append(r"\hline")
    lines.append(r"\end{tabular}")
    return "\n".join(lines)
