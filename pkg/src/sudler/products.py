"""Sudler products, perturbed products and the level-wise decomposition of P_N."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from flint import arb, fmpq

from .cf import (
    ContinuedFraction,
    QuadraticSurd,
    convergents,
    cf_value_finite,
    ostrowski,
    surd_from_periodic_cf,
)
from .enclosure import Enclosure, to_arb, working_precision
from .fastinterval import ShiftedSquareProduct, frac_multiples_rational, interval_of

# ---------------------------------------------------------------------------
# enclosing alpha and its tails
# ---------------------------------------------------------------------------


def _bracket_by_convergents(a0: int, digit: Callable[[int], int], bits: int) -> arb:
    """Enclose [a0; d(1), d(2), ...] between two consecutive convergents."""
    p0, q0, p1, q1 = 1, 0, a0, 1
    k = 0
    while q1 * q1 < 2 ** (bits + 8) or k < 2:
        k += 1
        a = digit(k)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
    lo, hi = sorted([Fraction(p0, q0), Fraction(p1, q1)])
    return arb(fmpq(lo.numerator, lo.denominator)).union(arb(fmpq(hi.numerator, hi.denominator)))


def alpha_arb(alpha) -> arb:
    """Ball containing alpha; alpha may be a cf, surd, Fraction, int or Enclosure."""
    from flint import ctx

    if isinstance(alpha, ContinuedFraction):
        if alpha.is_periodic:
            return to_arb(surd_from_periodic_cf(alpha))
        if alpha.is_finite:
            return to_arb(cf_value_finite(alpha.a0, alpha.preperiod))
        return _bracket_by_convergents(alpha.a0, alpha.digit, ctx.prec)
    return to_arb(alpha)


def tail_arb(cf: ContinuedFraction, m: int) -> arb:
    """[0; a_{m+1}, a_{m+2}, ...]."""
    from flint import ctx

    if cf.is_finite:
        rest = cf.preperiod[m:]
        return to_arb(cf_value_finite(0, rest)) if rest else arb(0)
    if cf.is_periodic:
        from .cf import shifted

        return to_arb(surd_from_periodic_cf(shifted(cf, m)))
    return _bracket_by_convergents(0, lambda k: cf.digit(m + k), ctx.prec)


def qdelta_arb(cf: ContinuedFraction, k: int) -> arb:
    """q_k * ||q_k alpha|| via 1/(a_{k+1} + tail + q_{k-1}/q_k)."""
    if cf.is_finite and k >= cf.length:
        return arb(0)
    c = convergents(cf, k + 1)
    back = fmpq(c.q[k - 1], c.q[k]) if k >= 1 else fmpq(0)
    return 1 / (cf.digit(k + 1) + tail_arb(cf, k + 1) + arb(back))


def delta_arb(cf: ContinuedFraction, k: int) -> arb:
    q = convergents(cf, k).q[k]
    return qdelta_arb(cf, k) / q


def _rational_value(alpha) -> Fraction | None:
    if isinstance(alpha, ContinuedFraction):
        return cf_value_finite(alpha.a0, alpha.preperiod) if alpha.is_finite else None
    if isinstance(alpha, (int, Fraction)):
        return Fraction(alpha)
    if isinstance(alpha, QuadraticSurd) and alpha.is_rational:
        return alpha.to_fraction()
    return None


# ---------------------------------------------------------------------------
# direct products
# ---------------------------------------------------------------------------


def _sin_product(x: arb, shift: arb, N: int) -> arb:
    """prod_{r=1}^N |sin(pi (r x + shift))|."""
    P = arb(1)
    y = shift
    for _ in range(N):
        y = y + x
        P *= y.sin_pi()
    return abs(P)


def sudler(alpha, N: int, precision: int | None = None) -> Enclosure:
    """Enclosure of prod_{r=1}^N 2|sin(pi r alpha)|."""
    if N < 0:
        raise ValueError("N must be non-negative")
    if N == 0:
        return Enclosure(arb(1))
    rat = _rational_value(alpha)
    if rat is not None and N >= rat.denominator:
        return Enclosure(arb(0))
    with working_precision(precision):
        if rat is not None:
            P = arb(1)
            for r in range(1, N + 1):
                P *= arb.sin_pi_fmpq(fmpq((r * rat.numerator) % rat.denominator, rat.denominator))
            return Enclosure(abs(P) * arb(2) ** N)
        x = alpha_arb(alpha)
        return Enclosure(_sin_product(x, arb(0), N) * arb(2) ** N)


def sudler_perturbed(cf: ContinuedFraction, n: int, eps, precision: int | None = None) -> Enclosure:
    """P_{q_n}(alpha, eps) = prod_{r<=q_n} 2|sin(pi(r alpha + (-1)^n eps / q_n))|."""
    q = convergents(cf, n).q[n]
    with working_precision(precision):
        x = alpha_arb(cf)
        shift = to_arb(eps) / q
        if n % 2:
            shift = -shift
        return Enclosure(_sin_product(x, shift, q) * arb(2) ** q)


# ---------------------------------------------------------------------------
# decomposition along the Ostrowski expansion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecompositionTerm:
    i: int
    c: int
    epsilon: Enclosure
    factor: Enclosure


@dataclass(frozen=True)
class KFactor:
    i: int
    value: Enclosure


def epsilon_ik(cf: ContinuedFraction, N, i: int, k: int, precision: int | None = None) -> Enclosure:
    """q_i (k delta_i + sum_{j=1}^{n-i} (-1)^j b_{i+j} delta_{i+j}).

    N may be an integer or an explicit digit vector (b_0, ..., b_n).
    """
    digits = ostrowski(cf, N).digits if isinstance(N, int) else tuple(N)
    n = len(digits) - 1
    if not 0 <= i <= n:
        raise ValueError("level index outside the expansion")
    with working_precision(precision):
        q = convergents(cf, n).q
        s = k * delta_arb(cf, i)
        for j in range(1, n - i + 1):
            b = digits[i + j]
            if b:
                term = b * delta_arb(cf, i + j)
                s = s - term if j % 2 else s + term
        return Enclosure(q[i] * s)


def decompose(cf: ContinuedFraction, N: int, precision: int | None = None):
    """Both groupings of P_N: (terms over (i, c), K-factors K_0..K_n).

    P_N = prod over terms = P_{q_n} * prod_i K_i.
    """
    if N < 1:
        raise ValueError("N must be positive")
    digits = ostrowski(cf, N).digits
    n = len(digits) - 1
    terms: list[DecompositionTerm] = []
    by_level: dict[tuple[int, int], Enclosure] = {}
    with working_precision(precision):
        for i in range(n, -1, -1):
            for c in range(digits[i]):
                eps = epsilon_ik(cf, digits, i, c)
                f = sudler_perturbed(cf, i, eps)
                terms.append(DecompositionTerm(i, c, eps, f))
                by_level[(i, c)] = f
        kf = []
        for i in range(n + 1):
            v = Enclosure(arb(1))
            for c in range(1, digits[i]):
                v = v * by_level[(i, c)]
            if i >= 1 and digits[i - 1] != 0:
                v = v * by_level[(i - 1, 0)]
            kf.append(KFactor(i, v))
    return terms, kf


def top_factor(terms: Sequence[DecompositionTerm]) -> Enclosure:
    n = max(t.i for t in terms)
    return next(t.factor for t in terms if t.i == n and t.c == 0)


def product_of(values) -> Enclosure:
    v = Enclosure(arb(1))
    for x in values:
        v = v * (x.factor if isinstance(x, DecompositionTerm) else x.value if isinstance(x, KFactor) else x)
    return v


# ---------------------------------------------------------------------------
# the H_k surrogate
# ---------------------------------------------------------------------------


def H_k(cf: ContinuedFraction, k: int, eps, precision: int | None = None) -> Enclosure:
    """2 pi |eps + q_k delta_k| prod_{n <= q_k/2} h_{n,k}(eps), with {n q_{k-1}/q_k} exact."""
    if k < 1:
        raise ValueError("k must be at least 1")
    c = convergents(cf, k)
    qk, qk1 = c.q[k], c.q[k - 1]
    with working_precision(precision):
        qd = qdelta_arb(cf, k)
        e = to_arb(eps)
        pref = 2 * arb.pi() * abs(e + qd)
        T = qk // 2
        if T == 0:
            return Enclosure(pref)
        flo, fhi = frac_multiples_rational(qk1, qk, T)
        qd_enc = Enclosure(qd)
        kern = ShiftedSquareProduct((qd_enc.lo, qd_enc.hi), flo, fhi)
        elo, ehi = interval_of(Enclosure(e))
        plo, phi = kern.product(elo, ehi)
        return Enclosure(pref * plo.union(phi))


def h_nk(cf: ContinuedFraction, k: int, n: int, eps) -> Enclosure:
    """Single factor h_{n,k}(eps) in ball arithmetic (reference implementation)."""
    c = convergents(cf, k)
    qk, qk1 = c.q[k], c.q[k - 1]
    qd = qdelta_arb(cf, k)
    f = arb(fmpq((n * qk1) % qk, qk))
    e = to_arb(eps)
    v = (1 - qd * (f - arb(fmpq(1, 2))) / n) ** 2 - (e + qd / 2) ** 2 / n**2
    return Enclosure(abs(v))


# ---------------------------------------------------------------------------
# vanishing subsequence demonstrator
# ---------------------------------------------------------------------------


def sampled_sup_probe(cf: ContinuedFraction, delta: float, samples: int = 9, max_q: int = 200_000):
    """Probe k -> max of P_{q_k}(alpha, eps) over an eps grid in (-delta, delta).

    Sampling only: the value is an estimate, not a certified supremum.
    """

    def probe(k: int) -> float | None:
        q = convergents(cf, k).q[k]
        if q > max_q:
            return None
        best = 0.0
        for j in range(samples):
            eps = Fraction(-1, 1) * Fraction(delta) + Fraction(2 * j + 1, 2 * samples) * 2 * Fraction(delta)
            best = max(best, sudler_perturbed(cf, k, eps, precision=64).hi)
        return best

    return probe


def vanishing_subsequence(cf, delta: float, c: float, probe, count: int, max_depth: int = 60, max_N: int = 2_000_000):
    """Greedy indices k_j with sup < c, q_{k_j} >= 2 q_{k_{j-1}} and delta_{k_j} < delta/(4 q_{k_{j-1}}).

    Returns a list of dicts with k_j, N_j and P_{N_j} (when N_j is small enough to evaluate).
    """
    if count == 0:
        return []
    out = []
    prev_q = None
    N = 0
    for k in range(1, max_depth + 1):
        if len(out) >= count:
            break
        cv = convergents(cf, k)
        qk = cv.q[k]
        if prev_q is not None:
            if qk < 2 * prev_q:
                continue
            dk = float(delta_arb(cf, k).mid())
            if not dk < delta / (4 * prev_q):
                continue
        s = probe(k)
        if s is None:
            break
        if s >= c:
            continue
        N += qk
        prev_q = qk
        value = sudler(cf, N, precision=96) if N <= max_N else None
        out.append({"k": k, "q": qk, "sup": s, "N": N, "P_N": value})
    if not out:
        raise ValueError("no qualifying indices")
    return out
