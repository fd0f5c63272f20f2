"""Vectorised float64 interval kernels with outward rounding.

Every elementary operation is computed in round-to-nearest and then widened by one
ulp in the outward direction, which is enough because a correctly rounded IEEE
operation is off by at most half an ulp.  Long products are reduced pairwise and
renormalised with frexp, so the result is an exact (mantissa, exponent) pair with
no overflow or underflow.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from flint import arb

from .cf import QuadraticSurd
from .enclosure import float_down, float_up

_NINF = -np.inf
_PINF = np.inf


def down(x):
    return np.nextafter(x, _NINF)


def up(x):
    return np.nextafter(x, _PINF)


def iv_mul(alo, ahi, blo, bhi):
    p = np.stack([alo * blo, alo * bhi, ahi * blo, ahi * bhi])
    return down(p.min(axis=0)), up(p.max(axis=0))


def iv_sq(lo, hi):
    a2, b2 = lo * lo, hi * hi
    out_lo = np.where(lo >= 0, a2, np.where(hi <= 0, b2, 0.0))
    out_hi = np.maximum(a2, b2)
    return np.where(out_lo > 0, down(out_lo), 0.0), up(out_hi)


def iv_abs(lo, hi):
    out_lo = np.where(lo >= 0, lo, np.where(hi <= 0, -hi, 0.0))
    out_hi = np.maximum(np.abs(lo), np.abs(hi))
    return out_lo, out_hi


def surd_bracket(x: QuadraticSurd) -> tuple[float, float]:
    """Floats lo <= x <= hi."""
    if x.is_rational:
        f = x.to_fraction()
        return float_down(f), float_up(f)
    approx = x.to_fraction_approx(96)
    return float(down(float_down(approx))), float(up(float_up(approx)))


def frac_multiples_surd(x: QuadraticSurd, T: int):
    """Enclosures of {n x} for n = 1..T."""
    n = np.arange(1, T + 1, dtype=np.float64)
    xlo, xhi = surd_bracket(x)
    plo, phi = down(n * xlo), up(n * xhi)
    klo, khi = np.floor(plo), np.floor(phi)
    k = klo.copy()
    amb = np.nonzero(klo != khi)[0]
    for j in amb:
        k[j] = float((x * int(j + 1)).floor())
    flo = np.maximum(down(plo - k), 0.0)
    fhi = np.minimum(up(phi - k), 1.0)
    return flo, fhi


def frac_multiples_rational(p: int, q: int, T: int):
    """Enclosures of {n p/q} for n = 1..T (exact residues, rounded quotient)."""
    n = np.arange(1, T + 1, dtype=np.int64)
    if q < 2**52 and T * p < 2**62:
        m = (n * p) % q
    else:
        m = np.array([(int(j) * p) % q for j in n], dtype=np.float64)
    m = m.astype(np.float64)
    f = m / float(q)
    return np.maximum(down(f), 0.0), np.minimum(up(f), 1.0)


def prod_nonneg(lo, hi) -> tuple[arb, arb]:
    """Lower and upper bounds of a product of non-negative intervals, as exact arbs."""
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    if lo.size == 0:
        return arb(1), arb(1)
    if np.any(lo < 0) or not np.all(np.isfinite(hi)):
        raise ValueError("product kernel needs finite non-negative factors")
    elo = np.zeros(lo.shape, dtype=np.int64)
    ehi = np.zeros(hi.shape, dtype=np.int64)
    while lo.size > 1:
        if lo.size % 2:
            lo = np.append(lo, 1.0)
            hi = np.append(hi, 1.0)
            elo = np.append(elo, 0)
            ehi = np.append(ehi, 0)
        lo = down(lo[0::2] * lo[1::2])
        hi = up(hi[0::2] * hi[1::2])
        lo = np.maximum(lo, 0.0)
        elo = elo[0::2] + elo[1::2]
        ehi = ehi[0::2] + ehi[1::2]
        mlo, xlo = np.frexp(lo)
        mhi, xhi = np.frexp(hi)
        lo, hi = mlo, mhi
        elo = elo + xlo
        ehi = ehi + xhi
    lo_v = arb(float(lo[0])) * arb(2) ** int(elo[0]) if lo[0] > 0 else arb(0)
    hi_v = arb(float(hi[0])) * arb(2) ** int(ehi[0])
    return lo_v, hi_v


def interval_of(x) -> tuple[float, float]:
    """Float bracket of an Enclosure, surd, Fraction or int."""
    from .enclosure import Enclosure

    if isinstance(x, Enclosure):
        return x.lo, x.hi
    if isinstance(x, QuadraticSurd):
        return surd_bracket(x)
    f = Fraction(x)
    return float_down(f), float_up(f)


class ShiftedSquareProduct:
    """Bounds for prod_{n<=T} |(1 - c ({n x} - 1/2)/n)^2 - (eps + c/2)^2/n^2|.

    The eps-free half is precomputed once, so many evaluation points are cheap.
    """

    def __init__(self, c: tuple[float, float], flo, fhi):
        self.clo, self.chi = c
        self.T = len(flo)
        n = np.arange(1, self.T + 1, dtype=np.float64)
        self.n = n
        wlo, whi = down(flo - 0.5), up(fhi - 0.5)
        tlo, thi = iv_mul(np.full_like(wlo, self.clo), np.full_like(whi, self.chi), wlo, whi)
        tlo, thi = down(tlo / n), up(thi / n)
        ulo, uhi = down(1.0 - thi), up(1.0 - tlo)
        if np.any(ulo <= 0):
            raise ValueError("linear factor not certified positive")
        self.u2lo, self.u2hi = down(ulo * ulo), up(uhi * uhi)

    def factors(self, eps_lo: float, eps_hi: float, T: int | None = None):
        T = self.T if T is None else T
        if T > self.T:
            raise ValueError("kernel shorter than requested truncation")
        n = self.n[:T]
        elo = down(eps_lo + self.clo / 2)
        ehi = up(eps_hi + self.chi / 2)
        vlo = down(elo / n)
        vhi = up(ehi / n)
        v2lo, v2hi = iv_sq(vlo, vhi)
        glo, ghi = down(self.u2lo[:T] - v2hi), up(self.u2hi[:T] - v2lo)
        return iv_abs(glo, ghi)

    def product(self, eps_lo: float, eps_hi: float, T: int | None = None) -> tuple[arb, arb]:
        glo, ghi = self.factors(eps_lo, eps_hi, T)
        return prod_nonneg(glo, ghi)
