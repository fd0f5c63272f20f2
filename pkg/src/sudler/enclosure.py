"""Certified real enclosures backed by arb ball arithmetic."""
from __future__ import annotations

import contextlib
import math
import os
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction

from flint import arb, ctx, fmpq

from .cf import QuadraticSurd

DEFAULT_PRECISION = 128


def default_precision() -> int:
    raw = os.environ.get("SUDLER_PRECISION")
    if raw:
        bits = int(raw)
        if bits < 53:
            raise ValueError("SUDLER_PRECISION must be at least 53 bits")
        return bits
    return DEFAULT_PRECISION


ctx.prec = default_precision()


@contextlib.contextmanager
def working_precision(bits: int | None):
    """Temporarily set the arb working precision (bits)."""
    old = ctx.prec
    if bits is not None:
        ctx.prec = int(bits)
    try:
        yield
    finally:
        ctx.prec = old


def _arb_to_fraction(x: arb) -> Fraction:
    m, e = x.man_exp()
    m, e = int(m), int(e)
    return Fraction(m * 2**e) if e >= 0 else Fraction(m, 2**-e)


def float_down(x: Fraction) -> float:
    f = float(x)
    if Fraction(f) > x:
        f = math.nextafter(f, -math.inf)
    return f


def float_up(x: Fraction) -> float:
    f = float(x)
    if Fraction(f) < x:
        f = math.nextafter(f, math.inf)
    return f


def surd_to_arb(x: QuadraticSurd) -> arb:
    a, b, d, s = x.a, x.b, x.d, x.s
    if b == 0:
        return arb(fmpq(a, s))
    if a == 0 or (a > 0) == (b > 0):
        return (arb(a) + arb(b) * arb(d).sqrt()) / s
    n = a * a - b * b * d
    return arb(n) / ((arb(a) - arb(b) * arb(d).sqrt()) * s)


def to_arb(x) -> arb:
    if isinstance(x, Enclosure):
        return x.ball
    if isinstance(x, arb):
        return x
    if isinstance(x, QuadraticSurd):
        return surd_to_arb(x)
    if isinstance(x, Fraction):
        return arb(fmpq(x.numerator, x.denominator))
    if isinstance(x, int):
        return arb(x)
    if isinstance(x, float):
        return arb(x)
    raise TypeError(f"cannot enclose {type(x).__name__}")


def _dec(x: Fraction, digits: int, rounding) -> str:
    if x == 0:
        return "0"
    c = Context(prec=digits, rounding=rounding)
    v = c.divide(Decimal(x.numerator), Decimal(x.denominator))
    return format(v, "g") if abs(v.adjusted()) > 6 else format(v, "f")


@dataclass(frozen=True)
class Enclosure:
    """A real number known to lie in the ball `ball`."""

    ball: arb

    @classmethod
    def of(cls, x) -> "Enclosure":
        return x if isinstance(x, Enclosure) else cls(to_arb(x))

    @classmethod
    def from_bounds(cls, lo, hi) -> "Enclosure":
        a, b = to_arb(lo), to_arb(hi)
        return cls(a.union(b))

    @classmethod
    def exact(cls, x) -> "Enclosure":
        return cls.of(x)

    # -- endpoints -------------------------------------------------------
    @property
    def lo_exact(self) -> Fraction:
        return _arb_to_fraction(self.ball.lower())

    @property
    def hi_exact(self) -> Fraction:
        return _arb_to_fraction(self.ball.upper())

    @property
    def lo(self) -> float:
        return float_down(self.lo_exact)

    @property
    def hi(self) -> float:
        return float_up(self.hi_exact)

    @property
    def mid(self) -> float:
        return float(self.ball.mid())

    @property
    def width(self) -> Fraction:
        return self.hi_exact - self.lo_exact

    @property
    def log10width(self) -> float | None:
        w = self.width
        if w == 0:
            return None
        return math.log10(w.numerator) - math.log10(w.denominator)

    @property
    def is_exact(self) -> bool:
        return self.ball.is_exact()

    # -- certified comparisons -------------------------------------------
    def certainly_lt(self, other) -> bool:
        return bool(self.ball < to_arb(other))

    def certainly_gt(self, other) -> bool:
        return bool(self.ball > to_arb(other))

    def certainly_positive(self) -> bool:
        return bool(self.ball > 0)

    def contains(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            # exact test; a rounded ball of a non-dyadic rational would be too strict
            return self.lo_exact <= other <= self.hi_exact
        o = to_arb(other)
        return bool(self.ball.contains(o))

    def overlaps(self, other) -> bool:
        return bool(self.ball.overlaps(to_arb(other)))

    def lower_bound(self) -> "Enclosure":
        return Enclosure(self.ball.lower())

    def upper_bound(self) -> "Enclosure":
        return Enclosure(self.ball.upper())

    # -- arithmetic ------------------------------------------------------
    def __add__(self, o):
        return Enclosure(self.ball + to_arb(o))

    __radd__ = __add__

    def __sub__(self, o):
        return Enclosure(self.ball - to_arb(o))

    def __rsub__(self, o):
        return Enclosure(to_arb(o) - self.ball)

    def __mul__(self, o):
        return Enclosure(self.ball * to_arb(o))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return Enclosure(self.ball / to_arb(o))

    def __rtruediv__(self, o):
        return Enclosure(to_arb(o) / self.ball)

    def __neg__(self):
        return Enclosure(-self.ball)

    def __abs__(self):
        return Enclosure(abs(self.ball))

    def __pow__(self, k):
        return Enclosure(self.ball ** k)

    def log(self) -> "Enclosure":
        return Enclosure(self.ball.log())

    def union(self, o) -> "Enclosure":
        return Enclosure(self.ball.union(to_arb(o)))

    def intersection(self, o) -> "Enclosure":
        return Enclosure(self.ball.intersection(to_arb(o)))

    def __float__(self):
        return self.mid

    # -- output ----------------------------------------------------------
    def to_dict(self, digits: int = 20) -> dict:
        return {
            "lo": _dec(self.lo_exact, digits, ROUND_FLOOR),
            "hi": _dec(self.hi_exact, digits, ROUND_CEILING),
            "log10width": None if self.log10width is None else round(self.log10width, 3),
        }

    def __repr__(self):
        d = self.to_dict(12)
        return f"Enclosure[{d['lo']}, {d['hi']}]"


def pi() -> Enclosure:
    return Enclosure(arb.pi())


def enclose(x) -> Enclosure:
    return Enclosure.of(x)
