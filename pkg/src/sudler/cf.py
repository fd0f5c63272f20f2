"""Exact continued fractions, quadratic surds, convergents and Ostrowski digits."""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

Number = int | Fraction


# ---------------------------------------------------------------------------
# quadratic surds
# ---------------------------------------------------------------------------

def _squarefree_split(n: int) -> tuple[int, int]:
    """Return (f, d) with n = f*f*d and d square-free."""
    f, d = 1, n
    p = 2
    while p * p <= d:
        while d % (p * p) == 0:
            d //= p * p
            f *= p
        p += 1 if p == 2 else 2
    return f, d


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


@dataclass(frozen=True)
class QuadraticSurd:
    """The number (a + b*sqrt(d)) / s, kept in canonical form."""

    a: int
    b: int
    d: int
    s: int = 1

    def __post_init__(self):
        a, b, d, s = self.a, self.b, self.d, self.s
        if s == 0:
            raise ZeroDivisionError("surd with zero denominator")
        if d <= 0:
            raise ValueError("radicand must be positive")
        f, d2 = _squarefree_split(d)
        b *= f
        if d2 == 1:
            # really rational; keep a neutral radicand so equality works
            a, b, d2 = a + b, 0, 1
        if s < 0:
            a, b, s = -a, -b, -s
        g = math.gcd(math.gcd(a, b), s)
        if g > 1:
            a, b, s = a // g, b // g, s // g
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d2)
        object.__setattr__(self, "s", s)

    # -- construction helpers ------------------------------------------
    @classmethod
    def rational(cls, x: Number, d: int = 1) -> "QuadraticSurd":
        x = Fraction(x)
        return cls(x.numerator, 0, d, x.denominator)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b:
            raise ValueError("irrational surd")
        return Fraction(self.a, self.s)

    def _coerce(self, other) -> "QuadraticSurd":
        if isinstance(other, QuadraticSurd):
            if other.b and self.b and other.d != self.d:
                raise ValueError("surds live in different quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticSurd.rational(other, self.d)
        return NotImplemented

    def _field_d(self, o: "QuadraticSurd") -> int:
        return self.d if self.b else o.d

    # -- arithmetic ------------------------------------------------------
    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b, self.d, self.s)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self._field_d(o)
        return QuadraticSurd(self.a * o.s + o.a * self.s, self.b * o.s + o.b * self.s, d, self.s * o.s)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self._field_d(o)
        a = self.a * o.a + self.b * o.b * d
        b = self.a * o.b + self.b * o.a
        return QuadraticSurd(a, b, d, self.s * o.s)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticSurd":
        return QuadraticSurd(self.a, -self.b, self.d, self.s)

    def norm(self) -> Fraction:
        return Fraction(self.a * self.a - self.b * self.b * self.d, self.s * self.s)

    def inverse(self) -> "QuadraticSurd":
        n = self.a * self.a - self.b * self.b * self.d
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        # 1/x = s*conj / (a^2 - b^2 d)
        return QuadraticSurd(self.s * self.a, -self.s * self.b, self.d, n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    # -- exact sign, comparison, floor -----------------------------------
    def sign(self) -> int:
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        diff = a * a - b * b * self.d
        return sa if diff > 0 else sb

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare surd with {type(other).__name__}")
        return (self - o).sign()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QuadraticSurd)):
            try:
                return self._cmp(other) == 0
            except ValueError:
                return False
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.s))
        return hash((self.a, self.b, self.d, self.s))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __floor__(self) -> int:
        # bracket b*sqrt(d) by integer square roots, then fix up exactly
        t = math.isqrt(self.b * self.b * self.d)
        if self.b < 0:
            t = -t - 1
        k = (self.a + t) // self.s
        while self < k:
            k -= 1
        while self >= k + 1:
            k += 1
        return k

    def floor(self) -> int:
        return math.floor(self)

    def frac(self) -> "QuadraticSurd":
        return self - self.floor()

    def to_fraction_approx(self, bits: int = 80) -> Fraction:
        """Rational within relative 2**-bits of the value (no cancellation)."""
        a, b, d, s = self.a, self.b, self.d, self.s
        if b == 0:
            return Fraction(a, s)
        if a == 0 or (a > 0) == (b > 0):
            shift = 2 * (bits + max(0, s.bit_length() - (b * b * d).bit_length() // 2) + 4)
            r = math.isqrt(b * b * d << shift)
            r = r if b > 0 else -r
            return Fraction((a << (shift // 2)) + r, s << (shift // 2))
        # opposite signs: use (a^2 - b^2 d) / (s (a - b sqrt d))
        n = a * a - b * b * d
        den = QuadraticSurd(a, -b, d, 1).to_fraction_approx(bits) * s
        return Fraction(n) / den

    def __float__(self):
        return float(self.to_fraction_approx(64))

    def __repr__(self):
        if self.b == 0:
            return f"QuadraticSurd({self.a}/{self.s})"
        return f"QuadraticSurd(({self.a} + {self.b}*sqrt({self.d}))/{self.s})"

    def __str__(self):
        if self.b == 0:
            return str(Fraction(self.a, self.s))
        sgn = "+" if self.b > 0 else "-"
        bb = abs(self.b)
        rad = f"sqrt({self.d})" if bb == 1 else f"{bb}*sqrt({self.d})"
        num = f"{self.a} {sgn} {rad}" if self.a else (rad if self.b > 0 else f"-{rad}")
        return f"({num})/{self.s}" if self.s != 1 else num


def floor_of(x) -> int:
    if isinstance(x, QuadraticSurd):
        return x.floor()
    return math.floor(x)


# ---------------------------------------------------------------------------
# continued fractions
# ---------------------------------------------------------------------------

def _minimal_period(p: Sequence[int]) -> tuple[int, ...]:
    n = len(p)
    for k in range(1, n + 1):
        if n % k == 0 and tuple(p[:k]) * (n // k) == tuple(p):
            return tuple(p[:k])
    return tuple(p)


def _normalise(pre: tuple[int, ...], per: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    per = _minimal_period(per)
    # roll the period backwards into the preperiod where possible
    while pre and per and pre[-1] == per[-1]:
        pre = pre[:-1]
        per = (per[-1],) + per[:-1]
    return pre, per


@dataclass(frozen=True)
class ContinuedFraction:
    """[a0; preperiod, (period)]; an empty period means a finite expansion.

    A digit stream (index -> a_k for k >= 1) with a declared bound replaces both
    digit lists for non-periodic badly approximable inputs.
    """

    a0: int = 0
    preperiod: tuple[int, ...] = ()
    period: tuple[int, ...] = ()
    stream: Callable[[int], int] | None = field(default=None, compare=False)
    a_max: int | None = None

    def __post_init__(self):
        pre = tuple(int(x) for x in self.preperiod)
        per = tuple(int(x) for x in self.period)
        if any(x < 1 for x in pre + per):
            raise ValueError("partial quotients must be positive")
        if self.stream is None:
            if per:
                pre, per = _normalise(pre, per)
            elif pre and pre[-1] == 1:
                # [..., x, 1] == [..., x+1]
                if len(pre) > 1:
                    pre = pre[:-2] + (pre[-2] + 1,)
                else:
                    pre = ()
                    object.__setattr__(self, "a0", self.a0 + 1)
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    # -- construction ----------------------------------------------------
    @classmethod
    def periodic(cls, period: Iterable[int], preperiod: Iterable[int] = (), a0: int = 0):
        return cls(a0, tuple(preperiod), tuple(period))

    @classmethod
    def from_stream(cls, digit: Callable[[int], int], a_max: int, a0: int = 0):
        return cls(a0, (), (), stream=digit, a_max=a_max)

    @classmethod
    def from_rational(cls, x: Number) -> "ContinuedFraction":
        x = Fraction(x)
        a0 = math.floor(x)
        x -= a0
        digits = []
        while x:
            x = 1 / x
            k = math.floor(x)
            digits.append(k)
            x -= k
        return cls(a0, tuple(digits))

    # -- queries ---------------------------------------------------------
    @property
    def is_finite(self) -> bool:
        return self.stream is None and not self.period

    @property
    def is_periodic(self) -> bool:
        return self.stream is None and bool(self.period)

    @property
    def is_stream(self) -> bool:
        return self.stream is not None

    @property
    def ell(self) -> int:
        return len(self.period)

    @property
    def length(self) -> int | None:
        """Index of the last digit of a finite expansion; None otherwise."""
        return len(self.preperiod) if self.is_finite else None

    def digit(self, k: int) -> int:
        """Partial quotient a_k (a_0 for k = 0)."""
        if k == 0:
            return self.a0
        if k < 0:
            raise IndexError("negative digit index")
        if self.stream is not None:
            d = int(self.stream(k))
            if d < 1 or (self.a_max is not None and d > self.a_max):
                raise ValueError(f"stream digit a_{k}={d} outside [1, {self.a_max}]")
            return d
        p = len(self.preperiod)
        if k <= p:
            return self.preperiod[k - 1]
        if not self.period:
            raise IndexError("index beyond expansion")
        return self.period[(k - p - 1) % len(self.period)]

    def digits(self, n: int) -> list[int]:
        """a_1 .. a_n."""
        return [self.digit(k) for k in range(1, n + 1)]

    def periodic_digit(self, j: int) -> int:
        """Digit of the periodic regime at any large index congruent to j mod ell."""
        if not self.is_periodic:
            raise ValueError("periodic continued fraction required")
        p, ell = len(self.preperiod), self.ell
        return self.digit(p + 1 + (j - p - 1) % ell)

    @property
    def max_period_digit(self) -> int:
        if self.is_stream:
            return int(self.a_max)
        return max(self.period) if self.period else max(self.preperiod, default=1)

    def __str__(self):
        return format_cf(self)


_CF_RE = re.compile(r"^\[\s*(-?\d+)\s*(?:;(.*))?\]$")


def parse_cf(text: str) -> ContinuedFraction:
    """Parse `[a0;a1,...,ap,(b1,...,bl)]`, or a plain rational such as `1/2`."""
    t = text.strip().replace(" ", "")
    m = _CF_RE.match(t)
    if not m:
        try:
            return ContinuedFraction.from_rational(Fraction(t))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"cannot parse continued fraction literal {text!r}") from None
    a0 = int(m.group(1))
    body = m.group(2) or ""
    pre: list[int] = []
    per: list[int] = []
    if "(" in body:
        head, _, rest = body.partition("(")
        if not rest.endswith(")"):
            raise ValueError(f"unterminated period in {text!r}")
        per = [int(x) for x in rest[:-1].split(",") if x]
        head = head.rstrip(",")
        pre = [int(x) for x in head.split(",") if x]
        if not per:
            raise ValueError("empty period")
    elif body:
        pre = [int(x) for x in body.split(",") if x]
    return ContinuedFraction(a0, tuple(pre), tuple(per))


def format_cf(cf: ContinuedFraction) -> str:
    if cf.is_stream:
        return f"[{cf.a0};<stream a_max={cf.a_max}>]"
    parts = [str(x) for x in cf.preperiod]
    if cf.period:
        parts.append("(" + ",".join(str(x) for x in cf.period) + ")")
    return f"[{cf.a0};{','.join(parts)}]" if parts else f"[{cf.a0}]"


def cf_value_finite(a0: int, digits: Sequence[int]) -> Fraction:
    x = Fraction(0)
    for d in reversed(digits):
        x = 1 / (d + x)
    return a0 + x


# ---------------------------------------------------------------------------
# convergents
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Convergents:
    p: tuple[int, ...]
    q: tuple[int, ...]

    def __len__(self):
        return len(self.q)

    def __getitem__(self, k):
        return self.p[k], self.q[k]

    def ratio(self, k: int) -> Fraction:
        return Fraction(self.p[k], self.q[k])


@lru_cache(maxsize=256)
def _convergents_cached(cf: ContinuedFraction, k: int) -> Convergents:
    if cf.is_finite and k > cf.length:
        raise IndexError("index beyond expansion")
    a0 = cf.a0
    p = [a0]
    q = [1]
    if k >= 1:
        a1 = cf.digit(1)
        p.append(a1 * a0 + 1)
        q.append(a1)
    for j in range(2, k + 1):
        a = cf.digit(j)
        p.append(a * p[-1] + p[-2])
        q.append(a * q[-1] + q[-2])
    return Convergents(tuple(p), tuple(q))


def convergents(cf: ContinuedFraction, k: int) -> Convergents:
    """(p_i, q_i) for i <= k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if cf.is_stream:
        return _convergents_cached.__wrapped__(cf, k)
    return _convergents_cached(cf, k)


def index_with_q_above(cf: ContinuedFraction, N: int) -> int:
    """Smallest k with q_k > N (or the length of a finite expansion)."""
    k = 1
    while True:
        if cf.is_finite and k > cf.length:
            return cf.length
        c = convergents(cf, k)
        if c.q[k] > N:
            return k
        k = max(k + 1, int(k * 1.5))


# ---------------------------------------------------------------------------
# surd <-> periodic cf, Gauss map
# ---------------------------------------------------------------------------

def _recursion(a0: int, digits: Sequence[int]) -> tuple[list[int], list[int]]:
    p, q = [1, a0], [0, 1]
    for a in digits:
        p.append(a * p[-1] + p[-2])
        q.append(a * q[-1] + q[-2])
    return p, q


def _mobius(P: int, Pp: int, Q: int, Qp: int, w: QuadraticSurd) -> QuadraticSurd:
    return (w * P + Pp) / (w * Q + Qp)


def surd_from_periodic_cf(cf: ContinuedFraction) -> QuadraticSurd:
    if not cf.is_periodic:
        raise ValueError("periodic continued fraction required")
    per = cf.period
    # w = [b1; b2, ..., bl, w] is purely periodic and > 1
    p, q = _recursion(per[0], per[1:])
    P, Q, Pp, Qp = p[-1], q[-1], p[-2], q[-2]
    # Q w^2 + (Qp - P) w - Pp = 0, positive root
    disc = (Qp - P) ** 2 + 4 * Q * Pp
    w = QuadraticSurd(P - Qp, 1, disc, 2 * Q)
    if cf.preperiod:
        p, q = _recursion(cf.a0, cf.preperiod)
        x = _mobius(p[-1], p[-2], q[-1], q[-2], w)
    else:
        x = cf.a0 + w.inverse()
    return x


def cf_from_surd(x: QuadraticSurd, n: int) -> list[int]:
    """a_0, a_1, ..., a_n of an irrational surd, by exact floors."""
    if x.is_rational:
        raise ValueError("finite expansion")
    out = []
    for _ in range(n + 1):
        k = x.floor()
        out.append(k)
        x = (x - k).inverse()
    return out


def periodic_cf_from_surd(x: QuadraticSurd, max_steps: int = 10_000) -> ContinuedFraction:
    """Recover [a0; pre, (period)] by detecting the first repeated complete quotient."""
    if x.is_rational:
        raise ValueError("finite expansion")
    seen: dict[QuadraticSurd, int] = {}
    digits = []
    a0 = x.floor()
    y = (x - a0).inverse()
    for i in range(max_steps):
        if y in seen:
            j = seen[y]
            return ContinuedFraction(a0, tuple(digits[:j]), tuple(digits[j:]))
        seen[y] = i
        k = y.floor()
        digits.append(k)
        y = (y - k).inverse()
    raise RuntimeError("period not found")


def gauss_map(x):
    """{1/x} on [0, 1], exact for rationals and surds."""
    if x == 0:
        return x * 0
    if x < 0 or x > 1:
        raise ValueError("Gauss map domain is [0, 1]")
    y = 1 / x
    return y - floor_of(y)


def to_surd(x) -> QuadraticSurd:
    if isinstance(x, QuadraticSurd):
        return x
    if isinstance(x, ContinuedFraction):
        return surd_from_periodic_cf(x)
    return QuadraticSurd.rational(x)


# ---------------------------------------------------------------------------
# period-rotation constants
# ---------------------------------------------------------------------------

def _purely_periodic_surd(digits: Sequence[int]) -> QuadraticSurd:
    return surd_from_periodic_cf(ContinuedFraction(0, (), tuple(digits)))


def rotation_surds(cf: ContinuedFraction, r: int) -> tuple[QuadraticSurd, QuadraticSurd]:
    """(forward tail, backward tail) at residue r.

    forward = [0; a_{r+1}, a_{r+2}, ...]   (the r-th Gauss iterate of the tail)
    backward = [0; a_r, a_{r-1}, ...]      (limit of q_{k-1}/q_k along k = r mod ell)
    """
    if not cf.is_periodic:
        raise ValueError("rotation constants need a periodic continued fraction")
    ell = cf.ell
    fwd = [cf.periodic_digit(r + 1 + j) for j in range(ell)]
    back = [cf.periodic_digit(r - j) for j in range(ell)]
    return _purely_periodic_surd(fwd), _purely_periodic_surd(back)


def limit_constant(cf: ContinuedFraction, r: int) -> QuadraticSurd:
    """C(r) = lim q_k delta_k along k = r mod ell."""
    if not cf.is_periodic:
        raise ValueError("limit constant needs a periodic continued fraction")
    fwd_next, _ = rotation_surds(cf, r + 1)
    _, back = rotation_surds(cf, r)
    return (cf.periodic_digit(r + 1) + fwd_next + back).inverse()


# ---------------------------------------------------------------------------
# delta_k
# ---------------------------------------------------------------------------

def delta_exact(cf: ContinuedFraction, k: int):
    """||q_k alpha|| exactly: a Fraction for finite, a surd for periodic inputs."""
    c = convergents(cf, k)
    p, q = c.p[k], c.q[k]
    if cf.is_finite:
        x = cf_value_finite(cf.a0, cf.preperiod)
        v = q * x - p
        return abs(v)
    if not cf.is_periodic:
        raise ValueError("exact delta needs a finite or periodic expansion")
    x = surd_from_periodic_cf(cf)
    v = x * q - p
    return v if v.sign() >= 0 else -v


def qdelta_exact(cf: ContinuedFraction, k: int) -> QuadraticSurd:
    """q_k delta_k = 1/(a_{k+1} + [0;a_{k+2},...] + q_{k-1}/q_k) for periodic cf."""
    if not cf.is_periodic:
        raise ValueError("periodic continued fraction required")
    c = convergents(cf, max(k, 1))
    back = Fraction(c.q[k - 1], c.q[k]) if k >= 1 else Fraction(0)
    tail = surd_from_periodic_cf(_shift(cf, k + 1))
    return (cf.digit(k + 1) + tail + back).inverse()


def _shift(cf: ContinuedFraction, m: int) -> ContinuedFraction:
    """[0; a_{m+1}, a_{m+2}, ...] as a periodic cf."""
    p = len(cf.preperiod)
    if m < p:
        return ContinuedFraction(0, cf.preperiod[m:], cf.period)
    j = (m - p) % cf.ell
    return ContinuedFraction(0, (), cf.period[j:] + cf.period[:j])


def shifted(cf: ContinuedFraction, m: int) -> ContinuedFraction:
    """The m-th Gauss iterate of the fractional part, as a continued fraction."""
    if cf.is_stream:
        base = cf.stream
        return ContinuedFraction.from_stream(lambda k: base(k + m), cf.a_max)
    if cf.is_finite:
        return ContinuedFraction(0, cf.preperiod[m:])
    return _shift(cf, m)


# ---------------------------------------------------------------------------
# Ostrowski expansion and admissibility
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OstrowskiDigits:
    digits: tuple[int, ...]
    cf: ContinuedFraction = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.digits) - 1

    def value(self) -> int:
        c = convergents(self.cf, max(self.n, 0))
        return sum(b * q for b, q in zip(self.digits, c.q))

    def __iter__(self):
        return iter(self.digits)

    def __len__(self):
        return len(self.digits)

    def __getitem__(self, i):
        return self.digits[i]


def ostrowski(cf: ContinuedFraction, N: int) -> OstrowskiDigits:
    """Greedy top-down expansion N = sum b_i q_i."""
    if N < 0:
        raise ValueError("N must be non-negative")
    if N == 0:
        return OstrowskiDigits((0,), cf)
    if cf.is_finite:
        den = convergents(cf, cf.length).q[-1]
        if N >= den:
            raise ValueError(f"N={N} not below the denominator {den} of a rational alpha")
    k = index_with_q_above(cf, N)
    q = convergents(cf, k).q
    n = max(i for i in range(k + 1) if q[i] <= N)
    out = [0] * (n + 1)
    rem = N
    for i in range(n, -1, -1):
        out[i], rem = divmod(rem, q[i])
    assert rem == 0
    return OstrowskiDigits(tuple(out), cf)


def is_legal_ostrowski(cf: ContinuedFraction, digits: Sequence[int]) -> bool:
    if not digits:
        return True
    if digits[0] < 0 or digits[0] >= cf.digit(1):
        return False
    for i in range(1, len(digits)):
        b = digits[i]
        a = cf.digit(i + 1)
        if b < 0 or b > a:
            return False
        if b == a and digits[i - 1] != 0:
            return False
    return True


def is_admissible(digits: Sequence[int], r: int, cf: ContinuedFraction) -> bool:
    """Local Ostrowski legality of a digit block whose second entry sits at a level i = r (mod ell).

    The block (b_{i-1}, b_i, b_{i+1}, ...) is admissible when every digit at level p
    is at most a_{p+1}, and a maximal digit is preceded by a zero inside the block.
    """
    if not cf.is_periodic:
        raise ValueError("admissibility is defined for periodic continued fractions")
    start = r - 1
    prev = None
    for j, b in enumerate(digits):
        bound = cf.periodic_digit(start + j + 1)
        if b < 0 or b > bound:
            return False
        if b == bound and prev not in (None, 0):
            return False
        prev = b
    return True


def admissible_tuples(cf: ContinuedFraction, r: int, length: int) -> list[tuple[int, ...]]:
    """All admissible blocks of the given length for residue r, in lexicographic order."""
    start = r - 1
    bounds = [cf.periodic_digit(start + j + 1) for j in range(length)]
    out = []

    def rec(prefix: list[int]):
        j = len(prefix)
        if j == length:
            out.append(tuple(prefix))
            return
        top = bounds[j]
        for b in range(top + 1):
            if b == top and j > 0 and prefix[-1] != 0:
                continue
            prefix.append(b)
            rec(prefix)
            prefix.pop()

    rec([])
    return out


def brute_force_ostrowski(cf: ContinuedFraction, N: int) -> list[tuple[int, ...]]:
    """Every legal digit vector summing to N; slow, for tests."""
    if N == 0:
        return [(0,)]
    k = index_with_q_above(cf, N)
    q = convergents(cf, k).q
    n = max(i for i in range(k + 1) if q[i] <= N)
    ranges = [range(0, cf.digit(i + 1) + 1) for i in range(n + 1)]
    hits = []
    for combo in itertools.product(*ranges):
        if combo[-1] == 0:
            continue
        if sum(b * qq for b, qq in zip(combo, q)) == N and is_legal_ostrowski(cf, combo):
            hits.append(combo)
    return hits
