"""Limiting perturbations, lower-approximation functions and period-wise certificates.

For a purely periodic alpha of period length ell, a K-factor K_i(N) is bounded below by
Pi_[i](b_{i-1}, ..., b_{i+ell}), a product of minima of G over small eps-windows.  The
certificates below enumerate every admissible digit block and bound these products.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from flint import arb

from .cf import (
    ContinuedFraction,
    QuadraticSurd,
    admissible_tuples,
    convergents,
    is_admissible,
    limit_constant,
    parse_cf,
    rotation_surds,
)
from .enclosure import Enclosure, to_arb
from .limit import (
    G_bound_on_interval,
    G_enclosure,
    LimitFunctionSpec,
    NotZeroFree,
    TooSmallT,
    certify_zero_free,
    theoremB_check,
)
from .products import epsilon_ik, sudler_perturbed
from .report import VerificationReport

T_START = 1_000
T_LIMIT = 1_000_000

# ---------------------------------------------------------------------------
# digit streams and tail coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DigitStream:
    """Digits beta_1, beta_2, ... following some level; periodic or given by a callable."""

    head: tuple[int, ...] = ()
    period: tuple[int, ...] = ()
    fn: Callable[[int], int] | None = field(default=None, compare=False)

    @classmethod
    def constant(cls, d: int) -> "DigitStream":
        return cls((), (d,))

    @classmethod
    def finite(cls, digits: Iterable[int]) -> "DigitStream":
        return cls(tuple(digits), ())

    def __call__(self, j: int) -> int:
        if j < 1:
            raise IndexError("stream digits start at 1")
        if self.fn is not None:
            return int(self.fn(j))
        if j <= len(self.head):
            return self.head[j - 1]
        if not self.period:
            return 0
        return self.period[(j - len(self.head) - 1) % len(self.period)]

    @property
    def is_finite(self) -> bool:
        return self.fn is None and not self.period

    def prefix(self, n: int) -> tuple[int, ...]:
        return tuple(self(j) for j in range(1, n + 1))


@dataclass(frozen=True)
class TailCoefficients:
    """c_0 = C(r) and c_j = C([r+j]) * prod_{n=1}^{j} sigma[r+n] for j = 1..ell."""

    r: int
    c: tuple[QuadraticSurd, ...]
    alpha_pi: QuadraticSurd

    def coefficient(self, j: int) -> QuadraticSurd:
        """c_j for any j >= 1, using c_{j+ell} = c_j * alpha_pi."""
        ell = len(self.c) - 1
        q, m = divmod(j - 1, ell)
        v = self.c[m + 1]
        for _ in range(q):
            v = v * self.alpha_pi
        return v


def _sigma(cf: ContinuedFraction, r: int) -> QuadraticSurd:
    return rotation_surds(cf, r % cf.ell)[1]


def _require_periodic(cf: ContinuedFraction):
    if not cf.is_periodic or cf.preperiod:
        raise ValueError("a purely periodic continued fraction is required")


def tail_coefficients(cf: ContinuedFraction, r: int) -> TailCoefficients:
    _require_periodic(cf)
    ell = cf.ell
    r %= ell
    alpha_pi = QuadraticSurd.rational(1)
    for s in range(ell):
        alpha_pi = alpha_pi * _sigma(cf, s)
    cs = [limit_constant(cf, r)]
    prod = QuadraticSurd.rational(1)
    for j in range(1, ell + 1):
        prod = prod * _sigma(cf, r + j)
        cs.append(limit_constant(cf, r + j) * prod)
    return TailCoefficients(r, tuple(cs), alpha_pi)


def eps_prime(cf: ContinuedFraction, r: int, k: int, tail, J: int = 200) -> Enclosure:
    """k C(r) + sum_j (-1)^j beta_j c_j over the stream, with a certified bound past J."""
    tc = tail_coefficients(cf, r)
    stream = tail if isinstance(tail, DigitStream) else (
        DigitStream(fn=tail) if callable(tail) else DigitStream.finite(tail))
    s = k * to_arb(tc.c[0])
    ell = cf.ell
    terms = J
    if stream.is_finite:
        terms = len(stream.head)
    coeffs = [to_arb(c) for c in tc.c[1:]]
    pi_a = to_arb(tc.alpha_pi)
    scale = arb(1)
    for j in range(1, terms + 1):
        m = (j - 1) % ell
        if j > 1 and m == 0:
            scale *= pi_a
        b = stream(j)
        if b:
            t = b * coeffs[m] * scale
            s = s - t if j % 2 else s + t
    if not stream.is_finite:
        # |c_j| <= max_m c_m * alpha_pi^{floor((j-1)/ell)}, digits <= max period digit
        first = terms + 1
        q0 = (first - 1) // ell
        bound = cf.max_period_digit * max(coeffs, key=lambda x: x.mid()) * ell
        bound = bound * pi_a**q0 / (1 - pi_a)
        s = s + arb(0, 1) * bound.upper()
    return Enclosure(s)


def eps_prime_periodic(cf: ContinuedFraction, r: int, k: int, pattern: Sequence[int]) -> QuadraticSurd:
    """Exact value of eps' when the stream repeats `pattern` from beta_1 on."""
    tc = tail_coefficients(cf, r)
    ell, m = cf.ell, len(pattern)
    B = math.lcm(ell, m, 2)
    block = QuadraticSurd.rational(0)
    for j in range(1, B + 1):
        b = pattern[(j - 1) % m]
        if b:
            t = tc.coefficient(j) * b
            block = block - t if j % 2 else block + t
    rho = QuadraticSurd.rational(1)
    for _ in range(B // ell):
        rho = rho * tc.alpha_pi
    return tc.c[0] * k + block / (1 - rho)


def eps_prime_closed_exact(cf: ContinuedFraction, r: int, k: int, head: Sequence[int]) -> QuadraticSurd:
    """k c_0 - a c_1 + b c_2 (- c c_3) for the ell leading digits of the tail."""
    tc = tail_coefficients(cf, r)
    if len(head) != cf.ell:
        raise ValueError(f"need {cf.ell} head digits")
    v = tc.c[0] * k
    for j, b in enumerate(head, start=1):
        if b:
            v = v - tc.c[j] * b if j % 2 else v + tc.c[j] * b
    return v


def eps_prime_closed(cf: ContinuedFraction, r: int, k: int, *head: int) -> Enclosure:
    return Enclosure.of(eps_prime_closed_exact(cf, r, k, head))


def perturbation_window(cf: ContinuedFraction, r: int) -> tuple[QuadraticSurd, QuadraticSurd]:
    """(L_r, U_r): how far the full tail can move eps' away from its closed head form."""
    _require_periodic(cf)
    ell = cf.ell
    tc = tail_coefficients(cf, r)
    p = tc.alpha_pi
    aK = max(cf.period)
    c = tc.c
    if ell == 2:
        f = p * aK / (1 - p)
        return -(c[1] * f), c[2] * f
    if ell == 3:
        f = p * aK / (1 - p * p)
        return -(f * (p * c[1] + c[2] + p * c[3])), f * (c[1] + p * c[2] + c[3])
    raise ValueError(f"period length {ell} unsupported: only 2 and 3 are implemented")


# ---------------------------------------------------------------------------
# lower-approximation functions
# ---------------------------------------------------------------------------


class PiTable:
    """Cached G-tilde and Pi_r bounds for one purely periodic alpha (ell = 2 or 3)."""

    def __init__(self, cf: ContinuedFraction, T0: int = T_START, T_max: int = T_LIMIT):
        _require_periodic(cf)
        self.cf = cf
        self.ell = cf.ell
        self.T0, self.T_max = T0, T_max
        self.specs = [LimitFunctionSpec(cf, r) for r in range(self.ell)]
        self.windows = [perturbation_window(cf, r) for r in range(self.ell)]
        self._G: dict = {}
        self._gt: dict = {}
        self._zero_free: dict = {}
        self.zero_hits: set = set()
        self.frozen: dict = {}

    # --- G-tilde ---
    def _G_at(self, r: int, eps: QuadraticSurd, T: int):
        key = (r, eps, T)
        g = self._G.get(key)
        if g is None:
            g = G_enclosure(self.specs[r], eps, T)
            self._G[key] = g
        return g

    def window(self, r: int, k: int, head: Sequence[int]) -> tuple[QuadraticSurd, QuadraticSurd]:
        e = eps_prime_closed_exact(self.cf, r, k, head)
        L, U = self.windows[r]
        return e + L, e + U

    def g_tilde(self, r: int, k: int, head: Sequence[int], T: int) -> Enclosure:
        """[min of the endpoint lower bounds, min of the endpoint upper bounds]."""
        r %= self.ell
        head = tuple(head)
        key = (r, k, head, T)
        v = self._gt.get(key)
        if v is not None:
            return v
        a, b = self.window(r, k, head)
        zk = (r, k, head)
        if zk not in self._zero_free:
            try:
                certify_zero_free(self.specs[r], a, b)
                self._zero_free[zk] = True
            except NotZeroFree:
                self._zero_free[zk] = False
                self.zero_hits.add(zk)
        if not self._zero_free[zk]:
            v = Enclosure.from_bounds(arb(0), arb(0))
        else:
            ga, gb = self._G_at(r, a, T), self._G_at(r, b, T)
            lo = min(ga.lo.ball.lower(), gb.lo.ball.lower(), key=lambda x: x.mid())
            hi = min(ga.hi.ball.upper(), gb.hi.ball.upper(), key=lambda x: x.mid())
            v = Enclosure.from_bounds(lo, hi)
        self._gt[key] = v
        return v

    # --- Pi ---
    @staticmethod
    def is_empty(tup: Sequence[int]) -> bool:
        return tup[0] == 0 and tup[1] <= 1

    def factors(self, r: int, tup: Sequence[int]) -> list[tuple[int, int, tuple[int, ...]]]:
        """(residue, k, head) of every G-tilde factor of Pi_r(tup)."""
        ell = self.ell
        if len(tup) != ell + 2:
            raise ValueError(f"Pi_r takes {ell + 2} digits")
        a, b = tup[0], tup[1]
        out = [(r % ell, k, tuple(tup[2:2 + ell])) for k in range(1, b)]
        if a != 0:
            out.append(((r - 1) % ell, 0, tuple(tup[1:1 + ell])))
        return out

    def pi(self, r: int, tup: Sequence[int], T: int) -> Enclosure:
        """Enclosure of Pi_r(tup) computed at truncation T; exactly 1 for an empty product."""
        v = Enclosure.exact(1)
        for rr, k, head in self.factors(r, tup):
            v = v * self.g_tilde(rr, k, head, T)
        return v

    def product(self, blocks: Sequence[tuple[int, Sequence[int]]], T: int) -> Enclosure:
        v = Enclosure.exact(1)
        for r, tup in blocks:
            v = v * self.pi(r, tup, T)
        return v

    def all_empty(self, blocks) -> bool:
        return all(self.is_empty(t) for _, t in blocks)

    def decide(self, blocks, threshold, strict: bool = True):
        """Adaptive T: returns (verdict, enclosure, T) with verdict in pass/fail/undecided."""
        thr = arb(Fraction(threshold).numerator) / Fraction(threshold).denominator
        if self.all_empty(blocks):
            v = Enclosure.exact(1)
            ok = (1 > Fraction(threshold)) if strict else (1 >= Fraction(threshold))
            return ("pass" if ok else "fail"), v, 0
        T = self.T0
        v = None
        while T <= self.T_max:
            try:
                v = self.product(blocks, T)
            except TooSmallT:
                T *= 2
                continue
            lo, hi = v.ball.lower(), v.ball.upper()
            if (lo > thr) if strict else (lo >= thr):
                return "pass", v, T
            if (hi <= thr) if strict else (hi < thr):
                return "fail", v, T
            T *= 2
        return "undecided", v, T // 2

    def triple(self, t7: Sequence[int]):
        """Blocks of Pi_1(t0..t4) Pi_2(t1..t5) Pi_0(t2..t6) (period 3, block start at residue 0)."""
        return [(1, t7[0:5]), (2, t7[1:6]), (0, t7[2:7])]

    def pair(self, t5: Sequence[int]):
        """Blocks of Pi_1(t0..t3) Pi_0(t1..t4) (period 2)."""
        return [(1, t5[0:4]), (0, t5[1:5])]


def G_tilde(cf: ContinuedFraction, r: int, k: int, head: Sequence[int], T: int = 10_000) -> Enclosure:
    """Lower bound of G_r over the eps-window of the head digits (raises if not zero-free)."""
    spec = LimitFunctionSpec(cf, r)
    e = eps_prime_closed_exact(cf, r, k, head)
    L, U = perturbation_window(cf, r)
    lower, _ = G_bound_on_interval(spec, e + L, e + U, T)
    return lower


def Pi_lower(cf: ContinuedFraction, r: int, tup: Sequence[int], T: int = 10_000, table: PiTable | None = None) -> Enclosure:
    if not is_admissible(tup, r, cf):
        raise ValueError(f"tuple {tuple(tup)} is not admissible for residue {r}")
    table = table or PiTable(cf)
    v = table.pi(r, tup, T)
    return v if v.is_exact else v.lower_bound()


# ---------------------------------------------------------------------------
# property checks
# ---------------------------------------------------------------------------


@dataclass
class PropertyResult:
    name: str
    threshold: Fraction
    strict: bool
    rows: list = field(default_factory=list)
    counterexamples: list = field(default_factory=list)
    empty_exceptions: list = field(default_factory=list)
    undecided: list = field(default_factory=list)
    zero_windows: list = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.counterexamples or self.zero_windows:
            return "fail"
        if self.undecided:
            return "undecided"
        return "pass"

    @property
    def min_margin(self) -> float | None:
        ms = [row["margin"] for row in self.rows if row["margin"] is not None]
        return min(ms) if ms else None

    @property
    def min_bound(self) -> float | None:
        bs = [row["lo"] for row in self.rows if not row["empty"]]
        return min(bs) if bs else None

    def report(self, with_rows: bool = True) -> VerificationReport:
        notes = []
        if self.empty_exceptions:
            notes.append(
                f"{len(self.empty_exceptions)} tuple(s) have only empty products (value exactly 1), "
                f"so the literal inequality against {float(self.threshold)} does not hold there")
        cols = ["tuple", "lo", "hi", "T", "margin", "verdict"]
        rows = [[r[c] for c in cols] for r in self.rows] if with_rows else []
        return VerificationReport(
            campaign=self.name,
            params={"threshold": str(self.threshold), "strict": self.strict, "tuples": len(self.rows),
                    "row_columns": cols,
                    "min_bound_nonempty": self.min_bound,
                    "empty_product_exceptions": len(self.empty_exceptions)},
            status=self.status,
            min_margin=self.min_margin,
            witnesses=self.counterexamples[:50] + self.undecided[:50] + self.zero_windows[:50],
            cases=rows,
            notes=notes + ([f"empty-product tuples: {self.empty_exceptions[:20]}"] if self.empty_exceptions else []),
        )


def check_property(table: PiTable, name: str, items, threshold, strict: bool = True, zero_check=None) -> PropertyResult:
    """items: iterable of (label tuple, blocks).  Every non-empty product is decided adaptively."""
    res = PropertyResult(name, Fraction(threshold), strict)
    for label, blocks in items:
        empty = table.all_empty(blocks)
        verdict, v, T = table.decide(blocks, threshold, strict)
        zs = [f for r, t in blocks for f in table.factors(r, t) if f in table.zero_hits]
        row = {
            "tuple": list(label), "lo": v.lo, "hi": v.hi, "T": T, "empty": empty,
            "margin": None if empty else v.lo - float(threshold),
            "verdict": verdict,
        }
        if empty and verdict != "pass":
            row["verdict"] = "empty product"
        res.rows.append(row)
        if zs:
            res.zero_windows.append({"tuple": list(label), "windows": [list(map(str, z)) for z in zs]})
        if verdict == "pass":
            continue
        if empty:
            res.empty_exceptions.append(list(label))
        elif verdict == "fail":
            res.counterexamples.append(row)
        else:
            res.undecided.append(row)
    return res


def _fold(name: str, results: list[PropertyResult], extra: list[VerificationReport], params: dict, t0: float,
          with_rows: bool) -> VerificationReport:
    children = [r.report(with_rows) for r in results] + extra
    rep = VerificationReport.fold(name, children, params=params, wall_clock=time.perf_counter() - t0)
    empties = sum(len(r.empty_exceptions) for r in results)
    rep.notes.append(
        "status covers every tuple with at least one non-empty factor; "
        f"{empties} literal exceptions come from products that are empty and equal 1 exactly")
    return rep


# ---------------------------------------------------------------------------
# period 2
# ---------------------------------------------------------------------------

CF_54 = "[0;(5,4)]"
CF_655 = "[0;(6,5,5)]"


def certify_period2(cf: ContinuedFraction | None = None, T0: int = T_START, T_max: int = T_LIMIT,
                    with_rows: bool = True) -> VerificationReport:
    """Certify the Pi_0/Pi_1 thresholds and the pairwise product bound for alpha = [0;(5,4)]."""
    t0 = time.perf_counter()
    cf = cf or parse_cf(CF_54)
    if cf.ell != 2:
        raise ValueError("period length 2 expected")
    tab = PiTable(cf, T0, T_max)
    tup = {r: admissible_tuples(cf, r, 4) for r in (0, 1)}

    def sel(r, pred):
        return [(t, [(r, t)]) for t in tup[r] if pred(t)]

    res = [
        check_property(tab, "(i) Pi_0 > 1.01 for (a,b) != (0,0)", sel(0, lambda t: t[:2] != (0, 0)), Fraction(101, 100)),
        check_property(tab, "(i) Pi_0 > 1.22 for a != 0", sel(0, lambda t: t[0] != 0), Fraction(122, 100)),
        check_property(tab, "(ii) Pi_1 > 1.01 for a = 0, b != 0", sel(1, lambda t: t[0] == 0 and t[1] != 0), Fraction(101, 100)),
        check_property(tab, "(iii) Pi_1 > 1.01 for a != 0, b != 1", sel(1, lambda t: t[0] != 0 and t[1] != 1), Fraction(101, 100)),
        check_property(tab, "(iv) Pi_1 > 0.84 for a != 0, b = 1", sel(1, lambda t: t[0] != 0 and t[1] == 1), Fraction(84, 100)),
    ]
    exact = _exact_one_report(tab, {r: [t for t in tup[r] if t[:2] == (0, 0)] for r in (0, 1)}, "(v) Pi_r = 1 for (a,b) = (0,0)")
    five = admissible_tuples(cf, 1, 5)
    res.append(check_property(
        tab, "pair Pi_1(a,b,c,d) Pi_0(b,c,d,e) > 1.01 for (a,b,c) != 0",
        [(t, tab.pair(t)) for t in five if t[:3] != (0, 0, 0)], Fraction(101, 100)))
    params = {"alpha": str(cf), "tuple_counts": {"r=0": len(tup[0]), "r=1": len(tup[1]), "5-tuples": len(five)},
              "windows": _window_params(tab), "T0": T0, "T_max": T_max}
    return _fold("period-2 certificate " + str(cf), res, [exact], params, t0, with_rows)


def _window_params(tab: PiTable) -> dict:
    return {f"r={r}": {"L": float(L), "U": float(U)} for r, (L, U) in enumerate(tab.windows)}


def _exact_one_report(tab: PiTable, tuples_by_r: dict, name: str) -> VerificationReport:
    bad = []
    n = 0
    for r, ts in tuples_by_r.items():
        for t in ts:
            n += 1
            v = tab.pi(r, t, tab.T0)
            if not (v.is_exact and v.lo_exact == 1):
                bad.append({"r": r, "tuple": list(t)})
    return VerificationReport(name, params={"tuples": n}, status="fail" if bad else "pass", witnesses=bad)


# ---------------------------------------------------------------------------
# period 3
# ---------------------------------------------------------------------------


def _pattern(t7) -> bool:
    return t7[0] != 0 and tuple(t7[1:5]) == (1, 1, 1, 0) and t7[5] >= 3


def _extensions(cf: ContinuedFraction, prefix: Sequence[int], start: int, length: int) -> list[tuple[int, ...]]:
    out = []

    def rec(cur: list[int]):
        if len(cur) == length:
            out.append(tuple(cur))
            return
        top = cf.periodic_digit(start + len(cur) + 1)
        for b in range(top + 1):
            if b == top and cur[-1] != 0:
                continue
            cur.append(b)
            rec(cur)
            cur.pop()

    rec(list(prefix))
    return out


def certify_period3(cf: ContinuedFraction | None = None, T0: int = T_START, T_max: int = T_LIMIT,
                     samples: int = 200, sample_blocks: int = 20, seed: int = 1,
                     with_rows: bool = True) -> VerificationReport:
    """Certify the Pi_0/Pi_1/Pi_2 thresholds, the triple-product case analysis and the
    grouping of K-factors into consecutive triples for alpha = [0;(6,5,5)]."""
    t0 = time.perf_counter()
    cf = cf or parse_cf(CF_655)
    if cf.ell != 3:
        raise ValueError("period length 3 expected")
    tab = PiTable(cf, T0, T_max)
    tup = {r: admissible_tuples(cf, r, 5) for r in range(3)}

    def sel(r, pred):
        return [(t, [(r, t)]) for t in tup[r] if pred(t)]

    nz = lambda t: t[:2] != (0, 0)  # noqa: E731
    res = [
        check_property(tab, "(i) Pi_0 > 1.001 for (a,b) != (0,0)", sel(0, nz), Fraction(1001, 1000)),
        check_property(tab, "(i) Pi_1 > 0.81 for (a,b) != (0,0)", sel(1, nz), Fraction(81, 100)),
        check_property(tab, "(i) Pi_2 > 1.001 for (a,b) != (0,0)", sel(2, nz), Fraction(1001, 1000)),
        check_property(tab, "(i) Pi_1 >= 1.001 for a != 0, b != 1", sel(1, lambda t: t[0] != 0 and t[1] != 1),
                       Fraction(1001, 1000), strict=False),
        check_property(tab, "(ii) Pi_2 >= 1.25 for a != 0, b != 1", sel(2, lambda t: t[0] != 0 and t[1] != 1),
                       Fraction(125, 100), strict=False),
        check_property(tab, "(ii) Pi_0 >= 1.19 for a != 0, b != 1", sel(0, lambda t: t[0] != 0 and t[1] != 1),
                       Fraction(119, 100), strict=False),
        check_property(tab, "(iii) Pi_1 >= 0.85 for a != 0, c >= 1", sel(1, lambda t: t[0] != 0 and t[2] >= 1),
                       Fraction(85, 100), strict=False),
    ]
    seven = admissible_tuples(cf, 1, 7)
    res.append(check_property(
        tab, "(iv) triple > 1.007 for (a,1,1,1,e,f,g), a != 0, e != 0 or f <= 2",
        [(t, tab.triple(t)) for t in seven if t[0] != 0 and t[1:4] == (1, 1, 1) and (t[4] != 0 or t[5] <= 2)],
        Fraction(1007, 1000)))
    res.append(check_property(
        tab, "(v) triple > 0.98 for (a,1,1,1,0,f,g), a != 0",
        [(t, tab.triple(t)) for t in seven if t[0] != 0 and t[1:5] == (1, 1, 1, 0)], Fraction(98, 100)))
    exact = _exact_one_report(tab, {r: [t for t in tup[r] if t[:2] == (0, 0)] for r in range(3)},
                              "(vi) Pi_r = 1 for (a,b) = (0,0)")

    # first consequence: outside the exceptional pattern the triple is >= 1.001,
    # inside it the triple is > 0.98
    rel = [t for t in seven if t[:4] != (0, 0, 0, 0)]
    res.append(check_property(
        tab, "consequence: triple >= 1.001 unless a != 0, b = c = d = 1, e = 0, f >= 3",
        [(t, tab.triple(t)) for t in rel if not _pattern(t)], Fraction(1001, 1000), strict=False))
    res.append(check_property(
        tab, "consequence: triple > 0.98 on the exceptional pattern",
        [(t, tab.triple(t)) for t in rel if _pattern(t)], Fraction(98, 100)))

    # second consequence: every 7-block whose triple is not certified >= 1 is extended to 10
    # digits and the six-fold product must exceed 1
    candidates = []
    for t in seven:
        verdict, _, _ = tab.decide(tab.triple(t), 1, strict=False)
        if verdict != "pass":
            candidates.append(t)
    tens = [x for t in candidates for x in _extensions(cf, t, 0, 10)]
    six = check_property(
        tab, "consequence: triple < 1 forces the six-fold product > 1",
        [(x, tab.triple(x[0:7]) + tab.triple(x[3:10])) for x in tens], 1)
    res.append(six)

    grouping = grouping_check(tab, samples=samples, blocks=sample_blocks, seed=seed)
    params = {"alpha": str(cf), "tuple_counts": {f"r={r}": len(tup[r]) for r in range(3)} | {
        "7-tuples": len(seven), "low-triple 7-tuples": len(candidates), "10-tuples checked": len(tens)},
        "windows": _window_params(tab), "T0": T0, "T_max": T_max,
        "note_g": "the digit g of the triple products is the seventh entry of a 7-digit block"}
    return _fold("period-3 certificate " + str(cf), res, [exact, grouping], params, t0, with_rows)


def random_admissible(cf: ContinuedFraction, start: int, length: int, rng: random.Random,
                      p_zero: float = 0.3) -> tuple[int, ...]:
    """A random admissible block; small digits are favoured so the low-product patterns appear."""
    out: list[int] = []
    for j in range(length):
        top = cf.periodic_digit(start + j + 1)
        allowed_top = top if (not out or out[-1] == 0) else top - 1
        u = rng.random()
        if u < p_zero:
            b = 0
        elif u < 0.75:
            b = min(1, allowed_top)
        else:
            b = rng.randint(0, allowed_top)
        out.append(b)
    return tuple(out)


def grouping_check(tab: PiTable, samples: int = 200, blocks: int = 20, seed: int = 1) -> VerificationReport:
    """Random digit strings b_0 b_1 ...: with M_j bounded below by the triple starting at b_{3j},
    every M_j > 0.98, and M_j < 1 (not certified >= 1) forces M_j M_{j+1} > 1."""
    cf = tab.cf
    rng = random.Random(seed)
    cache: dict = {}

    def M(t7):
        if t7 not in cache:
            cache[t7] = tab.decide(tab.triple(t7), Fraction(1001, 1000), strict=False)[1]
        return cache[t7]

    bad = []
    low = 0
    worst = math.inf
    length = 3 * blocks + 7
    for s in range(samples):
        digits = random_admissible(cf, 0, length, rng)
        if s % 4 == 0:
            # plant the exceptional pattern at a random block
            j = rng.randrange(blocks)
            patt = (rng.randint(1, 5), 1, 1, 1, 0, rng.randint(3, 5))
            d = list(digits)
            d[3 * j:3 * j + 6] = patt
            if is_admissible(d, 1, cf):
                digits = tuple(d)
        ms = [M(digits[3 * j:3 * j + 7]) for j in range(blocks + 1)]
        prod = Enclosure.exact(1)
        for j in range(blocks + 1):
            m = ms[j]
            if not (m.is_exact or m.ball.lower() > arb(0.98)):
                bad.append({"sample": s, "j": j, "block": list(digits[3 * j:3 * j + 7]), "M_lo": m.lo})
            if j < blocks and not (m.is_exact or m.ball.lower() >= 1):
                low += 1
                pair = ms[j] * ms[j + 1]
                if not pair.ball.lower() > 1:
                    bad.append({"sample": s, "j": j, "pair_lo": pair.lo})
            prod = prod * m
        # running product over the paired grouping stays above 0.98
        worst = min(worst, _paired_floor(ms))
        if not worst > 0.98:
            bad.append({"sample": s, "paired_floor": worst})
    return VerificationReport(
        "grouping M_j = K_{3j+1} K_{3j+2} K_{3j+3}",
        params={"samples": samples, "blocks_per_sample": blocks + 1, "low_blocks_seen": low,
                "min_paired_product": worst, "seed": seed},
        status="fail" if bad else "pass",
        min_margin=worst - 0.98,
        witnesses=bad[:50],
    )


def _paired_floor(ms: list[Enclosure]) -> float:
    """Lower bound of prod M_j where each low block is paired with its successor."""
    total = 1.0
    j = 0
    while j < len(ms):
        m = ms[j].lo
        if m < 1 and j + 1 < len(ms):
            total *= (ms[j] * ms[j + 1]).lo
            j += 2
        else:
            total *= m
            j += 1
    return total


def soundness_fuzz(cf: ContinuedFraction, trials: int = 1000, T: int = 4000, seed: int = 7, J: int = 120) -> dict:
    """Compare Pi_r(block) with the product of G at the eps' of a random admissible continuation."""
    tab = PiTable(cf, T, T)
    ell = cf.ell
    rng = random.Random(seed)
    worst = math.inf
    bad = []
    for s in range(trials):
        r = rng.randrange(ell)
        digits = random_admissible(cf, r - 1, J + ell + 3, rng, p_zero=0.25)
        blk = digits[:ell + 2]
        if tab.is_empty(blk):
            continue
        lower = tab.pi(r, blk, T)
        # digits[1] sits at level i (residue r), the tail after level i starts at digits[2]
        true = Enclosure.exact(1)
        for rr, k, _ in tab.factors(r, blk):
            start = 1 if k == 0 else 2
            e = eps_prime(cf, rr, k, DigitStream.finite(digits[start:]), J)
            true = true * G_enclosure(tab.specs[rr], e, T).enclosure
        gap = true.hi - lower.lo
        worst = min(worst, true.lo - lower.lo)
        if gap < 0:
            bad.append({"r": r, "block": list(blk), "Pi_lo": lower.lo, "G_hi": true.hi})
    return {"trials": trials, "violations": bad, "min_gap": worst}


# ---------------------------------------------------------------------------
# the vanishing example
# ---------------------------------------------------------------------------

CF_65 = "[0;(6,5)]"


def all_ones(n_levels: int) -> tuple[int, ...]:
    return (1,) * (n_levels + 1)


def _level_factor(cf: ContinuedFraction, i: int, eps: Enclosure, direct_q: int, residue_of, T: int = 20_000):
    """P_{q_i}(alpha, eps): direct for small q_i, the limit function G as a surrogate otherwise."""
    q = convergents(cf, i).q[i]
    if q <= direct_q:
        return sudler_perturbed(cf, i, eps), "direct"
    spec = residue_of(i)
    return G_enclosure(spec, eps, T).enclosure, "limit surrogate"


def theorem2_demo(depth: int = 40, cf: ContinuedFraction | None = None, n_range=(10, 40), direct_q: int = 40_000,
                  T: int = 100_000) -> VerificationReport:
    """All-ones Ostrowski integers N_n = q_0 + ... + q_{2n} for [0;(6,5)]: certified pair bounds
    in the limit, finite-n pair products and the decay of P_{N_n}."""
    t0 = time.perf_counter()
    cf = cf or parse_cf(CF_65)
    p = len(cf.preperiod)
    ell = cf.ell
    if ell != 2:
        raise ValueError("the demonstrator is written for period length 2")
    specs = {r: LimitFunctionSpec(cf, r) for r in range(ell)}
    residue_of = lambda i: specs[i % ell]  # noqa: E731
    children = []

    # limiting eps' of the all-ones tail, residue by residue
    lim = {r: eps_prime_periodic(_pure(cf), r, 0, (1,)) for r in range(ell)}
    # level 2i + p carries the rotation of residue 0 of the purely periodic part
    r_even, r_odd = (p % ell), ((p + 1) % ell)
    g_even = G_enclosure(specs[r_even], lim[0], T)
    g_odd = G_enclosure(specs[r_odd], lim[1], T)
    pair = Enclosure.from_bounds(g_even.lo.ball.lower() * g_odd.lo.ball.lower(),
                                 g_even.hi.ball.upper() * g_odd.hi.ball.upper())
    ok = pair.certainly_lt(Fraction(997, 1000))
    children.append(VerificationReport(
        "limiting pair G_0 G_1 < 0.997",
        params={"eps_prime": {f"residue {r} after the preperiod": Enclosure.of(v).to_dict() for r, v in lim.items()},
                "G": {f"r={r_even}": g_even.to_dict(), f"r={r_odd}": g_odd.to_dict()}, "T": T},
        status="pass" if ok else ("fail" if pair.certainly_gt(Fraction(997, 1000)) else "undecided"),
        min_margin=0.997 - pair.hi,
        cases=[{"pair": pair.to_dict()}],
    ))

    # finite n: pair products at levels (2i, 2i-1) for N_depth
    n_levels = 2 * depth
    digits = all_ones(n_levels)
    rows = []
    status = "pass"
    worst = -math.inf
    cache_eps = {}
    for i in range(1, depth + 1):
        lv = [2 * i + p, 2 * i - 1 + p]
        if lv[0] > n_levels:
            break
        vals = []
        kinds = []
        for j in lv:
            e = epsilon_ik(cf, digits, j, 0)
            cache_eps[j] = e
            v, kind = _level_factor(cf, j, e, direct_q, residue_of, T)
            vals.append(v)
            kinds.append(kind)
        prod = vals[0] * vals[1]
        rows.append({"i": i, "levels": lv, "kinds": kinds, "lo": prod.lo, "hi": prod.hi,
                     "eps": [cache_eps[j].mid for j in lv]})
        worst = max(worst, prod.hi)
    mid = [r for r in rows if 3 <= r["i"] <= depth - 3]
    mid_ok = all(r["hi"] < 0.999 for r in mid)
    if not mid_ok:
        status = "fail"
    children.append(VerificationReport(
        f"finite pair P_q(2i) P_q(2i-1) < 0.999 at n = {depth}",
        params={"depth": depth, "direct_q_max": direct_q, "mid_range": [3, depth - 3],
                "note": "levels with q_i above direct_q_max use the limit function as a surrogate"},
        status=status, min_margin=0.999 - max(r["hi"] for r in mid) if mid else None,
        certifying=all(r["kinds"] == ["direct", "direct"] for r in mid),
        cases=rows,
    ))

    # decay of P_{N_n} over a range of n
    decay = []
    for n in range(n_range[0], n_range[1] + 1):
        dg = all_ones(2 * n + p)
        logp = 0.0
        for j in range(len(dg)):
            e = epsilon_ik(cf, dg, j, 0)
            v, _ = _level_factor(cf, j, e, direct_q, residue_of)
            logp += math.log(v.mid)
        decay.append({"n": n, "log10_P": logp / math.log(10)})
    mono = all(b["log10_P"] < a["log10_P"] for a, b in zip(decay, decay[1:]))
    ratios = [b["log10_P"] - a["log10_P"] for a, b in zip(decay, decay[1:])]
    children.append(VerificationReport(
        "P_{N_n} decays geometrically",
        params={"n_range": list(n_range), "mean_log10_ratio": sum(ratios) / len(ratios) if ratios else None},
        status="pass" if mono and ratios and max(ratios) < 0 else "fail",
        certifying=False,
        cases=decay,
        notes=["values combine direct products and limit surrogates; this is an empirical check"],
    ))

    # the same criterion fires for [0;(4,1)]
    side = theoremB_check(parse_cf("[0;(4,1)]"))
    children.append(VerificationReport(
        "[0;(4,1)] criterion fires",
        params=side, status="pass" if side["fires"] else ("undecided" if side["verdict"] == "undecided" else "fail")))
    return VerificationReport.fold("vanishing example " + str(cf), children,
                                   params={"alpha": str(cf), "depth": depth},
                                   wall_clock=time.perf_counter() - t0)


def _pure(cf: ContinuedFraction) -> ContinuedFraction:
    """The purely periodic rotation reached after the preperiod."""
    if not cf.preperiod:
        return cf
    return ContinuedFraction(0, (), cf.period)


def _decay_rates(dev) -> dict:
    """Least-squares slopes of log10 deviation against the distance to either end."""
    n = len(dev) - 1
    out = {}
    for side, idx in (("from_start", range(0, n // 2)), ("from_end", range(n // 2, n + 1))):
        pts = [((i if side == "from_start" else n - i), math.log10(dev[i])) for i in idx
               if dev[i] is not None and dev[i] > 1e-15]
        if len(pts) < 3:
            out[side] = None
            continue
        mx = sum(x for x, _ in pts) / len(pts)
        my = sum(y for _, y in pts) / len(pts)
        sxx = sum((x - mx) ** 2 for x, _ in pts)
        out[side] = sum((x - mx) * (y - my) for x, y in pts) / sxx
    return out


def eps_convergence_test(cf: ContinuedFraction, pattern: Sequence[int] = (1,), deltas=(1e-3, 1e-5), n: int = 60,
                         k: int = 0) -> dict:
    """Distance between eps_{i,k}(N_n) and the limiting eps' along a periodic digit pattern."""
    digits = tuple(pattern[j % len(pattern)] for j in range(n + 1))
    p = len(cf.preperiod)
    pure = _pure(cf)
    dev = []
    for i in range(n + 1):
        e = epsilon_ik(cf, digits, i, k)
        tail = tuple(pattern[(i + j) % len(pattern)] for j in range(1, len(pattern) + 1))
        lim = eps_prime_periodic(pure, i - p, k, tail) if i >= p else None
        dev.append(None if lim is None else abs(e.mid - float(lim)))
    out = {"alpha": str(cf), "n": n, "pattern": list(pattern), "k": k, "deviations": dev, "thresholds": [],
           "log10_decay_per_level": _decay_rates(dev)}
    for d in deltas:
        half = n // 2
        left = [i for i in range(0, half) if dev[i] is None or dev[i] >= d]
        right = [i for i in range(half, n + 1) if dev[i] is not None and dev[i] >= d]
        I0 = max(left) if left else 0
        J0 = n - min(right) if right else 0
        ok = all(dev[i] is not None and dev[i] < d for i in range(I0 + 1, n - J0))
        out["thresholds"].append({"delta": d, "I0": I0, "J0": J0, "holds_between": ok})
    return out
