"""Limit functions G_r(alpha, eps) of perturbed Sudler products for periodic alpha."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from flint import arb

from .cf import ContinuedFraction, QuadraticSurd, limit_constant, parse_cf, rotation_surds
from .criterion import E
from .enclosure import Enclosure, to_arb
from .fastinterval import ShiftedSquareProduct, frac_multiples_surd, interval_of

T_MIN = 100


class TooSmallT(ValueError):
    pass


class NotZeroFree(ValueError):
    pass


@dataclass
class LimitFunctionSpec:
    """Constants of G_r for a periodic continued fraction and residue r."""

    cf: ContinuedFraction
    r: int
    C: QuadraticSurd = field(init=False)
    alpha_tau: QuadraticSurd = field(init=False)
    alpha_sigma: QuadraticSurd = field(init=False)
    _kernel: ShiftedSquareProduct | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if not self.cf.is_periodic:
            raise ValueError("limit functions need a periodic continued fraction")
        self.r %= self.cf.ell
        self.alpha_tau, self.alpha_sigma = rotation_surds(self.cf, self.r)
        self.C = limit_constant(self.cf, self.r)

    @classmethod
    def parse(cls, text: str, r: int) -> "LimitFunctionSpec":
        return cls(parse_cf(text), r)

    @property
    def a_K(self) -> int:
        # the error bound E(T, a) is stated for a >= 2; a larger digit bound stays valid
        return max(2, max(self.cf.period))

    def kernel(self, T: int) -> ShiftedSquareProduct:
        k = self._kernel
        if k is None or k.T < T:
            size = max(T, 2 * k.T if k else T)
            flo, fhi = frac_multiples_surd(self.alpha_sigma, size)
            k = ShiftedSquareProduct(interval_of(self.C), flo, fhi)
            self._kernel = k
        return k

    def zeros(self) -> list[Enclosure]:
        """All zeros of G_r in (-1, 1): eps = -C and the roots of the n = 1 factor."""
        c = to_arb(self.C)
        s = to_arb(self.alpha_sigma)
        w = 1 - c * (s - arb(0.5))
        out = [Enclosure(-c), Enclosure(-c / 2 + w), Enclosure(-c / 2 - w)]
        return [z for z in out if z.certainly_lt(1) and z.certainly_gt(-1)]


# ---------------------------------------------------------------------------
# factors and truncations
# ---------------------------------------------------------------------------


def g_factor(spec: LimitFunctionSpec, n: int, eps) -> Enclosure:
    """(1 - C({n a}-1/2)/n)^2 - (eps + C/2)^2/n^2 with {n a} from an exact surd floor."""
    if n < 1:
        raise ValueError("n must be positive")
    f = to_arb((spec.alpha_sigma * n).frac())
    c = to_arb(spec.C)
    e = to_arb(eps)
    return Enclosure((1 - c * (f - arb(0.5)) / n) ** 2 - (e + c / 2) ** 2 / n**2)


def _prefactor(spec: LimitFunctionSpec, eps) -> arb:
    return 2 * arb.pi() * abs(to_arb(eps) + to_arb(spec.C))


def _product_bounds(spec: LimitFunctionSpec, eps, T: int) -> tuple[arb, arb]:
    if T == 0:
        return arb(1), arb(1)
    kern = spec.kernel(T)
    elo, ehi = interval_of(eps if isinstance(eps, QuadraticSurd) else Enclosure.of(eps))
    return kern.product(elo, ehi, T)


def G_truncated(spec: LimitFunctionSpec, eps, T: int) -> Enclosure:
    """2 pi |eps + C| prod_{n<=T} |g_n(eps)|."""
    if T < 0:
        raise ValueError("T must be non-negative")
    pref = _prefactor(spec, eps)
    lo, hi = _product_bounds(spec, eps, T)
    return Enclosure((pref * lo).union(pref * hi))


def G_truncated_reference(spec: LimitFunctionSpec, eps, T: int) -> Enclosure:
    """Same quantity in plain ball arithmetic; slow, for cross-checks."""
    v = _prefactor(spec, eps)
    for n in range(1, T + 1):
        v *= abs(g_factor(spec, n, eps).ball)
    return Enclosure(v)


@dataclass(frozen=True)
class GEnclosure:
    eps: object
    T: int
    lo: Enclosure
    hi: Enclosure
    truncated: Enclosure

    @property
    def lower(self) -> Fraction:
        return self.lo.lo_exact

    @property
    def upper(self) -> Fraction:
        return self.hi.hi_exact

    @property
    def enclosure(self) -> Enclosure:
        return Enclosure.from_bounds(self.lo.ball.lower(), self.hi.ball.upper())

    @property
    def width(self) -> float:
        return float(self.upper - self.lower)

    def certainly_below(self, x) -> bool:
        return self.hi.certainly_lt(x)

    def certainly_above(self, x) -> bool:
        return self.lo.certainly_gt(x)

    def to_dict(self) -> dict:
        d = self.enclosure.to_dict()
        d.update({"T": self.T, "eps": str(self.eps)})
        return d


def truncation_factors(spec: LimitFunctionSpec, T: int) -> tuple[arb, arb]:
    """(1 - 2CE - 5/T, 1/(1 - 3CE)) after checking the hypotheses."""
    if T < T_MIN:
        raise TooSmallT(f"T too small: need T >= {T_MIN}")
    ce = to_arb(spec.C) * E(T, spec.a_K).ball
    if not (3 * ce < arb(0.5)):
        raise TooSmallT("T too small: 3 C(r) E(T, a_K) is not below 1/2")
    return 1 - 2 * ce - arb(5) / T, 1 / (1 - 3 * ce)


def G_enclosure(spec: LimitFunctionSpec, eps, T: int) -> GEnclosure:
    """Certified [lower, upper] for G_r(alpha, eps) from the truncation at T."""
    e = Enclosure.of(eps)
    if not (e.certainly_lt(1) and e.certainly_gt(-1)):
        raise ValueError("eps must lie in (-1, 1)")
    f_lo, f_hi = truncation_factors(spec, T)
    gt = G_truncated(spec, eps, T)
    lo = Enclosure(f_lo * gt.ball.lower())
    hi = Enclosure(f_hi * gt.ball.upper())
    return GEnclosure(eps, T, lo.lower_bound(), hi.upper_bound(), gt)


def G_enclosure_adaptive(spec: LimitFunctionSpec, eps, decided, T0: int = 1000, T_max: int = 1_000_000) -> GEnclosure:
    """Double T from T0 until decided(enclosure) holds or T_max is reached."""
    T = T0
    last = None
    while T <= T_max:
        try:
            last = G_enclosure(spec, eps, T)
        except TooSmallT:
            T *= 2
            continue
        if decided(last):
            return last
        T *= 2
    if last is None:
        raise TooSmallT("no admissible T up to T_max")
    return last


def certify_zero_free(spec: LimitFunctionSpec, a, b) -> None:
    """Raise NotZeroFree unless G_r has no zero on [a, b] inside (-1, 1)."""
    ea, eb = Enclosure.of(a), Enclosure.of(b)
    if not (ea.certainly_gt(-1) and eb.certainly_lt(1)):
        raise NotZeroFree("zero-freeness not certified: interval leaves (-1, 1)")
    for z in spec.zeros():
        if not (z.certainly_lt(ea) or z.certainly_gt(eb)):
            raise NotZeroFree(f"zero-freeness not certified: zero near {z.mid:.6g}")


def G_bound_on_interval(spec: LimitFunctionSpec, a, b, T: int, no_maximizer_inside: bool = False):
    """(lower bound, optional upper bound) of G_r over [a, b].

    The lower bound is the smaller endpoint value; the upper bound is the larger one
    and is only valid when the caller asserts the maximiser lies outside [a, b].
    """
    certify_zero_free(spec, a, b)
    ga = G_enclosure(spec, a, T)
    gb = G_enclosure(spec, b, T)
    lower = ga.lo if ga.lo.ball.lower() < gb.lo.ball.lower() else gb.lo
    upper = None
    if no_maximizer_inside:
        upper = ga.hi if ga.hi.ball.upper() > gb.hi.ball.upper() else gb.hi
    return lower, upper


# ---------------------------------------------------------------------------
# criterion checks
# ---------------------------------------------------------------------------


def _decide_vs_one(g: GEnclosure) -> bool:
    return g.certainly_below(1) or g.certainly_above(1)


def theoremB_check(cf: ContinuedFraction, T: int | None = None, T_max: int = 1_000_000) -> dict:
    """Evaluate G_r(alpha, 0) for each residue; the criterion fires iff some upper bound < 1."""
    rows = []
    fires = False
    all_above = True
    for r in range(cf.ell):
        spec = LimitFunctionSpec(cf, r)
        g = G_enclosure(spec, 0, T) if T else G_enclosure_adaptive(spec, 0, _decide_vs_one, 10_000, T_max)
        below, above = g.certainly_below(1), g.certainly_above(1)
        fires |= below
        all_above &= above
        rows.append({"r": r, "T": g.T, "lo": float(g.lower), "hi": float(g.upper), "below_one": below, "above_one": above})
    verdict = "fires" if fires else ("does not fire" if all_above else "undecided")
    return {"alpha": str(cf), "verdict": verdict, "fires": fires, "residues": rows}


def remark_conjectures(T: int | None = None, digits=range(1, 10), T_max: int = 1_000_000) -> dict:
    """G_1([0;(1,a)],0) < 1 iff a >= 4 and G_1([0;(2,a)],0) < 1 iff a >= 5."""
    cases = []
    ok = True
    undecided = False
    for lead, threshold in ((1, 4), (2, 5)):
        for a in digits:
            cf = ContinuedFraction.periodic((lead, a))
            spec = LimitFunctionSpec(cf, 1)
            g = G_enclosure(spec, 0, T) if T else G_enclosure_adaptive(spec, 0, _decide_vs_one, 10_000, T_max)
            below, above = g.certainly_below(1), g.certainly_above(1)
            expect_below = a >= threshold
            if not (below or above):
                status = "undecided at this T"
                undecided = True
            elif below == expect_below:
                status = "pass"
            else:
                status = "fail"
                ok = False
            cases.append({
                "alpha": f"[0;({lead},{a})]", "r": 1, "T": g.T,
                "lo": float(g.lower), "hi": float(g.upper),
                "expected_below_one": expect_below, "status": status,
            })
    return {"ok": ok and not undecided, "undecided": undecided, "cases": cases}


def figure6a_rows(digits=(2, 3, 4, 5), eps_values=None, T: int = 20_000):
    """(a, eps, lo, hi) of G_0([0;(6,a)], eps)."""
    if eps_values is None:
        eps_values = [Fraction(j, 100) for j in range(-50, 51)]
    for a in digits:
        spec = LimitFunctionSpec(ContinuedFraction.periodic((6, a)), 0)
        for e in eps_values:
            g = G_enclosure(spec, e, T)
            yield a, e, g.lower, g.upper
