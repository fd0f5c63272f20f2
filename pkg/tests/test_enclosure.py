from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from flint import arb
from hypothesis import given, strategies as st

from sudler.cf import QuadraticSurd
from sudler.enclosure import Enclosure, float_down, float_up, to_arb, working_precision
from sudler.fastinterval import frac_multiples_rational, frac_multiples_surd, prod_nonneg

fracs = st.fractions(min_value=-10, max_value=10, max_denominator=10**9)


@given(fracs)
def test_directed_float_rounding(x):
    assert Fraction(float_down(x)) <= x <= Fraction(float_up(x))


def test_exact_and_bounds():
    e = Enclosure.exact(Fraction(1, 3))
    assert e.contains(Fraction(1, 3))
    assert e.lo_exact <= Fraction(1, 3) <= e.hi_exact
    assert Enclosure.exact(1).is_exact


@given(fracs, fracs)
def test_arithmetic_contains_exact_result(x, y):
    ex, ey = Enclosure.of(x), Enclosure.of(y)
    assert (ex + ey).contains(x + y)
    assert (ex * ey).contains(x * y)
    assert (ex - ey).contains(x - y)


def test_comparisons_are_certain():
    a = Enclosure.from_bounds(1, 2)
    assert a.certainly_lt(3) and a.certainly_gt(0)
    assert not a.certainly_lt(Fraction(3, 2)) and not a.certainly_gt(Fraction(3, 2))


def test_surd_to_arb():
    with working_precision(200):
        v = to_arb(QuadraticSurd(-1, 1, 5, 2))
        assert abs(v - (arb(5).sqrt() - 1) / 2) < arb(2) ** -190


def test_frac_multiples_enclose_truth():
    x = QuadraticSurd(-10, 2, 30, 5)
    lo, hi = frac_multiples_surd(x, 3000)
    for n in (1, 2, 17, 461, 2999, 3000):
        f = float((x * n).frac())
        assert lo[n - 1] <= f <= hi[n - 1]
    lo, hi = frac_multiples_rational(89, 144, 500)
    for n in range(1, 501):
        f = Fraction(n * 89 % 144, 144)
        assert Fraction(lo[n - 1]) <= f <= Fraction(hi[n - 1])


@given(st.lists(st.floats(0.5, 2.0), min_size=1, max_size=300))
def test_product_kernel_brackets_exact_product(xs):
    lo, hi = prod_nonneg(np.array(xs), np.array(xs))
    exact = math.prod(Fraction(x) for x in xs)
    assert Enclosure(lo).lo_exact <= exact <= Enclosure(hi).hi_exact


def test_product_kernel_no_underflow():
    lo, hi = prod_nonneg(np.full(5000, 1e-3), np.full(5000, 1e-3))
    assert lo > 0
    assert abs(float((hi.log() / arb(10).log()).mid()) + 15000) < 1e-6
