from __future__ import annotations

from fractions import Fraction

import pytest
from flint import arb

from sudler.cf import parse_cf
from sudler.limit import (
    LimitFunctionSpec,
    NotZeroFree,
    TooSmallT,
    G_bound_on_interval,
    G_enclosure,
    G_truncated,
    G_truncated_reference,
    figure6a_rows,
    g_factor,
    remark_conjectures,
    theoremB_check,
)
from sudler.products import sudler_perturbed

S65 = LimitFunctionSpec(parse_cf("[0;(6,5)]"), 0)


def test_g_factor_tends_to_one():
    for n in (10**3, 10**5, 10**7):
        assert abs(g_factor(S65, n, 0).mid - 1) < 2 / n
    with pytest.raises(ValueError):
        g_factor(S65, 0, 0)


def test_truncated_trivial_cases():
    minus_c = S65.C * -1
    assert G_truncated(S65, minus_c, 500).contains(0)
    t0 = G_truncated(S65, Fraction(1, 10), 0)
    ref = 2 * arb.pi() * (arb(0.1) + arb(float(S65.C)))
    assert abs(t0.mid - float(ref.mid())) < 1e-12


@pytest.mark.parametrize("eps", [Fraction(0), Fraction(-1, 5), Fraction(7, 20)])
def test_fast_kernel_matches_ball_reference(eps):
    fast = G_truncated(S65, eps, 400)
    ref = G_truncated_reference(S65, eps, 400)
    assert fast.overlaps(ref)
    assert fast.width < 1e-9


def test_enclosure_tightens_with_T():
    widths = [G_enclosure(S65, 0, T).width for T in (100, 1000, 10_000)]
    assert widths[0] > widths[1] > widths[2]
    outer = G_enclosure(S65, 0, 1000).enclosure
    inner = G_enclosure(S65, 0, 10_000).enclosure
    assert outer.lo <= inner.lo and inner.hi <= outer.hi


def test_enclosure_contains_finite_products():
    # P_{q_n}(alpha, 0) for even n converges to G_0; the tail is O(1/q_n)
    g = G_enclosure(S65, 0, 100_000)
    p = sudler_perturbed(S65.cf, 6, 0)
    assert g.lower - Fraction(1, 1000) < p.mid < g.upper + Fraction(1, 1000)


def test_too_small_T():
    with pytest.raises(TooSmallT, match="T too small"):
        G_enclosure(S65, 0, 10)


def test_interval_bounds():
    lo, hi = G_bound_on_interval(S65, Fraction(1, 10), Fraction(1, 10), 2000, no_maximizer_inside=True)
    g = G_enclosure(S65, Fraction(1, 10), 2000)
    assert lo.lo == g.lo.lo and hi.hi == g.hi.hi
    lo, _ = G_bound_on_interval(S65, Fraction(-1, 10), Fraction(1, 10), 2000)
    assert lo.hi <= G_enclosure(S65, Fraction(-1, 10), 2000).hi.hi
    with pytest.raises(NotZeroFree, match="zero-freeness not certified"):
        G_bound_on_interval(S65, Fraction(-1, 2), Fraction(0), 2000)


def test_zeros_are_zeros():
    for z in S65.zeros():
        g = G_truncated(S65, z, 2000)
        assert g.lo < 1e-12


@pytest.mark.parametrize("a,fires", [(2, True), (3, True), (4, True), (5, False)])
def test_below_one_check_examples(a, fires):
    rep = theoremB_check(parse_cf(f"[0;(6,{a})]"))
    assert rep["fires"] is fires
    if a == 4:
        g0 = G_enclosure(LimitFunctionSpec(parse_cf("[0;(6,4)]"), 0), 0, 100_000)
        assert g0.upper < 1 and g0.width < 0.002


def test_threshold_flip_small():
    rep = remark_conjectures(T=10_000, digits=(3, 4, 5))
    st = {c["alpha"]: c["status"] for c in rep["cases"]}
    assert all(v == "pass" for v in st.values()), st


def test_curve_rows_sign_pattern():
    rows = list(figure6a_rows(eps_values=[Fraction(0)], T=20_000))
    assert [r[0] for r in rows] == [2, 3, 4, 5]
    below = [r[3] < 1 for r in rows]
    above = [r[2] > 1 for r in rows]
    assert below[:3] == [True, True, True] and above[3]
