from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest

from sudler.cf import ContinuedFraction, convergents, ostrowski, parse_cf
from sudler.products import (
    H_k,
    decompose,
    epsilon_ik,
    product_of,
    qdelta_arb,
    sampled_sup_probe,
    sudler,
    sudler_perturbed,
    top_factor,
    vanishing_subsequence,
)
from sudler.enclosure import Enclosure


def mp_sudler(x, N, shift=0):
    return mpmath.fprod(2 * abs(mpmath.sin(mpmath.pi * (r * x + shift))) for r in range(1, N + 1))


def test_trivial_values():
    assert sudler(parse_cf("[0;(1)]"), 0).contains(1)
    v = sudler(Fraction(1, 2), 2)
    assert v.lo == 0 and v.hi == 0


def test_golden_single_factor():
    with mpmath.workdps(40):
        ref = 2 * mpmath.sin(mpmath.pi * (mpmath.sqrt(5) - 1) / 2)
        v = sudler(parse_cf("[0;(1)]"), 1)
        assert v.lo <= float(ref) <= v.hi
        assert abs(v.mid - 1.864064848) < 1e-9


@pytest.mark.parametrize("lit,N", [("[0;(6,5)]", 1000), ("[0;(2,3,1)]", 377), ("[0;(1)]", 610)])
def test_sudler_vs_mpmath(lit, N):
    cf = parse_cf(lit)
    from sudler.cf import surd_from_periodic_cf

    x = surd_from_periodic_cf(cf)
    with mpmath.workdps(50):
        xm = (x.a + x.b * mpmath.sqrt(x.d)) / x.s
        ref = mp_sudler(xm, N)
    v = sudler(cf, N)
    assert abs(v.mid - float(ref)) <= 1e-12 * float(ref)
    assert v.log10width is None or v.log10width < -20


@pytest.mark.parametrize("n", [3, 5, 8])
def test_perturbed_at_zero_matches_plain(n):
    cf = parse_cf("[0;(6,5)]")
    q = convergents(cf, n).q[n]
    assert sudler_perturbed(cf, n, 0).overlaps(sudler(cf, q))


def test_perturbed_vs_mpmath():
    cf = parse_cf("[0;(5,4)]")
    n, eps = 4, Fraction(-1, 10)
    q = convergents(cf, n).q[n]
    with mpmath.workdps(50):
        xm = (2 * mpmath.sqrt(30) - 10) / 5
        ref = mp_sudler(xm, q, (-1) ** n * mpmath.mpf(eps.numerator) / eps.denominator / q)
    assert abs(sudler_perturbed(cf, n, eps).mid - float(ref)) < 1e-12 * float(ref)


def _check_identity(cf, N):
    terms, kf = decompose(cf, N)
    P = sudler(cf, N)
    via_terms = product_of(terms)
    via_k = top_factor(terms) * product_of(kf)
    slack = 1e-15 * abs(P.mid)
    for v in (via_terms, via_k):
        assert abs(v.mid - P.mid) <= slack + float(P.width + v.width)


def test_decomposition_identity_random():
    rng = random.Random(5)
    for _ in range(150):
        per = tuple(rng.randint(1, 7) for _ in range(rng.randint(1, 3)))
        _check_identity(ContinuedFraction.periodic(per), rng.randint(1, 10**4))


def test_decomposition_counts_terms():
    cf = parse_cf("[0;(5,4)]")
    terms, kf = decompose(cf, 27)
    assert len(terms) == sum(ostrowski(cf, 27).digits)
    assert len(kf) == 3


def test_epsilon_consistent_with_shift():
    # sum over terms reproduces the product: the shift of each factor is what epsilon_ik encodes
    cf = parse_cf("[0;(6,5)]")
    N = 1 + 6 + 31
    d = ostrowski(cf, N).digits
    e = epsilon_ik(cf, N, 0, 0)
    assert epsilon_ik(cf, d, 0, 0).overlaps(e)
    with pytest.raises(ValueError):
        epsilon_ik(cf, N, len(d), 0)


@pytest.mark.parametrize("eps", [Fraction(-1, 10), Fraction(0), Fraction(1, 10)])
def test_H_k_tracks_P_qk(eps):
    cf = parse_cf("[0;(6,5)]")
    diffs = []
    for k in range(4, 9):
        diffs.append(abs(sudler_perturbed(cf, k, eps).mid - H_k(cf, k, eps).mid))
    assert diffs[-1] < diffs[0]
    assert diffs[-1] < 5e-3


def test_H_k_vanishes_at_shift():
    cf = parse_cf("[0;(6,5)]")
    e = -Enclosure(qdelta_arb(cf, 5))
    assert H_k(cf, 5, e).contains(0)
    assert abs(H_k(cf, 5, e).hi) < 1e-30


def test_vanishing_subsequence():
    cf = parse_cf("[0;(7)]")
    assert vanishing_subsequence(cf, 0.1, 1.0, sampled_sup_probe(cf, 0.1), 0) == []
    c = 0.99
    out = vanishing_subsequence(cf, 0.004, c, sampled_sup_probe(cf, 0.004, max_q=10**6), 4)
    assert len(out) >= 2
    for j, o in enumerate(out, 1):
        assert o["sup"] < c
        assert o["P_N"].hi < c**j
    assert all(b["q"] >= 2 * a["q"] for a, b in zip(out, out[1:]))
    with pytest.raises(ValueError):
        vanishing_subsequence(cf, 0.3, 0.5, sampled_sup_probe(cf, 0.3), 2, max_depth=5)
