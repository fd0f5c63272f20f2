from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from sudler.cf import (
    ContinuedFraction,
    QuadraticSurd,
    admissible_tuples,
    brute_force_ostrowski,
    cf_from_surd,
    convergents,
    gauss_map,
    is_admissible,
    is_legal_ostrowski,
    limit_constant,
    ostrowski,
    parse_cf,
    rotation_surds,
    surd_from_periodic_cf,
)

PHI = QuadraticSurd(-1, 1, 5, 2)
periods = st.lists(st.integers(1, 9), min_size=1, max_size=3).map(tuple)


def surd_mp(x: QuadraticSurd):
    return (x.a + x.b * mpmath.sqrt(x.d)) / x.s


def test_parse_literals():
    cf = parse_cf("[0;3,(6,5)]")
    assert cf.preperiod == (3,) and cf.period == (6, 5)
    assert parse_cf("1/2").is_finite
    with pytest.raises(ValueError):
        parse_cf("[0;(1,2")
    with pytest.raises(ValueError):
        parse_cf("garbage")


def test_convergent_denominators():
    assert list(convergents(parse_cf("[0;(1)]"), 4).q) == [1, 1, 2, 3, 5]
    assert list(convergents(parse_cf("[0;(5,4)]"), 4).q) == [1, 5, 21, 110, 461]


@given(periods, st.integers(2, 30))
def test_convergent_identities(per, k):
    c = convergents(ContinuedFraction.periodic(per), k + 2)
    p, q = c.p, c.q
    for j in range(1, k + 1):
        assert p[j] * q[j - 1] - p[j - 1] * q[j] == (-1) ** (j + 1)
        assert q[j + 1] >= 2 * q[j - 1]


def test_surd_values():
    assert surd_from_periodic_cf(parse_cf("[0;(1)]")) == PHI
    assert surd_from_periodic_cf(parse_cf("[0;(5,4)]")) == QuadraticSurd(-10, 2, 30, 5)


def test_cf_from_surd_examples():
    assert cf_from_surd(PHI, 5) == [0, 1, 1, 1, 1, 1]
    assert cf_from_surd(QuadraticSurd(-10, 2, 30, 5), 4) == [0, 5, 4, 5, 4]
    with pytest.raises(ValueError):
        cf_from_surd(QuadraticSurd.rational(Fraction(1, 3)), 3)


@given(periods, st.lists(st.integers(1, 9), max_size=2).map(tuple))
def test_periodic_round_trip(per, pre):
    cf = ContinuedFraction.periodic(per, pre)
    x = surd_from_periodic_cf(cf)
    n = len(pre) + 3 * len(per)
    assert cf_from_surd(x, n) == [0] + cf.digits(n)


@given(periods)
def test_surd_sign_matches_mpmath(per):
    x = surd_from_periodic_cf(ContinuedFraction.periodic(per))
    with mpmath.workdps(50):
        y = x - Fraction(1, 2)
        assert y.sign() == mpmath.sign(surd_mp(x) - mpmath.mpf(1) / 2)
        assert abs(surd_mp(x) - mpmath.mpf(float(x))) < 1e-15


def test_gauss_map():
    assert gauss_map(PHI) == PHI
    a54 = surd_from_periodic_cf(parse_cf("[0;(5,4)]"))
    assert gauss_map(a54) == surd_from_periodic_cf(parse_cf("[0;(4,5)]"))
    assert gauss_map(Fraction(0)) == 0
    assert gauss_map(Fraction(2, 7)) == Fraction(1, 2)


def test_rotation_surds_and_limit_constant():
    cf = parse_cf("[0;(5,4)]")
    tau, sigma = rotation_surds(cf, 1)
    assert tau == surd_from_periodic_cf(parse_cf("[0;(4,5)]"))
    # backward rotation is the limit of q_{k-1}/q_k along the residue class
    c = convergents(cf, 41)
    assert abs(float(sigma) - c.q[40] / c.q[41]) < 1e-14
    tau0, sigma0 = rotation_surds(cf, 0)
    assert abs(float(sigma0) - c.q[39] / c.q[40]) < 1e-14


@pytest.mark.parametrize("lit", ["[0;(1)]", "[0;(5,4)]", "[0;(6,5,5)]", "[0;(2,7)]"])
def test_limit_constant_is_limit_of_q_delta(lit):
    cf = parse_cf(lit)
    with mpmath.workdps(60):
        x = surd_mp(surd_from_periodic_cf(cf))
        c = convergents(cf, 40)
        for r in range(cf.ell):
            k = 30 + (r - 30) % cf.ell
            qd = c.q[k] * abs(c.q[k] * x - c.p[k])
            assert abs(qd - surd_mp(limit_constant(cf, r))) < 1e-12


def test_golden_limit_constant():
    assert limit_constant(parse_cf("[0;(1)]"), 0) == QuadraticSurd(0, 1, 5, 5)


def test_ostrowski_examples():
    assert ostrowski(parse_cf("[0;(1)]"), 4).digits == (0, 1, 0, 1)
    assert ostrowski(parse_cf("[0;(5,4)]"), 27).digits == (1, 1, 1)
    assert ostrowski(parse_cf("[0;(5,4)]"), 0).digits == (0,)
    with pytest.raises(ValueError):
        ostrowski(parse_cf("[0;(1)]"), -1)
    with pytest.raises(ValueError):
        ostrowski(parse_cf("2/7"), 7)


@pytest.mark.parametrize("lit", ["[0;(1)]", "[0;(5,4)]", "[0;(6,5,5)]", "[0;(2,1,3)]", "[0;3,(1,2)]"])
def test_ostrowski_round_trip_exhaustive(lit):
    cf = parse_cf(lit)
    q = convergents(cf, 40).q
    for N in range(0, 20_001):
        d = ostrowski(cf, N).digits
        assert sum(b * q[i] for i, b in enumerate(d)) == N
        assert is_legal_ostrowski(cf, d)


def test_ostrowski_unique():
    for lit in ("[0;(1)]", "[0;(2,3)]", "[0;(6,5,5)]"):
        cf = parse_cf(lit)
        for N in range(1, 300):
            reps = brute_force_ostrowski(cf, N)
            assert len(reps) == 1
            assert tuple(reps[0]) == ostrowski(cf, N).digits


def test_admissibility():
    cf = parse_cf("[0;(6,5)]")
    assert not is_admissible((1, 5), 1, cf)
    assert is_admissible((0, 5), 1, cf)


@pytest.mark.parametrize("lit,length", [("[0;(5,4)]", 4), ("[0;(6,5,5)]", 4), ("[0;(2,1)]", 6)])
def test_admissible_tuples_exhaustive(lit, length):
    cf = parse_cf(lit)
    for r in range(cf.ell):
        got = set(admissible_tuples(cf, r, length))
        bound = max(cf.period) + 1
        want = set()
        for n in range(bound**length):
            t = tuple((n // bound**j) % bound for j in range(length))
            if is_admissible(t, r, cf):
                want.add(t)
        assert got == want


def test_random_ostrowski_large():
    rng = random.Random(11)
    cf = parse_cf("[0;(6,5)]")
    q = convergents(cf, 40).q
    for _ in range(2000):
        N = rng.randrange(10**5)
        d = ostrowski(cf, N).digits
        assert sum(b * q[i] for i, b in enumerate(d)) == N and is_legal_ostrowski(cf, d)
