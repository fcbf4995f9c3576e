import random
from fractions import Fraction

import pytest

from cohepow.orders import (
    Finite, Found, Integers, Naturals, NotFoundWithin, Product, Rationals, Reverse, Sum,
    finite_k, int_decode, int_encode, interval_census, predecessor_census, product,
    rat_decode, rat_encode, reverse, simplest_between, successor_probe, sum_order,
)
from cohepow.clocked import pair


def test_naturals_and_reverse():
    N, Ns = Naturals(), Reverse(Naturals())
    assert N.less(3, 5) is True
    assert Ns.less(3, 5) is False and Ns.less(5, 3) is True


def test_integer_coding():
    assert [int_decode(c) for c in range(6)] == [0, -1, 1, -2, 2, -3]
    for z in range(-50, 50):
        assert int_decode(int_encode(z)) == z


def test_rational_coding_is_reduced():
    assert rat_decode(rat_encode(Fraction(2, 4))) == Fraction(1, 2)
    assert rat_decode(pair(int_encode(2), 3)) is None   # 2/4 is not reduced


def test_rationals_dense_on_random_pairs():
    Q = Rationals()
    rng = random.Random(0)
    for _ in range(100):
        a = Fraction(rng.randrange(-30, 30), rng.randrange(1, 12))
        b = a + Fraction(1, rng.randrange(1, 200))
        c = simplest_between(rat_encode(a), rat_encode(b))
        assert Q.less(rat_encode(a), c) and Q.less(c, rat_encode(b))


def test_simplest_between_least_denominator():
    def brute(qa, qb):
        d = 1
        while True:
            num = (qa * d).__floor__() + 1
            if Fraction(num, d) < qb:
                return Fraction(num, d)
            d += 1
    rng = random.Random(4)
    for _ in range(500):
        a = Fraction(rng.randrange(-40, 40), rng.randrange(1, 30))
        b = a + Fraction(rng.randrange(1, 20), rng.randrange(1, 400))
        assert rat_decode(simplest_between(rat_encode(a), rat_encode(b))) == brute(a, b)
    assert simplest_between(rat_encode(1), rat_encode(1)) is None


def test_sum_law():
    S = sum_order(Reverse(Naturals()), Naturals())
    for x in range(20):
        for y in range(20):
            assert S.less(pair(0, x), pair(1, y)) is True


def test_product_is_two_omega():
    P = product(finite_k(2), Naturals())
    elems = [(x, a) for x in range(10) for a in range(2)]
    for x, a in elems:
        for y, b in elems:
            assert P.less(pair(x, a), pair(y, b)) == (x < y or (x == y and a < b))
    assert P.contains(pair(3, 2)) is False


def test_reverse_is_an_involution():
    N, RR = Naturals(), reverse(reverse(Naturals()))
    assert all(N.less(a, b) == RR.less(a, b) for a in range(100) for b in range(100))


def test_successor_probe():
    assert successor_probe(Naturals(), 7, 100) == Found(8)
    Q = Rationals()
    for h in (50, 200, 800):
        assert isinstance(successor_probe(Q, rat_encode(Fraction(1, 3)), h), NotFoundWithin)


def test_predecessor_census():
    assert predecessor_census(Naturals(), 5, 10) == 5
    assert predecessor_census(Reverse(Naturals()), 5, 100) == 95
    Z = Integers()
    counts = [predecessor_census(Z, int_encode(0), B) for B in (10, 100, 1000)]
    assert counts[0] < counts[1] < counts[2]


def test_interval_census():
    N = Naturals()
    assert interval_census(N, 3, 7, 100) == 3
    assert interval_census(N, 4, 4, 100) == 0
    Q = Rationals()
    a, b = rat_encode(Fraction(0)), rat_encode(Fraction(1))
    counts = [interval_census(Q, a, b, B) for B in (100, 400, 1600)]
    assert counts[0] < counts[1] < counts[2]
    assert Q.census(a, b) == float("inf")


def test_finite_order():
    F = Finite(3)
    assert F.contains(2) and not F.contains(3)
