import random
from fractions import Fraction

from contlogic.gaussian import GaussianRational, gr
from contlogic.pairing import (
    decode_list,
    decode_tuple,
    encode_list,
    encode_tuple,
    gaussian_to_nat,
    nat_to_gaussian,
    nat_to_rat,
    pair,
    rat_to_nat,
    unpair,
)


def test_pair_unpair_roundtrip():
    for n in range(2000):
        a, b = unpair(n)
        assert pair(a, b) == n
    for a in range(40):
        for b in range(40):
            assert unpair(pair(a, b)) == (a, b)


def test_list_codes():
    rng = random.Random(3)
    for _ in range(200):
        items = [rng.randint(0, 50) for _ in range(rng.randint(0, 6))]
        assert decode_list(encode_list(items)) == items
    assert encode_list([]) == 0


def test_tuple_codes():
    rng = random.Random(4)
    for _ in range(200):
        arity = rng.randint(1, 5)
        items = [rng.randint(0, 30) for _ in range(arity)]
        assert decode_tuple(encode_tuple(items), arity) == items


def test_rat_bijection_small_values():
    seen = [nat_to_rat(n) for n in range(200)]
    assert seen[0] == 0
    assert seen[1] == 1
    assert len(set(seen)) == 200
    for n in range(200):
        assert rat_to_nat(seen[n]) == n


def test_rat_roundtrip_random():
    rng = random.Random(5)
    for _ in range(300):
        q = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))
        assert nat_to_rat(rat_to_nat(q)) == q


def test_gaussian_roundtrip():
    rng = random.Random(6)
    for _ in range(200):
        z = GaussianRational(
            Fraction(rng.randint(-100, 100), rng.randint(1, 100)),
            Fraction(rng.randint(-100, 100), rng.randint(1, 100)),
        )
        assert nat_to_gaussian(gaussian_to_nat(z)) == z
    assert nat_to_gaussian(0) == gr(0)


def test_gaussian_arithmetic():
    a = gr(Fraction(1, 2), Fraction(1, 3))
    b = gr(Fraction(2), Fraction(-1))
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert a * b / b == a
    assert (a - a).is_zero()
    assert gr(3, 4).abs_sq() == 25
    assert gr(3, 4).abs_upper() == 7
    assert gr(3, 4).abs_lower() == 4
