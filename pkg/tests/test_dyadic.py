import random
from fractions import Fraction

from hypothesis import given, strategies as st

from contlogic.dyadic import (
    dyadic_ceil,
    dyadic_floor,
    int_nth_root,
    is_dyadic,
    nth_root_lower_grid,
    nth_root_upper_grid,
    sqrt_interval,
)


def test_is_dyadic():
    assert is_dyadic(Fraction(3, 8))
    assert is_dyadic(Fraction(5))
    assert not is_dyadic(Fraction(1, 3))


def test_floor_ceil_grid():
    assert dyadic_floor(Fraction(5, 3), 2) == Fraction(6, 4)
    assert dyadic_ceil(Fraction(5, 3), 2) == Fraction(7, 4)
    assert dyadic_floor(Fraction(3, 4), 2) == Fraction(3, 4) == dyadic_ceil(Fraction(3, 4), 2)


@given(st.integers(0, 10**12), st.integers(1, 9))
def test_int_nth_root_exact(x, n):
    r = int_nth_root(x, n)
    assert r**n <= x < (r + 1) ** n


def test_sqrt_interval_exact_square():
    lo, hi = sqrt_interval(Fraction(9, 16), 10)
    assert lo == hi == Fraction(3, 4)


def test_sqrt_interval_encloses():
    rng = random.Random(7)
    for _ in range(100):
        x = Fraction(rng.randint(0, 10**6), rng.randint(1, 10**6))
        k = rng.randint(0, 20)
        lo, hi = sqrt_interval(x, k)
        assert lo * lo <= x <= hi * hi
        assert hi - lo <= Fraction(1, 2**k)
        assert is_dyadic(lo) and is_dyadic(hi)


def test_nth_root_upper_grid_is_ceiling():
    # 2^(1/2) between 1.414 and 1.415; grid 2^-10
    up = nth_root_upper_grid(Fraction(2), 2, 10)
    assert up**2 >= 2
    assert (up - Fraction(1, 1024)) ** 2 < 2
    # exact when the root lies on the grid
    assert nth_root_upper_grid(Fraction(1), 512, 16) == 1
    assert nth_root_upper_grid(Fraction(9, 4), 2, 4) == Fraction(3, 2)


def test_nth_root_upper_grid_monotone_in_radicand():
    rng = random.Random(11)
    values = sorted(
        Fraction(rng.randint(1, 10**8), rng.randint(1, 10**4)) for _ in range(40)
    )
    bounds = [nth_root_upper_grid(v, 6, 12) for v in values]
    assert bounds == sorted(bounds)


def test_nth_root_lower_grid_sandwich():
    rng = random.Random(13)
    for _ in range(50):
        x = Fraction(rng.randint(0, 10**9), rng.randint(1, 100))
        n = rng.choice([2, 4, 10, 80])
        k = rng.randint(1, 16)
        lo = nth_root_lower_grid(x, n, k, hi_pow2=40)
        assert lo**n <= x
        assert (lo + Fraction(1, 2**k)) ** n >= x
        assert is_dyadic(lo)


def test_nth_root_lower_grid_is_grid_floor():
    # value exactly on the grid comes back unchanged
    assert nth_root_lower_grid(Fraction(9, 16), 2, 8, hi_pow2=2) == Fraction(3, 4)
