"""Certified dyadic interval arithmetic for roots of exact rationals.

Every function here takes exact Fractions in and returns exact Fractions out;
no floating point is used anywhere.  Square roots and n-th roots are bounded
by integer-root computations on scaled numerators/denominators, so each bound
carries an arithmetic proof of its own correctness (lo**n <= x <= hi**n).
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


def is_dyadic(x: Fraction) -> bool:
    d = Fraction(x).denominator
    return d & (d - 1) == 0


def dyadic_floor(x: Fraction, k: int) -> Fraction:
    """Largest multiple of 2^-k that is <= x."""
    scale = 1 << k
    return Fraction((x.numerator * scale) // x.denominator, scale)


def dyadic_ceil(x: Fraction, k: int) -> Fraction:
    """Smallest multiple of 2^-k that is >= x."""
    scale = 1 << k
    return Fraction(-((-x.numerator * scale) // x.denominator), scale)


def rational_floor_sqrt(x: Fraction) -> int:
    """floor(sqrt(x)) for x >= 0."""
    if x < 0:
        raise ValueError("negative radicand")
    return isqrt(x.numerator // x.denominator)


def sqrt_interval(x: Fraction, k: int) -> tuple[Fraction, Fraction]:
    """Dyadic lo <= sqrt(x) <= hi with hi - lo <= 2^-k, exact when possible.

    lo = floor(sqrt(x * 4^k)) / 2^k, so lo is the grid floor of sqrt(x); the
    interval collapses to a point when x is a perfect square of a grid value.
    """
    if x < 0:
        raise ValueError("negative radicand")
    scale = 1 << k
    scaled = x * scale * scale
    n, d = scaled.numerator, scaled.denominator
    t = isqrt(n // d)
    lo = Fraction(t, scale)
    if t * t * d == n:
        return lo, lo
    return lo, Fraction(t + 1, scale)


def int_nth_root(x: int, n: int) -> int:
    """floor(x ** (1/n)) by Newton iteration, exact for any nonnegative int."""
    if x < 0 or n < 1:
        raise ValueError("int_nth_root needs x >= 0, n >= 1")
    if x == 0:
        return 0
    if n == 1:
        return x
    # Initial guess from bit length; Newton descends monotonically from above.
    guess = 1 << -(-x.bit_length() // n)
    while True:
        nxt = ((n - 1) * guess + x // guess ** (n - 1)) // n
        if nxt >= guess:
            break
        guess = nxt
    while guess ** n > x:
        guess -= 1
    return guess


def nth_root_upper_grid(x: Fraction, n: int, k: int) -> Fraction:
    """Smallest multiple of 2^-k that is >= x ** (1/n), for x >= 0.

    Ceiling to a fixed grid is monotone in x, which downstream code relies on
    for exact-comparison monotonicity of certified upper bounds.
    """
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return Fraction(0)
    scale = 1 << k
    # want least c with (c/scale)^n >= x, i.e. c^n * den >= num * scale^n
    num = x.numerator * scale**n
    den = x.denominator
    c = int_nth_root(num // den, n)
    while c**n * den < num:
        c += 1
    return Fraction(c, scale)


def nth_root_lower_grid(x: Fraction, n: int, k: int, hi_pow2: int) -> Fraction:
    """Dyadic q with q <= x ** (1/n) <= q + 2^-k, for 0 <= x <= (2^hi_pow2)^n.

    Bisection on the dyadic grid: endpoints stay dyadic, comparisons are exact
    rational power comparisons, and the returned value is the grid floor (ties
    land on the grid point itself), hence monotone in x.
    """
    if x < 0:
        raise ValueError("negative radicand")
    lo = Fraction(0)
    hi = Fraction(1 << hi_pow2) if hi_pow2 >= 0 else Fraction(1, 1 << -hi_pow2)
    if hi**n < x:
        raise ValueError("hi_pow2 too small for radicand")
    steps = hi_pow2 + k
    for _ in range(max(steps, 0)):
        mid = (lo + hi) / 2
        if mid**n <= x:
            lo = mid
        else:
            hi = mid
    return lo
