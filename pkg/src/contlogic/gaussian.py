"""Exact arithmetic over the Gaussian rationals Q(i).

All certified computations in this package reduce to Fraction arithmetic on
real and imaginary parts.  Moduli |z| are irrational in general, so the module
exposes exact *bounds* instead: ``abs_sq`` (exact), ``abs_upper`` (|re|+|im|)
and ``abs_lower`` (max(|re|,|im|)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction]


@dataclass(frozen=True)
class GaussianRational:
    """A complex number with rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        other = _coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        other = _coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "GaussianRational":
        return _coerce(other).__sub__(self)

    def __mul__(self, other) -> "GaussianRational":
        other = _coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "GaussianRational":
        other = _coerce(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussianRational(num.re / d, num.im / d)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    # -- certified modulus bounds -------------------------------------------

    def abs_sq(self) -> Fraction:
        """Exact |z|^2."""
        return self.re * self.re + self.im * self.im

    def abs_upper(self) -> Fraction:
        """Rational upper bound |re|+|im| >= |z|."""
        return abs(self.re) + abs(self.im)

    def abs_lower(self) -> Fraction:
        """Rational lower bound max(|re|,|im|) <= |z|."""
        return max(abs(self.re), abs(self.im))

    # -- misc ----------------------------------------------------------------

    def sort_key(self) -> tuple:
        return (self.re, self.im)

    def __str__(self) -> str:
        return f"{self.re}{'+' if self.im >= 0 else ''}{self.im}i"


def _coerce(value) -> GaussianRational:
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussianRational(Fraction(value), Fraction(0))
    raise TypeError(f"cannot coerce {value!r} to GaussianRational")


def gr(re: RationalLike = 0, im: RationalLike = 0) -> GaussianRational:
    """Shorthand constructor."""
    return GaussianRational(Fraction(re), Fraction(im))


ZERO = gr(0)
ONE = gr(1)
I = gr(0, 1)
