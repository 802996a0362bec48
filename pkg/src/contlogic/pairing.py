"""Bijective encodings between naturals and structured data.

These pairings are the documented, frozen basis of every enumeration and
Goedel code in the package; changing them invalidates stored codes.

  - `pair`/`unpair`: the Cantor pairing (a+b)(a+b+1)/2 + b.
  - `encode_list`/`decode_list`: 0 <-> [], n+1 <-> pair(head, code(tail)).
  - `nat_to_rat`/`rat_to_nat`: bijection N <-> Q via the Calkin-Wilf tree
    (0 -> 0; odd/even indices carry +/- signs).
  - `nat_to_gaussian`/`gaussian_to_nat`: Cantor pair of the two Q codes.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .gaussian import GaussianRational


def pair(a: int, b: int) -> int:
    if a < 0 or b < 0:
        raise ValueError("pair needs naturals")
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(n: int) -> tuple[int, int]:
    if n < 0:
        raise ValueError("unpair needs a natural")
    w = (isqrt(8 * n + 1) - 1) // 2
    b = n - w * (w + 1) // 2
    return w - b, b


def encode_list(items: list[int]) -> int:
    code = 0
    for item in reversed(items):
        code = pair(item, code) + 1
    return code


def decode_list(code: int) -> list[int]:
    items = []
    while code > 0:
        head, code = unpair(code - 1)
        items.append(head)
    return items


def encode_tuple(items: list[int]) -> int:
    """Left fold of `pair` over a tuple of known arity (arity >= 1)."""
    if not items:
        raise ValueError("encode_tuple needs at least one item")
    code = items[0]
    for item in items[1:]:
        code = pair(code, item)
    return code


def decode_tuple(code: int, arity: int) -> list[int]:
    if arity < 1:
        raise ValueError("decode_tuple needs arity >= 1")
    items = []
    for _ in range(arity - 1):
        code, item = unpair(code)
        items.append(item)
    items.append(code)
    return list(reversed(items))


def _calkin_wilf(index: int) -> Fraction:
    """index >= 1 -> positive rational, breadth-first Calkin-Wilf order."""
    bits = bin(index)[3:]  # drop '0b1'
    q = Fraction(1)
    for bit in bits:
        q = q + 1 if bit == "1" else q / (q + 1)
    return q


def _calkin_wilf_index(q: Fraction) -> int:
    if q <= 0:
        raise ValueError("needs a positive rational")
    bits = []
    a, b = q.numerator, q.denominator
    while (a, b) != (1, 1):
        if a > b:
            bits.append("1")
            a -= b
        else:
            bits.append("0")
            b -= a
    return int("1" + "".join(reversed(bits)), 2)


def nat_to_rat(n: int) -> Fraction:
    if n == 0:
        return Fraction(0)
    mag = _calkin_wilf((n + 1) // 2)
    return mag if n % 2 == 1 else -mag


def rat_to_nat(q: Fraction) -> int:
    q = Fraction(q)
    if q == 0:
        return 0
    idx = _calkin_wilf_index(abs(q))
    return 2 * idx - 1 if q > 0 else 2 * idx


def nat_to_gaussian(n: int) -> GaussianRational:
    a, b = unpair(n)
    return GaussianRational(nat_to_rat(a), nat_to_rat(b))


def gaussian_to_nat(z: GaussianRational) -> int:
    return pair(rat_to_nat(z.re), rat_to_nat(z.im))
