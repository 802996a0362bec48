"""Exact Gaussian-rational matrix arithmetic with certified norm bounds.

The normalized trace tr(A)/n makes matrix algebras of dyadic sizes 2^k (with
the trace-preserving inclusions A -> A (x) I_2) a single tracial tower whose
2-norms are exactly computable.  Certified operator-norm upper bounds come
from trace powers: |A|^2 = |A* A| <= (tr((A* A)^(2^m)))^(1/2^m), with the
root ceiled onto a fixed dyadic grid so bounds are monotone in m by exact
comparison.  No floating point appears in any certified path.
"""

from __future__ import annotations

from fractions import Fraction

from .dyadic import nth_root_upper_grid, sqrt_interval
from .gaussian import GaussianRational, gr
from .pairing import decode_tuple, encode_tuple, gaussian_to_nat, nat_to_gaussian


class MatrixError(Exception):
    pass


class SizeMismatch(MatrixError):
    pass


class ZeroVector(MatrixError):
    pass


class NotDyadicSize(MatrixError):
    pass


class Matrix:
    """A square matrix over Q(i); rows are tuples of GaussianRational."""

    __slots__ = ("n", "rows")

    def __init__(self, rows):
        rows = tuple(tuple(entry for entry in row) for row in rows)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise SizeMismatch("matrix must be square")
        self.n = n
        self.rows = rows

    @staticmethod
    def zero(n: int) -> "Matrix":
        z = gr(0)
        return Matrix([[z] * n for _ in range(n)])

    @staticmethod
    def identity(n: int) -> "Matrix":
        one, z = gr(1), gr(0)
        return Matrix([[one if i == j else z for j in range(n)] for i in range(n)])

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"Matrix({self.n}x{self.n})"

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.n != other.n:
            raise SizeMismatch(f"{self.n} vs {other.n}")
        return Matrix(
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ]
        )

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.n != other.n:
            raise SizeMismatch(f"{self.n} vs {other.n}")
        cols = list(zip(*other.rows))
        return Matrix(
            [
                [sum((a * b for a, b in zip(row, col)), gr(0)) for col in cols]
                for row in self.rows
            ]
        )

    def scale(self, lam) -> "Matrix":
        if not isinstance(lam, GaussianRational):
            lam = gr(Fraction(lam))
        return Matrix([[e * lam for e in row] for row in self.rows])

    def conj_transpose(self) -> "Matrix":
        return Matrix(
            [
                [self.rows[j][i].conjugate() for j in range(self.n)]
                for i in range(self.n)
            ]
        )

    def trace(self) -> GaussianRational:
        return sum((self.rows[i][i] for i in range(self.n)), gr(0))

    def normalized_trace(self) -> GaussianRational:
        t = self.trace()
        return GaussianRational(t.re / self.n, t.im / self.n)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.rows for e in row)

    def apply(self, v: tuple[GaussianRational, ...]) -> tuple[GaussianRational, ...]:
        if len(v) != self.n:
            raise SizeMismatch(f"vector length {len(v)} vs size {self.n}")
        return tuple(sum((a * x for a, x in zip(row, v)), gr(0)) for row in self.rows)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return a * b


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return a + b


def conj_transpose(a: Matrix) -> Matrix:
    return a.conj_transpose()


def normalized_trace(a: Matrix) -> GaussianRational:
    return a.normalized_trace()


def two_norm(a: Matrix, k: int) -> tuple[Fraction, Fraction]:
    """Dyadic interval of width <= 2^-k around sqrt(tr(A* A)/n).

    The radicand is sum |a_ij|^2 / n, exact and nonnegative.
    """
    radicand = (
        sum((e.abs_sq() for row in a.rows for e in row), Fraction(0)) / a.n
    )
    return sqrt_interval(radicand, k)


def opnorm_upper(a: Matrix, m: int, prec: int = 16) -> Fraction:
    """Certified rational p >= |A| (operator norm) from m trace squarings.

    p = (tr(H^(2^m)))^(1/2^(m+1)) with H = A* A, ceiled to the 2^-prec grid.
    Since sum of the 2^m-th eigenvalue powers dominates the largest one and
    grid ceiling is monotone, p is sound and nonincreasing in m.
    """
    if m < 0:
        raise ValueError("m must be a natural")
    h = a.conj_transpose() * a
    power = h
    for _ in range(m):
        power = power * power
    t = power.trace()
    if t.im != 0 or t.re < 0:
        raise AssertionError("trace of a power of A*A must be real nonnegative")
    return nth_root_upper_grid(t.re, 2 ** (m + 1), prec)


def opnorm_lower(a: Matrix, v: tuple[GaussianRational, ...], k: int = 16) -> Fraction:
    """Certified dyadic lower bound |Av|_2 / |v|_2 <= |A| (Rayleigh witness)."""
    vv = sum((x.abs_sq() for x in v), Fraction(0))
    if vv == 0:
        raise ZeroVector("Rayleigh witness must be nonzero")
    av = a.apply(v)
    ratio = sum((x.abs_sq() for x in av), Fraction(0)) / vv
    return sqrt_interval(ratio, k)[0]


def embed_dyadic(a: Matrix) -> Matrix:
    """Trace-preserving inclusion A -> A (x) I_2 between dyadic sizes."""
    if a.n & (a.n - 1) != 0:
        raise NotDyadicSize(f"size {a.n} is not a power of two")
    z = gr(0)
    out = []
    for row in a.rows:
        expanded0 = []
        expanded1 = []
        for e in row:
            expanded0.extend([e, z])
            expanded1.extend([z, e])
        out.append(expanded0)
        out.append(expanded1)
    return Matrix(out)


def embed_to_size(a: Matrix, n: int) -> Matrix:
    """Iterate the dyadic embedding until the matrix has size n."""
    out = a
    while out.n < n:
        out = embed_dyadic(out)
    if out.n != n:
        raise NotDyadicSize(f"cannot reach size {n} from {a.n}")
    return out


# ---------------------------------------------------------------------------
# enumeration of union over k of M_{2^k}(Q(i))
# ---------------------------------------------------------------------------
#
# index + 1 = 2^k * (2j + 1): the 2-adic valuation selects the size 2^k, and
# j is an iterated Cantor pair of the 4^k row-major entry codes (Gaussian
# rationals via contlogic.pairing).  This is a bijection, so the enumeration
# is injective and every dyadic-size matrix appears exactly once.


def enumerate_matrices(index: int) -> Matrix:
    if index < 0:
        raise ValueError("index must be a natural")
    n = index + 1
    k = (n & -n).bit_length() - 1
    j = ((n >> k) - 1) // 2
    size = 1 << k
    count = size * size
    codes = decode_tuple(j, count) if count > 1 else [j]
    entries = [nat_to_gaussian(c) for c in codes]
    rows = [entries[i * size : (i + 1) * size] for i in range(size)]
    return Matrix(rows)


def matrix_index(a: Matrix) -> int:
    """Inverse of `enumerate_matrices` (documents matrix positions)."""
    if a.n & (a.n - 1) != 0:
        raise NotDyadicSize(f"size {a.n} is not a power of two")
    k = a.n.bit_length() - 1
    codes = [gaussian_to_nat(e) for row in a.rows for e in row]
    j = encode_tuple(codes) if len(codes) > 1 else codes[0]
    return (1 << k) * (2 * j + 1) - 1
