import random
from fractions import Fraction

import pytest

from contlogic import matrices as M
from contlogic.dyadic import nth_root_upper_grid
from contlogic.gaussian import GaussianRational, gr


def random_matrix(rng: random.Random, n: int, denom: int = 4) -> M.Matrix:
    def entry():
        return GaussianRational(
            Fraction(rng.randint(-8, 8), rng.randint(1, denom)),
            Fraction(rng.randint(-8, 8), rng.randint(1, denom)),
        )

    return M.Matrix([[entry() for _ in range(n)] for _ in range(n)])


def random_vector(rng: random.Random, n: int):
    return tuple(
        GaussianRational(Fraction(rng.randint(-8, 8)), Fraction(rng.randint(-8, 8)))
        for _ in range(n)
    )


def test_normalized_trace_identity():
    for n in (1, 2, 5):
        assert M.normalized_trace(M.Matrix.identity(n)) == gr(1)


def test_conj_transpose_involution():
    rng = random.Random(2)
    for _ in range(20):
        a = random_matrix(rng, 3)
        assert a.conj_transpose().conj_transpose() == a


def test_trace_cyclic():
    rng = random.Random(3)
    for _ in range(20):
        a, b = random_matrix(rng, 3), random_matrix(rng, 3)
        assert M.normalized_trace(a * b) == M.normalized_trace(b * a)


def test_size_mismatch():
    with pytest.raises(M.SizeMismatch):
        M.Matrix.identity(2) * M.Matrix.identity(4)


def test_two_norm_examples():
    assert M.two_norm(M.Matrix.identity(2), 10) == (1, 1)
    proj = M.Matrix([[gr(1), gr(0)], [gr(0), gr(0)]])
    lo, hi = M.two_norm(proj, 20)
    # sqrt(1/2) ~ 0.70711
    assert lo * lo <= Fraction(1, 2) <= hi * hi
    assert hi - lo <= Fraction(1, 2**20)
    assert M.two_norm(M.Matrix.zero(3), 10) == (0, 0)


def test_opnorm_upper_identity():
    # tr(H^(2^m)) = 2 for I_2, so the bound is the grid ceiling of 2^(1/2^(m+1))
    for m in (0, 1, 3):
        bound = M.opnorm_upper(M.Matrix.identity(2), m)
        assert bound == nth_root_upper_grid(Fraction(2), 2 ** (m + 1), 16)
        assert bound >= 1


def test_opnorm_upper_projection_exact_at_zero():
    proj = M.Matrix([[gr(1), gr(0)], [gr(0), gr(0)]])
    assert M.opnorm_upper(proj, 0) == 1
    for m in (1, 2, 5):
        assert M.opnorm_upper(proj, m) == 1


def test_opnorm_upper_zero_matrix():
    assert M.opnorm_upper(M.Matrix.zero(2), 3) == 0


def test_opnorm_upper_monotone_in_m():
    rng = random.Random(5)
    for _ in range(10):
        a = random_matrix(rng, 4)
        bounds = [M.opnorm_upper(a, m) for m in range(7)]
        for b1, b2 in zip(bounds, bounds[1:]):
            assert b2 <= b1


def test_opnorm_lower_examples():
    ident = M.Matrix.identity(3)
    v = (gr(1), gr(2), gr(0))
    lower = M.opnorm_lower(ident, v, 16)
    assert lower <= 1
    assert lower >= 1 - Fraction(1, 2**15)
    proj = M.Matrix([[gr(1), gr(0)], [gr(0), gr(0)]])
    assert M.opnorm_lower(proj, (gr(1), gr(0)), 16) == 1
    with pytest.raises(M.ZeroVector):
        M.opnorm_lower(ident, (gr(0), gr(0), gr(0)), 8)


def test_rayleigh_sandwich():
    rng = random.Random(7)
    for _ in range(10):
        a = random_matrix(rng, 4)
        upper = M.opnorm_upper(a, 6)
        best = max(M.opnorm_lower(a, random_vector(rng, 4), 12) for _ in range(16))
        assert best <= upper


def test_two_norm_below_opnorm():
    rng = random.Random(8)
    for _ in range(10):
        a = random_matrix(rng, 4)
        lo, hi = M.two_norm(a, 12)
        assert lo <= M.opnorm_upper(a, 6) + Fraction(1, 2**10)


def test_embed_dyadic():
    assert M.embed_dyadic(M.Matrix.identity(2)) == M.Matrix.identity(4)
    rng = random.Random(9)
    for _ in range(10):
        a, b = random_matrix(rng, 2), random_matrix(rng, 2)
        ea, eb = M.embed_dyadic(a), M.embed_dyadic(b)
        assert M.embed_dyadic(a * b) == ea * eb
        assert M.normalized_trace(ea) == M.normalized_trace(a)
        assert M.two_norm(ea, 14) == M.two_norm(a, 14)
    with pytest.raises(M.NotDyadicSize):
        M.embed_dyadic(M.Matrix.identity(3))


def test_enumerate_matrices_base_and_positions():
    assert M.enumerate_matrices(0) == M.Matrix.zero(1)
    i1 = M.matrix_index(M.Matrix.identity(1))
    i2 = M.matrix_index(M.Matrix.identity(2))
    assert i1 < 200 and i2 < 200
    assert M.enumerate_matrices(i1) == M.Matrix.identity(1)
    assert M.enumerate_matrices(i2) == M.Matrix.identity(2)


def test_enumerate_matrices_injective_and_roundtrip():
    seen = set()
    for i in range(200):
        a = M.enumerate_matrices(i)
        assert a not in seen
        seen.add(a)
        assert M.matrix_index(a) == i
