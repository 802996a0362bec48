import random
from fractions import Fraction

import pytest

from contlogic import groups as G
from contlogic import matrices as M
from contlogic import presentations as P
from contlogic.gaussian import GaussianRational, gr
from contlogic.pairing import pair as cantor_pair


@pytest.fixture(scope="module")
def pres_r():
    return P.presentation_R()


@pytest.fixture(scope="module")
def pres_c2w():
    return P.presentation_C2w()


@pytest.fixture(scope="module")
def pres_l_z():
    return P.presentation_L(G.free_abelian("u"))


@pytest.fixture(scope="module")
def pres_cstar_z():
    return P.presentation_CstarLambda(G.free_abelian("u"))


@pytest.fixture(scope="module")
def pres_cstar_f2():
    return P.presentation_CstarLambda(G.free_group("u", "v"))


def test_point_enumeration_base():
    assert P.algebra_point_at(0) == P.PSpecial(0)
    assert P.algebra_point_at(4) == P.PSpecial(1)


def test_point_enumeration_closure_products():
    for i in range(21):
        for j in range(21):
            idx = P.product_point_index(i, j)
            point = P.algebra_point_at(idx)
            assert point == P.PMul(P.algebra_point_at(i), P.algebra_point_at(j))


def test_point_enumeration_rounded_bounds_hold():
    for i in range(600):
        assert P.point_rounded_bounds_ok(P.algebra_point_at(i))


def test_matrix_presentation_special_in_unit_ball(pres_r):
    for i in range(1, 25):
        obj = pres_r.special_object(i)
        if obj.is_zero():
            continue
        bound = pres_r.special_bound(i)
        # |B| = |A|/p <= 1 is certified by construction; check the 2-norm side
        lo, hi = M.two_norm(obj, 10)
        assert lo <= 1 + Fraction(1, 2**9)


def test_matrix_presentation_zero_point(pres_r):
    point = P.PSpecial(0)  # (m, n) = (0, 0): the 1x1 zero matrix
    res = pres_r.norm_oracle(point, 10)
    assert res.value == 0


def test_matrix_presentation_identity_norm(pres_r):
    n_i2 = M.matrix_index(M.Matrix.identity(2))
    special = cantor_pair(3, n_i2)  # m = 3
    point = P.PSpecial(special)
    p_bound = pres_r.special_bound(special)
    assert p_bound == M.opnorm_upper(M.Matrix.identity(2), 3)
    res = pres_r.norm_oracle(point, 10)
    # 2-norm of I2/p is exactly 1/p
    assert abs(res.value - 1 / p_bound) < Fraction(1, 2**10)
    # cross-module equality of the radicand
    lo, hi = M.two_norm(pres_r.special_object(special), 12)
    assert lo <= 1 / p_bound <= hi


def test_cantor_presentation_examples(pres_c2w):
    one = P.CantorFn.constant(gr(1))
    assert pres_c2w.norm_interval(one, 10) == (1, 1)
    ind = P.CantorFn.indicator("0", gr(Fraction(3, 4)))
    assert pres_c2w.norm_interval(ind, 10) == (Fraction(3, 4), Fraction(3, 4))
    # modulus exactly 1 via the 3-4-5 triple
    ind345 = P.CantorFn.indicator("01", GaussianRational(Fraction(3, 5), Fraction(4, 5)))
    lo, hi = pres_c2w.norm_interval(ind345, 12)
    assert lo <= 1 <= hi and hi - lo <= Fraction(1, 2**12)
    # disjoint cylinders multiply to zero
    a = P.CantorFn.indicator("0", gr(1))
    b = P.CantorFn.indicator("1", gr(1))
    prod = a.mul(b)
    assert pres_c2w.norm_interval(prod, 10) == (0, 0)


def test_cantor_special_points_clipped(pres_c2w):
    for i in range(80):
        obj = pres_c2w.special_object(i)
        assert obj.sup_abs_sq() <= 1


def test_cantor_merge_canonical():
    f = P.CantorFn.from_tree((gr(1), gr(1)))
    assert f == P.CantorFn.constant(gr(1))


def test_l_presentation_identity(pres_l_z):
    ident_idx = G.group_algebra_index(G.identity_element(pres_l_z.spec))
    assert ident_idx == 1
    res = pres_l_z.norm_oracle(P.PSpecial(1), 10)
    assert abs(res.value - 1) < Fraction(1, 2**10)
    assert pres_l_z.trace(pres_l_z.special_object(1)) == gr(1)


def test_torus_upgrade_two_sided(pres_cstar_z):
    assert pres_cstar_z.mode == P.TWO_SIDED
    spec = pres_cstar_z.spec
    a = G.element(spec, [(Fraction(1, 2), (("u", 1),)), (Fraction(1, 2), (("u", -1),))])
    lo, hi = pres_cstar_z.norm_interval(a, 10)
    assert lo <= 1 <= hi
    assert hi - lo <= Fraction(1, 2**10)
    # moment lower bounds stay below the torus value
    for n in (1, 2, 5, 8):
        assert G.lambda_norm_lower(a, n, 10) <= hi + Fraction(1, 2**10)


def test_f2_lower_only_monotone(pres_cstar_f2):
    assert pres_cstar_f2.mode == P.LOWER_ONLY
    spec = pres_cstar_f2.spec
    a = G.element(
        spec,
        [(1, (("u", 1),)), (1, (("u", -1),)), (1, (("v", 1),)), (1, (("v", -1),))],
    )
    a = a.scale(gr(Fraction(1, 4)))  # l1-normalized
    lowers = [pres_cstar_f2.norm_interval(a, 10, budget=b)[0] for b in (1, 2, 4, 8)]
    assert lowers == sorted(lowers)
    lo, hi = pres_cstar_f2.norm_interval(a, 10, budget=10)
    assert lo <= hi == 1
    # spectral radius of the simple walk on the 4-regular tree: 2*sqrt(3)/4 ~ 0.8660 after l1 scaling
    assert lo <= Fraction(8661, 10000)
    assert lo >= Fraction(70, 100)


def test_lower_only_rejects_two_sided_queries(pres_cstar_f2):
    with pytest.raises(P.ModeMismatch):
        pres_cstar_f2.norm_two_sided(P.PSpecial(1), 8)


def test_z2_table_projection_norm():
    spec = G.table_group(("e", "a"), "e", [["e", "a"], ["a", "e"]], generators=("a",))
    pres = P.presentation_CstarLambda(spec)
    proj = G.element(spec, [(Fraction(1, 2), ()), (Fraction(1, 2), (("a", 1),))])
    lo, hi = pres.norm_interval(proj, 10, budget=16)
    assert hi == 1
    assert lo >= Fraction(95, 100)
    assert lo <= 1


def test_oracle_consistency_across_precisions(pres_r, pres_c2w, pres_l_z):
    for pres in (pres_r, pres_c2w, pres_l_z):
        for idx in (1, 2, 5, 9):
            point = pres.rational_point(idx)
            a = pres.norm_oracle(point, 6)
            b = pres.norm_oracle(point, 7)
            assert max(a.lower, b.lower) <= min(a.upper, b.upper)


def test_adjoint_invariance(pres_r, pres_c2w, pres_l_z, pres_cstar_f2):
    k = 8
    for pres in (pres_r, pres_c2w, pres_l_z, pres_cstar_f2):
        for idx in (1, 3, 6, 11):
            point = pres.rational_point(idx)
            a = pres.norm_oracle(point, k, budget=4)
            b = pres.norm_oracle(P.PAdj(point), k, budget=4)
            if pres.mode == P.TWO_SIDED:
                assert abs(a.value - b.value) <= 2 * Fraction(1, 2**k)
            else:
                # same certified bounds: the norm is *-invariant
                assert a.lower == b.lower and a.upper == b.upper


def test_lower_le_upper_always(pres_cstar_f2):
    rng = random.Random(12)
    for _ in range(10):
        idx = rng.randint(0, 40)
        res = pres_cstar_f2.norm_oracle(pres_cstar_f2.rational_point(idx), 8, budget=3)
        assert res.lower <= res.upper


def test_metric_distance_atom(pres_l_z):
    # d(x, x) evaluates to an interval containing 0
    obj = pres_l_z.special_object(1)
    lo, hi = pres_l_z.atom_interval("d", [obj, obj], 10)
    assert lo == 0
    assert hi <= Fraction(1, 2**9)


def test_trace_atoms(pres_l_z):
    obj = pres_l_z.special_object(1)  # identity
    lo, hi = pres_l_z.atom_interval("tr_re", [obj], 10)
    assert lo == hi == 1
    lo, hi = pres_l_z.atom_interval("tr_im", [obj], 10)
    assert lo == hi == Fraction(1, 2)
