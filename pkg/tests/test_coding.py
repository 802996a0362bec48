import random
from fractions import Fraction

import pytest

from contlogic import coding, formulas as F

from helpers import random_formula, random_sentence

d = lambda a, b: F.Atomic("d", (a, b))
x = F.Var("x")
c1, c2 = F.CConst(1), F.CConst(2)


def test_roundtrip_simple():
    f = F.Sup("x", d(x, c1))
    assert coding.decode(coding.encode(f, F.METRIC)) == f
    assert coding.decode(coding.encode(F.One(), F.METRIC)) == F.One()


def test_injectivity_depth_one():
    a = coding.encode(d(c1, c1), F.METRIC)
    b = coding.encode(d(c1, c2), F.METRIC)
    assert a != b


def test_roundtrip_random_all_presets():
    rng = random.Random(17)
    for sig in (F.METRIC, F.CSTAR, F.TVNA):
        for _ in range(150):
            f = random_formula(rng, sig, depth=6)
            code = coding.encode(f, sig)
            got_sig, got = coding.decode_full(code)
            assert got == f
            assert got_sig.name == sig.name


def test_decode_total_on_random_naturals():
    rng = random.Random(23)
    for _ in range(1000):
        n = rng.randint(0, 2**64)
        try:
            f = coding.decode(n)
            # decodable values re-encode to the same number
            sig, _ = coding.decode_full(n)
            assert coding.encode(f, sig) == n
        except coding.NotACode:
            pass


def test_decode_zero_is_not_a_code():
    # 0 lies outside the pairing image by design
    with pytest.raises(coding.NotACode):
        coding.decode(0)


def test_frozen_code_values():
    # these literals pin the documented coding; they must never change
    assert coding.encode(F.Zero(), F.METRIC) == 800
    assert coding.encode(F.One(), F.METRIC) == 3274
    assert coding.encode(F.Zero(), F.CSTAR) == 5152


def test_coding_f_builds_dotminus_constant():
    f = F.Sup("x", d(x, c1))
    p = coding.encode(f, F.METRIC)
    got = coding.decode(coding.coding_f(p, 0))
    assert got == F.DotMinus(f, F.One())
    got2 = coding.decode(coding.coding_f(p, 2))
    assert got2 == F.DotMinus(f, F.Half(F.Half(F.One())))
    assert coding.coding_f(p, 3) != p


def test_coding_g():
    a = d(c1, c1)
    b = d(c1, c2)
    pa, pb = coding.encode(a, F.METRIC), coding.encode(b, F.METRIC)
    assert coding.decode(coding.coding_g(pa, pb)) == F.DotMinus(a, b)
    assert coding.decode(coding.coding_g(pa, pa)) == F.DotMinus(a, a)


def test_coding_fg_random_totality():
    rng = random.Random(31)
    for _ in range(100):
        p = coding.encode(random_formula(rng, F.METRIC, depth=4), F.METRIC)
        q = coding.encode(random_formula(rng, F.METRIC, depth=4), F.METRIC)
        n = rng.randint(0, 8)
        fp = coding.coding_f(p, n)
        gpq = coding.coding_g(p, q)
        assert coding.decode(fp) == F.DotMinus(coding.decode(p), F.half_power_one(n))
        assert coding.decode(gpq) == F.DotMinus(coding.decode(p), coding.decode(q))


def test_coding_g_injective_on_pairs():
    rng = random.Random(37)
    seen = {}
    for _ in range(50):
        p = coding.encode(random_formula(rng, F.METRIC, depth=3), F.METRIC)
        q = coding.encode(random_formula(rng, F.METRIC, depth=3), F.METRIC)
        code = coding.coding_g(p, q)
        if (p, q) in seen:
            assert seen[(p, q)] == code
        else:
            for other, c in seen.items():
                assert c != code or other == (p, q)
            seen[(p, q)] = code


def test_code_predicates():
    flags = coding.code_predicates(coding.encode(d(c1, c2), F.METRIC))
    assert flags.is_formula and flags.is_sentence and flags.is_qf
    assert not flags.is_in_base_L
    flags = coding.code_predicates(coding.encode(d(x, x), F.METRIC))
    assert flags.is_formula and not flags.is_sentence and flags.is_qf
    assert flags.is_in_base_L
    two = F.Sup("x", F.Inf("y", d(F.Var("x"), F.Var("y"))))
    flags = coding.code_predicates(coding.encode(two, F.METRIC))
    assert flags.prefix_class == F.forall_n(2)


def test_code_predicates_total():
    rng = random.Random(41)
    for _ in range(500):
        flags = coding.code_predicates(rng.randint(0, 2**48))
        if not flags.is_formula:
            assert flags == coding.CodeFlags(False, False, False, False, None)


def test_code_predicates_agrees_with_classify():
    rng = random.Random(43)
    for _ in range(100):
        f = F.prenex(random_sentence(rng, F.METRIC, depth=4))
        code = coding.encode(f, F.METRIC)
        assert coding.code_predicates(code).prefix_class == F.classify_prefix(f)


def test_precondition_roundtrip():
    k = coding.encode(d(c1, c2), F.METRIC)
    items = [(k, Fraction(1, 2))]
    code = coding.encode_precondition(items)
    assert coding.decode_precondition(code) == items
    assert coding.encode_precondition([]) == coding.encode_precondition([])
    assert coding.decode_precondition(coding.encode_precondition([])) == []


def test_precondition_canonicalizes_order():
    k1 = coding.encode(d(c1, c2), F.METRIC)
    k2 = coding.encode(d(c1, c1), F.METRIC)
    a = coding.encode_precondition([(k1, Fraction(1, 2)), (k2, Fraction(1, 4))])
    b = coding.encode_precondition([(k2, Fraction(1, 4)), (k1, Fraction(1, 2))])
    assert a == b


def test_precondition_rejects_bad_items():
    k_open = coding.encode(d(x, x), F.METRIC)
    with pytest.raises(coding.BadItem):
        coding.encode_precondition([(k_open, Fraction(1, 2))])
    k = coding.encode(d(c1, c2), F.METRIC)
    with pytest.raises(coding.BadItem):
        coding.encode_precondition([(k, Fraction(1, 3))])
    with pytest.raises(coding.BadItem):
        coding.encode_precondition([(k, Fraction(-1, 2))])
    k_quant = coding.encode(F.Sup("x", d(x, x)), F.METRIC)
    with pytest.raises(coding.BadItem):
        coding.encode_precondition([(k_quant, Fraction(1, 2))])
