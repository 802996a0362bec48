import random
from fractions import Fraction

import pytest

from contlogic import formulas as F
from contlogic.parser import ParseError, parse_formula, print_formula

from helpers import random_formula


def test_parse_sup_atomic():
    f = parse_formula("sup x . d(x, c1)", F.METRIC)
    assert f == F.Sup("x", F.Atomic("d", (F.Var("x"), F.CConst(1))))


def test_parse_consistency_sentence_body():
    f = parse_formula("1 -. sup x . d(x,x)", F.METRIC)
    assert f == F.DotMinus(F.One(), F.Sup("x", F.Atomic("d", (F.Var("x"), F.Var("x")))))


def test_parse_rounded_bound_violation():
    with pytest.raises(ParseError) as info:
        parse_formula("d(comb(3/4+0i, x, 1/2+0i, y), x)", F.CSTAR)
    assert info.value.kind == "rounded-bound"
    assert info.value.line == 1 and info.value.col > 0


def test_parse_half_and_nesting():
    f = parse_formula("half((d(c1,c2) -. 1) -. 0)", F.METRIC)
    assert isinstance(f, F.Half)
    assert isinstance(f.body, F.DotMinus)


def test_dotminus_right_associates():
    f = parse_formula("1 -. 1 -. 0", F.METRIC)
    assert f == F.DotMinus(F.One(), F.DotMinus(F.One(), F.Zero()))


def test_parse_errors_carry_position():
    cases = [
        ("sup x d(x,x)", "syntax"),
        ("d(x)", "arity-mismatch"),
        ("q(x, y)", "unknown-symbol"),
        ("d(x, y) -. ", "syntax"),
        ("", "syntax"),
        ("d(x,y))", "syntax"),
    ]
    for text, kind in cases:
        with pytest.raises(ParseError) as info:
            parse_formula(text, F.METRIC)
        assert info.value.kind == kind, text
        assert info.value.line >= 1 and info.value.col >= 1


def test_decimal_scalar_rejected():
    with pytest.raises(ParseError) as info:
        parse_formula("d(comb(0.5, x, 0, y), x)", F.CSTAR)
    assert info.value.kind == "scalar-not-gaussian-rational"


def test_comb_rejected_in_metric_signature():
    with pytest.raises(ParseError) as info:
        parse_formula("d(comb(1, x, 0, y), x)", F.METRIC)
    assert info.value.kind == "unknown-symbol"


def test_gaussian_literals():
    f = parse_formula("d(comb(1/2+1/4i, x, -1/8-1/8i, y), x)", F.CSTAR)
    term = f.args[0]
    assert term.lam.re == Fraction(1, 2) and term.lam.im == Fraction(1, 4)
    assert term.mu.re == Fraction(-1, 8) and term.mu.im == Fraction(-1, 8)


def test_print_depth_zero_roundtrip():
    f = F.Atomic("d", (F.CConst(1), F.CConst(2)))
    assert parse_formula(print_formula(f), F.METRIC) == f


def test_print_nested_dotminus_parenthesizes():
    f = F.DotMinus(F.DotMinus(F.One(), F.Zero()), F.One())
    text = print_formula(f)
    assert text.count("(") >= 2
    assert parse_formula(text, F.METRIC) == f


@pytest.mark.parametrize("preset", ["metric", "cstar", "tvna"])
def test_roundtrip_random(preset):
    sig = F.PRESETS[preset]
    rng = random.Random(hash(preset) % (2**32))
    for _ in range(170):
        f = random_formula(rng, sig, depth=6)
        assert parse_formula(print_formula(f), sig) == f


def test_tvna_trace_predicates_parse():
    f = parse_formula("tr_re(mul(x, adj(x)))", F.TVNA)
    assert f == F.Atomic("tr_re", (F.App("mul", (F.Var("x"), F.App("adj", (F.Var("x"),)))),))
