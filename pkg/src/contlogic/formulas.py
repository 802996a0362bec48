"""Restricted continuous-logic formulas over declared signatures.

Formulas are built from atomic predicates with values in [0,1], the
connectives 0, 1, x/2 and truncated subtraction x -. y = max(x-y, 0), and the
quantifiers sup/inf ranging over the unit ball of a structure.  Terms are
closed under signature functions and, in algebra signatures, the rounded
combination comb(l, t, m, s) = l*t + m*s with |l|+|m| <= 1 over Q(i).

Everything here is an immutable value; all operations are pure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .dyadic import is_dyadic
from .gaussian import GaussianRational

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class FormulaError(Exception):
    """Base class for formula construction/inspection errors."""


class UnknownSymbol(FormulaError):
    pass


class ArityMismatch(FormulaError):
    pass


class RoundedBoundViolation(FormulaError):
    pass


class NotPrenex(FormulaError):
    pass


# ---------------------------------------------------------------------------
# signatures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Modulus:
    """Modulus of uniform continuity as a precision-index map.

    m(k) = max(k + offset, 0): inputs within 2^-m(k) give outputs within
    2^-k.  Offset maps are closed under the compositions this package needs
    (composition adds offsets, binary combination takes the max).
    """

    offset: int = 0

    def __call__(self, k: int) -> int:
        return max(k + self.offset, 0)


@dataclass(frozen=True)
class FunctionSymbol:
    name: str
    arity: int
    modulus: Modulus = Modulus(0)


@dataclass(frozen=True)
class PredicateSymbol:
    name: str
    arity: int
    modulus: Modulus = Modulus(0)


@dataclass(frozen=True)
class Signature:
    """A computable continuous signature.

    The countable fresh constant set C = {c1, c2, ...} is implicitly part of
    every signature; named constants are extra.  `allow_comb` enables the
    rounded-combination term former (algebra signatures only).
    """

    name: str
    predicates: tuple[PredicateSymbol, ...]
    functions: tuple[FunctionSymbol, ...] = ()
    constants: tuple[str, ...] = ()
    allow_comb: bool = False

    def predicate(self, name: str) -> PredicateSymbol:
        for p in self.predicates:
            if p.name == name:
                return p
        raise UnknownSymbol(f"unknown predicate {name!r} in signature {self.name}")

    def function(self, name: str) -> FunctionSymbol:
        for f in self.functions:
            if f.name == name:
                return f
        raise UnknownSymbol(f"unknown function {name!r} in signature {self.name}")

    def has_predicate(self, name: str) -> bool:
        return any(p.name == name for p in self.predicates)

    def has_function(self, name: str) -> bool:
        return any(f.name == name for f in self.functions)


METRIC = Signature(
    name="metric",
    predicates=(PredicateSymbol("d", 2),),
)

CSTAR = Signature(
    name="cstar",
    predicates=(PredicateSymbol("d", 2),),
    functions=(FunctionSymbol("adj", 1), FunctionSymbol("mul", 2)),
    allow_comb=True,
)

TVNA = Signature(
    name="tvna",
    predicates=(
        PredicateSymbol("d", 2),
        PredicateSymbol("tr_re", 1),
        PredicateSymbol("tr_im", 1),
    ),
    functions=(FunctionSymbol("adj", 1), FunctionSymbol("mul", 2)),
    allow_comb=True,
)

PRESETS = {"metric": METRIC, "cstar": CSTAR, "tvna": TVNA}


def rounded_bound_ok(lam: GaussianRational, mu: GaussianRational) -> bool:
    """Decide |lam| + |mu| <= 1 exactly (one nested square root, squared away)."""
    x, y = lam.abs_sq(), mu.abs_sq()
    if x > 1 or y > 1:
        return False
    rest = 1 - x - y
    if rest < 0:
        return False
    # sqrt(x)+sqrt(y) <= 1  <=>  2 sqrt(xy) <= 1-x-y  <=>  4xy <= (1-x-y)^2
    return 4 * x * y <= rest * rest


# ---------------------------------------------------------------------------
# terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class CConst:
    """The fresh constant c_index, index >= 1."""

    index: int


@dataclass(frozen=True)
class NamedConst:
    name: str


@dataclass(frozen=True)
class App:
    func: str
    args: tuple["Term", ...]


@dataclass(frozen=True)
class Comb:
    """Rounded combination lam*left + mu*right, |lam|+|mu| <= 1."""

    lam: GaussianRational
    mu: GaussianRational
    left: "Term"
    right: "Term"


Term = Union[Var, CConst, NamedConst, App, Comb]


# ---------------------------------------------------------------------------
# formulas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Atomic:
    pred: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Zero:
    """The constant-0 connective; applying it to any formula erases it."""


@dataclass(frozen=True)
class One:
    """The constant-1 connective; applying it to any formula erases it."""


@dataclass(frozen=True)
class Half:
    body: "Formula"


@dataclass(frozen=True)
class DotMinus:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Sup:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Inf:
    var: str
    body: "Formula"


Formula = Union[Atomic, Zero, One, Half, DotMinus, Sup, Inf]


@dataclass(frozen=True)
class PrefixClass:
    """QuantifierFree, or n alternation blocks starting with sup (forall) /
    inf (exists)."""

    kind: str  # "qf" | "forall" | "exists"
    blocks: int = 0

    def __str__(self) -> str:
        if self.kind == "qf":
            return "qf"
        return f"{self.kind}{self.blocks}"


QF = PrefixClass("qf", 0)


def forall_n(n: int) -> PrefixClass:
    return PrefixClass("forall", n)


def exists_n(n: int) -> PrefixClass:
    return PrefixClass("exists", n)


# -- connective value semantics (shared by evaluators) -----------------------


def dot_minus_value(a: Fraction, b: Fraction) -> Fraction:
    return max(a - b, Fraction(0))


def half_value(a: Fraction) -> Fraction:
    return a / 2


# ---------------------------------------------------------------------------
# construction helpers and validation
# ---------------------------------------------------------------------------


def comb(lam: GaussianRational, left: Term, mu: GaussianRational, right: Term) -> Comb:
    if not rounded_bound_ok(lam, mu):
        raise RoundedBoundViolation(f"|{lam}| + |{mu}| > 1")
    return Comb(lam, mu, left, right)


def zero_of(_formula: Formula | None = None) -> Zero:
    """The connective x |-> 0 applied to a formula (argument erased)."""
    return Zero()


def one_of(_formula: Formula | None = None) -> One:
    """The connective x |-> 1 applied to a formula (argument erased)."""
    return One()


def dyadic_constant(q: Fraction) -> Formula:
    """A formula with constant value q, for dyadic q in [0,1].

    Built inside the connective basis: halving reaches small constants and
    One -. c reaches their complements.
    """
    q = Fraction(q)
    if not (0 <= q <= 1) or not is_dyadic(q):
        raise ValueError(f"need a dyadic in [0,1], got {q}")
    if q == 0:
        return Zero()
    if q == 1:
        return One()
    if q <= Fraction(1, 2):
        return Half(dyadic_constant(2 * q))
    return DotMinus(One(), dyadic_constant(1 - q))


def half_power_one(n: int) -> Formula:
    """Half^n(One): the canonical constant 2^-n."""
    f: Formula = One()
    for _ in range(n):
        f = Half(f)
    return f


def consistency_sentence() -> Formula:
    """(1 -. sup_x d(x,x)) -. 1/2, the canonical satisfiable test sentence."""
    body = Sup("x", Atomic("d", (Var("x"), Var("x"))))
    return DotMinus(DotMinus(One(), body), dyadic_constant(Fraction(1, 2)))


def validate(formula: Formula, sig: Signature) -> None:
    """Raise if the formula is not well-formed over `sig`."""

    def check_term(t: Term) -> None:
        if isinstance(t, Var):
            if not IDENT_RE.match(t.name):
                raise FormulaError(f"bad variable name {t.name!r}")
        elif isinstance(t, CConst):
            if t.index < 1:
                raise FormulaError("C-constant index must be >= 1")
        elif isinstance(t, NamedConst):
            if t.name not in sig.constants:
                raise UnknownSymbol(f"unknown constant {t.name!r}")
        elif isinstance(t, App):
            f = sig.function(t.func)
            if len(t.args) != f.arity:
                raise ArityMismatch(
                    f"{t.func} expects {f.arity} arguments, got {len(t.args)}"
                )
            for a in t.args:
                check_term(a)
        elif isinstance(t, Comb):
            if not sig.allow_comb:
                raise UnknownSymbol(
                    f"rounded combinations not available in signature {sig.name}"
                )
            if not rounded_bound_ok(t.lam, t.mu):
                raise RoundedBoundViolation(f"|{t.lam}| + |{t.mu}| > 1")
            check_term(t.left)
            check_term(t.right)
        else:
            raise FormulaError(f"not a term: {t!r}")

    def check(f: Formula) -> None:
        if isinstance(f, Atomic):
            p = sig.predicate(f.pred)
            if len(f.args) != p.arity:
                raise ArityMismatch(
                    f"{f.pred} expects {p.arity} arguments, got {len(f.args)}"
                )
            for a in f.args:
                check_term(a)
        elif isinstance(f, (Zero, One)):
            pass
        elif isinstance(f, Half):
            check(f.body)
        elif isinstance(f, DotMinus):
            check(f.left)
            check(f.right)
        elif isinstance(f, (Sup, Inf)):
            if not IDENT_RE.match(f.var):
                raise FormulaError(f"bad variable name {f.var!r}")
            check(f.body)
        else:
            raise FormulaError(f"not a formula: {f!r}")

    check(formula)


# ---------------------------------------------------------------------------
# free variables
# ---------------------------------------------------------------------------


def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (CConst, NamedConst)):
        return set()
    if isinstance(t, App):
        out: set[str] = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    if isinstance(t, Comb):
        return term_vars(t.left) | term_vars(t.right)
    raise FormulaError(f"not a term: {t!r}")


def free_vars(formula: Formula) -> set[str]:
    if isinstance(formula, Atomic):
        out: set[str] = set()
        for a in formula.args:
            out |= term_vars(a)
        return out
    if isinstance(formula, (Zero, One)):
        return set()
    if isinstance(formula, Half):
        return free_vars(formula.body)
    if isinstance(formula, DotMinus):
        return free_vars(formula.left) | free_vars(formula.right)
    if isinstance(formula, (Sup, Inf)):
        return free_vars(formula.body) - {formula.var}
    raise FormulaError(f"not a formula: {formula!r}")


def constants_of(formula: Formula) -> set[int]:
    """Indices of C-constants occurring in the formula."""

    def term_consts(t: Term) -> set[int]:
        if isinstance(t, CConst):
            return {t.index}
        if isinstance(t, App):
            out: set[int] = set()
            for a in t.args:
                out |= term_consts(a)
            return out
        if isinstance(t, Comb):
            return term_consts(t.left) | term_consts(t.right)
        return set()

    if isinstance(formula, Atomic):
        out: set[int] = set()
        for a in formula.args:
            out |= term_consts(a)
        return out
    if isinstance(formula, (Zero, One)):
        return set()
    if isinstance(formula, Half):
        return constants_of(formula.body)
    if isinstance(formula, DotMinus):
        return constants_of(formula.left) | constants_of(formula.right)
    if isinstance(formula, (Sup, Inf)):
        return constants_of(formula.body)
    raise FormulaError(f"not a formula: {formula!r}")


def uses_base_only(formula: Formula) -> bool:
    """True when no C-constant occurs (the formula is over L, not L(C))."""
    return not constants_of(formula)


# ---------------------------------------------------------------------------
# substitution and renaming
# ---------------------------------------------------------------------------


def _subst_term(t: Term, mapping: dict[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, (CConst, NamedConst)):
        return t
    if isinstance(t, App):
        return App(t.func, tuple(_subst_term(a, mapping) for a in t.args))
    if isinstance(t, Comb):
        return Comb(t.lam, t.mu, _subst_term(t.left, mapping), _subst_term(t.right, mapping))
    raise FormulaError(f"not a term: {t!r}")


def substitute(formula: Formula, mapping: dict[str, Term]) -> Formula:
    """Capture-avoiding substitution of terms for free variables."""
    if isinstance(formula, Atomic):
        return Atomic(formula.pred, tuple(_subst_term(a, mapping) for a in formula.args))
    if isinstance(formula, (Zero, One)):
        return formula
    if isinstance(formula, Half):
        return Half(substitute(formula.body, mapping))
    if isinstance(formula, DotMinus):
        return DotMinus(
            substitute(formula.left, mapping), substitute(formula.right, mapping)
        )
    if isinstance(formula, (Sup, Inf)):
        inner = {k: v for k, v in mapping.items() if k != formula.var}
        for repl in inner.values():
            if formula.var in term_vars(repl):
                raise FormulaError(
                    f"substitution would capture {formula.var!r}; rename first"
                )
        cls = type(formula)
        return cls(formula.var, substitute(formula.body, inner))
    raise FormulaError(f"not a formula: {formula!r}")


# ---------------------------------------------------------------------------
# prenex normal form
# ---------------------------------------------------------------------------


def prenex(formula: Formula) -> Formula:
    """Equivalent prenex form: all quantifiers outermost, body quantifier-free.

    Bound variables are first renamed to a fresh deterministic sequence (v1,
    v2, ... skipping names already present), so output is reproducible
    byte-for-byte and pulls can never capture.  Pull rules: Half commutes with
    both quantifiers; on the left of -. quantifiers keep their kind, on the
    right they flip (sup <-> inf); left prefix is pulled before right.
    """
    avoid = free_vars(formula)
    counter = [0]

    def fresh() -> str:
        while True:
            counter[0] += 1
            name = f"v{counter[0]}"
            if name not in avoid:
                return name

    def rename_term(t: Term, env: dict[str, str]) -> Term:
        if isinstance(t, Var):
            return Var(env.get(t.name, t.name))
        if isinstance(t, (CConst, NamedConst)):
            return t
        if isinstance(t, App):
            return App(t.func, tuple(rename_term(a, env) for a in t.args))
        if isinstance(t, Comb):
            return Comb(t.lam, t.mu, rename_term(t.left, env), rename_term(t.right, env))
        raise FormulaError(f"not a term: {t!r}")

    def rename(f: Formula, env: dict[str, str]) -> Formula:
        if isinstance(f, Atomic):
            return Atomic(f.pred, tuple(rename_term(a, env) for a in f.args))
        if isinstance(f, (Zero, One)):
            return f
        if isinstance(f, Half):
            return Half(rename(f.body, env))
        if isinstance(f, DotMinus):
            return DotMinus(rename(f.left, env), rename(f.right, env))
        if isinstance(f, (Sup, Inf)):
            new = fresh()
            return type(f)(new, rename(f.body, {**env, f.var: new}))
        raise FormulaError(f"not a formula: {f!r}")

    def pull(f: Formula) -> tuple[list[tuple[type, str]], Formula]:
        if isinstance(f, (Atomic, Zero, One)):
            return [], f
        if isinstance(f, Half):
            prefix, matrix = pull(f.body)
            return prefix, Half(matrix)
        if isinstance(f, DotMinus):
            lp, lm = pull(f.left)
            rp, rm = pull(f.right)
            flipped = [(Inf if kind is Sup else Sup, var) for kind, var in rp]
            return lp + flipped, DotMinus(lm, rm)
        if isinstance(f, (Sup, Inf)):
            prefix, matrix = pull(f.body)
            return [(type(f), f.var)] + prefix, matrix
        raise FormulaError(f"not a formula: {f!r}")

    prefix, matrix = pull(rename(formula, {}))
    out: Formula = matrix
    for kind, var in reversed(prefix):
        out = kind(var, out)
    return out


def is_quantifier_free(formula: Formula) -> bool:
    if isinstance(formula, (Atomic, Zero, One)):
        return True
    if isinstance(formula, Half):
        return is_quantifier_free(formula.body)
    if isinstance(formula, DotMinus):
        return is_quantifier_free(formula.left) and is_quantifier_free(formula.right)
    if isinstance(formula, (Sup, Inf)):
        return False
    raise FormulaError(f"not a formula: {formula!r}")


def prefix_of(formula: Formula) -> tuple[list[tuple[type, str]], Formula]:
    """Outer quantifier prefix and matrix of a prenex formula.

    Raises NotPrenex when a quantifier occurs below a connective.
    """
    prefix: list[tuple[type, str]] = []
    f = formula
    while isinstance(f, (Sup, Inf)):
        prefix.append((type(f), f.var))
        f = f.body
    if not is_quantifier_free(f):
        raise NotPrenex("quantifier below a connective")
    return prefix, f


def classify_prefix(formula: Formula) -> PrefixClass:
    """Alternation-block class of a prenex formula (merged like quantifiers)."""
    prefix, _ = prefix_of(formula)
    if not prefix:
        return QF
    blocks = 1
    for (k1, _), (k2, _) in zip(prefix, prefix[1:]):
        if k1 is not k2:
            blocks += 1
    return forall_n(blocks) if prefix[0][0] is Sup else exists_n(blocks)


# ---------------------------------------------------------------------------
# modulus of uniform continuity
# ---------------------------------------------------------------------------


def _term_var_offsets(t: Term, var: str, sig: Signature) -> list[int]:
    """Modulus offsets of every path from `var` occurrences to the term root."""
    if isinstance(t, Var):
        return [0] if t.name == var else []
    if isinstance(t, (CConst, NamedConst)):
        return []
    if isinstance(t, App):
        f = sig.function(t.func)
        return [f.modulus.offset + o for a in t.args for o in _term_var_offsets(a, var, sig)]
    if isinstance(t, Comb):
        # |lam|,|mu| <= 1, so each branch is 1-Lipschitz.
        return _term_var_offsets(t.left, var, sig) + _term_var_offsets(t.right, var, sig)
    raise FormulaError(f"not a term: {t!r}")


def _occurrence_bump(count: int) -> int:
    """Extra precision needed when `count` independent contributions add up."""
    return (count - 1).bit_length() if count > 1 else 0


def modulus_of(formula: Formula, var: str, sig: Signature) -> Modulus:
    """Modulus m with: inputs for `var` within 2^-m(k) move the value < 2^-k."""

    def rec(f: Formula) -> Optional[int]:
        if isinstance(f, Atomic):
            p = sig.predicate(f.pred)
            paths = [
                p.modulus.offset + o
                for a in f.args
                for o in _term_var_offsets(a, var, sig)
            ]
            if not paths:
                return None
            return max(paths) + _occurrence_bump(len(paths))
        if isinstance(f, (Zero, One)):
            return None
        if isinstance(f, Half):
            sub = rec(f.body)
            return None if sub is None else sub - 1
        if isinstance(f, DotMinus):
            lo, ro = rec(f.left), rec(f.right)
            if lo is None and ro is None:
                return None
            if lo is None:
                return ro
            if ro is None:
                return lo
            return max(lo, ro) + 1
        if isinstance(f, (Sup, Inf)):
            if f.var == var:
                return None
            return rec(f.body)
        raise FormulaError(f"not a formula: {f!r}")

    offset = rec(formula)
    if offset is None:
        raise FormulaError(f"variable {var!r} is not free in the formula")
    return Modulus(offset)
