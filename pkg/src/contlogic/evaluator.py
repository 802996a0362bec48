"""Budget-bounded evaluation of restricted sentences over presentations.

Quantifier-free sentences evaluate to sound rational intervals whose width is
controlled by the oracle precision.  Quantified sentences sweep rational
points up to a budget: a sup block certifies only a lower bound (sampled
points lie in the unit ball, so any sampled value is a witness), an inf block
only an upper bound, and alternations thin the certified sides out
accordingly; the other side is reported as an uncertified estimate.  This
one-sidedness is not an implementation shortcut: without density rates for
the rational points no finite sweep can certify the missing side.

`TestStructure` is a finite exact-table metric structure with an exhaustive
evaluator (`eval_exact`) used as the oracle for prenex equivalence and for
soundness of the budgeted evaluator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import formulas as F
from .coding import NotACode, decode_full
from .presentations import ModeMismatch, Presentation, PSpecial, TWO_SIDED

Interval = tuple[Fraction, Fraction]


class EvalError(Exception):
    pass


class UnboundConstant(EvalError):
    pass


class WrongPrefixClass(EvalError):
    pass


@dataclass(frozen=True)
class EvalBudget:
    """Point cutoff per quantifier, oracle precision, per-quantifier overrides."""

    points: int = 8
    precision_k: int = 10
    overrides: dict = field(default_factory=dict)
    oracle_budget: Optional[int] = None  # LowerOnly norm search depth

    def __post_init__(self):
        if self.points < 1 or self.precision_k < 0:
            raise ValueError("budget needs points >= 1 and precision_k >= 0")

    def points_for(self, quantifier_position: int) -> int:
        return self.overrides.get(quantifier_position, self.points)


@dataclass(frozen=True)
class EvalResult:
    certified_lower: Optional[Fraction]
    certified_upper: Optional[Fraction]
    estimate: Fraction
    witnesses: dict
    slack: Fraction

    def __post_init__(self):
        if self.certified_lower is not None and self.certified_upper is not None:
            assert self.certified_lower <= self.certified_upper
            assert self.certified_lower <= self.estimate <= self.certified_upper


# ---------------------------------------------------------------------------
# finite exact test structures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TestStructure:
    """Finite metric space with exact rational distances in [0,1].

    Quantifiers range over the whole point set; C-constants c_i are bound to
    point (i-1) mod size unless overridden.  Metric axioms are checked
    exactly at construction.
    """

    distances: tuple[tuple[Fraction, ...], ...]
    constants: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.distances)
        if any(len(row) != n for row in self.distances):
            raise ValueError("distance table must be square")
        for i in range(n):
            if self.distances[i][i] != 0:
                raise ValueError("d(x,x) must be 0")
            for j in range(n):
                dij = self.distances[i][j]
                if not (0 <= dij <= 1):
                    raise ValueError("distances must lie in [0,1]")
                if dij != self.distances[j][i]:
                    raise ValueError("distance table must be symmetric")
                for k in range(n):
                    if self.distances[i][k] > dij + self.distances[j][k]:
                        raise ValueError("triangle inequality violated")

    @property
    def size(self) -> int:
        return len(self.distances)

    def constant_point(self, index: int) -> int:
        if index in self.constants:
            return self.constants[index]
        return (index - 1) % self.size

    def d(self, i: int, j: int) -> Fraction:
        return self.distances[i][j]


def eval_exact(formula: F.Formula, structure: TestStructure,
               env: Optional[dict] = None) -> Fraction:
    """Exact value by exhaustive quantification over the finite point set."""
    env = env or {}

    def term_point(t: F.Term) -> int:
        if isinstance(t, F.Var):
            if t.name not in env:
                raise EvalError(f"unbound variable {t.name!r}")
            return env[t.name]
        if isinstance(t, F.CConst):
            return structure.constant_point(t.index)
        raise EvalError(f"metric test structures have no term {t!r}")

    if isinstance(formula, F.Atomic):
        if formula.pred != "d":
            raise EvalError(f"unknown predicate {formula.pred!r}")
        return structure.d(term_point(formula.args[0]), term_point(formula.args[1]))
    if isinstance(formula, F.Zero):
        return Fraction(0)
    if isinstance(formula, F.One):
        return Fraction(1)
    if isinstance(formula, F.Half):
        return eval_exact(formula.body, structure, env) / 2
    if isinstance(formula, F.DotMinus):
        return F.dot_minus_value(
            eval_exact(formula.left, structure, env),
            eval_exact(formula.right, structure, env),
        )
    if isinstance(formula, (F.Sup, F.Inf)):
        values = [
            eval_exact(formula.body, structure, {**env, formula.var: p})
            for p in range(structure.size)
        ]
        return max(values) if isinstance(formula, F.Sup) else min(values)
    raise EvalError(f"not a formula: {formula!r}")


class TestStructurePresentation(Presentation):
    """A TestStructure as a TwoSided metric presentation with an exact oracle.

    Points are enumerated cyclically (rational point i = point i mod size);
    the metric signature has no function symbols, so rational points are
    exactly the special points.
    """

    mode = TWO_SIDED

    def __init__(self, structure: TestStructure):
        super().__init__()
        self.structure = structure
        self.signature = F.METRIC
        self.name = f"test({structure.size})"

    def _special(self, index: int):
        return index % self.structure.size

    def default_constant_point(self, index: int):
        return PSpecial(self.structure.constant_point(index))

    def atom_interval(self, pred, objs, k, budget=None):
        if pred != "d":
            raise EvalError(f"unknown predicate {pred!r}")
        value = self.structure.d(objs[0], objs[1])
        return (value, value)


# ---------------------------------------------------------------------------
# budget-bounded evaluation over presentations
# ---------------------------------------------------------------------------


def _term_object(term: F.Term, pres: Presentation, env: dict, bindings: dict):
    if isinstance(term, F.Var):
        if term.name not in env:
            raise EvalError(f"unbound variable {term.name!r}")
        return env[term.name]
    if isinstance(term, F.CConst):
        point = bindings.get(term.index) or pres.default_constant_point(term.index)
        if point is None:
            raise UnboundConstant(f"constant c{term.index} is not bound to a point")
        return pres.point_object(point)
    if isinstance(term, F.App):
        args = [_term_object(a, pres, env, bindings) for a in term.args]
        if term.func == "adj":
            return pres._adj(args[0])
        if term.func == "mul":
            return pres._mul(args[0], args[1])
        raise EvalError(f"unknown function {term.func!r}")
    if isinstance(term, F.Comb):
        left = _term_object(term.left, pres, env, bindings)
        right = _term_object(term.right, pres, env, bindings)
        return pres._comb(term.lam, term.mu, left, right)
    raise EvalError(f"not a term: {term!r}")


def _interval_qf(formula: F.Formula, pres: Presentation, k: int, env: dict,
                 bindings: dict, budget: Optional[int]) -> Interval:
    if isinstance(formula, F.Atomic):
        objs = [_term_object(t, pres, env, bindings) for t in formula.args]
        return pres.atom_interval(formula.pred, objs, k, budget=budget)
    if isinstance(formula, F.Zero):
        return (Fraction(0), Fraction(0))
    if isinstance(formula, F.One):
        return (Fraction(1), Fraction(1))
    if isinstance(formula, F.Half):
        lo, hi = _interval_qf(formula.body, pres, k, env, bindings, budget)
        return (lo / 2, hi / 2)
    if isinstance(formula, F.DotMinus):
        llo, lhi = _interval_qf(formula.left, pres, k, env, bindings, budget)
        rlo, rhi = _interval_qf(formula.right, pres, k, env, bindings, budget)
        return (max(llo - rhi, Fraction(0)), max(lhi - rlo, Fraction(0)))
    raise EvalError("quantifier below a connective in a qf evaluation")


def eval_qf(formula: F.Formula, pres: Presentation, k: int,
            bindings: Optional[dict] = None) -> Interval:
    """Two-sided interval for a closed quantifier-free sentence.

    The width is at most 2^-(k - s) where the slack s counts how many oracle
    intervals the connective tree can stack (each truncated subtraction adds
    the widths of its sides).  Requires a TwoSided presentation.
    """
    if pres.mode != TWO_SIDED:
        raise ModeMismatch("two-sided evaluation needs a TwoSided presentation")
    if not F.is_quantifier_free(formula):
        raise EvalError("eval_qf needs a quantifier-free sentence")
    if F.free_vars(formula):
        raise EvalError("eval_qf needs a closed sentence")
    return _interval_qf(formula, pres, k, {}, bindings or {}, None)


def _slack_bound(formula: F.Formula, k: int) -> Fraction:
    """Static width bound: oracle atoms contribute 2^-k each, truncated
    subtraction adds sides, halving halves."""
    if isinstance(formula, F.Atomic):
        return Fraction(1, 2**k) if formula.pred == "d" else Fraction(0)
    if isinstance(formula, (F.Zero, F.One)):
        return Fraction(0)
    if isinstance(formula, F.Half):
        return _slack_bound(formula.body, k) / 2
    if isinstance(formula, F.DotMinus):
        return _slack_bound(formula.left, k) + _slack_bound(formula.right, k)
    if isinstance(formula, (F.Sup, F.Inf)):
        return _slack_bound(formula.body, k)
    raise EvalError(f"not a formula: {formula!r}")


def eval_sentence(formula: F.Formula, pres: Presentation, budget: EvalBudget,
                  bindings: Optional[dict] = None) -> EvalResult:
    """Budget-bounded evaluation of a closed sentence (prenexed first).

    Certified sides follow the quantifier pattern: sampled sup blocks
    propagate lower bounds, sampled inf blocks upper bounds; a side that
    would need density rates of the rational-point enumeration is left
    uncertified and only the deterministic estimate is reported.
    """
    if F.free_vars(formula):
        raise EvalError("eval needs a closed sentence")
    bindings = bindings or {}
    prenexed = F.prenex(formula)
    prefix, matrix = F.prefix_of(prenexed)
    k = budget.precision_k

    def sweep(position: int, env: dict):
        if position == len(prefix):
            lo, hi = _interval_qf(matrix, pres, k, env, bindings, budget.oracle_budget)
            return EvalResult(lo, hi, (lo + hi) / 2, {}, hi - lo)
        kind, var = prefix[position]
        n_points = budget.points_for(position)
        results = []
        for i in range(n_points):
            obj = pres.point_object(pres.rational_point(i))
            results.append((i, sweep(position + 1, {**env, var: obj})))
        is_sup = kind is F.Sup
        estimates = [r.estimate for _, r in results]
        best_estimate = max(estimates) if is_sup else min(estimates)
        if is_sup:
            lowers = [r.certified_lower for _, r in results if r.certified_lower is not None]
            lower = max(lowers) if lowers else None
            upper = None
            bound = lower
            key = lambda r: r.certified_lower
        else:
            uppers = [r.certified_upper for _, r in results if r.certified_upper is not None]
            upper = min(uppers) if uppers else None
            lower = None
            bound = upper
            key = lambda r: r.certified_upper
        # the witness names the branch attaining the certified bound, so
        # pinning reproduces the bound; without one it tracks the estimate
        if bound is not None:
            best_index, best = next(
                (i, r) for i, r in results if key(r) == bound
            )
        else:
            best_index, best = next(
                (i, r) for i, r in results if r.estimate == best_estimate
            )
        witnesses = {position: best_index}
        witnesses.update(best.witnesses)
        slack = max(r.slack for _, r in results)
        estimate = best_estimate
        if lower is not None:
            estimate = max(estimate, lower)
        if upper is not None:
            estimate = min(estimate, upper)
        return EvalResult(lower, upper, estimate, witnesses, slack)

    return sweep(0, {})


def pin_witnesses(formula: F.Formula, pres: Presentation, budget: EvalBudget,
                  witnesses: dict, bindings: Optional[dict] = None) -> Interval:
    """Re-evaluate with every quantifier pinned to its reported witness."""
    prenexed = F.prenex(formula)
    prefix, matrix = F.prefix_of(prenexed)
    env = {}
    for position, (kind, var) in enumerate(prefix):
        index = witnesses[position]
        env[var] = pres.point_object(pres.rational_point(index))
    return _interval_qf(matrix, pres, budget.precision_k, env, bindings or {},
                        budget.oracle_budget)


# ---------------------------------------------------------------------------
# hierarchy classifier
# ---------------------------------------------------------------------------

_LABELS = {"le": "Π_{}^d", "lt": "Σ_{}^d", "ge": "Π_{}^d", "gt": "Σ_{}^d"}
_SHIFT = {"le": 0, "lt": 1, "ge": 1, "gt": 0}
RELATION_NAMES = {"<": "lt", "<=": "le", ">": "gt", ">=": "ge"}


def classify_prefix_level(prefix_class: F.PrefixClass, relation: str, n: int) -> str:
    """Complexity label for {sentence value `relation` r} over forall_{2n}
    sentences: <= gives Pi_n, < gives Sigma_{n+1}, >= gives Pi_{n+1},
    > gives Sigma_n (all relative to the presentation oracle degree d)."""
    relation = RELATION_NAMES.get(relation, relation)
    if relation not in _LABELS:
        raise ValueError(f"unknown relation {relation!r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    blocks = 2 * n
    ok = prefix_class.kind == "qf" or (
        prefix_class.kind == "forall" and prefix_class.blocks <= blocks
    ) or (prefix_class.kind == "exists" and prefix_class.blocks <= blocks - 1)
    if not ok:
        raise WrongPrefixClass(
            f"{prefix_class} is not a forall_{blocks} prefix"
        )
    return _LABELS[relation].format(n + _SHIFT[relation])


def classify(code: int, relation: str, n: int) -> str:
    """Label for a coded prenex forall_{2n} sentence (see classify_prefix_level)."""
    try:
        _, formula = decode_full(code)
    except NotACode as exc:
        raise WrongPrefixClass(f"{code} is not a sentence code") from exc
    if F.free_vars(formula):
        raise WrongPrefixClass("code must be a sentence")
    return classify_prefix_level(F.classify_prefix(formula), relation, n)
