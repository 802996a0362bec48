"""Finite forcing over the decidable theory of [0,1]-bounded metric spaces.

Conditions are finite satisfiable sets of strict bounds (phi < r) on
quantifier-free metric sentences over the fresh constants c1, c2, ...; their
piecewise-linear structure reduces every semantic question here to exact
rational linear feasibility (one LP per truncated-subtraction branch).  On
top of that sit the two-player game engine with pluggable strategies, the
deterministic compiler from transcripts to finite rational metric spaces, and
the forcing checks:

  - `forces_sup_leq` sweeps the granularity-sliced hypothesis family of a
    condition (each slice member max_i(phi_i -. s_i) with s_i on the dyadic
    grid below r_i) looking for a one-point-extension countermodel, then
    settles the limit case exactly through the strict-margin LP: the margin
    optimum is positive iff some model of the condition carries a point with
    psi > r, so YES answers are certificates, not timeouts.
  - `fp_estimate` brackets the forcing value F_p(phi) = inf{r : p forces
    phi < r}: dyadic bisection where the answer is decidable (quantifier-free
    matrices and leading sup blocks), certified one-sided instance bounds for
    inf blocks, unknown where only exhaustion over all extensions would do.

The engine is written against this decidable instance; plugging in a theory
whose condition set is only semi-decidable means replacing the LP oracle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import coding
from . import formulas as F
from .dyadic import is_dyadic
from .evaluator import TestStructure, eval_exact
from .feasibility import LinExpr, OPTIMAL
from .formulas import METRIC

C = LinExpr.constant
V = LinExpr.var


class ForcingError(Exception):
    pass


class NonMetricSignature(ForcingError):
    pass


class BranchOverflow(ForcingError):
    pass


class IllegalMove(ForcingError):
    def __init__(self, player: str, reason: str):
        super().__init__(f"illegal move by {player}: {reason}")
        self.player = player
        self.reason = reason


class Infeasible(ForcingError):
    pass


# ---------------------------------------------------------------------------
# conditions
# ---------------------------------------------------------------------------


def _validate_item(formula: F.Formula, bound: Fraction) -> None:
    F.validate(formula, METRIC)
    if not F.is_quantifier_free(formula):
        raise ForcingError("condition formulas must be quantifier-free")
    if F.free_vars(formula):
        raise ForcingError("condition formulas must be sentences")
    if bound <= 0 or not is_dyadic(bound):
        raise ForcingError(f"bound must be a positive dyadic, got {bound}")


@dataclass(frozen=True)
class Condition:
    """A finite set of strict bounds {phi < r}, canonically sorted."""

    items: tuple[tuple[F.Formula, Fraction], ...]

    @staticmethod
    def of(items) -> "Condition":
        canon = []
        for formula, bound in items:
            bound = Fraction(bound)
            _validate_item(formula, bound)
            canon.append((formula, bound))
        keyed = sorted(
            set((coding.encode(f, METRIC), f, r) for f, r in canon)
        )
        return Condition(tuple((f, r) for _, f, r in keyed))

    @staticmethod
    def empty() -> "Condition":
        return Condition(())

    def extend(self, items) -> "Condition":
        return Condition.of(list(self.items) + list(items))

    def extends(self, other: "Condition") -> bool:
        return set(other.items) <= set(self.items)

    def constants(self) -> list[int]:
        out: set[int] = set()
        for formula, _ in self.items:
            out |= F.constants_of(formula)
        return sorted(out)

    def code(self) -> int:
        return coding.encode_precondition(
            [(coding.encode(f, METRIC), r) for f, r in self.items]
        )

    @staticmethod
    def from_code(code: int) -> "Condition":
        return Condition.of(
            [(coding.decode(k), r) for k, r in coding.decode_precondition(code)]
        )


@dataclass(frozen=True)
class Transcript:
    """Alternating chain of conditions; the universal player moves first."""

    moves: tuple[tuple[str, Condition], ...] = ()

    def last(self) -> Condition:
        return self.moves[-1][1] if self.moves else Condition.empty()

    def rounds(self) -> int:
        return len(self.moves)


@dataclass(frozen=True)
class MetricInstance:
    """Solver configuration for the bounded-metric base theory."""

    branch_cap: int = 4096
    margin_cap: Fraction = Fraction(1)
    sweep_cap: int = 256  # hypothesis-slice members tested before the limit LP


# ---------------------------------------------------------------------------
# linear compilation of quantifier-free metric sentences
# ---------------------------------------------------------------------------


def _pair_var(i: int, j: int) -> str:
    a, b = min(i, j), max(i, j)
    return f"d_{a}_{b}"


def _term_const(term: F.Term) -> int:
    if isinstance(term, F.CConst):
        return term.index
    raise NonMetricSignature(f"metric conditions allow only constants, got {term!r}")


def _atom_expr(formula: F.Atomic) -> LinExpr:
    i, j = (_term_const(t) for t in formula.args)
    return C(0) if i == j else V(_pair_var(i, j))


Rows = list[tuple[LinExpr, LinExpr]]


def _le_alternatives(formula: F.Formula, bound: LinExpr,
                     fresh: list[int]) -> list[Rows]:
    """Disjunctive row sets equivalent to value(formula) <= bound.

    Upper-side constraints on max(l - r, 0) split into l - r <= bound and
    0 <= bound, so positive polarity never branches; the lower value of the
    right operand is carried by a fresh nonnegative variable.  Branching
    happens only in `_ge_alternatives` where a truncated subtraction must be
    bounded from below.
    """
    if isinstance(formula, F.Atomic):
        return [[(_atom_expr(formula), bound)]]
    if isinstance(formula, F.Zero):
        return [[(C(0), bound)]]
    if isinstance(formula, F.One):
        return [[(C(1), bound)]]
    if isinstance(formula, F.Half):
        return _le_alternatives(formula.body, bound.scale(2), fresh)
    if isinstance(formula, F.DotMinus):
        fresh[0] += 1
        z = V(f"z_{fresh[0]}")
        left_alts = _le_alternatives(formula.left, bound + z, fresh)
        right_alts = _ge_alternatives(formula.right, z, fresh)
        out = []
        for la in left_alts:
            for ra in right_alts:
                out.append([(C(0), bound)] + la + ra)
        return out
    raise ForcingError("quantifier in a qf compilation")


def _ge_alternatives(formula: F.Formula, bound: LinExpr,
                     fresh: list[int]) -> list[Rows]:
    """Disjunctive row sets equivalent to value(formula) >= bound."""
    if isinstance(formula, F.Atomic):
        return [[(bound, _atom_expr(formula))]]
    if isinstance(formula, F.Zero):
        return [[(bound, C(0))]]
    if isinstance(formula, F.One):
        return [[(bound, C(1))]]
    if isinstance(formula, F.Half):
        return _ge_alternatives(formula.body, bound.scale(2), fresh)
    if isinstance(formula, F.DotMinus):
        # max(l - r, 0) >= bound: either bound <= 0, or l - r >= bound
        trivial: Rows = [(bound, C(0))]
        fresh[0] += 1
        z = V(f"z_{fresh[0]}")
        left_alts = _ge_alternatives(formula.left, bound + z, fresh)
        right_alts = _le_alternatives(formula.right, z, fresh)
        out = [trivial]
        for la in left_alts:
            for ra in right_alts:
                out.append(la + ra)
        return out
    raise ForcingError("quantifier in a qf compilation")


def _metric_axioms(constants: list[int]) -> list[tuple[LinExpr, LinExpr]]:
    out: list[tuple[LinExpr, LinExpr]] = []
    for idx, i in enumerate(constants):
        for j in constants[idx + 1:]:
            out.append((V(_pair_var(i, j)), C(1)))
    for i in constants:
        for j in constants:
            for k in constants:
                if i < k and j != i and j != k:
                    out.append(
                        (
                            V(_pair_var(i, k)),
                            V(_pair_var(i, j)) + V(_pair_var(j, k)),
                        )
                    )
    return out


@dataclass(frozen=True)
class SystemVerdict:
    satisfiable: bool
    margin: Fraction
    point: Optional[dict]  # pair var -> value, on the satisfiable side


@dataclass(frozen=True)
class BoundSystem:
    """phi <= r / phi < r / phi >= r / phi > r items over metric models."""

    le: tuple = ()  # (formula, Fraction) nonstrict upper bounds
    lt: tuple = ()  # strict upper bounds
    ge: tuple = ()  # nonstrict lower bounds
    gt: tuple = ()  # strict lower bounds

    def constants(self) -> set[int]:
        out: set[int] = set()
        for group in (self.le, self.lt, self.ge, self.gt):
            for formula, _ in group:
                out |= F.constants_of(formula)
        return out


def _system_alternatives(system: BoundSystem, inst: MetricInstance) -> list[Rows]:
    eps = V("__eps__")
    fresh = [0]
    per_item: list[list[Rows]] = []
    for formula, bound in system.le:
        per_item.append(_le_alternatives(formula, C(bound), fresh))
    for formula, bound in system.lt:
        per_item.append(_le_alternatives(formula, C(bound) - eps, fresh))
    for formula, bound in system.ge:
        per_item.append(_ge_alternatives(formula, C(bound), fresh))
    for formula, bound in system.gt:
        per_item.append(_ge_alternatives(formula, C(bound) + eps, fresh))
    total = 1
    for alts in per_item:
        total *= len(alts)
        if total > inst.branch_cap:
            raise BranchOverflow(f"more than {inst.branch_cap} branch combinations")
    combos: list[Rows] = [[]]
    for alts in per_item:
        combos = [got + alt for got in combos for alt in alts]
    return combos


def _solve_system(system: BoundSystem, constants: list[int],
                  inst: MetricInstance) -> SystemVerdict:
    """Decide satisfiability over [0,1]-metric assignments, exactly.

    Strict bounds are tightened by a shared margin variable; the system has a
    model iff some branch combination admits a positive margin.  The witness
    point is the margin-maximal assignment of the first such combination.
    """
    from .feasibility import maximize

    base = _metric_axioms(sorted(set(constants) | system.constants()))
    eps = V("__eps__")
    for rows in _system_alternatives(system, inst):
        all_rows = base + rows + [(eps, C(inst.margin_cap))]
        result = maximize(eps, all_rows)
        if result.status == OPTIMAL and result.value > 0:
            point = {
                k: v for k, v in result.point.items() if k.startswith("d_")
            }
            return SystemVerdict(True, result.value, point)
    return SystemVerdict(False, Fraction(0), None)


def is_condition(p: Condition, inst: MetricInstance = MetricInstance()) -> bool:
    """True iff some [0,1]-metric assignment satisfies every bound strictly."""
    verdict = _solve_system(BoundSystem(lt=tuple(p.items)), p.constants(), inst)
    return verdict.satisfiable


# ---------------------------------------------------------------------------
# the granularity-sliced hypothesis family p^$
# ---------------------------------------------------------------------------


def formula_max(formulas: list[F.Formula]) -> F.Formula:
    """max as a restricted formula: max(a,b) = 1 -. ((1 -. a) -. ... ) via
    min(x,y) = x -. (x -. y); the empty max is Zero by convention."""
    if not formulas:
        return F.Zero()
    out = formulas[0]
    for nxt in formulas[1:]:
        inv_a = F.DotMinus(F.One(), out)
        inv_b = F.DotMinus(F.One(), nxt)
        minimum = F.DotMinus(inv_a, F.DotMinus(inv_a, inv_b))
        out = F.DotMinus(F.One(), minimum)
    return out


def _grid_below(bound: Fraction, g: int) -> list[Fraction]:
    """Dyadics j/2^g in [0, bound), ascending."""
    scale = 1 << g
    top = (bound * scale).__ceil__() - 1 if (bound * scale).denominator == 1 else int(bound * scale)
    return [Fraction(j, scale) for j in range(0, top + 1)]


def dollar_tuples(p: Condition, g: int) -> list[tuple[Fraction, ...]]:
    tuples = [()]
    for _, bound in p.items:
        grid = _grid_below(bound, g)
        tuples = [t + (s,) for t in tuples for s in grid]
    return tuples


def dollar(p: Condition, g: int) -> list[F.Formula]:
    """The granularity-g finite slice of the hypothesis family of p.

    Each member is max_i(phi_i -. s_i) with s_i on the 2^-g grid below r_i;
    the slices are nested in g, their union over all g is the full family,
    and a structure models T together with p exactly when it models T with
    some member.
    """
    if g < 1:
        raise ValueError("granularity must be >= 1")
    out = []
    for values in dollar_tuples(p, g):
        out.append(
            formula_max(
                [
                    F.DotMinus(formula, F.dyadic_constant(s))
                    for (formula, _), s in zip(p.items, values)
                ]
            )
        )
    return out


# ---------------------------------------------------------------------------
# forcing checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ForcingAnswer:
    verdict: str  # "yes" | "no" | "unknown"
    witness: Optional[dict] = None
    margin: Optional[Fraction] = None
    swept: int = 0


def _fresh_constant(used: set[int], count: int = 1) -> list[int]:
    start = max(used, default=0) + 1
    return list(range(start, start + count))


def forces_sup_leq(p: Condition, psi: F.Formula, r: Fraction,
                   inst: MetricInstance = MetricInstance(),
                   budget: int = 4) -> ForcingAnswer:
    """Does p force sup_x psi(x) <= r over bounded metric spaces?

    Protocol: sweep the granularity slices g = 1..budget of p's hypothesis
    family, testing each member for a one-point extension with psi(c) >=
    r + delta (NO with a rational witness if one exists).  Testing the
    finest delta = 2^-budget subsumes the coarser ones, since satisfiability
    at any larger delta implies it there.  After the sweep the strict-margin
    LP decides the delta -> 0 limit exactly, so the final answer is YES or
    NO; UNKNOWN only on branch-cap overflow.
    """
    r = Fraction(r)
    fv = F.free_vars(psi)
    if len(fv) > 1:
        raise ForcingError("psi must have at most one free variable")
    if not F.is_quantifier_free(psi):
        raise ForcingError("psi must be quantifier-free")
    if r >= 1:
        # values never exceed 1, so the bound is forced vacuously
        return ForcingAnswer("yes", margin=Fraction(0))
    used = set(p.constants()) | F.constants_of(psi)
    fresh = _fresh_constant(used)[0]
    if fv:
        psi_c = F.substitute(psi, {next(iter(fv)): F.CConst(fresh)})
    else:
        psi_c = psi
    constants = sorted(used | {fresh})
    delta = Fraction(1, 1 << budget)
    swept = 0
    capped = False
    try:
        for g in range(1, budget + 1):
            if capped:
                break
            for values in dollar_tuples(p, g):
                if swept >= inst.sweep_cap:
                    capped = True
                    break
                swept += 1
                hyp = tuple(
                    (formula, s) for (formula, _), s in zip(p.items, values)
                )
                verdict = _solve_system(
                    BoundSystem(le=hyp, ge=((psi_c, r + delta),)),
                    constants, inst,
                )
                if verdict.satisfiable:
                    return ForcingAnswer(
                        "no", witness=verdict.point, margin=verdict.margin,
                        swept=swept,
                    )
        # limit case: a model of p itself with a point strictly above r?
        verdict = _solve_system(
            BoundSystem(lt=tuple(p.items), gt=((psi_c, r),)), constants, inst
        )
    except BranchOverflow:
        return ForcingAnswer("unknown", swept=swept)
    if verdict.satisfiable:
        return ForcingAnswer("no", witness=verdict.point, margin=verdict.margin,
                             swept=swept)
    return ForcingAnswer("yes", margin=Fraction(0), swept=swept)


# ---------------------------------------------------------------------------
# games
# ---------------------------------------------------------------------------

Strategy = Callable[[Transcript, MetricInstance], Condition]


def play_game(forall_strategy: Strategy, exists_strategy: Strategy,
              rounds: int, inst: MetricInstance = MetricInstance()) -> Transcript:
    """Alternating play, universal player first; every move must be a
    condition extending the previous one or the offender forfeits."""
    moves: tuple[tuple[str, Condition], ...] = ()
    for i in range(rounds):
        player = "A" if i % 2 == 0 else "E"
        strategy = forall_strategy if player == "A" else exists_strategy
        transcript = Transcript(moves)
        cond = strategy(transcript, inst)
        previous = transcript.last()
        if not cond.extends(previous):
            raise IllegalMove(player, "move does not extend the previous condition")
        if not is_condition(cond, inst):
            raise IllegalMove(player, "move is not a condition")
        moves = moves + ((player, cond),)
    return Transcript(moves)


def pass_through_strategy() -> Strategy:
    """Repeat the previous condition plus one fresh trivially satisfiable bound."""

    def move(transcript: Transcript, inst: MetricInstance) -> Condition:
        prev = transcript.last()
        fresh = _fresh_constant(set(prev.constants()))[0]
        c = F.CConst(fresh)
        return prev.extend([(F.Atomic("d", (c, c)), Fraction(1, 2))])

    return move


def random_forall_strategy(seed: int) -> Strategy:
    """Legal random universal player: tries random new strict bounds, keeps
    the first that stays a condition, falls back to a pass-through bound."""
    rng = random.Random(seed)

    def move(transcript: Transcript, inst: MetricInstance) -> Condition:
        prev = transcript.last()
        constants = prev.constants()
        fresh = _fresh_constant(set(constants))[0]
        pool = constants + [fresh]
        for _ in range(8):
            i = rng.choice(pool)
            j = rng.choice(pool)
            if i == j:
                continue
            bound = rng.choice(
                [Fraction(1, 4), Fraction(3, 8), Fraction(1, 2), Fraction(3, 4), Fraction(1)]
            )
            atom = F.Atomic("d", (F.CConst(min(i, j)), F.CConst(max(i, j))))
            if rng.random() < 0.3:
                # lower bound: d > bound - 1/8 via (bound -. d) < 1/8
                candidate = prev.extend(
                    [(F.DotMinus(F.dyadic_constant(bound), atom), Fraction(1, 8))]
                )
            else:
                candidate = prev.extend([(atom, bound)])
            if is_condition(candidate, inst):
                return candidate
        c = F.CConst(fresh)
        return prev.extend([(F.Atomic("d", (c, c)), Fraction(1, 2))])

    return move


def exists_pinning_strategy() -> Strategy:
    """The universal-model strategy: each turn solves the current condition
    with maximal margin and pins every mentioned distance into a dyadic
    interval of width <= 2^-round around the solution, nesting over rounds."""

    def move(transcript: Transcript, inst: MetricInstance) -> Condition:
        prev = transcript.last()
        round_no = transcript.rounds()
        pairs = _mentioned_pairs(prev)
        if not pairs:
            fresh = _fresh_constant(set(prev.constants()))[0]
            c = F.CConst(fresh)
            return prev.extend([(F.Atomic("d", (c, c)), Fraction(1, 2))])
        verdict = _solve_system(
            BoundSystem(lt=tuple(prev.items)), prev.constants(), inst
        )
        if not verdict.satisfiable:
            raise Infeasible("previous condition is not satisfiable")
        grid = round_no + 3  # pin width 3*2^-grid < 2^-round
        items = []
        for i, j in pairs:
            y = verdict.point.get(_pair_var(i, j), Fraction(0))
            scale = 1 << grid
            lo = Fraction((y * scale).__floor__(), scale) - Fraction(1, scale)
            hi = lo + Fraction(3, scale)
            atom = F.Atomic("d", (F.CConst(i), F.CConst(j)))
            items.append((atom, min(hi, Fraction(1))))
            if lo > 0:
                items.append(
                    (
                        F.DotMinus(F.dyadic_constant(lo + Fraction(1, scale)), atom),
                        Fraction(1, scale),
                    )
                )
        return prev.extend(items)

    return move


def _mentioned_pairs(p: Condition) -> list[tuple[int, int]]:
    pairs: set[tuple[int, int]] = set()

    def walk_terms(formula: F.Formula):
        if isinstance(formula, F.Atomic):
            i, j = (_term_const(t) for t in formula.args)
            if i != j:
                pairs.add((min(i, j), max(i, j)))
        elif isinstance(formula, F.Half):
            walk_terms(formula.body)
        elif isinstance(formula, F.DotMinus):
            walk_terms(formula.left)
            walk_terms(formula.right)

    for formula, _ in p.items:
        walk_terms(formula)
    return sorted(pairs)


# ---------------------------------------------------------------------------
# compilation of transcripts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompiledSpace:
    """A finite rational metric space over the mentioned constants."""

    constants: tuple[int, ...]
    distances: dict  # (i, j) with i < j -> Fraction

    def distance(self, i: int, j: int) -> Fraction:
        if i == j:
            return Fraction(0)
        return self.distances[(min(i, j), max(i, j))]

    def as_test_structure(self) -> TestStructure:
        order = {c: idx for idx, c in enumerate(self.constants)}
        table = tuple(
            tuple(self.distance(a, b) for b in self.constants)
            for a in self.constants
        )
        return TestStructure(table, constants={c: order[c] for c in self.constants})


def compile_transcript(t: Transcript,
                       inst: MetricInstance = MetricInstance()) -> CompiledSpace:
    """Deterministic finite model of the final condition.

    Solves the margin LP, fixes half the optimal margin as slack, then
    lexicographically minimizes the distances in sorted pair order; the
    result satisfies every played bound strictly and the metric axioms
    exactly (re-checked by exact evaluation).
    """
    final = t.last()
    constants = final.constants()
    if not constants:
        return CompiledSpace((), {})
    verdict = _solve_system(BoundSystem(lt=tuple(final.items)), constants, inst)
    if not verdict.satisfiable:
        raise Infeasible("final condition is not satisfiable")
    slack = verdict.margin / 2
    nonstrict = tuple((formula, bound - slack) for formula, bound in final.items)
    alternatives = _system_alternatives(BoundSystem(le=nonstrict), inst)
    base = _metric_axioms(constants)
    assignment: dict[str, Fraction] = {}
    pairs = [
        (a, b)
        for idx, a in enumerate(constants)
        for b in constants[idx + 1:]
    ]
    for a, b in pairs:
        var = _pair_var(a, b)
        assignment[var] = _lex_minimize(base, alternatives, var, assignment)
    space = CompiledSpace(
        tuple(constants),
        {(a, b): assignment[_pair_var(a, b)] for a, b in pairs},
    )
    _verify_compiled(space, final)
    return space


def _lex_minimize(base: Rows, alternatives: list[Rows], var: str,
                  fixed: dict[str, Fraction]) -> Fraction:
    """Minimum of `var` over the union of the alternative regions, with the
    already-minimized variables substituted by their values (shrinking every
    successive LP instead of pinning with equality rows)."""
    from .feasibility import maximize

    best: Optional[Fraction] = None
    for alt in alternatives:
        rows = []
        infeasible = False
        for lhs, rhs in base + alt:
            lhs, rhs = lhs.substitute(fixed), rhs.substitute(fixed)
            if not lhs.coeffs and not rhs.coeffs:
                if lhs.const > rhs.const:
                    infeasible = True
                    break
                continue
            rows.append((lhs, rhs))
        if infeasible:
            continue
        result = maximize(V(var).scale(-1), rows)
        if result.status == OPTIMAL:
            value = -result.value
            if best is None or value < best:
                best = value
    if best is None:
        raise Infeasible("no feasible branch during compilation")
    return best


def _formula_value(formula: F.Formula, space: CompiledSpace) -> Fraction:
    structure = space.as_test_structure()
    return eval_exact(formula, structure)


def _verify_compiled(space: CompiledSpace, condition: Condition) -> None:
    space.as_test_structure()  # validates the metric axioms exactly
    for formula, bound in condition.items:
        value = _formula_value(formula, space)
        if not value < bound:
            raise Infeasible(
                f"compiled space violates a bound: value {value} !< {bound}"
            )


# ---------------------------------------------------------------------------
# forcing-value estimates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FpBounds:
    lower: Optional[Fraction]
    upper: Optional[Fraction]
    estimate: Fraction


def _decide_block_leq(p: Condition, matrix: F.Formula, sup_vars: list[str],
                      r: Fraction, inst: MetricInstance) -> bool:
    """p forces sup_{vars} matrix <= r, decided exactly via the margin LP."""
    used = set(p.constants()) | F.constants_of(matrix)
    fresh = _fresh_constant(used, len(sup_vars))
    inst_formula = F.substitute(
        matrix, {v: F.CConst(c) for v, c in zip(sup_vars, fresh)}
    )
    constants = sorted(used | set(fresh))
    verdict = _solve_system(
        BoundSystem(lt=tuple(p.items), gt=((inst_formula, r),)), constants, inst
    )
    return not verdict.satisfiable


def _bisect_value(decide_leq, budget: int) -> tuple[Fraction, Fraction]:
    """Bracket inf{r : decide_leq(r)} on the dyadic grid of step 2^-budget."""
    if decide_leq(Fraction(0)):
        return Fraction(0), Fraction(0)
    lo, hi = Fraction(0), Fraction(1)
    for _ in range(budget):
        mid = (lo + hi) / 2
        if decide_leq(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def fp_estimate(p: Condition, formula: F.Formula,
                inst: MetricInstance = MetricInstance(),
                depth: int = 2, budget: int = 8) -> FpBounds:
    """Bracket the forcing value F_p = inf{r : p forces the value < r}.

    Quantifier-free formulas and single leading sup blocks are decided by
    bisection (both bounds certified, gap 2^-budget).  An inf block
    contributes certified upper bounds through instances F_p(phi(c)) >= F_p
    (inf_x phi <= phi(c) pointwise and forcing is monotone), sampling the
    mentioned constants plus a fresh one up to `depth` unrollings; its lower
    bound would need exhaustion over all extensions and is reported unknown.
    Deeper sup blocks dually contribute certified lower bounds only.
    """
    prenexed = F.prenex(formula)
    prefix, matrix = F.prefix_of(prenexed)
    return _fp_rec(p, prefix, matrix, inst, depth, budget)


def _fp_rec(p: Condition, prefix, matrix, inst, depth, budget) -> FpBounds:
    if not prefix:
        lo, hi = _bisect_value(
            lambda r: _decide_block_leq(p, matrix, [], r, inst), budget
        )
        return FpBounds(lo, hi, (lo + hi) / 2)
    kinds = {k for k, _ in prefix}
    if kinds == {F.Sup}:
        sup_vars = [v for _, v in prefix]
        lo, hi = _bisect_value(
            lambda r: _decide_block_leq(p, matrix, sup_vars, r, inst), budget
        )
        return FpBounds(lo, hi, (lo + hi) / 2)
    kind, var = prefix[0]
    rest = prefix[1:]
    used = sorted(set(p.constants()) | F.constants_of(matrix))
    candidates = used[: max(depth, 1)] + _fresh_constant(set(used))
    results = []
    for c in candidates:
        instantiated = F.substitute(
            _rebuild(rest, matrix), {var: F.CConst(c)}
        )
        inner_prefix, inner_matrix = F.prefix_of(F.prenex(instantiated))
        results.append(
            _fp_rec(p, inner_prefix, inner_matrix, inst, depth - 1, budget)
        )
    estimates = [r.estimate for r in results]
    if kind is F.Inf:
        uppers = [r.upper for r in results if r.upper is not None]
        upper = min(uppers) if uppers else None
        return FpBounds(None, upper, min(estimates) if estimates else Fraction(1, 2))
    lowers = [r.lower for r in results if r.lower is not None]
    lower = max(lowers) if lowers else None
    return FpBounds(lower, None, max(estimates) if estimates else Fraction(1, 2))


def _rebuild(prefix, matrix) -> F.Formula:
    out = matrix
    for kind, var in reversed(prefix):
        out = kind(var, out)
    return out
