"""Command-line interface: reproducible workflows over JSON-line records.

Every subcommand prints one JSON object per result line with sorted keys and
a schema version field; exact rationals are rendered as "num/den" strings and
dyadic intervals as {"lo", "hi"} pairs.  Floating point appears only in
fields named "approx".  Runs are deterministic given the flags (seeds are
explicit), which `selftest` relies on for its byte-identical-output check.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import coding
from . import evaluator as E
from . import forcing as FC
from . import formulas as F
from . import groups as G
from . import matrices as M
from . import presentations as P
from . import selftest
from .parser import ParseError, parse_formula, print_formula

SCHEMA = 1


def _emit(record: dict) -> None:
    record = {"schema": SCHEMA, **record}
    sys.stdout.write(json.dumps(record, sort_keys=True, separators=(",", ":")))
    sys.stdout.write("\n")


def _fail(kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return 1


def _frac(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def _interval(pair) -> dict:
    lo, hi = pair
    return {"lo": _frac(lo), "hi": _frac(hi), "approx": float(lo)}


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _signature(name: str) -> F.Signature:
    if name not in F.PRESETS:
        raise ValueError(f"unknown signature preset {name!r}")
    return F.PRESETS[name]


def _load_group(path: str) -> G.GroupSpec:
    return G.load_group_config(_read_text(path))


def _presentation(name: str, group_config: str | None):
    if name == "R":
        return P.presentation_R()
    if name == "C2w":
        return P.presentation_C2w()
    if name in ("L", "Cstar"):
        if not group_config:
            raise ValueError(f"presentation {name} needs --group CONFIG")
        spec = _load_group(group_config)
        if name == "L":
            return P.presentation_L(spec)
        return P.presentation_CstarLambda(spec)
    raise ValueError(f"unknown presentation {name!r} (R, L, Cstar, C2w)")


# -- subcommands ---------------------------------------------------------------


def _cmd_code(args) -> int:
    if args.action == "encode":
        sig = _signature(args.signature)
        formula = parse_formula(_read_text(args.formula), sig)
        _emit({"kind": "code", "value": str(coding.encode(formula, sig))})
        return 0
    if args.action == "decode":
        sig, formula = coding.decode_full(int(args.code))
        _emit(
            {
                "kind": "formula",
                "signature": sig.name,
                "text": print_formula(formula),
            }
        )
        return 0
    if args.action == "f":
        result = coding.coding_f(int(args.code), args.n)
        _emit({"kind": "code", "value": str(result)})
        return 0
    if args.action == "g":
        result = coding.coding_g(int(args.code), int(args.q))
        _emit({"kind": "code", "value": str(result)})
        return 0
    if args.action == "predicates":
        flags = coding.code_predicates(int(args.code))
        _emit(
            {
                "kind": "code-flags",
                "is_formula": flags.is_formula,
                "is_sentence": flags.is_sentence,
                "is_qf": flags.is_qf,
                "is_in_base_L": flags.is_in_base_L,
                "prefix": str(flags.prefix_class) if flags.prefix_class else None,
            }
        )
        return 0
    return _fail("usage", f"unknown code action {args.action!r}")


def _cmd_parse(args) -> int:
    sig = _signature(args.signature)
    formula = parse_formula(_read_text(args.formula), sig)
    record = {
        "kind": "parsed",
        "signature": sig.name,
        "text": print_formula(formula),
        "free_vars": sorted(F.free_vars(formula)),
        "quantifier_free": F.is_quantifier_free(formula),
    }
    if args.prenex:
        record["prenex"] = print_formula(F.prenex(formula))
        record["prefix_class"] = str(F.classify_prefix(F.prenex(formula)))
    _emit(record)
    return 0


def _cmd_norm(args) -> int:
    if args.matrix_index is not None:
        a = M.enumerate_matrices(args.matrix_index)
        record = {"kind": "matrix-norms", "index": args.matrix_index, "size": a.n}
        record["two_norm"] = _interval(M.two_norm(a, args.precision))
        record["opnorm_upper"] = _frac(M.opnorm_upper(a, args.opnorm_power))
        _emit(record)
        return 0
    if not args.group or not args.element:
        return _fail("usage", "norm needs --matrix-index or --group with --element")
    spec = _load_group(args.group)
    element = G.parse_element(args.element, spec)
    record = {"kind": "group-norms", "element": args.element}
    record["l1"] = _frac(G.l1_norm(element))
    record["two_norm"] = _interval(G.two_norm(element, args.precision))
    if args.lambda_lower:
        sweep = G.lambda_norm_lower_sweep(element, args.lambda_lower, args.precision)
        record["lambda_lower"] = [_frac(q) for q in sweep]
        record["lambda_lower_best"] = _frac(max(sweep))
    _emit(record)
    return 0


def _cmd_eval(args) -> int:
    pres = _presentation(args.presentation, args.group)
    formula = parse_formula(_read_text(args.sentence), pres.signature)
    bindings = {}
    for binding in args.bind or []:
        name, _, index = binding.partition("=")
        if not name.startswith("c") or not index.isdigit():
            return _fail("usage", f"bad binding {binding!r}; use cN=POINTINDEX")
        bindings[int(name[1:])] = pres.rational_point(int(index))
    budget = E.EvalBudget(
        points=args.budget_points,
        precision_k=args.precision,
        oracle_budget=args.oracle_budget,
    )
    res = E.eval_sentence(formula, pres, budget, bindings)
    _emit(
        {
            "kind": "eval",
            "presentation": pres.name,
            "certified_lower": _frac(res.certified_lower)
            if res.certified_lower is not None
            else None,
            "certified_upper": _frac(res.certified_upper)
            if res.certified_upper is not None
            else None,
            "estimate": _frac(res.estimate),
            "approx": float(res.estimate),
            "witnesses": {str(k): v for k, v in sorted(res.witnesses.items())},
            "slack": _frac(res.slack),
        }
    )
    return 0


def _cmd_classify(args) -> int:
    if args.code is not None:
        label = E.classify(int(args.code), args.relation, args.n)
    elif args.prefix:
        text = args.prefix
        if text.startswith("forall"):
            pc = F.forall_n(int(text[len("forall"):]))
        elif text.startswith("exists"):
            pc = F.exists_n(int(text[len("exists"):]))
        elif text == "qf":
            pc = F.QF
        else:
            return _fail("usage", f"bad prefix {text!r}")
        n = args.n if args.n else (pc.blocks + 1) // 2
        label = E.classify_prefix_level(pc, args.relation, n)
    else:
        return _fail("usage", "classify needs --code or --prefix")
    _emit({"kind": "classification", "label": label})
    return 0


def _cmd_force(args) -> int:
    inst = FC.MetricInstance()
    if args.action == "check-condition":
        condition = FC.Condition.from_code(int(args.condition))
        _emit(
            {
                "kind": "condition",
                "is_condition": FC.is_condition(condition, inst),
                "items": len(condition.items),
            }
        )
        return 0
    if args.action == "sup-leq":
        condition = (
            FC.Condition.from_code(int(args.condition))
            if args.condition
            else FC.Condition.empty()
        )
        psi = parse_formula(_read_text(args.psi), F.METRIC)
        answer = FC.forces_sup_leq(
            condition, psi, Fraction(args.bound), inst, budget=args.budget
        )
        _emit(
            {
                "kind": "forces",
                "verdict": answer.verdict,
                "swept": answer.swept,
                "witness": {k: _frac(v) for k, v in sorted((answer.witness or {}).items())},
            }
        )
        return 0
    if args.action == "game":
        strategies = {
            "random": lambda: FC.random_forall_strategy(args.seed),
            "pass": FC.pass_through_strategy,
            "pinning": FC.exists_pinning_strategy,
        }
        if args.strategy_forall not in strategies:
            return _fail("usage", f"unknown strategy {args.strategy_forall!r}")
        if args.strategy_exists not in strategies:
            return _fail("usage", f"unknown strategy {args.strategy_exists!r}")
        forall = strategies[args.strategy_forall]()
        exists = strategies[args.strategy_exists]()
        transcript = FC.play_game(forall, exists, args.rounds, inst)
        for player, condition in transcript.moves:
            _emit(
                {
                    "kind": "move",
                    "player": player,
                    "condition_code": str(condition.code()),
                    "items": [
                        [str(coding.encode(f, F.METRIC)), _frac(r)]
                        for f, r in condition.items
                    ],
                }
            )
        space = FC.compile_transcript(transcript, inst)
        _emit(
            {
                "kind": "compiled",
                "constants": list(space.constants),
                "distances": {
                    f"d({i},{j})": _frac(space.distance(i, j))
                    for i, j in sorted(space.distances)
                },
            }
        )
        return 0
    if args.action == "fp":
        condition = (
            FC.Condition.from_code(int(args.condition))
            if args.condition
            else FC.Condition.empty()
        )
        formula = parse_formula(_read_text(args.psi), F.METRIC)
        bounds = FC.fp_estimate(condition, formula, inst,
                                depth=args.depth, budget=args.budget)
        _emit(
            {
                "kind": "fp",
                "lower": _frac(bounds.lower) if bounds.lower is not None else None,
                "upper": _frac(bounds.upper) if bounds.upper is not None else None,
                "estimate": _frac(bounds.estimate),
            }
        )
        return 0
    return _fail("usage", f"unknown force action {args.action!r}")


def _cmd_selftest(args) -> int:
    records = selftest.run_all()
    ok = True
    for record in records:
        _emit(record)
        ok = ok and record["pass"]
    _emit({"kind": "summary", "pass": ok, "criteria": len(records)})
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contlogic",
        description="Workbench for computable continuous logic over metric structures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    code = sub.add_parser("code", help="Goedel coding operations")
    code.add_argument("action", choices=["encode", "decode", "f", "g", "predicates"])
    code.add_argument("--formula", default="-", help="formula file or - for stdin")
    code.add_argument("--signature", default="metric", choices=sorted(F.PRESETS))
    code.add_argument("--code", help="decimal code")
    code.add_argument("--q", help="second code for g")
    code.add_argument("--n", type=int, default=0, help="constant exponent for f")
    code.set_defaults(func=_cmd_code)

    parse_cmd = sub.add_parser("parse", help="parse/print formulas")
    parse_cmd.add_argument("--formula", default="-")
    parse_cmd.add_argument("--signature", default="metric", choices=sorted(F.PRESETS))
    parse_cmd.add_argument("--prenex", action="store_true")
    parse_cmd.set_defaults(func=_cmd_parse)

    norm = sub.add_parser("norm", help="certified norm bounds")
    norm.add_argument("--matrix-index", type=int)
    norm.add_argument("--opnorm-power", type=int, default=6)
    norm.add_argument("--group", help="group config path")
    norm.add_argument("--element", help="group algebra element expression")
    norm.add_argument("--lambda-lower", type=int, default=0,
                      help="moment sweep depth for lambda-norm lower bounds")
    norm.add_argument("--precision", type=int, default=10)
    norm.set_defaults(func=_cmd_norm)

    ev = sub.add_parser("eval", help="evaluate a sentence over a presentation")
    ev.add_argument("--presentation", required=True, help="R, L, Cstar or C2w")
    ev.add_argument("--group", help="group config path for L/Cstar")
    ev.add_argument("--sentence", default="-", help="sentence file or - for stdin")
    ev.add_argument("--budget-points", type=int, default=8)
    ev.add_argument("--precision", type=int, default=10)
    ev.add_argument("--oracle-budget", type=int, default=None)
    ev.add_argument("--bind", action="append", help="cN=POINTINDEX", default=None)
    ev.set_defaults(func=_cmd_eval)

    cl = sub.add_parser("classify", help="value-set complexity labels")
    cl.add_argument("--code", help="sentence code")
    cl.add_argument("--prefix", help="forallN / existsN / qf")
    cl.add_argument("--relation", required=True,
                    choices=["lt", "le", "gt", "ge", "<", "<=", ">", ">="])
    cl.add_argument("--n", type=int, default=0)
    cl.set_defaults(func=_cmd_classify)

    force = sub.add_parser("force", help="forcing games and checks")
    force.add_argument("action",
                       choices=["check-condition", "sup-leq", "game", "fp"])
    force.add_argument("--instance", default="metric", choices=["metric"],
                       help="base theory instance")
    force.add_argument("--condition", help="pre-condition code")
    force.add_argument("--psi", default="-", help="formula file or - for stdin")
    force.add_argument("--bound", default="1/2", help="dyadic bound, e.g. 1/2")
    force.add_argument("--budget", type=int, default=4)
    force.add_argument("--depth", type=int, default=2)
    force.add_argument("--rounds", type=int, default=4)
    force.add_argument("--seed", type=int, default=0)
    force.add_argument("--strategy-forall", default="random",
                       help="random | pass")
    force.add_argument("--strategy-exists", default="pinning",
                       help="pinning | pass")
    force.set_defaults(func=_cmd_force)

    st = sub.add_parser("selftest", help="run the acceptance suite")
    st.set_defaults(func=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        return _fail("parse-error", str(exc))
    except coding.NotACode as exc:
        return _fail("not-a-code", str(exc))
    except coding.BadItem as exc:
        return _fail("bad-item", str(exc))
    except (F.FormulaError, G.GroupError, FC.ForcingError, E.EvalError,
            P.PresentationError, ValueError) as exc:
        return _fail(type(exc).__name__.lower(), str(exc))


if __name__ == "__main__":
    sys.exit(main())
