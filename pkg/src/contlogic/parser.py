"""Textual syntax for restricted formulas; see docs/grammar.md.

The grammar is LL(1) and ASCII-safe: truncated subtraction is spelled "-.",
halving "half(...)", rounded combinations "comb(lam, t, mu, s)" with
Gaussian-rational scalars "a/b+c/di".  `print_formula` emits a canonical form
(nested "-." fully parenthesized, scalars with explicit imaginary part) and
`parse_formula(print_formula(f)) == f` holds structurally.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import formulas as F
from .gaussian import GaussianRational

KEYWORDS = {"sup", "inf", "half", "comb"}
_CCONST_PREFIX = "c"


class ParseError(Exception):
    """Parse failure with 1-based position; `kind` is machine-readable."""

    def __init__(self, kind: str, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.kind = kind
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT NAT LPAREN RPAREN COMMA DOT DOTMINUS SLASH PLUS MINUS EOF
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        start_col = col
        if text.startswith("-.", i):
            tokens.append(Token("DOTMINUS", "-.", line, start_col))
            i += 2
            col += 2
            continue
        simple = {
            "(": "LPAREN",
            ")": "RPAREN",
            ",": "COMMA",
            ".": "DOT",
            "/": "SLASH",
            "+": "PLUS",
            "-": "MINUS",
            "*": "STAR",
            "^": "CARET",
        }
        if ch in simple:
            tokens.append(Token(simple[ch], ch, line, start_col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("NAT", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("IDENT", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        raise ParseError("syntax", f"unexpected character {ch!r}", line, start_col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], sig: F.Signature):
        self.tokens = tokens
        self.pos = 0
        self.sig = sig

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                "syntax", f"expected {what}, found {tok.text or 'end of input'!r}",
                tok.line, tok.col,
            )
        return self.next()

    def fail(self, kind: str, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(kind, message, tok.line, tok.col)

    # -- formulas -------------------------------------------------------------

    def formula(self) -> F.Formula:
        tok = self.peek()
        if tok.kind == "IDENT" and tok.text in ("sup", "inf"):
            self.next()
            var = self.expect("IDENT", "a variable name")
            if var.text in KEYWORDS or self._is_cconst(var.text):
                self.fail("syntax", f"{var.text!r} cannot be a bound variable", var)
            self.expect("DOT", "'.' after the quantified variable")
            body = self.formula()
            cls = F.Sup if tok.text == "sup" else F.Inf
            return cls(var.text, body)
        left = self.primary()
        if self.peek().kind == "DOTMINUS":
            self.next()
            right = self.formula()
            return F.DotMinus(left, right)
        return left

    def primary(self) -> F.Formula:
        tok = self.peek()
        if tok.kind == "NAT":
            self.next()
            if tok.text == "0":
                return F.Zero()
            if tok.text == "1":
                return F.One()
            self.fail("syntax", "only the constants 0 and 1 are formulas", tok)
        if tok.kind == "LPAREN":
            self.next()
            inner = self.formula()
            self.expect("RPAREN", "')'")
            return inner
        if tok.kind == "IDENT" and tok.text == "half":
            self.next()
            self.expect("LPAREN", "'(' after half")
            body = self.formula()
            self.expect("RPAREN", "')'")
            return F.Half(body)
        if tok.kind == "IDENT":
            if tok.text in ("sup", "inf"):
                self.next()
                self.fail("syntax", "quantifier needs parentheses here", tok)
            return self.atomic()
        self.fail("syntax", f"expected a formula, found {tok.text or 'end of input'!r}", tok)

    def atomic(self) -> F.Formula:
        name = self.expect("IDENT", "a predicate name")
        if not self.sig.has_predicate(name.text):
            self.fail("unknown-symbol", f"unknown predicate {name.text!r}", name)
        arity = self.sig.predicate(name.text).arity
        self.expect("LPAREN", f"'(' after predicate {name.text}")
        args = [self.term()]
        while self.peek().kind == "COMMA":
            self.next()
            args.append(self.term())
        close = self.expect("RPAREN", "')'")
        if len(args) != arity:
            raise ParseError(
                "arity-mismatch",
                f"{name.text} expects {arity} arguments, got {len(args)}",
                name.line, name.col,
            )
        return F.Atomic(name.text, tuple(args))

    # -- terms ----------------------------------------------------------------

    def _is_cconst(self, text: str) -> bool:
        return (
            len(text) > 1
            and text.startswith(_CCONST_PREFIX)
            and text[1:].isdigit()
            and text[1] != "0"
        )

    def term(self) -> F.Term:
        tok = self.peek()
        if tok.kind != "IDENT":
            self.fail("syntax", f"expected a term, found {tok.text or 'end of input'!r}", tok)
        if tok.text == "comb":
            return self.comb_term()
        if self.sig.has_function(tok.text):
            name = self.next()
            arity = self.sig.function(name.text).arity
            self.expect("LPAREN", f"'(' after function {name.text}")
            args = [self.term()]
            while self.peek().kind == "COMMA":
                self.next()
                args.append(self.term())
            self.expect("RPAREN", "')'")
            if len(args) != arity:
                raise ParseError(
                    "arity-mismatch",
                    f"{name.text} expects {arity} arguments, got {len(args)}",
                    name.line, name.col,
                )
            return F.App(name.text, tuple(args))
        self.next()
        if self._is_cconst(tok.text):
            return F.CConst(int(tok.text[1:]))
        if tok.text in self.sig.constants:
            return F.NamedConst(tok.text)
        if tok.text in KEYWORDS:
            self.fail("syntax", f"{tok.text!r} cannot be a term", tok)
        return F.Var(tok.text)

    def comb_term(self) -> F.Term:
        start = self.next()  # 'comb'
        if not self.sig.allow_comb:
            self.fail(
                "unknown-symbol",
                f"rounded combinations not available in signature {self.sig.name}",
                start,
            )
        self.expect("LPAREN", "'(' after comb")
        lam = self.gaussian()
        self.expect("COMMA", "','")
        left = self.term()
        self.expect("COMMA", "','")
        mu = self.gaussian()
        self.expect("COMMA", "','")
        right = self.term()
        self.expect("RPAREN", "')'")
        if not F.rounded_bound_ok(lam, mu):
            raise ParseError(
                "rounded-bound",
                f"|{lam}| + |{mu}| > 1 in rounded combination",
                start.line, start.col,
            )
        return F.Comb(lam, mu, left, right)

    def rational(self) -> Fraction:
        sign = 1
        if self.peek().kind == "MINUS":
            self.next()
            sign = -1
        num_tok = self.expect("NAT", "a rational number")
        if self.peek().kind == "DOT":
            raise ParseError(
                "scalar-not-gaussian-rational",
                "decimal literals are not Gaussian rationals; write a/b",
                num_tok.line, num_tok.col,
            )
        num = int(num_tok.text)
        if self.peek().kind == "SLASH":
            self.next()
            den_tok = self.expect("NAT", "a denominator")
            den = int(den_tok.text)
            if den == 0:
                raise ParseError(
                    "scalar-not-gaussian-rational", "zero denominator",
                    den_tok.line, den_tok.col,
                )
        else:
            den = 1
        return Fraction(sign * num, den)

    def gaussian(self) -> GaussianRational:
        re = self.rational()
        tok = self.peek()
        if tok.kind in ("PLUS", "MINUS"):
            sign = 1 if tok.kind == "PLUS" else -1
            self.next()
            im_mag = self.rational()
            i_tok = self.expect("IDENT", "'i' after the imaginary part")
            if i_tok.text != "i":
                raise ParseError(
                    "scalar-not-gaussian-rational",
                    f"expected 'i', found {i_tok.text!r}",
                    i_tok.line, i_tok.col,
                )
            return GaussianRational(re, sign * im_mag)
        return GaussianRational(re, Fraction(0))


def parse_formula(text: str, sig: F.Signature) -> F.Formula:
    """Parse `text` into a formula over `sig`; first error wins, with position."""
    parser = _Parser(_tokenize(text), sig)
    formula = parser.formula()
    tok = parser.peek()
    if tok.kind != "EOF":
        raise ParseError("syntax", f"unexpected trailing input {tok.text!r}", tok.line, tok.col)
    F.validate(formula, sig)
    return formula


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------


def _print_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _print_gaussian(z: GaussianRational) -> str:
    sign = "+" if z.im >= 0 else "-"
    return f"{_print_rational(z.re)}{sign}{_print_rational(abs(z.im))}i"


def _print_term(t: F.Term) -> str:
    if isinstance(t, F.Var):
        return t.name
    if isinstance(t, F.CConst):
        return f"c{t.index}"
    if isinstance(t, F.NamedConst):
        return t.name
    if isinstance(t, F.App):
        return f"{t.func}({', '.join(_print_term(a) for a in t.args)})"
    if isinstance(t, F.Comb):
        return (
            f"comb({_print_gaussian(t.lam)}, {_print_term(t.left)}, "
            f"{_print_gaussian(t.mu)}, {_print_term(t.right)})"
        )
    raise F.FormulaError(f"not a term: {t!r}")


def print_formula(formula: F.Formula) -> str:
    if isinstance(formula, F.Zero):
        return "0"
    if isinstance(formula, F.One):
        return "1"
    if isinstance(formula, F.Half):
        return f"half({print_formula(formula.body)})"
    if isinstance(formula, F.DotMinus):
        # quantifier bodies are greedy, so quantified operands need parens
        def operand(f: F.Formula) -> str:
            text = print_formula(f)
            return f"({text})" if isinstance(f, (F.Sup, F.Inf)) else text

        return f"({operand(formula.left)} -. {operand(formula.right)})"
    if isinstance(formula, F.Sup):
        return f"sup {formula.var} . {print_formula(formula.body)}"
    if isinstance(formula, F.Inf):
        return f"inf {formula.var} . {print_formula(formula.body)}"
    if isinstance(formula, F.Atomic):
        return f"{formula.pred}({', '.join(_print_term(a) for a in formula.args)})"
    raise F.FormulaError(f"not a formula: {formula!r}")
