"""Formula syntax: AST, parser, printer, and the depth-two level discipline.

The concrete grammar (whitespace-insensitive, ASCII):

    formula := quant | impl
    quant   := ("forall"|"exists") IDENT "." formula
    impl    := orf ("->" impl)?
    orf     := andf ("|" orf)?
    andf    := unary ("&" andf)?
    unary   := "~" unary | "box" unary | "dia" unary | probOp
             | "(" formula ")" | atom
    probOp  := ("P"|"P1"|"P2") "[" NUM ("," NUM)? "]" "(" formula ")"
    atom    := IDENT ("(" term ("," term)* ")")?
    term    := IDENT

NUM is a decimal literal or a rational `p/q`; both are converted to exact
rationals.  A term beginning with a lowercase letter that is bound by an
enclosing quantifier is a variable; every other term is a constant.
Identifiers may contain hyphens (`Plays-sax`) as long as the character
after the hyphen is alphanumeric, so `->` still tokenizes as the arrow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Optional, Union

from .errors import ArityError, DepthError, MixedModalityError, ParseError

__all__ = [
    "Interval",
    "Term",
    "Var",
    "Const",
    "Formula",
    "Atom",
    "Not",
    "And",
    "Or",
    "Implies",
    "Forall",
    "Exists",
    "Prob",
    "Box",
    "Dia",
    "parse",
    "render",
    "resolve_levels",
    "free_variables",
    "subformulas",
    "prob_subformulas",
    "atoms",
    "contains_prob",
    "contains_alethic",
    "modal_depth",
    "is_propositional",
    "format_rational",
    "parse_number",
]


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """Closed rational interval inside [0, 1]; a point is lo == hi."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not (0 <= self.lo <= self.hi <= 1):
            raise ValueError(f"invalid probability interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, p) -> "Interval":
        p = Fraction(p)
        return cls(p, p)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, value) -> bool:
        return self.lo <= value <= self.hi

    def __str__(self) -> str:
        if self.is_point:
            return f"[{format_rational(self.lo)}]"
        return f"[{format_rational(self.lo)},{format_rational(self.hi)}]"


def format_rational(x: Fraction) -> str:
    """Render a rational as `p/q`, or a bare integer when q == 1."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_number(text: str) -> Fraction:
    """Convert a decimal or `p/q` literal to an exact rational."""
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad numeric literal {text!r}") from exc


# ---------------------------------------------------------------------------
# Terms and formulas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    name: str

    def __str__(self) -> str:
        return self.name


class Var(Term):
    pass


class Const(Term):
    pass


class Formula:
    """Base class for all formula nodes."""

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Prob(Formula):
    """Probability operator. level is 1, 2, or None while unresolved."""

    level: Optional[int]
    interval: Interval
    body: Formula


@dataclass(frozen=True)
class Box(Formula):
    body: Formula


@dataclass(frozen=True)
class Dia(Formula):
    body: Formula


Quantifier = (Forall, Exists)
BinaryOp = (And, Or, Implies)


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_KEYWORDS = {"forall", "exists", "box", "dia"}
_PUNCT = {"(", ")", "[", "]", ",", ".", "~", "&", "|", "->"}


@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT, NUM, or one of _PUNCT, or EOF
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        start_col = col
        if c.isalpha() or c == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"
                             or (text[j] == "-" and j + 1 < n and text[j + 1].isalnum())):
                j += 1
            word = text[i:j]
            kind = word if word in _KEYWORDS else "IDENT"
            tokens.append(_Token(kind, word, line, start_col))
            col += j - i
            i = j
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot
                                                   and j + 1 < n and text[j + 1].isdigit())):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            tokens.append(_Token("NUM", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if c == "-" and i + 1 < n and text[i + 1] == ">":
            tokens.append(_Token("->", "->", line, start_col))
            i += 2
            col += 2
            continue
        if c == "/":
            tokens.append(_Token("/", "/", line, start_col))
            i += 1
            col += 1
            continue
        if c in "()[],.~&|":
            tokens.append(_Token(c, c, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {c!r}", line, start_col)
    tokens.append(_Token("EOF", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list[_Token], signature: Optional[Mapping[str, int]]):
        self.tokens = tokens
        self.pos = 0
        self.signature = signature
        self.scope: list[str] = []  # quantified variable names, innermost last

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text or 'end of input'!r}",
                             tok.line, tok.column)
        return self.advance()

    def fail(self, message: str):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.column)

    # formula := quant | impl
    def formula(self) -> Formula:
        tok = self.peek()
        if tok.kind in ("forall", "exists"):
            self.advance()
            var = self.expect("IDENT").text
            self.expect(".")
            self.scope.append(var)
            try:
                body = self.formula()
            finally:
                self.scope.pop()
            return Forall(var, body) if tok.kind == "forall" else Exists(var, body)
        return self.impl()

    def impl(self) -> Formula:
        left = self.orf()
        if self.peek().kind == "->":
            self.advance()
            return Implies(left, self.impl())
        return left

    def orf(self) -> Formula:
        left = self.andf()
        if self.peek().kind == "|":
            self.advance()
            return Or(left, self.orf())
        return left

    def andf(self) -> Formula:
        left = self.unary()
        if self.peek().kind == "&":
            self.advance()
            return And(left, self.andf())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "~":
            self.advance()
            return Not(self.unary())
        if tok.kind == "box":
            self.advance()
            return Box(self.unary())
        if tok.kind == "dia":
            self.advance()
            return Dia(self.unary())
        if tok.kind == "(":
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        if tok.kind == "IDENT":
            if tok.text in ("P", "P1", "P2") and self.tokens[self.pos + 1].kind == "[":
                return self.prob_op()
            return self.atom()
        self.fail(f"expected a formula, found {tok.text or 'end of input'!r}")

    def prob_op(self) -> Formula:
        op = self.advance().text
        level = None if op == "P" else int(op[1])
        self.expect("[")
        lo = self.number()
        hi = lo
        if self.peek().kind == ",":
            self.advance()
            hi = self.number()
        close = self.expect("]")
        try:
            interval = Interval(lo, hi)
        except ValueError as exc:
            raise ParseError(str(exc), close.line, close.column) from None
        self.expect("(")
        body = self.formula()
        self.expect(")")
        return Prob(level, interval, body)

    def number(self) -> Fraction:
        tok = self.expect("NUM")
        value = parse_number(tok.text)
        if self.peek().kind == "/":
            if "." in tok.text:
                self.fail("numerator of a rational must be an integer")
            self.advance()
            den = self.expect("NUM")
            if "." in den.text:
                raise ParseError("denominator of a rational must be an integer",
                                 den.line, den.column)
            if int(den.text) == 0:
                raise ParseError("zero denominator", den.line, den.column)
            value = Fraction(int(tok.text), int(den.text))
        return value

    def atom(self) -> Formula:
        name_tok = self.expect("IDENT")
        args: list[Term] = []
        if self.peek().kind == "(":
            self.advance()
            args.append(self.term())
            while self.peek().kind == ",":
                self.advance()
                args.append(self.term())
            self.expect(")")
        if self.signature is not None:
            declared = self.signature.get(name_tok.text)
            if declared is not None and declared != len(args):
                raise ArityError(
                    f"predicate {name_tok.text!r} expects {declared} argument(s), got {len(args)}",
                    name_tok.line, name_tok.column)
        return Atom(name_tok.text, tuple(args))

    def term(self) -> Term:
        tok = self.expect("IDENT")
        if tok.text[0].islower() and tok.text in self.scope:
            return Var(tok.text)
        return Const(tok.text)


def parse(text: str, signature: Optional[Mapping[str, int]] = None) -> Formula:
    """Parse formula text into an AST.

    Probability levels are taken as written (`P1`/`P2`) and left unresolved
    for bare `P`; run resolve_levels afterwards to fix them.  If a signature
    (predicate name -> arity) is given, atom arities are checked against it.
    """
    parser = _Parser(_tokenize(text), signature)
    f = parser.formula()
    tok = parser.peek()
    if tok.kind != "EOF":
        raise ParseError(f"trailing input starting at {tok.text!r}", tok.line, tok.column)
    return f


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

# Context levels mirror the grammar: 0 allows quantifiers, 1 implications,
# 2 disjunctions, 3 conjunctions, 4 only unary-tight forms.
_PREC_FORMULA, _PREC_IMPL, _PREC_OR, _PREC_AND, _PREC_UNARY = 0, 1, 2, 3, 4


def _node_prec(f: Formula) -> int:
    if isinstance(f, Quantifier):
        return _PREC_FORMULA
    if isinstance(f, Implies):
        return _PREC_IMPL
    if isinstance(f, Or):
        return _PREC_OR
    if isinstance(f, And):
        return _PREC_AND
    return _PREC_UNARY


def render(f: Formula) -> str:
    """Print a formula so that parse(render(f)) reproduces f exactly."""
    return _render(f, _PREC_FORMULA)


def _render(f: Formula, ctx: int) -> str:
    text = _render_node(f)
    if _node_prec(f) < ctx:
        return f"({text})"
    return text


def _render_node(f: Formula) -> str:
    if isinstance(f, Atom):
        if not f.args:
            return f.name
        return f"{f.name}({', '.join(t.name for t in f.args)})"
    if isinstance(f, Not):
        return f"~{_render(f.body, _PREC_UNARY)}"
    if isinstance(f, And):
        return f"{_render(f.left, _PREC_UNARY)} & {_render(f.right, _PREC_AND)}"
    if isinstance(f, Or):
        return f"{_render(f.left, _PREC_AND)} | {_render(f.right, _PREC_OR)}"
    if isinstance(f, Implies):
        return f"{_render(f.left, _PREC_OR)} -> {_render(f.right, _PREC_IMPL)}"
    if isinstance(f, Forall):
        return f"forall {f.var}. {_render(f.body, _PREC_FORMULA)}"
    if isinstance(f, Exists):
        return f"exists {f.var}. {_render(f.body, _PREC_FORMULA)}"
    if isinstance(f, Prob):
        op = "P" if f.level is None else f"P{f.level}"
        return f"{op}{f.interval}({_render(f.body, _PREC_FORMULA)})"
    if isinstance(f, Box):
        return f"box {_render(f.body, _PREC_UNARY)}"
    if isinstance(f, Dia):
        return f"dia {_render(f.body, _PREC_UNARY)}"
    raise TypeError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# Structure helpers
# ---------------------------------------------------------------------------

def _children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Atom):
        return ()
    if isinstance(f, (Not, Box, Dia, Prob)):
        return (f.body,)
    if isinstance(f, BinaryOp):
        return (f.left, f.right)
    if isinstance(f, Quantifier):
        return (f.body,)
    raise TypeError(f"not a formula node: {f!r}")


def subformulas(f: Formula) -> Iterator[Formula]:
    """All subformulas in preorder, including f itself."""
    yield f
    for child in _children(f):
        yield from subformulas(child)


def prob_subformulas(f: Formula) -> list[Prob]:
    return [g for g in subformulas(f) if isinstance(g, Prob)]


def atoms(f: Formula) -> list[Atom]:
    """Distinct atoms in first-occurrence (preorder) order."""
    seen: list[Atom] = []
    for g in subformulas(f):
        if isinstance(g, Atom) and g not in seen:
            seen.append(g)
    return seen


def contains_prob(f: Formula) -> bool:
    return any(isinstance(g, Prob) for g in subformulas(f))


def contains_alethic(f: Formula) -> bool:
    return any(isinstance(g, (Box, Dia)) for g in subformulas(f))


def modal_depth(f: Formula) -> int:
    """Maximum nesting depth of box/dia operators."""
    if isinstance(f, (Box, Dia)):
        return 1 + modal_depth(f.body)
    kids = _children(f)
    return max((modal_depth(c) for c in kids), default=0)


def is_propositional(f: Formula) -> bool:
    """No quantifiers, probability operators, or alethic operators."""
    return not any(isinstance(g, (Forall, Exists, Prob, Box, Dia))
                   for g in subformulas(f))


def free_variables(f: Formula) -> set[str]:
    """Free variable names. Quantifiers bind; probability operators do not."""
    out: set[str] = set()
    _free_vars(f, set(), out)
    return out


def _free_vars(f: Formula, bound: set[str], out: set[str]):
    if isinstance(f, Atom):
        for t in f.args:
            if isinstance(t, Var) and t.name not in bound:
                out.add(t.name)
        return
    if isinstance(f, Quantifier):
        _free_vars(f.body, bound | {f.var}, out)
        return
    for child in _children(f):
        _free_vars(child, bound, out)


# ---------------------------------------------------------------------------
# Level resolution
# ---------------------------------------------------------------------------

def resolve_levels(f: Formula) -> Formula:
    """Assign nesting levels to probability operators.

    An unenclosed operator becomes level 2; an operator under exactly one
    other becomes level 1.  Raises DepthError when nesting exceeds two or a
    written level contradicts its position, and MixedModalityError when
    box/dia occur alongside a probability operator.  Idempotent.
    """
    if contains_prob(f) and contains_alethic(f):
        raise MixedModalityError(
            "probability operators cannot be mixed with box/dia in one formula")
    return _resolve(f, 0)


def _resolve(f: Formula, enclosing: int) -> Formula:
    if isinstance(f, Prob):
        if enclosing >= 2:
            raise DepthError("probability operators nested deeper than two levels")
        want = 2 if enclosing == 0 else 1
        if f.level is not None and f.level != want:
            raise DepthError(
                f"P{f.level} written where nesting requires P{want}: {render(f)}")
        return Prob(want, f.interval, _resolve(f.body, enclosing + 1))
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Not(_resolve(f.body, enclosing))
    if isinstance(f, And):
        return And(_resolve(f.left, enclosing), _resolve(f.right, enclosing))
    if isinstance(f, Or):
        return Or(_resolve(f.left, enclosing), _resolve(f.right, enclosing))
    if isinstance(f, Implies):
        return Implies(_resolve(f.left, enclosing), _resolve(f.right, enclosing))
    if isinstance(f, Forall):
        return Forall(f.var, _resolve(f.body, enclosing))
    if isinstance(f, Exists):
        return Exists(f.var, _resolve(f.body, enclosing))
    if isinstance(f, Box):
        return Box(_resolve(f.body, enclosing))
    if isinstance(f, Dia):
        return Dia(_resolve(f.body, enclosing))
    raise TypeError(f"not a formula node: {f!r}")
