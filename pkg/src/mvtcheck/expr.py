"""Expression language for real-valued functions of one variable.

Lexer, recursive-descent parser, canonical formatter, and evaluator for a
small grammar: the five binary operators ``+ - * / ^``, unary minus, the
functions sin, cos, tan, exp, ln, sqrt, abs, the variable ``x``, and the
named constants ``pi`` and ``e`` (folded to numbers at parse time).

Precedence, loosest to tightest: additive, multiplicative, unary minus,
``^`` (right associative); function application binds tightest.  There is
no implicit multiplication: ``4x`` is a parse error, write ``4*x``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum, auto
from typing import Callable

__all__ = [
    "Token",
    "TokenKind",
    "Expr",
    "Constant",
    "Variable",
    "Neg",
    "Binary",
    "Call",
    "SourceError",
    "LexError",
    "ParseError",
    "UnknownIdentifier",
    "DomainError",
    "FUNCTIONS",
    "BINARY_OPS",
    "tokenize",
    "parse",
    "format_expr",
    "evaluate",
    "compile_evaluator",
]

FUNCTIONS = ("sin", "cos", "tan", "exp", "ln", "sqrt", "abs")
BINARY_OPS = ("+", "-", "*", "/", "^")

_NAMED_CONSTANTS = {"pi": math.pi, "e": math.e}


class SourceError(Exception):
    """Lex or parse failure, carrying the offending source position."""

    def __init__(self, position: int, message: str):
        super().__init__(f"{message} (position {position})")
        self.position = position


class LexError(SourceError):
    pass


class ParseError(SourceError):
    def __init__(self, position: int, expected: str):
        super().__init__(position, f"expected {expected}")
        self.expected = expected


class UnknownIdentifier(ParseError):
    def __init__(self, position: int, name: str):
        SourceError.__init__(self, position, f"unknown identifier {name!r}")
        self.expected = "x, pi, e, or a function name"
        self.name = name


class DomainError(Exception):
    """Evaluation left the real domain at a specific point."""

    def __init__(self, point: float, reason: str):
        super().__init__(f"{reason} at x = {point!r}")
        self.point = point
        self.reason = reason


class TokenKind(Enum):
    NUMBER = auto()
    IDENTIFIER = auto()
    PLUS = auto()
    MINUS = auto()
    STAR = auto()
    SLASH = auto()
    CARET = auto()
    LPAREN = auto()
    RPAREN = auto()
    COMMA = auto()


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    text: str
    position: int


class Expr:
    """Base class of the immutable expression tree."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Constant(Expr):
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        if not math.isfinite(self.value):
            raise ValueError("constants must be finite")


@dataclass(frozen=True, slots=True)
class Variable(Expr):
    pass


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    child: Expr


@dataclass(frozen=True, slots=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr

    def __post_init__(self):
        if self.op not in BINARY_OPS:
            raise ValueError(f"unknown operator {self.op!r}")


@dataclass(frozen=True, slots=True)
class Call(Expr):
    fn: str
    argument: Expr

    def __post_init__(self):
        if self.fn not in FUNCTIONS:
            raise ValueError(f"unknown function {self.fn!r}")


_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?", re.ASCII)
_IDENT_RE = re.compile(r"[A-Za-z]+")
_SINGLE_CHAR = {
    "+": TokenKind.PLUS,
    "-": TokenKind.MINUS,
    "*": TokenKind.STAR,
    "/": TokenKind.SLASH,
    "^": TokenKind.CARET,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    ",": TokenKind.COMMA,
}


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens, skipping whitespace.

    Numbers are matched longest-first (digits, optional fraction, optional
    exponent); identifiers are runs of ASCII letters.  Raises LexError on
    any other character and on numeric literals that overflow binary64.
    """
    tokens: list[Token] = []
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if "0" <= ch <= "9":
            m = _NUMBER_RE.match(source, i)
            text = m.group()
            if not math.isfinite(float(text)):
                raise LexError(i, f"number literal {text!r} overflows binary64")
            tokens.append(Token(TokenKind.NUMBER, text, i))
            i = m.end()
            continue
        if ("a" <= ch <= "z") or ("A" <= ch <= "Z"):
            m = _IDENT_RE.match(source, i)
            tokens.append(Token(TokenKind.IDENTIFIER, m.group(), i))
            i = m.end()
            continue
        kind = _SINGLE_CHAR.get(ch)
        if kind is None:
            raise LexError(i, f"unrecognized character {ch!r}")
        tokens.append(Token(kind, ch, i))
        i += 1
    return tokens


def parse(source: str) -> Expr:
    """Parse ``source`` into an expression tree.

    ``pi`` and ``e`` become Constants; ``x`` is the only variable.  Raises
    ParseError (or UnknownIdentifier) with the source position on
    malformed input.
    """
    return _Parser(source).parse()


class _Parser:
    def __init__(self, source: str):
        self._source = source
        self._tokens = tokenize(source)
        self._pos = 0

    def parse(self) -> Expr:
        expr = self._additive()
        tok = self._peek()
        if tok is not None:
            raise ParseError(tok.position, "end of input")
        return expr

    def _peek(self) -> Token | None:
        if self._pos < len(self._tokens):
            return self._tokens[self._pos]
        return None

    def _advance(self) -> Token:
        tok = self._tokens[self._pos]
        self._pos += 1
        return tok

    def _error_position(self) -> int:
        tok = self._peek()
        return tok.position if tok is not None else len(self._source)

    def _expect(self, kind: TokenKind, what: str) -> Token:
        tok = self._peek()
        if tok is None or tok.kind is not kind:
            raise ParseError(self._error_position(), what)
        return self._advance()

    def _additive(self) -> Expr:
        expr = self._multiplicative()
        while (tok := self._peek()) is not None and tok.kind in (TokenKind.PLUS, TokenKind.MINUS):
            self._advance()
            op = "+" if tok.kind is TokenKind.PLUS else "-"
            expr = Binary(op, expr, self._multiplicative())
        return expr

    def _multiplicative(self) -> Expr:
        expr = self._unary()
        while (tok := self._peek()) is not None and tok.kind in (TokenKind.STAR, TokenKind.SLASH):
            self._advance()
            op = "*" if tok.kind is TokenKind.STAR else "/"
            expr = Binary(op, expr, self._unary())
        return expr

    def _unary(self) -> Expr:
        tok = self._peek()
        if tok is not None and tok.kind is TokenKind.MINUS:
            self._advance()
            return Neg(self._unary())
        return self._power()

    def _power(self) -> Expr:
        base = self._primary()
        tok = self._peek()
        if tok is not None and tok.kind is TokenKind.CARET:
            self._advance()
            # right associative; the exponent may carry its own unary minus
            return Binary("^", base, self._unary())
        return base

    def _primary(self) -> Expr:
        tok = self._peek()
        if tok is None:
            raise ParseError(self._error_position(), "an expression")
        if tok.kind is TokenKind.NUMBER:
            self._advance()
            return Constant(float(tok.text))
        if tok.kind is TokenKind.IDENTIFIER:
            self._advance()
            name = tok.text
            if name == "x":
                return Variable()
            if name in _NAMED_CONSTANTS:
                return Constant(_NAMED_CONSTANTS[name])
            if name in FUNCTIONS:
                self._expect(TokenKind.LPAREN, f"'(' after {name!r}")
                arg = self._additive()
                self._expect(TokenKind.RPAREN, "')'")
                return Call(name, arg)
            raise UnknownIdentifier(tok.position, name)
        if tok.kind is TokenKind.LPAREN:
            self._advance()
            expr = self._additive()
            self._expect(TokenKind.RPAREN, "')'")
            return expr
        raise ParseError(tok.position, "a number, a name, or '('")


def format_expr(e: Expr) -> str:
    """Render ``e`` as fully parenthesized text.

    For every tree the parser can produce, ``parse(format_expr(e))`` is
    structurally identical to ``e``.
    """
    if isinstance(e, Constant):
        return _format_number(e.value)
    if isinstance(e, Variable):
        return "x"
    if isinstance(e, Neg):
        return f"(-{format_expr(e.child)})"
    if isinstance(e, Binary):
        return f"({format_expr(e.left)} {e.op} {format_expr(e.right)})"
    if isinstance(e, Call):
        return f"{e.fn}({format_expr(e.argument)})"
    raise TypeError(f"not an expression: {e!r}")


def _format_number(v: float) -> str:
    # negative constants cannot appear as literals; wrap them in unary minus
    if v < 0.0 or (v == 0.0 and math.copysign(1.0, v) < 0.0):
        return f"(-{_format_number(-v)})"
    if v.is_integer() and v < 1e16:
        return str(int(v))
    return repr(v)


# --- evaluation -------------------------------------------------------------
#
# The risky operations live in small helpers shared by the tree-walking
# evaluator and the compiled fast path, so both produce bit-identical
# values and identical DomainError behaviour.


def _finite_or_raise(v: float, x: float) -> float:
    if math.isfinite(v):
        return v
    raise DomainError(x, "non-finite result")


def _div(num: float, den: float, x: float) -> float:
    if not (math.isfinite(num) and math.isfinite(den)):
        raise DomainError(x, "non-finite result")
    if den == 0.0:
        raise DomainError(x, "division by zero")
    out = num / den
    if not math.isfinite(out):
        raise DomainError(x, "non-finite result")
    return out


def _pow(base: float, exponent: float, x: float) -> float:
    if not (math.isfinite(base) and math.isfinite(exponent)):
        raise DomainError(x, "non-finite result")
    if abs(exponent) <= 64.0 and exponent == int(exponent):
        n = int(exponent)
        out = 1.0
        for _ in range(abs(n)):
            out *= base
        if n < 0:
            if out == 0.0:
                raise DomainError(x, "division by zero")
            out = 1.0 / out
        if not math.isfinite(out):
            raise DomainError(x, "non-finite result")
        return out
    if base <= 0.0:
        raise DomainError(x, "non-integer power of a non-positive base")
    try:
        return math.exp(exponent * math.log(base))
    except OverflowError:
        raise DomainError(x, "non-finite result") from None


def _sin(a: float, x: float) -> float:
    try:
        return math.sin(a)
    except ValueError:
        raise DomainError(x, "non-finite result") from None


def _cos(a: float, x: float) -> float:
    try:
        return math.cos(a)
    except ValueError:
        raise DomainError(x, "non-finite result") from None


def _tan(a: float, x: float) -> float:
    try:
        return math.tan(a)
    except ValueError:
        raise DomainError(x, "non-finite result") from None


def _exp(a: float, x: float) -> float:
    try:
        return math.exp(a)
    except (ValueError, OverflowError):
        raise DomainError(x, "non-finite result") from None


def _ln(a: float, x: float) -> float:
    if a <= 0.0:
        raise DomainError(x, "ln of a non-positive value")
    return math.log(a)


def _sqrt(a: float, x: float) -> float:
    if a < 0.0:
        raise DomainError(x, "square root of a negative value")
    return math.sqrt(a)


def _abs(a: float, x: float) -> float:
    return math.fabs(a)


_CALL_HELPERS = {
    "sin": _sin,
    "cos": _cos,
    "tan": _tan,
    "exp": _exp,
    "ln": _ln,
    "sqrt": _sqrt,
    "abs": _abs,
}


def evaluate(e: Expr, x: float) -> float:
    """Evaluate ``e`` at the point ``x``.

    ``^`` with an integral exponent of magnitude <= 64 uses repeated
    multiplication and allows any base; other exponents are defined as
    exp(exponent * ln(base)) and require a positive base.  Raises
    DomainError for division by zero, ln/sqrt outside their real domains,
    non-integer powers of non-positive bases, and non-finite results.
    """
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    return _finite_or_raise(_eval(e, x), x)


def _eval(e: Expr, x: float) -> float:
    if isinstance(e, Constant):
        return e.value
    if isinstance(e, Variable):
        return x
    if isinstance(e, Neg):
        return -_eval(e.child, x)
    if isinstance(e, Binary):
        left = _eval(e.left, x)
        right = _eval(e.right, x)
        op = e.op
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            return _div(left, right, x)
        return _pow(left, right, x)
    if isinstance(e, Call):
        return _CALL_HELPERS[e.fn](_eval(e.argument, x), x)
    raise TypeError(f"not an expression: {e!r}")


def compile_evaluator(e: Expr) -> Callable[[float], float]:
    """Compile ``e`` into a fast single-call evaluator.

    Semantically identical to :func:`evaluate` (bit-identical values, same
    DomainError behaviour); it exists because the verification pipeline
    evaluates expressions at thousands of sample points.
    """
    source = (
        "def _compiled(x):\n"
        "    if not _isfinite(x):\n"
        "        raise ValueError('x must be finite')\n"
        f"    return _finite({_emit(e)}, x)\n"
    )
    namespace: dict[str, object] = {
        "_isfinite": math.isfinite,
        "_finite": _finite_or_raise,
        "_div": _div,
        "_pow": _pow,
        "ValueError": ValueError,
        "__builtins__": {},
    }
    for name, helper in _CALL_HELPERS.items():
        namespace[f"_fn_{name}"] = helper
    exec(compile(source, "<compiled expression>", "exec"), namespace)
    return namespace["_compiled"]  # type: ignore[return-value]


def _emit(e: Expr) -> str:
    if isinstance(e, Constant):
        return f"({e.value!r})"
    if isinstance(e, Variable):
        return "x"
    if isinstance(e, Neg):
        return f"(-{_emit(e.child)})"
    if isinstance(e, Binary):
        left, right = _emit(e.left), _emit(e.right)
        if e.op == "/":
            return f"_div({left}, {right}, x)"
        if e.op == "^":
            return f"_pow({left}, {right}, x)"
        return f"({left} {e.op} {right})"
    if isinstance(e, Call):
        return f"_fn_{e.fn}({_emit(e.argument)}, x)"
    raise TypeError(f"not an expression: {e!r}")
