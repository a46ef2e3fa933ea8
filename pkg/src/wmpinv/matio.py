"""Matrix text format, expression grammar, and random generators.

File format (one matrix per file, UTF-8, LF or CRLF accepted on read):

    matrix <rows> <cols> field=<rational|float|ratfun>
    <entry> <entry> ... <entry>          one matrix row per line
    ...

Entries are whitespace-separated tokens.  Rational tokens are ``int`` or
``int/uint``; float tokens anything ``float()`` accepts; ratfun tokens are
expressions in the grammar below, written without spaces.

Expression grammar (recursive descent, positions reported on error):

    expr   := ['-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' uint)?
    base   := uint | 'x' | '(' expr ')'

Juxtaposition is not multiplication; a unary minus is allowed only at the
head of an expression (including inside parentheses).

The generators mirror a classical random-polynomial recipe: with
probability 1 - prob1 the polynomial is zero, otherwise each power
i = 0..degree contributes x^i * c * l with c uniform over coeff_range and
l a prob2-coin; if everything cancelled and prob1 >= 1 the result is
bumped to the constant 1.  Entry (i, j) of a random matrix draws from its
own PCG64 stream seeded by SeedSequence(seed, spawn_key=(i, j)), so
fixtures are reproducible entry by entry on any platform.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from .errors import DimensionMismatch, DivisionByZero, ParseError, UnsupportedField
from .fields import (
    FIELDS_BY_NAME,
    FLOAT64,
    RATFUN,
    RATIONAL,
    Field,
    Polynomial,
    RatFun,
)
from .matrix import Matrix

# ---------------------------------------------------------------------------
# Scalar formatting (canonical, space-free, round-trippable).
# ---------------------------------------------------------------------------

_RATIONAL_TOKEN = re.compile(r"^[+-]?\d+(/\d+)?$")


def format_polynomial(p: Polynomial) -> str:
    """Canonical space-free text, highest power first: ``2*x^2-1/3*x+4``."""
    if p.is_zero:
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else ("+" if parts else "")
        mag = -c if c < 0 else c
        if i == 0:
            body = str(mag)
        else:
            xpart = "x" if i == 1 else f"x^{i}"
            body = xpart if mag == 1 else f"{mag}*{xpart}"
        parts.append(sign + body)
    return "".join(parts)


def _poly_term_count(p: Polynomial) -> int:
    return sum(1 for c in p.coeffs if c != 0)


def format_ratfun(r: RatFun) -> str:
    """Canonical display; a unit denominator is omitted."""
    num = format_polynomial(r.num)
    if r.den.degree == 0:  # canonical denominators are monic, so this is 1
        return num
    if _poly_term_count(r.num) > 1:
        num = f"({num})"
    den = format_polynomial(r.den)
    if _poly_term_count(r.den) > 1:
        den = f"({den})"
    return f"{num}/{den}"


def format_scalar(value, field: Field) -> str:
    if field is RATIONAL:
        return str(value)
    if field is FLOAT64:
        return f"{value:.17g}"
    if field is RATFUN:
        return format_ratfun(value)
    raise UnsupportedField(f"no textual form for field {field.name}")


# ---------------------------------------------------------------------------
# Expression parser.
# ---------------------------------------------------------------------------

_TOKEN_KINDS = {
    "+": "+", "-": "-", "*": "*", "/": "/", "^": "^", "(": "(", ")": ")",
}


def _tokenize_expr(text: str):
    """Yield (kind, value, 1-based column) tokens; kind 'int', 'x', or an
    operator/paren literal, ending with ('end', None, col)."""
    i = 0
    n = len(text)
    out = []
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(("int", int(text[i:j]), i + 1))
            i = j
        elif ch == "x":
            out.append(("x", None, i + 1))
            i += 1
        elif ch in _TOKEN_KINDS:
            out.append((ch, None, i + 1))
            i += 1
        else:
            raise ParseError(
                f"unexpected character {ch!r}", column=i + 1,
                expected="digit, 'x', operator, or parenthesis",
            )
    out.append(("end", None, n + 1))
    return out


class _ExprParser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected):
        kind, _, col = self.peek()
        what = "end of input" if kind == "end" else f"{kind!r}"
        raise ParseError(f"unexpected {what}", column=col, expected=expected)

    def parse_expr(self) -> RatFun:
        negate = False
        if self.peek()[0] == "-":
            self.take()
            negate = True
        value = self.parse_term()
        if negate:
            value = -value
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.parse_term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def parse_term(self) -> RatFun:
        value = self.parse_factor()
        while self.peek()[0] in ("*", "/"):
            op, _, col = self.take()
            rhs = self.parse_factor()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero:
                    raise DivisionByZero(
                        f"division by zero in expression (column {col})"
                    )
                value = value / rhs
        return value

    def parse_factor(self) -> RatFun:
        value = self.parse_base()
        if self.peek()[0] == "^":
            self.take()
            kind, n, _ = self.peek()
            if kind != "int":
                self.fail("a nonnegative integer exponent")
            self.take()
            value = value ** n
        return value

    def parse_base(self) -> RatFun:
        kind, val, _ = self.peek()
        if kind == "int":
            self.take()
            return RatFun.constant(val)
        if kind == "x":
            self.take()
            return RATFUN.x
        if kind == "(":
            self.take()
            value = self.parse_expr()
            if self.peek()[0] != ")":
                self.fail("')'")
            self.take()
            return value
        self.fail("an integer, 'x', or '('")


def parse_ratfun_expr(text: str) -> RatFun:
    """Parse an expression into a canonical rational function."""
    parser = _ExprParser(_tokenize_expr(text))
    value = parser.parse_expr()
    if parser.peek()[0] != "end":
        parser.fail("an operator or end of input")
    return value


# ---------------------------------------------------------------------------
# Matrix files.
# ---------------------------------------------------------------------------

def _split_with_columns(line: str):
    """Split on whitespace, keeping each token's 1-based start column."""
    out = []
    i = 0
    n = len(line)
    while i < n:
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not line[j].isspace():
            j += 1
        out.append((line[i:j], i + 1))
        i = j
    return out


def _parse_token(tok: str, field: Field, line_no: int, col: int):
    if field is RATIONAL:
        if not _RATIONAL_TOKEN.match(tok):
            raise ParseError(
                f"bad rational token {tok!r}", line=line_no, column=col,
                expected="int or int/uint",
            )
        try:
            return Fraction(tok)
        except ZeroDivisionError:
            raise DivisionByZero(
                f"zero denominator in {tok!r} (line {line_no}, column {col})"
            ) from None
    if field is FLOAT64:
        try:
            return float(tok)
        except ValueError:
            raise ParseError(
                f"bad float token {tok!r}", line=line_no, column=col,
                expected="a decimal or scientific float literal",
            ) from None
    if field is RATFUN:
        try:
            return parse_ratfun_expr(tok)
        except ParseError as e:
            raise ParseError(
                e.args[0], line=line_no, column=col + e.column - 1,
                expected=e.expected,
            ) from None
    raise UnsupportedField(f"cannot parse entries of field {field.name}")


def parse_matrix(text: str) -> Matrix:
    """Parse the matrix file format described in the module docstring."""
    lines = text.splitlines()
    nonblank = [(idx + 1, ln) for idx, ln in enumerate(lines) if ln.strip()]
    if not nonblank:
        raise ParseError("empty input", line=1, column=1, expected="a header line")
    head_no, head = nonblank[0]
    toks = _split_with_columns(head)
    if len(toks) != 4 or toks[0][0] != "matrix":
        raise ParseError(
            "bad header", line=head_no, column=toks[0][1] if toks else 1,
            expected="'matrix <rows> <cols> field=<tag>'",
        )
    try:
        rows = int(toks[1][0])
        cols = int(toks[2][0])
    except ValueError:
        raise ParseError(
            "bad dimensions in header", line=head_no, column=toks[1][1],
            expected="positive integers",
        ) from None
    if rows < 1 or cols < 1:
        raise ParseError(
            "dimensions must be positive", line=head_no, column=toks[1][1],
            expected="positive integers",
        )
    ftok, fcol = toks[3]
    if not ftok.startswith("field="):
        raise ParseError(
            f"bad field tag {ftok!r}", line=head_no, column=fcol,
            expected="field=rational|float|ratfun",
        )
    fname = ftok[len("field="):]
    field = FIELDS_BY_NAME.get(fname)
    if field is None:
        raise ParseError(
            f"unknown field {fname!r}", line=head_no, column=fcol,
            expected="rational, float, or ratfun",
        )
    body = nonblank[1:]
    if len(body) != rows:
        raise DimensionMismatch(
            f"header declares {rows} rows but body has {len(body)} nonblank lines"
        )
    entries = []
    for line_no, line in body:
        toks = _split_with_columns(line)
        if len(toks) != cols:
            raise DimensionMismatch(
                f"line {line_no}: expected {cols} entries, found {len(toks)}"
            )
        for tok, col in toks:
            entries.append(_parse_token(tok, field, line_no, col))
    return Matrix(rows, cols, entries, field)


def serialize_matrix(m: Matrix) -> str:
    """Canonical text for a matrix; parse(serialize(m)) == m entrywise."""
    out = [f"matrix {m.rows} {m.cols} field={m.field.name}"]
    for row in m.to_rows():
        out.append(" ".join(format_scalar(v, m.field) for v in row))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Random generators.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GenSpec:
    """Parameters of the random polynomial/matrix generator."""

    rows: int
    cols: int
    degree: int = 0
    prob1: float = 1.0
    prob2: float = 1.0
    coeff_range: Tuple[int, int] = (-10, 10)
    seed: int = 0

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("rows and cols must be >= 1")
        if self.degree < 0:
            raise ValueError("degree must be >= 0")
        if not (0.0 <= self.prob1 <= 1.0 and 0.0 <= self.prob2 <= 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        lo, hi = self.coeff_range
        if lo > hi:
            raise ValueError("empty coefficient range")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")


def _entry_rng(seed: int, i: int, j: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(i, j))))


def random_poly(spec: GenSpec, rng: np.random.Generator) -> Polynomial:
    """One random polynomial draw; see the module docstring for the recipe.

    The integer coefficient is drawn even when the prob2 coin kills the
    term, which keeps the draw sequence aligned with the classical recipe.
    """
    if rng.random() > spec.prob1:
        return Polynomial()
    lo, hi = spec.coeff_range
    coeffs = []
    for _ in range(spec.degree + 1):
        keep = rng.random() < spec.prob2
        c = int(rng.integers(lo, hi + 1))
        coeffs.append(c if keep else 0)
    p = Polynomial(coeffs)
    if p.is_zero and spec.prob1 >= 1:
        return Polynomial((1,))
    return p


def _embed_poly(p: Polynomial, field: Field):
    if field is RATFUN:
        return RatFun(p)
    const = p.coeffs[0] if p.coeffs else Fraction(0)
    if field is RATIONAL:
        return Fraction(const)
    if field is FLOAT64:
        return float(const)
    raise UnsupportedField(f"cannot generate entries of field {field.name}")


def random_matrix(spec: GenSpec, field: Optional[Field] = None) -> Matrix:
    """Random matrix with independent per-entry streams.

    The default field is ratfun when degree >= 1 and rational otherwise;
    constant fields reject degree >= 1 because the draw could not be
    represented.
    """
    if field is None:
        field = RATFUN if spec.degree > 0 else RATIONAL
    if spec.degree > 0 and field is not RATFUN:
        raise UnsupportedField(
            f"degree {spec.degree} entries need the ratfun field, not {field.name}"
        )
    entries = []
    for i in range(spec.rows):
        for j in range(spec.cols):
            p = random_poly(spec, _entry_rng(spec.seed, i, j))
            entries.append(_embed_poly(p, field))
    return Matrix(spec.rows, spec.cols, entries, field)


def random_spd(n: int, seed: int, field: Field = RATIONAL) -> Matrix:
    """Random symmetric positive definite matrix: B* B + I (exact fields)
    or B* B + n I (float), with B an integer matrix from random_matrix."""
    spec = GenSpec(rows=n, cols=n, degree=0, prob1=1.0, prob2=1.0, seed=seed)
    b = random_matrix(spec, field=field)
    gram = b.conj_transpose() @ b
    shift = 1 if field.exact else n
    eye = Matrix.identity(n, field).scale(field.from_int(shift))
    return gram + eye
