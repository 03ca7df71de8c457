"""Reader and writer for the plain-text system format.

Example::

    # Cauchy-Riemann in two complex variables
    vars 4;
    unknowns 1;
    eq d1 + i*d2;
    eq d3 + i*d4;

Statements end with ``;``.  ``dK`` stands for d/dx_K, i.e. the symbol
variable xi_K.  A row with several unknowns separates its entries with ``,``.
Optional shift vectors: ``shifts sigma = [1,1]; rho = [0];``.  ``#`` starts a
comment running to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .poly import GaussPoly, GaussRational, format_poly

MAX_EXPONENT = 64
MAX_VARS = 32


class ParseError(ValueError):
    """Input text is not a valid system description."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + message)


class ShiftViolation(ParseError):
    """An entry has higher order than the declared shifts allow."""

    def __init__(self, i: int, j: int, degree, bound: int):
        self.entry = (i, j)
        msg = (f"entry ({i + 1}, {j + 1}) has degree {degree} > sigma_{i + 1} - rho_{j + 1} = {bound}")
        super().__init__(msg)


@dataclass(frozen=True)
class SystemSpec:
    nvars: int
    nunknowns: int
    entries: Tuple[Tuple[GaussPoly, ...], ...]
    sigma: Optional[Tuple[int, ...]] = None
    rho: Optional[Tuple[int, ...]] = None
    name: Optional[str] = None

    @property
    def neqs(self) -> int:
        return len(self.entries)

    def __post_init__(self):
        validate(self)


def validate(spec: SystemSpec) -> None:
    n, r = spec.nvars, spec.nunknowns
    if n < 1:
        raise ParseError("vars must be positive")
    if r < 1:
        raise ParseError("unknowns must be positive")
    if not spec.entries:
        raise ParseError("system has no equations")
    if spec.name is not None and ('"' in spec.name or "\n" in spec.name):
        raise ParseError("name may not contain quotes or newlines")
    for i, row in enumerate(spec.entries):
        if len(row) != r:
            raise ParseError(f"equation {i + 1} has {len(row)} entries, expected {r}")
        for p in row:
            if p.nvars != n:
                raise ParseError(f"equation {i + 1} lives in {p.nvars} variables, expected {n}")
    if spec.sigma is not None and len(spec.sigma) != spec.neqs:
        raise ParseError(f"sigma has length {len(spec.sigma)}, expected {spec.neqs}")
    if spec.rho is not None and len(spec.rho) != r:
        raise ParseError(f"rho has length {len(spec.rho)}, expected {r}")
    if spec.sigma is not None and spec.rho is not None:
        for i, row in enumerate(spec.entries):
            for j, p in enumerate(row):
                bound = spec.sigma[i] - spec.rho[j]
                if p.total_degree() > bound:
                    raise ShiftViolation(i, j, p.total_degree(), bound)


# tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<int>[0-9]+)
  | (?P<var>d[0-9]+)
  | (?P<word>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<string>"[^"\n]*")
  | (?P<op>[+\-*/^(),;=\[\]])
    """,
    re.VERBOSE,
)

KEYWORDS = {"vars", "unknowns", "shifts", "eq", "sigma", "rho", "name", "i"}


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    out = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind == "word" and tok not in KEYWORDS:
            raise ParseError(f"unknown word {tok!r}", line, col)
        if kind not in ("ws", "comment"):
            out.append(Token(kind, tok, line, col))
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = pos + tok.rfind("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.k = 0
        self.nvars: Optional[int] = None
        self.nunknowns: Optional[int] = None
        self.rows: List[Tuple[GaussPoly, ...]] = []
        self.sigma = None
        self.rho = None
        self.name = None
        self.in_shifts = False

    @property
    def tok(self) -> Token:
        return self.toks[self.k]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("op", "word"):
            self.k += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.tok
        if not self.accept(text):
            got = tok.text or "end of input"
            raise self.error(f"expected {text!r}, got {got!r}")
        return tok

    def integer(self, signed: bool = False) -> int:
        neg = False
        if signed and self.tok.text == "-":
            self.k += 1
            neg = True
        tok = self.tok
        if tok.kind != "int":
            raise self.error(f"expected an integer, got {tok.text or 'end of input'!r}")
        self.k += 1
        v = int(tok.text)
        return -v if neg else v

    def int_list(self) -> Tuple[int, ...]:
        self.expect("[")
        vals = []
        if not self.accept("]"):
            vals.append(self.integer(signed=True))
            while self.accept(","):
                vals.append(self.integer(signed=True))
            self.expect("]")
        return tuple(vals)

    def parse(self):
        while self.tok.kind != "eof":
            self.statement()
            self.expect(";")
        if self.nvars is None:
            raise ParseError("missing 'vars' statement")
        if self.nunknowns is None:
            raise ParseError("missing 'unknowns' statement")
        return SystemSpec(self.nvars, self.nunknowns, tuple(self.rows),
                          self.sigma, self.rho, self.name)

    def statement(self):
        tok = self.tok
        if self.accept("vars"):
            if self.nvars is not None:
                raise self.error("duplicate 'vars'", tok)
            n = self.integer()
            if not 1 <= n <= MAX_VARS:
                raise self.error(f"vars must be in 1..{MAX_VARS}", tok)
            self.nvars = n
            self.in_shifts = False
        elif self.accept("unknowns"):
            if self.nunknowns is not None:
                raise self.error("duplicate 'unknowns'", tok)
            r = self.integer()
            if r < 1:
                raise self.error("unknowns must be positive", tok)
            self.nunknowns = r
            self.in_shifts = False
        elif self.accept("name"):
            s = self.tok
            if s.kind != "string":
                raise self.error("expected a quoted name")
            self.k += 1
            self.name = s.text[1:-1]
            self.in_shifts = False
        elif self.accept("shifts"):
            self.in_shifts = True
            self.assignment()
        elif tok.text in ("sigma", "rho") and tok.kind == "word":
            if not self.in_shifts:
                raise self.error(f"{tok.text!r} only allowed after 'shifts'")
            self.assignment()
        elif self.accept("eq"):
            self.in_shifts = False
            if self.nvars is None or self.nunknowns is None:
                raise self.error("'vars' and 'unknowns' must precede equations", tok)
            row = [self.expr()]
            while self.accept(","):
                row.append(self.expr())
            if len(row) != self.nunknowns:
                raise self.error(
                    f"equation has {len(row)} entries but unknowns is {self.nunknowns}", tok)
            self.rows.append(tuple(row))
        else:
            raise self.error(f"unexpected {tok.text or 'end of input'!r}")

    def assignment(self):
        tok = self.tok
        if self.accept("sigma"):
            if self.sigma is not None:
                raise self.error("duplicate sigma", tok)
            self.expect("=")
            self.sigma = self.int_list()
        elif self.accept("rho"):
            if self.rho is not None:
                raise self.error("duplicate rho", tok)
            self.expect("=")
            self.rho = self.int_list()
        else:
            raise self.error("expected 'sigma' or 'rho'")

    # expressions

    def expr(self) -> GaussPoly:
        p = self.term()
        while True:
            if self.accept("+"):
                p = p + self.term()
            elif self.accept("-"):
                p = p - self.term()
            else:
                return p

    def term(self) -> GaussPoly:
        p = self.unary()
        while self.accept("*"):
            p = p * self.unary()
        return p

    def unary(self) -> GaussPoly:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> GaussPoly:
        base = self.atom()
        if self.accept("^"):
            tok = self.tok
            e = self.integer()
            if e > MAX_EXPONENT:
                raise self.error(f"exponent larger than {MAX_EXPONENT}", tok)
            return base ** e
        return base

    def atom(self) -> GaussPoly:
        n = self.nvars
        tok = self.tok
        if tok.kind == "int":
            self.k += 1
            num = int(tok.text)
            if self.accept("/"):
                dtok = self.tok
                den = self.integer()
                if den == 0:
                    raise self.error("zero denominator", dtok)
                return GaussPoly.constant(Fraction(num, den), n)
            return GaussPoly.constant(num, n)
        if tok.kind == "var":
            self.k += 1
            idx = int(tok.text[1:])
            if not 1 <= idx <= n:
                raise self.error(f"variable {tok.text} outside d1..d{n}", tok)
            return GaussPoly.var(idx - 1, n)
        if self.accept("i"):
            return GaussPoly.constant(GaussRational(0, 1), n)
        if self.accept("("):
            p = self.expr()
            self.expect(")")
            return p
        raise self.error(f"expected an expression, got {tok.text or 'end of input'!r}")


def parse(text: str) -> SystemSpec:
    """Parse a system description; raises :class:`ParseError` on bad input."""
    if not isinstance(text, str):
        raise TypeError("parse expects str")
    return _Parser(text).parse()


def emit(spec: SystemSpec) -> str:
    """Canonical text for ``spec``; ``parse(emit(spec)) == spec``."""
    lines = []
    if spec.name is not None:
        lines.append(f'name "{spec.name}";')
    lines.append(f"vars {spec.nvars};")
    lines.append(f"unknowns {spec.nunknowns};")
    if spec.sigma is not None or spec.rho is not None:
        parts = []
        if spec.sigma is not None:
            parts.append(f"sigma = [{','.join(map(str, spec.sigma))}];")
        if spec.rho is not None:
            parts.append(f"rho = [{','.join(map(str, spec.rho))}];")
        lines.append("shifts " + " ".join(parts))
    for row in spec.entries:
        lines.append("eq " + ", ".join(format_poly(p) for p in row) + ";")
    return "\n".join(lines) + "\n"
