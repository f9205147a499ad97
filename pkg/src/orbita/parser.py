"""Reading and writing polynomial maps and points.

Map files look like ``vars x,y; f1 = -y; f2 = x + y``.  The grammar::

    file      := "vars" varlist ";" {component ";"}
    varlist   := ident {"," ident}
    component := "f" INT "=" expr
    expr      := term {("+"|"-") term}
    term      := factor {"*" factor}
    factor    := INT | ident ["^" INT] | "(" expr ")" | "-" factor

The semicolon after the last component may be omitted.  There is no implicit
multiplication, and exponents are nonnegative integer literals.
"""
from __future__ import annotations

import re
from typing import NamedTuple

from .errors import DimensionError, ParseError
from .poly import PolyMap, Polynomial

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^(),;=])"
)
_COMPONENT_RE = re.compile(r"f([1-9][0-9]*)$")


class Token(NamedTuple):
    kind: str  # "int", "ident", "op", "eof"
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            where = (line, pos - line_start + 1)
            if text[pos] in "./":
                raise ParseError("non-integer literal", *where)
            raise ParseError(f"unexpected character {text[pos]!r}", *where)
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            if "\n" in chunk:
                line += chunk.count("\n")
                line_start = pos + chunk.rfind("\n") + 1
        else:
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0
        self.variables: dict[str, int] = {}

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        return ParseError(f"{message}, found {found!r}", tok.line, tok.column)

    def accept(self, text):
        if self.tok.kind in ("op", "ident") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            raise self.error(f"expected {text!r}")

    def expect_kind(self, kind):
        tok = self.tok
        if tok.kind != kind:
            raise self.error(f"expected {'integer' if kind == 'int' else 'identifier'}")
        self.i += 1
        return tok

    def parse_file(self) -> PolyMap:
        self.expect("vars")
        names = [self.expect_kind("ident")]
        while self.accept(","):
            names.append(self.expect_kind("ident"))
        for tok in names:
            if tok.text == "vars":
                raise self.error("'vars' is reserved", tok)
            if tok.text in self.variables:
                raise ParseError(f"variable {tok.text!r} declared twice", tok.line, tok.column)
            self.variables[tok.text] = len(self.variables)
        self.expect(";")
        n = len(names)
        components: dict[int, Polynomial] = {}
        while self.tok.kind != "eof":
            name = self.expect_kind("ident")
            m = _COMPONENT_RE.match(name.text)
            if m is None:
                raise ParseError(f"expected a component name f1..f{n}, found {name.text!r}",
                                 name.line, name.column)
            index = int(m.group(1))
            if index in components:
                raise ParseError(f"component {name.text} defined twice", name.line, name.column)
            self.expect("=")
            components[index] = self.parse_expr()
            if self.tok.kind == "eof":
                break
            self.expect(";")
        if sorted(components) != list(range(1, n + 1)):
            raise DimensionError(
                f"{n} variables declared but components {sorted(components)} given; "
                f"expected f1..f{n}"
            )
        return PolyMap(tuple(components[i] for i in range(1, n + 1)))

    def parse_expr(self) -> Polynomial:
        value = self.parse_term()
        while True:
            if self.accept("+"):
                value = value + self.parse_term()
            elif self.accept("-"):
                value = value - self.parse_term()
            else:
                return value

    def parse_term(self) -> Polynomial:
        value = self.parse_factor()
        while self.accept("*"):
            value = value * self.parse_factor()
        return value

    def parse_factor(self) -> Polynomial:
        n = len(self.variables)
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return Polynomial.constant(n, int(tok.text))
        if tok.kind == "ident":
            if tok.text not in self.variables:
                raise ParseError(f"undeclared variable {tok.text!r}", tok.line, tok.column)
            self.i += 1
            var = Polynomial.variable(n, self.variables[tok.text])
            if self.accept("^"):
                return var ** int(self.expect_kind("int").text)
            return var
        if self.accept("("):
            value = self.parse_expr()
            self.expect(")")
            return value
        if self.accept("-"):
            return -self.parse_factor()
        raise self.error("expected an integer, variable, '(' or '-'")


def parse_map(text: str) -> PolyMap:
    return _Parser(text).parse_file()


_POINT_RE = re.compile(r"\s*\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)\s*$")


def parse_point(text: str, dim: int | None = None) -> tuple:
    m = _POINT_RE.match(text)
    if m is None:
        raise ParseError(f"malformed point {text!r}; expected '(c1, ..., cN)'")
    coords = tuple(int(c) for c in m.group(1).split(","))
    if dim is not None and len(coords) != dim:
        raise DimensionError(f"point has {len(coords)} coordinates, expected {dim}")
    return coords


def default_names(n: int) -> list[str]:
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{i}" for i in range(1, n + 1)]


def print_polynomial(poly: Polynomial, names) -> str:
    if poly.is_zero():
        return "0"
    out = []
    for k, (exps, c) in enumerate(poly.terms):
        factors = []
        for name, e in zip(names, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def print_map(f: PolyMap, names=None) -> str:
    names = names or default_names(f.dim)
    parts = [f"vars {','.join(names)}"]
    for i, comp in enumerate(f.components, start=1):
        parts.append(f"f{i} = {print_polynomial(comp, names)}")
    return "; ".join(parts)


def print_point(P) -> str:
    return "(" + ", ".join(str(a) for a in P) + ")"
