"""Text syntax for elements and matrices, and ring descriptors.

Grammar (standard precedence, ``^`` binds tightest, ``*`` and ``/`` are
left associative, multiplication must be written out)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" ["-" | "+"] INT)?
    atom   := INT | NAME | "(" expr ")"

Matrices are ``[[a, b], [c, d]]`` or ``a, b; c, d``.  ``a / b`` means
``a * b^-1``, which in the Ore field is the right fraction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .crossed import parse_tower
from .errors import DivisionByZero, ExprSyntaxError, InputError, UnknownSymbol
from .linalg import Matrix
from .malcev import DEFAULT_FRONTIER, MNSeries, OrderedGroupZn
from .orefield import OreField
from .ranktheory import FiniteRing, parse_finite_ring
from .scalars import QQ, FunctionField, PrimeField, parse_automorphism
from .skewpoly import SkewLaurentRing

__all__ = [
    "RingSpec",
    "parse_ring",
    "parse_expression",
    "parse_matrix",
    "tokenize",
]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text) and not text[pos:].isspace():
        m = _TOKEN.match(text, pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(Token("int", m.group(1), start))
        elif m.group(2):
            tokens.append(Token("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()[],;":
                raise ExprSyntaxError(f"unexpected character {ch!r}", start)
            tokens.append(Token("op", ch, start))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# --- evaluation contexts ---------------------------------------------------


class OperatorContext:
    """Elements with Python arithmetic operators and a fixed symbol table."""

    def __init__(self, symbols: dict, integer, zero):
        self.symbols = symbols
        self.integer = integer
        self.zero = zero

    def symbol(self, name: str, pos: int):
        if name not in self.symbols:
            raise UnknownSymbol(f"unknown symbol {name!r} at position {pos}")
        return self.symbols[name]

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if not b:
            raise DivisionByZero("division by zero")
        return a / b

    def neg(self, a):
        return -a

    def power(self, a, k: int):
        if k < 0 and not a:
            raise DivisionByZero("negative power of zero")
        return a ** k


class SeriesContext(OperatorContext):
    def __init__(self, symbols, integer, zero, group, base, frontier):
        super().__init__(symbols, integer, zero)
        self.group, self.base, self.frontier = group, base, frontier

    def big_o(self, exps: list, pos: int):
        names = [name for name, _, _ in exps]
        if names != list(self.group.names[: len(names)]):
            raise ExprSyntaxError(f"O() takes {', '.join(self.group.names)} in order", pos)
        return MNSeries.big_o(self.group, tuple(e for _, e, _ in exps), self.base, self.frontier)


class _NeedsOre(Exception):
    pass


class TowerContext(OperatorContext):
    """Group ring elements; dividing by a non-unit signals a retry in the Ore field."""

    def div(self, a, b):
        if not b:
            raise DivisionByZero("division by zero")
        if not b.is_unit():
            raise _NeedsOre
        return a / b

    def power(self, a, k: int):
        if k < 0 and a and not a.is_unit():
            raise _NeedsOre
        return super().power(a, k)


class FiniteContext:
    """Finite rings store elements as ints and use the ring's tables."""

    def __init__(self, ring: FiniteRing):
        self.ring = ring
        self.zero = 0
        self.symbols = {"e": ring.param} if ring.kind == "F_p[e]" else {}

    def integer(self, n: int):
        return self.ring(n)

    def symbol(self, name: str, pos: int):
        if name not in self.symbols:
            raise UnknownSymbol(f"unknown symbol {name!r} at position {pos}")
        return self.symbols[name]

    def add(self, a, b):
        return self.ring.add(a, b)

    def sub(self, a, b):
        return self.ring.add(a, self.ring.neg(b))

    def mul(self, a, b):
        return self.ring.mul(a, b)

    def _inverse(self, b):
        for c in self.ring.elements():
            if self.ring.mul(b, c) == 1 and self.ring.mul(c, b) == 1:
                return c
        raise DivisionByZero(f"{self.ring.format(b)} is not a unit of {self.ring.name}")

    def div(self, a, b):
        return self.ring.mul(a, self._inverse(b))

    def neg(self, a):
        return self.ring.neg(a)

    def power(self, a, k: int):
        if k < 0:
            a, k = self._inverse(a), -k
        result = 1 % self.ring.size if self.ring.size > 1 else 0
        for _ in range(k):
            result = self.ring.mul(result, a)
        return result


# --- parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, ctx):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.ctx = ctx

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            raise ExprSyntaxError(f"expected {text!r}, found {self.tok.text or 'end of input'!r}", self.tok.pos)

    def expr(self):
        value = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            rhs = self.term()
            value = self.ctx.add(value, rhs) if op == "+" else self.ctx.sub(value, rhs)
        return value

    def term(self):
        value = self.unary()
        while True:
            tok = self.tok
            if tok.kind == "op" and tok.text in "*/":
                self.i += 1
                rhs = self.unary()
                value = self.ctx.mul(value, rhs) if tok.text == "*" else self.ctx.div(value, rhs)
            elif tok.kind in ("int", "name") or (tok.kind == "op" and tok.text == "("):
                raise ExprSyntaxError("juxtaposition is not multiplication; write '*'", tok.pos)
            else:
                return value

    def unary(self):
        if self.accept("-"):
            return self.ctx.neg(self.unary())
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            sign = -1 if self.accept("-") else (self.accept("+") and 1) or 1
            tok = self.tok
            if tok.kind != "int":
                raise ExprSyntaxError("exponent must be an integer", tok.pos)
            self.i += 1
            return self.ctx.power(base, sign * int(tok.text))
        return base

    def atom(self):
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return self.ctx.integer(int(tok.text))
        if tok.kind == "name":
            self.i += 1
            if tok.text == "O" and hasattr(self.ctx, "big_o") and self.accept("("):
                return self.big_o(tok.pos)
            return self.ctx.symbol(tok.text, tok.pos)
        if self.accept("("):
            value = self.expr()
            self.expect(")")
            return value
        raise ExprSyntaxError(f"unexpected {tok.text or 'end of input'!r}", tok.pos)

    def big_o(self, pos: int):
        """``O(g1^a*g2^b)``: generators in order, a bare ``g2`` meaning ``g2^1``."""
        exps = []
        while True:
            name = self.tok
            if name.kind != "name":
                raise ExprSyntaxError("expected a generator inside O()", name.pos)
            self.i += 1
            exp = 1
            if self.accept("^"):
                sign = -1 if self.accept("-") else 1
                if self.tok.kind != "int":
                    raise ExprSyntaxError("exponent must be an integer", self.tok.pos)
                exp = sign * int(self.tok.text)
                self.i += 1
            exps.append((name.text, exp, name.pos))
            if not self.accept("*"):
                break
        self.expect(")")
        return self.ctx.big_o(exps, pos)

    def finish(self):
        if self.tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {self.tok.text!r}", self.tok.pos)

    def entry_list(self, closers: str):
        """Entries separated by ',' up to one of ``closers``."""
        row = [self.expr()]
        while self.accept(","):
            row.append(self.expr())
        if not (self.tok.kind in ("op", "end") and (self.tok.text in closers or self.tok.kind == "end")):
            raise ExprSyntaxError(f"unexpected {self.tok.text!r} in matrix", self.tok.pos)
        return row

    def matrix(self):
        rows = []
        if self.accept("["):
            if self.accept("]"):
                return rows
            if self.tok.text != "[":
                # a single bracketed row: [a, b, c]
                rows.append(self.entry_list("]"))
                self.expect("]")
                return rows
            while True:
                self.expect("[")
                rows.append(self.entry_list("]"))
                self.expect("]")
                if not self.accept(","):
                    break
            self.expect("]")
        else:
            while True:
                rows.append(self.entry_list(";"))
                if not self.accept(";"):
                    break
        return rows


# --- ring descriptors ------------------------------------------------------


@dataclass
class RingSpec:
    """A parsed ``--ring`` descriptor.

    ``kind`` is one of ``tower``, ``skew``, ``finite`` or ``series``.
    """

    kind: str
    name: str
    ring: object
    frontier: tuple = DEFAULT_FRONTIER

    def context(self, prefer_ore: bool = False):
        r = self.ring
        if self.kind == "tower":
            if prefer_ore:
                return _ore_context(r.ore, r.function_field)
            return TowerContext({"x": r.x, "t": r.t}, r, r.zero)
        if self.kind == "skew":
            return _ore_context(r, r.ring.field)
        if self.kind == "finite":
            return FiniteContext(r)
        group, base = r
        symbols = {}
        for i, name in enumerate(group.names):
            exps = tuple(1 if j == i else 0 for j in range(group.n))
            symbols[name] = MNSeries.monomial(group, exps, 1, base, self.frontier)
        zero = MNSeries.from_terms(group, {}, base, self.frontier)
        return SeriesContext(symbols, lambda n: MNSeries.scalar(group, n, base, self.frontier), zero, group, base, self.frontier)

    @property
    def matrix_ring(self):
        """Ring object to attach to parsed matrices."""
        if self.kind == "series":
            return _SeriesRing(*self.ring, self.frontier)
        return self.ring

    def format(self, value) -> str:
        if self.kind == "finite":
            return self.ring.format(value)
        return str(value)


class _SeriesRing:
    def __init__(self, group, base, frontier):
        self.group, self.base, self.frontier = group, base, frontier
        self.zero = MNSeries.from_terms(group, {}, base, frontier)
        self.one = MNSeries.scalar(group, 1, base, frontier)


def _ore_context(ore: OreField, field: FunctionField) -> OperatorContext:
    ring = ore.ring
    x = ore(ring.scalar(field.gen))
    return OperatorContext({"x": x, "t": ore.gen}, lambda n: ore(ring.scalar(field(n))), ore.zero)


def _base_field(name: str):
    if name == "Q":
        return QQ
    if re.fullmatch(r"F\d+", name):
        return PrimeField(int(name[1:]))
    raise InputError(f"unknown base field {name!r}")


def parse_ring(text: str, frontier: tuple = DEFAULT_FRONTIER) -> RingSpec:
    """Read a ring descriptor.

    Towers: ``z2``, ``klein``, ``base=Q;tau=inv``.  Skew Laurent rings over
    k(x): ``Qx;tau=shift``, ``F5x;tau=mobius(1,2,0,1)``.  Finite rings:
    ``z4``, ``gf3``, ``dual2``.  Series: ``mn2`` or ``mn2;base=F5``.
    """
    s = text.strip()
    m = re.fullmatch(r"mn([1-4])?(?:;base=(\w+))?", s)
    if m:
        group = OrderedGroupZn(int(m.group(1) or 2))
        return RingSpec("series", s, (group, _base_field(m.group(2) or "Q")), tuple(frontier))
    m = re.fullmatch(r"(Q|F\d+)x(?:;tau=(.+))?", s)
    if m:
        field = FunctionField(_base_field(m.group(1)))
        tau = parse_automorphism(m.group(2) or "id", field)
        return RingSpec("skew", s, OreField(SkewLaurentRing(field, tau)))
    if s in ("z2", "klein") or s.startswith("base="):
        return RingSpec("tower", s, parse_tower(s))
    try:
        return RingSpec("finite", s, parse_finite_ring(s))
    except InputError:
        raise InputError(f"unknown ring descriptor {text!r}") from None


# --- entry points ----------------------------------------------------------


def _run(text: str, spec: RingSpec, fn):
    if spec.kind == "tower":
        try:
            return fn(_Parser(text, spec.context()))
        except _NeedsOre:
            return fn(_Parser(text, spec.context(prefer_ore=True)))
    return fn(_Parser(text, spec.context()))


def parse_expression(text: str, spec: RingSpec | str):
    """Evaluate ``text`` in the ring described by ``spec``.

    In a tower, division by a non-unit moves the result into the Ore field.
    """
    if isinstance(spec, str):
        spec = parse_ring(spec)

    def go(p: _Parser):
        value = p.expr()
        p.finish()
        return value

    return _run(text, spec, go)


def parse_matrix(text: str, spec: RingSpec | str) -> Matrix:
    if isinstance(spec, str):
        spec = parse_ring(spec)

    def go(p: _Parser):
        rows = p.matrix()
        p.finish()
        return rows, p.ctx

    rows, ctx = _run(text, spec, go)
    if not rows:
        raise InputError("empty matrix")
    if spec.kind == "tower" and not isinstance(ctx, TowerContext):
        return Matrix(spec.ring.ore, rows)
    return Matrix(spec.matrix_ring, rows)


def format_matrix(A: Matrix, spec: RingSpec) -> list[list[str]]:
    return [[spec.format(e) for e in row] for row in A.rows]
