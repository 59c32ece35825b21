"""Characteristic functions of fractional-delay systems.

A characteristic function has the canonical form

    Delta(s) = P0(s) + sum_i Pi(s) * exp(-zeta_i * s**beta_i)

where every P is a finite sum of real terms ``a * s**alpha`` with
``alpha >= 0``. This module holds the immutable value types for that form,
a small text language for writing them, and the normalizer that folds a
parsed expression into canonical form.

Grammar::

    expr     := term (('+' | '-') term)*
    term     := factor (('*' | '/') factor)*
    factor   := number | 'pi' | ident | 's' ('^' exponent)?
              | '(' expr ')' | 'exp' '(' expr ')'
    exponent := number | 'pi' | ident | '(' expr ')'

A unary minus is accepted at the head of an expression. Division is only
allowed by constant factors.
"""

from __future__ import annotations

import math
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateLeading,
    ExprSyntaxError,
    NotRepresentable,
    UnboundParameter,
    UnknownFunction,
)

__all__ = [
    "Term",
    "FracPoly",
    "DelayFactor",
    "Block",
    "CharFn",
    "ParsedExpr",
    "parse",
    "bind_and_normalize",
    "charfn_from_text",
    "format_charfn",
    "format_number",
]

RESERVED = frozenset({"s", "exp", "pi"})


def format_number(x: float) -> str:
    """Shortest round-trip decimal for ``x``, with a trailing ``.0`` dropped."""
    text = repr(float(x))
    if text.endswith(".0"):
        text = text[:-2]
    return text


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class Term:
    coeff: float
    exponent: float


@dataclass(frozen=True)
class FracPoly:
    """Sum of terms ``coeff * s**exponent`` in strictly decreasing exponent order."""

    terms: tuple[Term, ...] = ()

    def __post_init__(self):
        exps = [t.exponent for t in self.terms]
        if any(b >= a for a, b in zip(exps, exps[1:])):
            raise ValueError("FracPoly terms must have strictly decreasing exponents")
        for t in self.terms:
            if t.coeff == 0:
                raise ValueError("FracPoly terms must have non-zero coefficients")
            if not (math.isfinite(t.coeff) and math.isfinite(t.exponent)):
                raise ValueError("FracPoly terms must be finite")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]]) -> FracPoly:
        """Build from ``(coeff, exponent)`` pairs, merging equal exponents."""
        acc: dict[float, float] = {}
        for coeff, exponent in pairs:
            exponent = float(exponent) + 0.0  # folds -0.0 into 0.0
            acc[exponent] = acc.get(exponent, 0.0) + float(coeff)
        terms = [Term(c, e) for e, c in acc.items() if c != 0]
        terms.sort(key=lambda t: -t.exponent)
        return cls(tuple(terms))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> float | None:
        return self.terms[0].exponent if self.terms else None

    def scaled(self, c: float) -> FracPoly:
        return FracPoly.from_pairs((c * t.coeff, t.exponent) for t in self.terms)

    def pairs(self) -> list[tuple[float, float]]:
        return [(t.coeff, t.exponent) for t in self.terms]


@dataclass(frozen=True)
class DelayFactor:
    """The factor ``exp(-zeta * s**beta)``."""

    zeta: float
    beta: float

    def __post_init__(self):
        if not (self.zeta > 0 and self.beta > 0):
            raise ValueError("delay factor needs zeta > 0 and beta > 0")
        if not (math.isfinite(self.zeta) and math.isfinite(self.beta)):
            raise ValueError("delay factor must be finite")


@dataclass(frozen=True)
class Block:
    poly: FracPoly
    delay: DelayFactor | None = None


def _block_key(block: Block):
    d = block.delay
    return (-1.0, -1.0) if d is None else (d.beta, d.zeta)


@dataclass(frozen=True)
class CharFn:
    """A characteristic function in canonical form.

    ``blocks[0]`` is the delay-free part P0; the delayed blocks follow in
    increasing ``(beta, zeta)`` order with no two sharing a delay factor.
    Use :meth:`from_blocks` to build one from arbitrary blocks.
    """

    blocks: tuple[Block, ...]
    alpha_n: float = field(init=False, compare=False)

    def __post_init__(self):
        blocks = self.blocks
        if not blocks or blocks[0].delay is not None:
            raise NotRepresentable("characteristic function has no delay-free part")
        if any(b.delay is None for b in blocks[1:]):
            raise ValueError("only the first block may be delay-free")
        keys = [_block_key(b) for b in blocks]
        if any(k2 <= k1 for k1, k2 in zip(keys, keys[1:])):
            raise ValueError("delayed blocks must be in strictly increasing (beta, zeta) order")
        for b in blocks:
            if b.poly.is_zero:
                raise NotRepresentable("zero polynomial in block")
            if any(t.exponent < 0 for t in b.poly.terms):
                raise NotRepresentable("negative power of s in characteristic function")
        alpha_n = blocks[0].poly.degree
        if alpha_n <= 0:
            raise NotRepresentable(
                "delay-free part must contain a positive power of s (alpha_n > 0)"
            )
        for b in blocks[1:]:
            if b.poly.degree >= alpha_n:
                raise DegenerateLeading(
                    f"delayed block of degree {b.poly.degree!r} is not below "
                    f"alpha_n = {alpha_n!r}"
                )
        object.__setattr__(self, "alpha_n", alpha_n)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Block]) -> CharFn:
        """Merge blocks sharing a delay factor and sort into canonical order."""
        groups: dict[tuple, list[tuple[float, float]]] = {}
        delays: dict[tuple, DelayFactor | None] = {}
        for b in blocks:
            key = _block_key(b)
            groups.setdefault(key, []).extend(b.poly.pairs())
            delays[key] = b.delay
        if (-1.0, -1.0) not in groups:
            raise NotRepresentable("characteristic function has no delay-free part")
        out = []
        for key in sorted(groups):
            poly = FracPoly.from_pairs(groups[key])
            if poly.is_zero:
                if delays[key] is None:
                    raise NotRepresentable("delay-free part P0 is identically zero")
                continue
            out.append(Block(poly, delays[key]))
        return cls(tuple(out))

    @classmethod
    def build(cls, p0, delayed=()) -> CharFn:
        """Convenience constructor.

        ``p0`` is a list of ``(coeff, exponent)`` pairs and ``delayed`` a list
        of ``(pairs, zeta, beta)`` triples.
        """
        blocks = [Block(FracPoly.from_pairs(p0))]
        for pairs, zeta, beta in delayed:
            blocks.append(Block(FracPoly.from_pairs(pairs), DelayFactor(zeta, beta)))
        return cls.from_blocks(blocks)

    @property
    def p0(self) -> FracPoly:
        return self.blocks[0].poly

    @property
    def delayed(self) -> tuple[Block, ...]:
        return self.blocks[1:]

    @property
    def has_delay(self) -> bool:
        return len(self.blocks) > 1

    def value_at_origin(self) -> float:
        """Limit of Delta(s) as s -> 0 (exponent-zero coefficients, exp(0) = 1)."""
        return math.fsum(
            t.coeff for b in self.blocks for t in b.poly.terms if t.exponent == 0
        )

    def scaled(self, c: float) -> CharFn:
        if c == 0:
            raise ValueError("scale factor must be non-zero")
        return CharFn(tuple(Block(b.poly.scaled(c), b.delay) for b in self.blocks))

    def __str__(self):
        return format_charfn(self)


# ---------------------------------------------------------------------------
# lexer / parser

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'number', 'ident', 'op', 'eof'
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("eof", "", n))
    return toks


# AST nodes. Kept deliberately small: everything is a number, a parameter,
# a power of s, a sum, a product, or an exp() call.


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Param:
    name: str
    pos: int


@dataclass(frozen=True)
class SPow:
    exponent: object  # node or None for plain ``s``


@dataclass(frozen=True)
class Sum:
    items: tuple  # (sign, node) pairs, sign in {+1, -1}


@dataclass(frozen=True)
class Prod:
    items: tuple  # (op, node) pairs, op in {'*', '/'}


@dataclass(frozen=True)
class Exp:
    arg: object


def _walk(node):
    yield node
    if isinstance(node, SPow) and node.exponent is not None:
        yield from _walk(node.exponent)
    elif isinstance(node, (Sum, Prod)):
        for _, child in node.items:
            yield from _walk(child)
    elif isinstance(node, Exp):
        yield from _walk(node.arg)


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def advance(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def accept(self, op):
        if self.tok.kind == "op" and self.tok.text == op:
            return self.advance()
        return None

    def expect(self, op):
        if self.accept(op) is None:
            raise ExprSyntaxError(f"expected {op!r}, found {self._describe()}", self.tok.pos)

    def _describe(self):
        return "end of input" if self.tok.kind == "eof" else repr(self.tok.text)

    def parse(self):
        node = self.expr()
        if self.tok.kind != "eof":
            raise ExprSyntaxError(f"unexpected {self._describe()}", self.tok.pos)
        return node

    def expr(self):
        sign = -1 if self.accept("-") else 1
        items = [(sign, self.term())]
        while self.tok.kind == "op" and self.tok.text in "+-":
            sign = 1 if self.advance().text == "+" else -1
            items.append((sign, self.term()))
        if len(items) == 1 and items[0][0] == 1:
            return items[0][1]
        return Sum(tuple(items))

    def term(self):
        items = [("*", self.factor())]
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            items.append((op, self.factor()))
        return items[0][1] if len(items) == 1 else Prod(tuple(items))

    def factor(self):
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "ident":
            self.advance()
            if tok.text == "pi":
                return Num(math.pi)
            if tok.text == "s":
                return SPow(self.exponent() if self.accept("^") else None)
            if tok.text == "exp":
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Exp(arg)
            if self.tok.kind == "op" and self.tok.text == "(":
                raise UnknownFunction(f"unknown function {tok.text!r}; only exp is allowed", tok.pos)
            return Param(tok.text, tok.pos)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(f"expected a factor, found {self._describe()}", tok.pos)

    def exponent(self):
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "ident" and tok.text not in ("s", "exp"):
            self.advance()
            return Num(math.pi) if tok.text == "pi" else Param(tok.text, tok.pos)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(f"expected an exponent, found {self._describe()}", tok.pos)


@dataclass(frozen=True)
class ParsedExpr:
    """Symbolic expression tree with its free parameter names."""

    text: str
    root: object
    free_params: frozenset

    def evaluate(self, s, params: Mapping[str, float] | None = None):
        """Evaluate the tree directly (no normalization) on the principal branch."""
        params = dict(params or {})
        missing = self.free_params - params.keys()
        if missing:
            raise UnboundParameter(missing)
        return _eval_tree(self.root, np.asarray(s, dtype=complex), params)


def _eval_tree(node, s, params):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Param):
        return float(params[node.name])
    if isinstance(node, SPow):
        if node.exponent is None:
            return s
        e = _eval_tree(node.exponent, s, params)
        return np.exp(e * np.log(s))
    if isinstance(node, Sum):
        total = 0
        for sign, child in node.items:
            total = total + sign * _eval_tree(child, s, params)
        return total
    if isinstance(node, Prod):
        total = 1
        for op, child in node.items:
            v = _eval_tree(child, s, params)
            total = total * v if op == "*" else total / v
        return total
    if isinstance(node, Exp):
        return np.exp(_eval_tree(node.arg, s, params))
    raise TypeError(node)


def parse(text: str) -> ParsedExpr:
    """Parse ``text`` into a symbolic tree without evaluating anything numerically."""
    root = _Parser(text).parse()
    free = frozenset(n.name for n in _walk(root) if isinstance(n, Param))
    return ParsedExpr(text, root, free)


# ---------------------------------------------------------------------------
# normalization
#
# A quasi-polynomial is a dict {(alpha, delay): coeff} where delay is None or
# a (zeta, beta) tuple; it stands for sum coeff * s**alpha * exp(-zeta s**beta).

_CONST = (0.0, None)


def _qp_add(a, b, sign=1.0):
    out = dict(a)
    for key, c in b.items():
        out[key] = out.get(key, 0.0) + sign * c
    return {k: v for k, v in out.items() if v != 0}


def _merge_delay(d1, d2):
    if d1 is None:
        return d2
    if d2 is None:
        return d1
    if d1[1] != d2[1]:
        raise NotRepresentable(
            f"product of exp factors with different powers of s ({d1[1]!r} and {d2[1]!r})"
        )
    return (d1[0] + d2[0], d1[1])


def _qp_mul(a, b):
    out = {}
    for (ea, da), ca in a.items():
        for (eb, db), cb in b.items():
            key = (ea + eb + 0.0, _merge_delay(da, db))
            out[key] = out.get(key, 0.0) + ca * cb
    return {k: v for k, v in out.items() if v != 0}


def _qp_constant(qp, what):
    if not qp:
        return 0.0
    if set(qp) != {_CONST}:
        raise NotRepresentable(f"{what} must be a constant")
    return qp[_CONST]


def _normalize(node, params):
    if isinstance(node, Num):
        return {_CONST: node.value} if node.value != 0 else {}
    if isinstance(node, Param):
        v = float(params[node.name])
        return {_CONST: v} if v != 0 else {}
    if isinstance(node, SPow):
        if node.exponent is None:
            return {(1.0, None): 1.0}
        e = _qp_constant(_normalize(node.exponent, params), "exponent of s")
        return {(e + 0.0, None): 1.0}
    if isinstance(node, Sum):
        out = {}
        for sign, child in node.items:
            out = _qp_add(out, _normalize(child, params), float(sign))
        return out
    if isinstance(node, Prod):
        out = {_CONST: 1.0}
        for op, child in node.items:
            q = _normalize(child, params)
            if op == "/":
                c = _qp_constant(q, "divisor")
                if c == 0:
                    raise NotRepresentable("division by zero")
                out = {k: v / c for k, v in out.items()}
                continue
            out = _qp_mul(out, q)
        return out
    if isinstance(node, Exp):
        arg = _normalize(node.arg, params)
        if any(d is not None for _, d in arg):
            raise NotRepresentable("nested exp is not representable")
        const = arg.pop(_CONST, 0.0)
        scale = math.exp(const)
        if not arg:
            return {_CONST: scale}
        if len(arg) > 1:
            raise NotRepresentable("exp of a sum with several powers of s")
        ((beta, _), c), = arg.items()
        if beta <= 0:
            raise NotRepresentable("exp argument must be -zeta*s^beta with beta > 0")
        if c > 0:
            raise NotRepresentable("exp with positive real part (growing factor)")
        return {(0.0, (-c, beta)): scale}
    raise TypeError(node)


def bind_and_normalize(expr: ParsedExpr | str, params: Mapping[str, float] | None = None) -> CharFn:
    """Substitute parameters and fold ``expr`` into a canonical :class:`CharFn`."""
    if isinstance(expr, str):
        expr = parse(expr)
    params = dict(params or {})
    missing = expr.free_params - params.keys()
    if missing:
        raise UnboundParameter(missing)
    qp = _normalize(expr.root, params)
    for (e, d), c in qp.items():
        if not (math.isfinite(c) and math.isfinite(e)):
            raise NotRepresentable("non-finite coefficient or exponent")
    groups: dict = {}
    for (e, d), c in qp.items():
        groups.setdefault(d, []).append((c, e))
    if None not in groups:
        raise NotRepresentable("delay-free part P0 is identically zero")
    blocks = [Block(FracPoly.from_pairs(groups.pop(None)))]
    for (zeta, beta), pairs in groups.items():
        blocks.append(Block(FracPoly.from_pairs(pairs), DelayFactor(zeta, beta)))
    return CharFn.from_blocks(blocks)


def charfn_from_text(text: str, params: Mapping[str, float] | None = None) -> CharFn:
    return bind_and_normalize(parse(text), params)


# ---------------------------------------------------------------------------
# formatting


def _format_monomial(coeff, exponent):
    """Unsigned text for |coeff| * s**exponent."""
    mag = abs(coeff)
    if exponent == 0:
        return format_number(mag)
    power = "s" if exponent == 1 else f"s^{format_number(exponent)}"
    return power if mag == 1 else f"{format_number(mag)}*{power}"


def _format_poly(poly: FracPoly) -> str:
    parts = []
    for k, t in enumerate(poly.terms):
        mono = _format_monomial(t.coeff, t.exponent)
        if k == 0:
            parts.append(("-" if t.coeff < 0 else "") + mono)
        else:
            parts.append(("- " if t.coeff < 0 else "+ ") + mono)
    return " ".join(parts)


def _format_delay(d: DelayFactor) -> str:
    power = "s" if d.beta == 1 else f"s^{format_number(d.beta)}"
    arg = f"-{power}" if d.zeta == 1 else f"-{format_number(d.zeta)}*{power}"
    return f"exp({arg})"


def format_charfn(cf: CharFn) -> str:
    """Canonical text that parses back to an identical :class:`CharFn`."""
    out = _format_poly(cf.p0)
    for b in cf.delayed:
        delay = _format_delay(b.delay)
        if len(b.poly.terms) == 1:
            t = b.poly.terms[0]
            sign = "-" if t.coeff < 0 else "+"
            if t.exponent == 0 and abs(t.coeff) == 1:
                body = delay
            else:
                body = f"{_format_monomial(t.coeff, t.exponent)}*{delay}"
            out += f" {sign} {body}"
        else:
            out += f" + ({_format_poly(b.poly)})*{delay}"
    return out
