"""A small arithmetic-expression language for user-defined metrics.

Grammar (standard precedence, whitespace insignificant):

    sum     := product (("+" | "-") product)*
    product := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" integer)?        # right-assoc, integer exponent only
    atom    := number | name | name "(" sum ")" | "(" sum ")"

Names are the coordinates x0..x3, parameters, or the functions sin, cos,
exp, sqrt, ln. Exponents are restricted to integers so evaluation stays
total on truncated-series inputs; fractional powers are written via
exp/ln.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ExprSyntaxError

FUNCTIONS = ("sin", "cos", "exp", "sqrt", "ln")
VARIABLES = ("x0", "x1", "x2", "x3")


# -- syntax tree ------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Name:
    ident: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: object


# -- tokenizer --------------------------------------------------------------

_PUNCT = "+-*/^()"


def _tokenize(text: str):
    """Yield (kind, value, offset) with kinds num/name/punct."""
    out = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _PUNCT:
            out.append(("punct", c, i))
            i += 1
            continue
        if c.isdigit() or c == ".":
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    while k < n and text[k].isdigit():
                        k += 1
                    j = k
            try:
                val = float(text[i:j])
            except ValueError:
                raise ExprSyntaxError(f"bad number {text[i:j]!r}", offset=i)
            out.append(("num", val, i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(("name", text[i:j], i))
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character {c!r}", offset=i)
    return out


# -- parser -----------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def _peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def _fail(self, msg):
        tok = self._peek()
        off = tok[2] if tok else len(self.text)
        raise ExprSyntaxError(msg, offset=off)

    def _eat_punct(self, ch) -> bool:
        tok = self._peek()
        if tok and tok[0] == "punct" and tok[1] == ch:
            self.pos += 1
            return True
        return False

    def parse(self):
        node = self._sum()
        if self._peek() is not None:
            self._fail("trailing input after expression")
        return node

    def _sum(self):
        node = self._product()
        while True:
            if self._eat_punct("+"):
                node = BinOp("+", node, self._product())
            elif self._eat_punct("-"):
                node = BinOp("-", node, self._product())
            else:
                return node

    def _product(self):
        node = self._unary()
        while True:
            if self._eat_punct("*"):
                node = BinOp("*", node, self._unary())
            elif self._eat_punct("/"):
                node = BinOp("/", node, self._unary())
            else:
                return node

    def _unary(self):
        if self._eat_punct("-"):
            return Neg(self._unary())
        return self._power()

    def _power(self):
        base = self._atom()
        if not self._eat_punct("^"):
            return base
        tok = self._peek()
        neg = self._eat_punct("-")
        tok = self._peek()
        if tok is None or tok[0] != "num":
            self._fail("exponent must be an integer literal")
        if tok[1] != int(tok[1]):
            raise ExprSyntaxError("exponent must be an integer", offset=tok[2])
        self.pos += 1
        exp = int(tok[1])
        return Pow(base, -exp if neg else exp)

    def _atom(self):
        tok = self._peek()
        if tok is None:
            self._fail("unexpected end of expression")
        kind, val, off = tok
        if kind == "num":
            self.pos += 1
            return Num(val)
        if kind == "name":
            self.pos += 1
            if self._eat_punct("("):
                if val not in FUNCTIONS:
                    raise ExprSyntaxError(f"unknown function {val!r}",
                                          offset=off)
                arg = self._sum()
                if not self._eat_punct(")"):
                    self._fail("expected ')'")
                return Call(val, arg)
            return Name(val)
        if kind == "punct" and val == "(":
            self.pos += 1
            node = self._sum()
            if not self._eat_punct(")"):
                self._fail("expected ')'")
            return node
        self._fail(f"unexpected token {val!r}")


def parse_expression(text: str):
    return _Parser(text).parse()


# -- evaluation and printing ------------------------------------------------

def free_names(node) -> set:
    if isinstance(node, Num):
        return set()
    if isinstance(node, Name):
        return {node.ident}
    if isinstance(node, Neg):
        return free_names(node.arg)
    if isinstance(node, BinOp):
        return free_names(node.left) | free_names(node.right)
    if isinstance(node, Pow):
        return free_names(node.base)
    return free_names(node.arg)


def _apply(func, x):
    if isinstance(x, (int, float)):
        return getattr(math, "log" if func == "ln" else func)(x)
    return getattr(x, func)()


def evaluate(node, env: dict):
    """Evaluate over any scalar arithmetic; env maps names to scalars."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Name):
        if node.ident not in env:
            raise ExprSyntaxError(f"unknown identifier {node.ident!r}")
        return env[node.ident]
    if isinstance(node, Neg):
        return -evaluate(node.arg, env)
    if isinstance(node, BinOp):
        lhs = evaluate(node.left, env)
        rhs = evaluate(node.right, env)
        if node.op == "+":
            return lhs + rhs
        if node.op == "-":
            return lhs - rhs
        if node.op == "*":
            return lhs * rhs
        return lhs / rhs
    if isinstance(node, Pow):
        base = evaluate(node.base, env)
        if isinstance(base, (int, float)):
            return float(base) ** node.exponent
        return base.powi(node.exponent)
    return _apply(node.func, evaluate(node.arg, env))


def pretty(node) -> str:
    """Minimal-parenthesis rendering; re-parsing it reproduces the tree."""
    def prec(n):
        if isinstance(n, BinOp):
            return 1 if n.op in "+-" else 2
        if isinstance(n, Neg):
            return 3
        if isinstance(n, Pow):
            return 4
        return 5

    def render(n, ctx):
        if isinstance(n, Num):
            s = repr(n.value)
            return s[:-2] if s.endswith(".0") else s
        if isinstance(n, Name):
            return n.ident
        if isinstance(n, Neg):
            s = "-" + render(n.arg, 3)
            return f"({s})" if ctx > 3 else s
        if isinstance(n, Pow):
            s = f"{render(n.base, 5)}^{n.exponent}"
            return f"({s})" if ctx > 4 else s
        if isinstance(n, Call):
            return f"{n.func}({render(n.arg, 0)})"
        lp, rp = (1, 2) if n.op in "+-" else (2, 3)
        s = f"{render(n.left, lp)} {n.op} {render(n.right, rp)}"
        return f"({s})" if ctx > lp else s

    return render(node, 0)
