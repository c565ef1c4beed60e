"""Parser for the polynomial expression language.

Grammar (whitespace ignored)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := power (['*'] power)*          juxtaposition multiplies
    power  := atom ('^' INT)*
    atom   := INT | 't' | VAR | '[' expr (',' expr)+ ']' | '(' expr ')'
    VAR    := ('y'|'z'|'x') INT

``[a,b,c]`` is the left-normed commutator ``[[a,b],c]``.  ``t`` denotes
the generator of GF(p^n) over GF(p) (only meaningful when n > 1).
Integers are reduced mod p.
"""

from __future__ import annotations

import re

from .field import FieldElement, FieldSpec


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([yzx])(\d+)|(t)|(.))")


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        mt = _TOKEN_RE.match(text, pos)
        if mt.end() == pos:  # pragma: no cover
            break
        if mt.group(0).strip() == "":
            pos = mt.end()
            continue
        start = mt.end() - len(mt.group(0).lstrip())
        if mt.group(1) is not None:
            toks.append(("int", int(mt.group(1)), start))
        elif mt.group(2) is not None:
            toks.append(("var", (mt.group(2), int(mt.group(3))), start))
        elif mt.group(4) is not None:
            toks.append(("t", None, start))
        else:
            ch = mt.group(5)
            if ch not in "+-*^[](),":
                raise ParseError(f"unexpected character {ch!r}", start, text)
            toks.append((ch, None, start))
        pos = mt.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    """Recursive-descent parser over an abstract algebra given by callbacks."""

    def __init__(self, text: str, ops):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.ops = ops

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(self.text[tok[2]:tok[2] + 1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2], self.text)
        self.i += 1
        return tok

    def parse(self):
        val = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {self.text[tok[2]:tok[2] + 1]!r}", tok[2], self.text)
        return val

    def expr(self):
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        val = self.term()
        if sign < 0:
            val = self.ops.neg(val)
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            val = self.ops.add(val, rhs) if op == "+" else self.ops.sub(val, rhs)
        return val

    _ATOM_START = ("int", "var", "t", "[", "(")

    def term(self):
        val = self.power()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.take()
                val = self.ops.mul(val, self.power())
            elif kind in self._ATOM_START:
                val = self.ops.mul(val, self.power())
            else:
                return val

    def power(self):
        val = self.atom()
        while self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                raise ParseError("expected integer exponent", tok[2], self.text)
            self.take()
            val = self.ops.pow(val, tok[1])
        return val

    def atom(self):
        tok = self.peek()
        kind = tok[0]
        if kind == "int":
            self.take()
            return self.ops.const(tok[1])
        if kind == "t":
            self.take()
            return self.ops.gen()
        if kind == "var":
            self.take()
            return self.ops.var(*tok[1], pos=tok[2])
        if kind == "(":
            self.take()
            val = self.expr()
            self.take(")")
            return val
        if kind == "[":
            self.take()
            args = [self.expr()]
            while self.peek()[0] == ",":
                self.take()
                args.append(self.expr())
            close = self.take("]")
            if len(args) < 2:
                raise ParseError("commutator needs at least two entries", close[2], self.text)
            val = args[0]
            for a in args[1:]:
                val = self.ops.comm(val, a)
            return val
        what = "end of input" if kind == "end" else repr(self.text[tok[2]:tok[2] + 1])
        raise ParseError(f"unexpected {what}", tok[2], self.text)


class _ScalarOps:
    """Field-literal algebra: no variables allowed."""

    def __init__(self, field: FieldSpec):
        self.F = field

    def const(self, n):
        return self.F.from_int(n)

    def gen(self):
        if self.F.n == 1:
            raise ValueError("'t' used over a prime field")
        return self.F.encode([0, 1])

    def var(self, kind, idx, pos=0):
        raise ParseError("variable in a field literal", pos)

    def add(self, a, b):
        return self.F.add(a, b)

    def sub(self, a, b):
        return self.F.sub(a, b)

    def neg(self, a):
        return self.F.neg(a)

    def mul(self, a, b):
        return self.F.mul(a, b)

    def pow(self, a, e):
        return self.F.pow(a, e)

    def comm(self, a, b):
        return 0


def parse_field_literal(text: str, field: FieldSpec) -> FieldElement:
    """Parse a scalar such as ``2``, ``2*t+1`` or ``(t+1)^2`` into GF(q)."""
    return FieldElement(field, _Parser(text, _ScalarOps(field)).parse())


class _PolyOps:
    def __init__(self, field: FieldSpec):
        from .freealg import FreePolynomial, Variable

        self.F = field
        self.P = FreePolynomial
        self.V = Variable

    def const(self, n):
        return self.P.constant(self.F, n)

    def gen(self):
        if self.F.n == 1:
            raise ValueError("'t' used over a prime field")
        return self.P.constant(self.F, FieldElement(self.F, self.F.encode([0, 1])))

    def var(self, kind, idx, pos=0):
        if idx < 1:
            raise ParseError("variable index must be positive", pos)
        return self.P.variable(self.F, self.V(kind, idx))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def pow(self, a, e):
        return a ** e

    def comm(self, a, b):
        return a.commutator(b)


def parse_polynomial(text: str, field: FieldSpec):
    """Parse an expression into a :class:`~grassid.freealg.FreePolynomial`."""
    if not text.strip():
        raise ParseError("empty expression", 0, text)
    return _Parser(text, _PolyOps(field)).parse()
