"""Exact arithmetic in GF(p^n), p an odd prime.

Elements are encoded as integers ``c0 + c1*p + ... + c_{n-1}*p^{n-1}``
where ``(c0, ..., c_{n-1})`` are the coordinates in the polynomial basis
``1, t, ..., t^{n-1}``.  The hot paths elsewhere in the package work on
these integer codes through :class:`FieldSpec`; :class:`FieldElement` is
the public value type.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache


class FieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a mod m over GF(p); coefficient lists, lowest degree first; m monic."""
    a = [c % p for c in a]
    dm = len(m) - 1
    while len(a) - 1 >= dm and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < dm:
            break
        c = a[-1]
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _has_root_free_factor(m: list[int], p: int) -> bool:
    """True if the monic polynomial m is divisible by some monic poly of degree 1..deg/2."""
    n = len(m) - 1
    for d in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            if not _poly_mod(m, list(tail) + [1], p):
                return True
    return False


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree n over GF(p).

    Lexicographic on the coefficient tuple ``(c0, ..., c_{n-1})`` read from
    the constant term; found by trial division.
    """
    if n == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=n):
        cand = list(tail) + [1]
        if cand[0] == 0:
            continue
        if not _has_root_free_factor(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {n} over GF({p})")


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(p^n) with a fixed monic irreducible modulus."""

    p: int
    n: int = 1
    modulus: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not _is_prime(self.p) or self.p == 2:
            raise FieldError(f"characteristic must be an odd prime, got {self.p}")
        if self.n < 1:
            raise FieldError(f"extension degree must be positive, got {self.n}")
        if not self.modulus:
            object.__setattr__(self, "modulus", smallest_irreducible(self.p, self.n))
        else:
            m = tuple(c % self.p for c in self.modulus)
            if len(m) != self.n + 1 or m[-1] != 1:
                raise FieldError("modulus must be monic of degree n")
            if self.n > 1 and (m[0] == 0 or _has_root_free_factor(list(m), self.p)):
                raise FieldError(f"modulus {m} is not irreducible over GF({self.p})")
            object.__setattr__(self, "modulus", m)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``"p^n"`` or ``"p"``."""
        mt = re.fullmatch(r"\s*(\d+)\s*(?:\^\s*(\d+))?\s*", text)
        if not mt:
            raise FieldError(f"bad field spec {text!r}; expected p^n")
        return cls(int(mt.group(1)), int(mt.group(2) or 1))

    def __str__(self) -> str:
        return str(self.p) if self.n == 1 else f"{self.p}^{self.n}"

    @property
    def q(self) -> int:
        return self.p ** self.n

    # -- integer-code arithmetic -------------------------------------------

    def coords(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    def encode(self, coords) -> int:
        reduced = _poly_mod(list(coords), list(self.modulus), self.p) if len(coords) > self.n else [
            c % self.p for c in coords]
        code = 0
        for c in reversed(reduced):
            code = code * self.p + c
        return code

    @cached_property
    def _tables(self):
        q, p = self.q, self.p
        add = [[0] * q for _ in range(q)]
        mul = [[0] * q for _ in range(q)]
        cs = [self.coords(a) for a in range(q)]
        for a in range(q):
            for b in range(q):
                add[a][b] = self.encode([(x + y) % p for x, y in zip(cs[a], cs[b])])
                prod = [0] * (2 * self.n - 1)
                for i, x in enumerate(cs[a]):
                    if x:
                        for j, y in enumerate(cs[b]):
                            prod[i + j] += x * y
                mul[a][b] = self.encode(prod)
        neg = [add[a].index(0) for a in range(q)]
        inv = [0] + [mul[a].index(1) for a in range(1, q)]
        return add, mul, neg, inv

    def add(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        return self._tables[0][a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.n == 1:
            return a * b % self.p
        return self._tables[1][a][b]

    def neg(self, a: int) -> int:
        if self.n == 1:
            return -a % self.p
        return self._tables[2][a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("division by zero in GF(%d^%d)" % (self.p, self.n))
        if self.n == 1:
            return pow(a, self.p - 2, self.p)
        return self._tables[3][a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def from_int(self, value: int) -> int:
        return value % self.p

    def format(self, code: int) -> str:
        if self.n == 1:
            return str(code)
        parts = []
        for i, c in enumerate(self.coords(code)):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mono = "t" if i == 1 else f"t^{i}"
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(parts) if parts else "0"

    # -- public element API --------------------------------------------------

    def __call__(self, value) -> "FieldElement":
        return ff_make(self, value)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self) -> list["FieldElement"]:
        return ff_enumerate(self)


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.coords(self.code)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldError("elements belong to different fields")
            return other.code
        if isinstance(other, int):
            return self.spec.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        return FieldElement(self.spec, self.spec.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return FieldElement(self.spec, self.spec.sub(self.code, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return FieldElement(self.spec, self.spec.sub(b, self.code))

    def __mul__(self, other):
        b = self._coerce(other)
        return FieldElement(self.spec, self.spec.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        return FieldElement(self.spec, self.spec.mul(self.code, self.spec.inv(b)))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        return FieldElement(self.spec, self.spec.mul(b, self.spec.inv(self.code)))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.code))

    def __pow__(self, e: int):
        return ff_pow(self, e)

    def __bool__(self) -> bool:
        return self.code != 0

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv(self.code))

    def __str__(self) -> str:
        return self.spec.format(self.code)

    def __repr__(self) -> str:
        return f"FieldElement({self.spec}, {self.spec.format(self.code)})"


def ff_make(spec: FieldSpec, value) -> FieldElement:
    """Canonical element from an integer or a coordinate sequence."""
    if isinstance(value, FieldElement):
        return value if value.spec == spec else ff_make(spec, value.coeffs)
    if isinstance(value, int):
        return FieldElement(spec, value % spec.p)
    return FieldElement(spec, spec.encode(list(value)))


def ff_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown field operation {op!r}")


def ff_pow(a: FieldElement, e: int) -> FieldElement:
    if e < 0:
        raise ValueError("exponent must be non-negative")
    return FieldElement(a.spec, a.spec.pow(a.code, e))


def ff_enumerate(spec: FieldSpec) -> list[FieldElement]:
    return [FieldElement(spec, c) for c in range(spec.q)]
