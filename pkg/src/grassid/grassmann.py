"""The truncated unitary Grassmann algebra E_N over GF(q).

Basis monomials ``e_{i1}...e_{ir}`` (i1 < ... < ir) are stored as bit
masks, bit ``i-1`` standing for ``e_i``.  Python integers are unbounded,
so the same representation serves every N.

Soundness direction of truncation: a nonzero value in E_N is a nonzero
value in the infinite algebra G (E_N is a subalgebra), so it certifies a
non-identity; vanishing in E_N is only evidence of an identity.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

from .field import FieldElement, FieldSpec


class TruncationError(ValueError):
    pass


def popcount(x: int) -> int:
    return bin(x).count("1")


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        if i < 1:
            raise ValueError(f"generator index must be >= 1, got {i}")
        bit = 1 << (i - 1)
        if m & bit:
            raise ValueError(f"repeated generator e{i}")
        m |= bit
    return m


def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def wedge_sign(a: int, b: int) -> int:
    """Sign of e_a * e_b relative to the sorted merge; 0 if supports meet.

    The sign is (-1)^(number of pairs i in a, j in b with i > j).
    """
    if a & b:
        return 0
    inversions = 0
    while b:
        low = b & -b
        # generators of a strictly above this generator of b
        inversions += popcount(a & ~((low << 1) - 1))
        b ^= low
    return -1 if inversions & 1 else 1


def wedge(a: int, b: int) -> tuple[int, int]:
    """Product of two basis monomials: (sign, mask), sign 0 meaning zero."""
    s = wedge_sign(a, b)
    return (s, a | b) if s else (0, 0)


def format_monomial(mask: int) -> str:
    if mask == 0:
        return "1"
    return "".join(f"e{i}" for i in indices_of(mask))


_MONO_RE = re.compile(r"(?:e(\d+))+")


def parse_monomial(text: str) -> int:
    text = text.strip()
    if text == "1":
        return 0
    if not _MONO_RE.fullmatch(text):
        raise ValueError(f"bad basis monomial {text!r}")
    idx = [int(i) for i in re.findall(r"e(\d+)", text)]
    if idx != sorted(set(idx)):
        raise ValueError(f"basis monomial {text!r} must have strictly increasing indices")
    return mask_of(idx)


class GrassmannElement:
    """Finite linear combination of basis monomials of E_N.

    ``terms`` maps masks to nonzero integer field codes; zero coefficients
    are never stored, so equality is structural.
    """

    __slots__ = ("field", "N", "terms")

    def __init__(self, field: FieldSpec, N: int, terms: Mapping[int, int] | None = None):
        self.field = field
        self.N = N
        clean = {}
        if terms:
            limit = 1 << N
            for m, c in terms.items():
                if field.n == 1:
                    c %= field.p
                if c:
                    if m >= limit:
                        raise TruncationError(f"monomial {format_monomial(m)} outside E_{N}")
                    clean[m] = c
        self.terms = clean

    # -- constructors ----------------------------------------------------------

    @classmethod
    def _raw(cls, field: FieldSpec, N: int, terms: dict) -> "GrassmannElement":
        obj = cls.__new__(cls)
        obj.field, obj.N, obj.terms = field, N, terms
        return obj

    @classmethod
    def zero(cls, field: FieldSpec, N: int) -> "GrassmannElement":
        return cls._raw(field, N, {})

    @classmethod
    def scalar(cls, field: FieldSpec, N: int, value) -> "GrassmannElement":
        code = value.code if isinstance(value, FieldElement) else field.from_int(value)
        return cls._raw(field, N, {0: code} if code else {})

    @classmethod
    def one(cls, field: FieldSpec, N: int) -> "GrassmannElement":
        return cls._raw(field, N, {0: 1})

    @classmethod
    def generator(cls, field: FieldSpec, N: int, i: int) -> "GrassmannElement":
        if not 1 <= i <= N:
            raise TruncationError(f"e{i} outside E_{N}")
        return cls._raw(field, N, {1 << (i - 1): 1})

    @classmethod
    def monomial(cls, field: FieldSpec, N: int, indices: Iterable[int], coef=1) -> "GrassmannElement":
        return cls(field, N, {mask_of(sorted(indices)): _code(field, coef)})

    # -- arithmetic ------------------------------------------------------------

    def _check(self, other: "GrassmannElement"):
        if self.N != other.N:
            raise TruncationError(f"truncation mismatch: E_{self.N} vs E_{other.N}")
        if self.field != other.field:
            raise ValueError("field mismatch")

    def __add__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = GrassmannElement.scalar(self.field, self.N, other)
        self._check(other)
        F = self.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = F.add(out.get(m, 0), c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return GrassmannElement._raw(F, self.N, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return GrassmannElement._raw(F, self.N, {m: F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = GrassmannElement.scalar(self.field, self.N, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "GrassmannElement":
        F = self.field
        code = _code(F, c)
        if not code:
            return GrassmannElement.zero(F, self.N)
        return GrassmannElement._raw(F, self.N, {m: F.mul(v, code) for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        return g_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = GrassmannElement.one(self.field, self.N)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, GrassmannElement):
            return self.N == other.N and self.field == other.field and self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.N, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, mask: int) -> FieldElement:
        return FieldElement(self.field, self.terms.get(mask, 0))

    def scalar_part(self) -> FieldElement:
        return self.coefficient(0)

    def __repr__(self):
        return f"GrassmannElement(E_{self.N}, {self})"

    def __str__(self):
        return format_element(self)

    # -- analysis ---------------------------------------------------------------

    def support(self) -> frozenset[int]:
        m = 0
        for k in self.terms:
            m |= k
        return frozenset(indices_of(m))

    def support_mask(self) -> int:
        m = 0
        for k in self.terms:
            m |= k
        return m

    def weight(self) -> int:
        return max((popcount(m) for m in self.terms), default=0)

    def dominant(self) -> "GrassmannElement":
        w = self.weight()
        return GrassmannElement._raw(
            self.field, self.N, {m: c for m, c in self.terms.items() if popcount(m) == w})


def _code(F: FieldSpec, c) -> int:
    if isinstance(c, FieldElement):
        return c.code
    return F.from_int(c)


def g_mul(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    a._check(b)
    F = a.field
    out: dict[int, int] = {}
    prime = F.n == 1
    p = F.p
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            if ma & mb:
                continue
            s = wedge_sign(ma, mb)
            m = ma | mb
            if prime:
                v = (out.get(m, 0) + s * ca * cb) % p
            else:
                c = F.mul(ca, cb)
                v = F.add(out.get(m, 0), c if s > 0 else F.neg(c))
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return GrassmannElement._raw(F, a.N, out)


def g_commutator(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    return g_mul(a, b) - g_mul(b, a)


def supp_wt_dom(g: GrassmannElement) -> tuple[frozenset[int], int, GrassmannElement]:
    return g.support(), g.weight(), g.dominant()


def format_element(g: GrassmannElement) -> str:
    if not g.terms:
        return "0"
    F = g.field
    parts = []
    for m in sorted(g.terms, key=lambda m: (popcount(m), indices_of(m))):
        c = g.terms[m]
        cs = F.format(c)
        if F.n > 1 and "+" in cs:
            cs = f"({cs})"
        if m == 0:
            parts.append(cs)
        elif c == 1:
            parts.append(format_monomial(m))
        else:
            parts.append(f"{cs}*{format_monomial(m)}")
    return " + ".join(parts)


def parse_element(text: str, field: FieldSpec, N: int) -> GrassmannElement:
    """Inverse of :func:`format_element`; also accepts '-' between terms."""
    from .parser import parse_field_literal

    text = text.strip()
    if text in ("", "0"):
        return GrassmannElement.zero(field, N)
    out = GrassmannElement.zero(field, N)
    # split on top-level + / - signs
    pieces, depth, cur, sign = [], 0, "", 1
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip():
            pieces.append((sign, cur))
            cur, sign = "", (1 if ch == "+" else -1)
            continue
        if depth == 0 and ch == "-" and not cur.strip():
            sign = -sign
            continue
        cur += ch
    pieces.append((sign, cur))
    for sign, piece in pieces:
        piece = piece.strip()
        if "*" in piece and piece.rsplit("*", 1)[1].strip().startswith("e"):
            coef_txt, mono_txt = piece.rsplit("*", 1)
            coef = parse_field_literal(coef_txt.strip(), field)
            mask = parse_monomial(mono_txt)
        elif piece.startswith("e"):
            coef, mask = 1, parse_monomial(piece)
        else:
            coef, mask = parse_field_literal(piece, field), 0
        term = GrassmannElement(field, N, {mask: _code(field, coef)})
        out = out + (term if sign > 0 else -term)
    return out
