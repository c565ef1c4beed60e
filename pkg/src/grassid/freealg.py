"""The free Z2-graded algebra F<Y u Z>: words, commutators, straightening.

Variables are ``y_i`` (degree 0), ``z_i`` (degree 1) and the schematic
``x_i`` which stands for either kind and must be instantiated before it
is evaluated.  The fixed total order puts every y before every z (then x),
each kind ordered by index.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Union

from .field import FieldElement, FieldSpec
from .grassmann import GrassmannElement

_KIND_RANK = {"y": 0, "z": 1, "x": 2}


@dataclass(frozen=True)
class Variable:
    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if self.index < 1:
            raise ValueError("variable index must be positive")

    @property
    def key(self) -> tuple[int, int]:
        return (_KIND_RANK[self.kind], self.index)

    @property
    def degree(self) -> int | None:
        """Z2-degree: 0 for y, 1 for z, None for schematic x."""
        return {"y": 0, "z": 1}.get(self.kind)

    @property
    def is_even(self) -> bool:
        return self.kind == "y"

    @property
    def is_odd(self) -> bool:
        return self.kind == "z"

    def __lt__(self, other: "Variable") -> bool:
        return self.key < other.key

    def __le__(self, other: "Variable") -> bool:
        return self.key <= other.key

    def __gt__(self, other: "Variable") -> bool:
        return self.key > other.key

    def __ge__(self, other: "Variable") -> bool:
        return self.key >= other.key

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"

    __repr__ = __str__


def y(i: int) -> Variable:
    return Variable("y", i)


def z(i: int) -> Variable:
    return Variable("z", i)


def x(i: int) -> Variable:
    return Variable("x", i)


def var_order(a: Variable, b: Variable) -> int:
    """-1, 0 or 1 as a is below, equal to or above b."""
    return (a.key > b.key) - (a.key < b.key)


Word = tuple  # tuple[Variable, ...]


def _fmt_coef(F: FieldSpec, c: int) -> tuple[int, str]:
    """(sign, magnitude text) for printing a nonzero code."""
    if F.n == 1:
        if c > F.p // 2:
            return -1, str(F.p - c)
        return 1, str(c)
    s = F.format(c)
    return 1, f"({s})" if "+" in s else s


def format_word(word: Word) -> str:
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        e = j - i
        parts.append(str(word[i]) if e == 1 else f"{word[i]}^{e}")
        i = j
    return "*".join(parts)


def format_sum(F: FieldSpec, items) -> str:
    """Render [(code, body)] as a signed sum; body '' means constant."""
    out = []
    for c, body in items:
        sign, mag = _fmt_coef(F, c)
        if body == "":
            txt = mag
        elif mag == "1":
            txt = body
        else:
            txt = f"{mag}*{body}"
        if not out:
            out.append(txt if sign > 0 else f"-{txt}")
        else:
            out.append(f"+ {txt}" if sign > 0 else f"- {txt}")
    return " ".join(out) if out else "0"


class FreePolynomial:
    """Finite linear combination of words; zero coefficients never stored."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldSpec, terms: Mapping[Word, int] | None = None):
        self.field = field
        clean = {}
        for w, c in (terms or {}).items():
            c = c.code if isinstance(c, FieldElement) else (c % field.p if field.n == 1 else c)
            if c:
                clean[tuple(w)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, field, terms):
        obj = cls.__new__(cls)
        obj.field, obj.terms = field, terms
        return obj

    @classmethod
    def zero(cls, field: FieldSpec) -> "FreePolynomial":
        return cls._raw(field, {})

    @classmethod
    def constant(cls, field: FieldSpec, value) -> "FreePolynomial":
        code = value.code if isinstance(value, FieldElement) else field.from_int(value)
        return cls._raw(field, {(): code} if code else {})

    @classmethod
    def one(cls, field: FieldSpec) -> "FreePolynomial":
        return cls._raw(field, {(): 1})

    @classmethod
    def variable(cls, field: FieldSpec, v: Variable) -> "FreePolynomial":
        return cls._raw(field, {(v,): 1})

    @classmethod
    def word(cls, field: FieldSpec, vars: Iterable[Variable], coef=1) -> "FreePolynomial":
        return cls(field, {tuple(vars): coef if isinstance(coef, FieldElement) else field.from_int(coef)})

    # -- arithmetic --------------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, FreePolynomial):
            if other.field != self.field:
                raise ValueError("field mismatch")
            return other
        if isinstance(other, (int, FieldElement)):
            return FreePolynomial.constant(self.field, other)
        if isinstance(other, Variable):
            return FreePolynomial.variable(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        F = self.field
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = F.add(out.get(w, 0), c)
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return FreePolynomial._raw(F, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return FreePolynomial._raw(F, {w: F.neg(c) for w, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "FreePolynomial":
        F = self.field
        code = c.code if isinstance(c, FieldElement) else F.from_int(c)
        if not code:
            return FreePolynomial.zero(F)
        return FreePolynomial._raw(F, {w: F.mul(v, code) for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        F = self.field
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                v = F.add(out.get(w, 0), F.mul(c1, c2))
                if v:
                    out[w] = v
                else:
                    out.pop(w, None)
        return FreePolynomial._raw(F, out)

    def __rmul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other * self

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        out = FreePolynomial.one(self.field)
        for _ in range(e):
            out = out * self
        return out

    def commutator(self, other) -> "FreePolynomial":
        other = self._lift(other)
        return self * other - other * self

    def __eq__(self, other):
        if isinstance(other, FreePolynomial):
            return self.field == other.field and self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- structure ----------------------------------------------------------------

    def variables(self) -> list[Variable]:
        vs = {v for w in self.terms for v in w}
        return sorted(vs, key=lambda v: v.key)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def degree_in(self, v: Variable) -> int:
        return max((w.count(v) for w in self.terms), default=0)

    def is_multilinear(self) -> bool:
        """Every word contains every variable of the polynomial exactly once."""
        vs = set(self.variables())
        for w in self.terms:
            if len(w) != len(set(w)) or set(w) != vs:
                return False
        return True

    def coefficient(self, word: Iterable[Variable]) -> FieldElement:
        return FieldElement(self.field, self.terms.get(tuple(word), 0))

    def substitute(self, mapping: Mapping[Variable, "FreePolynomial"]) -> "FreePolynomial":
        """Algebra endomorphism sending each variable to a polynomial."""
        F = self.field
        out = FreePolynomial.zero(F)
        for w, c in self.terms.items():
            term = FreePolynomial._raw(F, {(): c})
            for v in w:
                term = term * (mapping[v] if v in mapping else FreePolynomial.variable(F, v))
            out = out + term
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), [v.key for v in t[0]]))

    def __str__(self):
        return format_sum(self.field, [(c, format_word(w) if w else "") for w, c in self.sorted_terms()])

    def __repr__(self):
        return f"FreePolynomial({self})"


def left_normed(args: Iterable[Union[Variable, FreePolynomial]], field: FieldSpec | None = None) -> FreePolynomial:
    """The left-normed commutator [a1, ..., an] = [[a1, ..., a_{n-1}], an]."""
    args = list(args)
    if len(args) < 2:
        raise ValueError("a commutator needs at least two entries")
    if field is None:
        field = next((a.field for a in args if isinstance(a, FreePolynomial)), None)
        if field is None:
            raise ValueError("field required when all entries are variables")
    polys = [a if isinstance(a, FreePolynomial) else FreePolynomial.variable(field, a) for a in args]
    out = polys[0]
    for a in polys[1:]:
        out = out.commutator(a)
    return out


# -- straightening -------------------------------------------------------------
#
# A letter is a Variable or a tuple of >= 2 Variables standing for the
# left-normed commutator of its entries.  Letters are totally ordered:
# variables first (by var order), then commutators by (length, entries).


def _letter_key(a):
    if isinstance(a, Variable):
        return (0, a.key)
    return (1, len(a), tuple(v.key for v in a))


def _normalize_letter(L: tuple) -> tuple[int, tuple | None]:
    """Sort the first two entries by antisymmetry; (0, None) if they coincide."""
    a, b = L[0], L[1]
    if a == b:
        return 0, None
    if a.key > b.key:
        return -1, (b, a) + L[2:]
    return 1, L


def _lie(A: tuple, B: tuple) -> list[tuple[int, tuple]]:
    """[A, B] for left-normed A (len >= 1) and B (len >= 1) as left-normed letters.

    Uses [A, [B', x]] = [[A, B'], x] - [[A, x], B'].
    """
    if len(B) == 1:
        return [(1, A + B)]
    Bp, xv = B[:-1], B[-1:]
    out = [(c, L + xv) for c, L in _lie(A, Bp)]
    out += [(-c, L) for c, L in _lie(A + xv, Bp)]
    return out


def _bracket(a, b) -> list[tuple[int, tuple]]:
    A = (a,) if isinstance(a, Variable) else a
    B = (b,) if isinstance(b, Variable) else b
    res: dict = {}
    for c, L in _lie(A, B):
        s, L = _normalize_letter(L)
        if s:
            res[L] = res.get(L, 0) + s * c
    return [(c, L) for L, c in res.items() if c]


@dataclass(frozen=True)
class PrTerm:
    """Sorted variable powers followed by sorted powers of left-normed commutators."""

    head: tuple  # ((Variable, exponent), ...)
    tail: tuple  # ((tuple of Variables, exponent), ...)

    def __str__(self):
        parts = [str(v) if e == 1 else f"{v}^{e}" for v, e in self.head]
        for comm, e in self.tail:
            s = "[" + ",".join(map(str, comm)) + "]"
            parts.append(s if e == 1 else f"{s}^{e}")
        return "*".join(parts) if parts else "1"

    def degree(self) -> int:
        return sum(e for _, e in self.head) + sum(len(c) * e for c, e in self.tail)


def _to_prterm(letters: tuple) -> PrTerm:
    head, tail = [], []
    for L in letters:
        bucket = head if isinstance(L, Variable) else tail
        if bucket and bucket[-1][0] == L:
            bucket[-1] = (L, bucket[-1][1] + 1)
        else:
            bucket.append((L, 1))
    return PrTerm(tuple(head), tuple(tail))


@lru_cache(maxsize=200_000)
def _straighten_letters(w: tuple) -> tuple:
    """Integer combination of PrTerms equal to the letter word w in the free algebra."""
    keys = [_letter_key(a) for a in w]
    for i in range(len(w) - 1):
        if keys[i] > keys[i + 1]:
            break
    else:
        return ((_to_prterm(w), 1),)
    acc: dict = {}
    swapped = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
    for t, c in _straighten_letters(swapped):
        acc[t] = acc.get(t, 0) + c
    for c0, L in _bracket(w[i], w[i + 1]):
        for t, c in _straighten_letters(w[:i] + (L,) + w[i + 2:]):
            acc[t] = acc.get(t, 0) + c0 * c
    return tuple((t, c) for t, c in acc.items() if c)


def straighten(f: FreePolynomial) -> dict[PrTerm, FieldElement]:
    """Collect f into the Pr(X) shape: x-powers then commutator powers."""
    F = f.field
    acc: dict = {}
    for w, c in f.terms.items():
        for t, k in _straighten_letters(tuple(w)):
            acc[t] = F.add(acc.get(t, 0), F.mul(c, F.from_int(k)))
    return {t: FieldElement(F, c) for t, c in acc.items() if c}


def expand_prterm(t: PrTerm, field: FieldSpec) -> FreePolynomial:
    out = FreePolynomial.one(field)
    for v, e in t.head:
        out = out * FreePolynomial.word(field, [v] * e)
    for comm, e in t.tail:
        out = out * left_normed(list(comm), field) ** e
    return out


def expand_pr(comb: Mapping[PrTerm, FieldElement], field: FieldSpec) -> FreePolynomial:
    out = FreePolynomial.zero(field)
    for t, c in comb.items():
        out = out + expand_prterm(t, field).scale(c)
    return out


def format_pr(comb: Mapping[PrTerm, FieldElement], field: FieldSpec) -> str:
    items = sorted(comb.items(), key=lambda tc: (tc[0].degree(), str(tc[0])))
    return format_sum(field, [(c.code, "" if str(t) == "1" else str(t)) for t, c in items])


# -- evaluation ----------------------------------------------------------------


class DegreeMismatch(ValueError):
    pass


def gsubstitute(f: FreePolynomial, sigma: Mapping[Variable, GrassmannElement], spec,
                check: bool = True) -> GrassmannElement:
    """Evaluate f at sigma, word by word, sharing common prefixes.

    ``sigma`` must send each y to an even and each z to an odd element of the
    grading ``spec`` (checked unless ``check`` is False).
    """
    vs = f.variables()
    missing = [v for v in vs if v not in sigma]
    if missing:
        raise KeyError(f"no value for {', '.join(map(str, missing))}")
    if not sigma:
        if not f.terms:
            raise ValueError("cannot infer truncation for an empty substitution")
    sample = next(iter(sigma.values()), None)
    F = f.field
    if sample is None:
        raise ValueError("empty substitution")
    N = sample.N
    if check:
        for v in vs:
            g = sigma[v]
            if v.degree is None:
                if not (spec.is_homogeneous(g, 0) or spec.is_homogeneous(g, 1)):
                    raise DegreeMismatch(f"value of {v} is not homogeneous under {spec}")
            elif not spec.is_homogeneous(g, v.degree):
                raise DegreeMismatch(f"value of {v} is not of degree {v.degree} under {spec}")
    one = GrassmannElement.one(F, N)
    memo: dict = {(): one}

    def val(w):
        r = memo.get(w)
        if r is None:
            r = val(w[:-1]) * sigma[w[-1]]
            memo[w] = r
        return r

    out = GrassmannElement.zero(F, N)
    for w, c in sorted(f.terms.items(), key=lambda t: len(t[0])):
        out = out + val(w).scale(FieldElement(F, c))
    return out


def multidegree(word: Word) -> Counter:
    return Counter(word)
