"""Normal forms modulo the graded identities of each grading.

Layers, bottom up:

* a central normal form for the quotient by the triple commutator: a sorted
  commutative monomial times an alternating chain of length-2 commutators
  with distinct sorted entries (commutators are central, and the chain
  changes sign under any transposition of its entries);
* SS monomials (capped exponents, multilinear chain), p-polynomials and test
  polynomials, with the SS total order and bad-term detection;
* ``reduce``: straighten, pass to the central form, apply z^p = 0 and
  y^(pq) = y^p, split off p-polynomial coefficients, then run the
  grading-specific rewriting;
* catalogs of the generating identities of each grading.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field as dc_field
from functools import cmp_to_key
from typing import Iterable, Mapping

from .field import FieldElement, FieldSpec
from .freealg import (FreePolynomial, PrTerm, Variable, format_sum, left_normed,
                      straighten)
from .gradings import GradingSpec, Kind

# ---------------------------------------------------------------------------
# chains and commutative monomials


def chain_merge(S: tuple, T: tuple) -> tuple[int, tuple]:
    """Ch(S) * Ch(T) = sign * Ch(sorted(S + T)); sign 0 when S and T meet."""
    if not S:
        return 1, T
    if not T:
        return 1, S
    if set(S) & set(T):
        return 0, ()
    inv = 0
    for s in S:
        for t in T:
            if s.key > t.key:
                inv += 1
    return (-1 if inv & 1 else 1), tuple(sorted(S + T, key=lambda v: v.key))


def chain_sort(seq: Iterable[Variable]) -> tuple[int, tuple]:
    """Sign of the permutation sorting ``seq`` (0 on a repeated entry) and the sorted chain."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, ()
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i].key > seq[j].key)
    return (-1 if inv & 1 else 1), tuple(sorted(seq, key=lambda v: v.key))


def mono_from_counts(counts: Mapping[Variable, int]) -> tuple:
    return tuple(sorted(((v, e) for v, e in counts.items() if e), key=lambda ve: ve[0].key))


def mono_word(mono: tuple) -> tuple:
    return tuple(v for v, e in mono for _ in range(e))


# ---------------------------------------------------------------------------
# central normal form engine


class CentralForm:
    """Arithmetic in the free algebra modulo [x1,x2,x3], z^p and y^(pq) - y^p.

    Elements are dicts ``(mono, chain) -> code``.  ``mono`` is a sorted tuple
    of (variable, exponent); ``chain`` a sorted tuple of distinct variables
    of even length standing for [c1,c2][c3,c4]...
    """

    def __init__(self, field: FieldSpec):
        self.F = field
        self.p = field.p
        self.pq = field.p * field.q
        self._words: dict = {(): {((), ()): 1}}

    # exponent caps valid in every grading
    def _cap(self, v: Variable, e: int) -> int | None:
        if v.kind == "z" and e >= self.p:
            return None
        if v.kind == "y" and e >= self.pq:
            e -= (e - self.p) // (self.pq - self.p) * (self.pq - self.p)
        return e

    def _add(self, acc: dict, key, c: int):
        v = self.F.add(acc.get(key, 0), c)
        if v:
            acc[key] = v
        else:
            acc.pop(key, None)

    def mul_var(self, elem: dict, x: Variable) -> dict:
        """Right multiplication by a variable.

        mono * x = (mono with x inserted) + sum_{v > x} e_v (mono - v) [v, x].
        """
        F = self.F
        out: dict = {}
        for (mono, chain), c in elem.items():
            # insertion
            new = []
            placed = False
            ok = True
            for v, e in mono:
                if not placed and v == x:
                    e2 = self._cap(v, e + 1)
                    if e2 is None:
                        ok = False
                        break
                    new.append((v, e2))
                    placed = True
                elif not placed and v.key > x.key:
                    new.append((x, 1))
                    new.append((v, e))
                    placed = True
                else:
                    new.append((v, e))
            if ok:
                if not placed:
                    new.append((x, 1))
                self._add(out, (tuple(new), chain), c)
            # commutator corrections
            if x in chain:
                continue
            for i, (v, e) in enumerate(mono):
                if v.key <= x.key or v in chain:
                    continue
                rest = mono[:i] + (((v, e - 1),) if e > 1 else ()) + mono[i + 1:]
                s, ch = chain_merge((x, v), chain)
                if not s:
                    continue
                # [v, x] = -[x, v]
                self._add(out, (rest, ch), F.mul(c, F.from_int(-s * e)))
        return out

    def word(self, w: tuple) -> dict:
        r = self._words.get(w)
        if r is None:
            r = self.mul_var(self.word(w[:-1]), w[-1])
            if len(self._words) < 500_000:
                self._words[w] = r
        return r

    def poly(self, f: FreePolynomial) -> dict:
        out: dict = {}
        for w, c in f.terms.items():
            for key, c2 in self.word(w).items():
                self._add(out, key, self.F.mul(c, c2))
        return out

    def prterm(self, t: PrTerm) -> dict:
        """Central form of a straightened term: head powers times commutator letters."""
        head = self.word(tuple(v for v, e in t.head for _ in range(e)))
        sign, chain = 1, ()
        for comm, e in t.tail:
            if len(comm) > 2 or e > 1:
                return {}
            s, chain = chain_merge(chain, comm)
            if not s:
                return {}
            sign *= s
        out: dict = {}
        for (mono, ch), c in head.items():
            s, ch2 = chain_merge(ch, chain)
            if s:
                self._add(out, (mono, ch2), self.F.mul(c, self.F.from_int(s * sign)))
        return out

    def mul(self, A: dict, B: dict) -> dict:
        out: dict = {}
        for (mb, chb), cb in B.items():
            part = A
            for v in mono_word(mb):
                part = self.mul_var(part, v)
            for (ma, cha), ca in part.items():
                s, ch = chain_merge(cha, chb)
                if s:
                    self._add(out, (ma, ch), self.F.mul(ca, self.F.mul(cb, self.F.from_int(s))))
        return out

    def add(self, A: dict, B: dict, scale: int = 1) -> dict:
        out = dict(A)
        for k, c in B.items():
            self._add(out, k, self.F.mul(c, self.F.from_int(scale)) if isinstance(scale, int) else c)
        return out

    def scale(self, A: dict, code: int) -> dict:
        if not code:
            return {}
        return {k: self.F.mul(c, code) for k, c in A.items()}

    def var(self, v: Variable) -> dict:
        return {(((v, 1),), ()): 1}

    def chain(self, S: Iterable[Variable]) -> dict:
        s, ch = chain_sort(S)
        return {((), ch): self.F.from_int(s)} if s else {}

    def commutator(self, A: dict, B: dict) -> dict:
        return self.add(self.mul(A, B), self.mul(B, A), scale=-1)


# ---------------------------------------------------------------------------
# SS monomials


@dataclass(frozen=True)
class SSMonomial:
    """beg(u) * psi(u): capped variable powers times a multilinear sorted chain."""

    beg: tuple = ()   # ((Variable, exponent), ...) sorted by variable
    psi: tuple = ()   # (Variable, ...) sorted, distinct, even length

    def __post_init__(self):
        if len(self.psi) % 2:
            raise ValueError("psi must have even length")
        if len(set(self.psi)) != len(self.psi):
            raise ValueError("psi must be multilinear")
        keys = [v.key for v in self.psi]
        if keys != sorted(keys):
            raise ValueError("psi must be sorted")
        bkeys = [v.key for v, _ in self.beg]
        if bkeys != sorted(set(bkeys)) or any(e < 1 for _, e in self.beg):
            raise ValueError("beg must be sorted with positive exponents")

    @classmethod
    def make(cls, beg: Mapping[Variable, int] | Iterable = (), psi: Iterable[Variable] = ()) -> "SSMonomial":
        if isinstance(beg, Mapping):
            beg = beg.items()
        b = mono_from_counts(dict(beg))
        return cls(b, tuple(sorted(psi, key=lambda v: v.key)))

    # accessors ---------------------------------------------------------------

    def is_one(self) -> bool:
        return not self.beg and not self.psi

    @property
    def PiY(self) -> tuple:
        return tuple((v, e) for v, e in self.beg if v.kind == "y")

    @property
    def PiZ(self) -> tuple:
        return tuple((v, e) for v, e in self.beg if v.kind == "z")

    @property
    def pr_z(self) -> Variable:
        zs = self.PiZ
        if not zs:
            raise ValueError("no z part in beg")
        return zs[0][0]

    @property
    def Pi1Z(self) -> tuple:
        zs = self.PiZ
        if not zs:
            raise ValueError("no z part in beg")
        v, e = zs[0]
        return (((v, e - 1),) if e > 1 else ()) + zs[1:]

    def beg_deg(self, v: Variable) -> int:
        for w, e in self.beg:
            if w == v:
                return e
        return 0

    def psi_deg(self, v: Variable) -> int:
        return 1 if v in self.psi else 0

    def Deg(self, v: Variable) -> int:
        return self.beg_deg(v) + self.psi_deg(v)

    @property
    def deg_Y(self) -> int:
        return sum(e for v, e in self.beg if v.kind == "y") + sum(1 for v in self.psi if v.kind == "y")

    @property
    def deg_Z(self) -> int:
        return sum(e for v, e in self.beg if v.kind == "z") + sum(1 for v in self.psi if v.kind == "z")

    @property
    def deg(self) -> int:
        return sum(e for _, e in self.beg) + len(self.psi)

    @property
    def begZ_deg(self) -> int:
        return sum(e for v, e in self.beg if v.kind == "z")

    @property
    def psiY_deg(self) -> int:
        return sum(1 for v in self.psi if v.kind == "y")

    def multidegree(self) -> Counter:
        c = Counter({v: e for v, e in self.beg})
        for v in self.psi:
            c[v] += 1
        return c

    def variables(self) -> list[Variable]:
        return sorted(self.multidegree(), key=lambda v: v.key)

    def accessors(self) -> dict:
        return ss_accessors(self)

    # text ----------------------------------------------------------------------

    def __str__(self) -> str:
        parts = [str(v) if e == 1 else f"{v}^{e}" for v, e in self.beg]
        parts += [f"[{self.psi[i]},{self.psi[i + 1]}]" for i in range(0, len(self.psi), 2)]
        return "*".join(parts) if parts else "1"

    __repr__ = __str__

    def to_json(self) -> dict:
        return {"beg": {str(v): e for v, e in self.beg}, "psi": [str(v) for v in self.psi]}

    @classmethod
    def from_json(cls, d: Mapping) -> "SSMonomial":
        return cls.make({_parse_var(k): int(e) for k, e in d.get("beg", {}).items()},
                        [_parse_var(s) for s in d.get("psi", [])])

    def to_free(self, field: FieldSpec) -> FreePolynomial:
        out = FreePolynomial.word(field, mono_word(self.beg))
        for i in range(0, len(self.psi), 2):
            out = out * left_normed([self.psi[i], self.psi[i + 1]], field)
        return out

    def is_valid(self, p: int) -> bool:
        return all(1 <= e <= p - 1 for _, e in self.beg)


def _parse_var(s: str) -> Variable:
    return Variable(s[0], int(s[1:]))


ONE = SSMonomial()


def ss_accessors(u: SSMonomial) -> dict:
    out = {
        "beg": u.beg, "psi": u.psi, "PiY": u.PiY, "PiZ": u.PiZ,
        "Deg_x": dict(u.multidegree()), "deg_Y": u.deg_Y, "deg_Z": u.deg_Z, "deg": u.deg,
    }
    if u.PiZ:
        out["pr_z"] = u.pr_z
        out["Pi1Z"] = u.Pi1Z
    return out


def _lexrig(du: Mapping[Variable, int], dv: Mapping[Variable, int]) -> int:
    """Compare degree maps from the largest variable down; first difference decides."""
    vs = sorted(set(du) | set(dv), key=lambda v: v.key, reverse=True)
    for v in vs:
        a, b = du.get(v, 0), dv.get(v, 0)
        if a != b:
            return -1 if a < b else 1
    return 0


def ss_compare(u: SSMonomial, v: SSMonomial) -> int:
    """-1, 0, 1 under the SS total order."""
    if u.deg != v.deg:
        return -1 if u.deg < v.deg else 1
    c = _lexrig(dict(u.beg), dict(v.beg))
    if c:
        return c
    return _lexrig({w: 1 for w in u.psi}, {w: 1 for w in v.psi})


ss_key = cmp_to_key(ss_compare)


# ---------------------------------------------------------------------------
# p-polynomials


def _pmono_mul(a: tuple, b: tuple, p: int, pq: int) -> tuple:
    c = Counter(dict(a))
    for v, e in b:
        c[v] += e
    out = {}
    for v, e in c.items():
        if e >= pq:
            e -= (e - p) // (pq - p) * (pq - p)
        out[v] = e
    return mono_from_counts(out)


class PPolynomial:
    """Commutative polynomial in y-variables with exponents divisible by p, below pq."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldSpec, terms: Mapping[tuple, int] | None = None):
        self.field = field
        self.terms = {}
        for m, c in (terms or {}).items():
            c = c.code if isinstance(c, FieldElement) else c
            if field.n == 1:
                c %= field.p
            if c:
                self.terms[tuple(m)] = c

    @classmethod
    def zero(cls, field):
        return cls(field)

    @classmethod
    def one(cls, field):
        return cls(field, {(): 1})

    @classmethod
    def monomial(cls, field, exps: Mapping[Variable, int], coef=1):
        return cls(field, {mono_from_counts(exps): coef if isinstance(coef, int) and field.n > 1 else
                           (coef.code if isinstance(coef, FieldElement) else field.from_int(coef))})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, PPolynomial):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "PPolynomial"):
        F = self.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = F.add(out.get(m, 0), c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return PPolynomial(F, out)

    def __neg__(self):
        return PPolynomial(self.field, {m: self.field.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "PPolynomial"):
        F = self.field
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _pmono_mul(m1, m2, F.p, F.p * F.q)
                v = F.add(out.get(m, 0), F.mul(c1, c2))
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return PPolynomial(F, out)

    def scale(self, code: int) -> "PPolynomial":
        F = self.field
        return PPolynomial(F, {m: F.mul(c, code) for m, c in self.terms.items()})

    def variables(self) -> list[Variable]:
        return sorted({v for m in self.terms for v, _ in m}, key=lambda v: v.key)

    def is_valid(self) -> bool:
        p, pq = self.field.p, self.field.p * self.field.q
        return all(v.kind == "y" and e % p == 0 and 0 < e < pq for m in self.terms for v, e in m)

    def evaluate(self, values: Mapping[Variable, int]) -> int:
        """Value at scalar codes (missing variables read as 0)."""
        F = self.field
        total = 0
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t = F.mul(t, F.pow(values.get(v, 0), e))
                if not t:
                    break
            total = F.add(total, t)
        return total

    def to_free(self) -> FreePolynomial:
        F = self.field
        out = FreePolynomial.zero(F)
        for m, c in self.terms.items():
            out = out + FreePolynomial(F, {mono_word(m): c})
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (sum(e for _, e in t[0]), [(v.key, e) for v, e in t[0]]))

    def __str__(self):
        def body(m):
            return "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in m)
        return format_sum(self.field, [(c, body(m)) for m, c in self.sorted_terms()])

    __repr__ = __str__

    def to_json(self) -> list:
        return [{"mono": {str(v): e for v, e in m}, "coef": self.field.format(c)} for m, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, field: FieldSpec, data) -> "PPolynomial":
        from .parser import parse_field_literal
        terms = {}
        for t in data:
            m = mono_from_counts({_parse_var(k): int(e) for k, e in t["mono"].items()})
            terms[m] = parse_field_literal(str(t["coef"]), field).code
        return cls(field, terms)


# ---------------------------------------------------------------------------
# test polynomials


@dataclass
class TestPolynomial:
    """f0 + sum f_i u_i with p-polynomial coefficients and distinct SS parts u_i != 1."""

    __test__ = False  # not a pytest class

    field: FieldSpec
    f0: PPolynomial
    terms: dict = dc_field(default_factory=dict)   # SSMonomial -> PPolynomial (nonzero)
    unresolved: frozenset = frozenset()

    def __post_init__(self):
        self.terms = {u: c for u, c in self.terms.items() if c}
        if ONE in self.terms:
            self.f0 = self.f0 + self.terms.pop(ONE)

    @classmethod
    def zero(cls, field):
        return cls(field, PPolynomial.zero(field), {})

    def is_zero(self) -> bool:
        return not self.f0 and not self.terms

    def pairs(self) -> list[tuple[PPolynomial, SSMonomial]]:
        """(f_i, u_i) ordered by the SS order, greatest first."""
        us = sorted(self.terms, key=ss_key, reverse=True)
        return [(self.terms[u], u) for u in us]

    def monomials(self) -> list[SSMonomial]:
        return sorted(self.terms, key=ss_key, reverse=True)

    def to_free(self) -> FreePolynomial:
        out = self.f0.to_free()
        for u, c in self.terms.items():
            out = out + c.to_free() * u.to_free(self.field)
        return out

    def variables(self) -> list[Variable]:
        vs = set(self.f0.variables())
        for u, c in self.terms.items():
            vs |= set(u.variables()) | set(c.variables())
        return sorted(vs, key=lambda v: v.key)

    def __eq__(self, other):
        if not isinstance(other, TestPolynomial):
            return NotImplemented
        return self.f0 == other.f0 and self.terms == other.terms

    def __str__(self):
        parts = []
        if self.f0:
            parts.append(str(self.f0))
        for c, u in self.pairs():
            cs = str(c)
            if cs in ("1", "-1"):
                parts.append(f"{cs[:-1]}{u}")
            elif len(c.terms) > 1:
                parts.append(f"({cs})*{u}")
            else:
                parts.append(f"{cs}*{u}")
        if not parts:
            return "0"
        out = parts[0]
        for t in parts[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def to_json(self) -> dict:
        return {
            "f0": self.f0.to_json(),
            "terms": [{"coef": c.to_json(), "ss": u.to_json()} for c, u in self.pairs()],
            "unresolved": [str(u) for u in sorted(self.unresolved, key=ss_key, reverse=True)],
        }

    @classmethod
    def from_json(cls, field: FieldSpec, d: Mapping) -> "TestPolynomial":
        terms = {}
        for t in d.get("terms", []):
            terms[SSMonomial.from_json(t["ss"])] = PPolynomial.from_json(field, t["coef"])
        return cls(field, PPolynomial.from_json(field, d.get("f0", [])), terms)


def leading_term(f: TestPolynomial) -> SSMonomial:
    if not f.terms:
        raise ValueError("no SS part: f is a pure p-polynomial")
    return max(f.terms, key=ss_key)


def bad_terms(f: TestPolynomial) -> tuple[list[SSMonomial], SSMonomial | None]:
    """Bad terms of f (greatest first) and the leading bad term."""
    if len(f.terms) < 2:
        return [], None
    lt = leading_term(f)
    if lt.begZ_deg == 0:
        return [], None
    z0 = lt.pr_z
    md = lt.multidegree()
    bad = []
    for u in f.terms:
        if u == lt or u.multidegree() != md:
            continue
        ok = True
        for v in set(md) | {w for w, _ in u.beg}:
            if v.kind == "z":
                if v == z0:
                    ok = u.beg_deg(v) + 1 == lt.beg_deg(v)
                else:
                    ok = u.beg_deg(v) == lt.beg_deg(v)
            else:
                ok = lt.beg_deg(v) <= u.beg_deg(v)
            if not ok:
                break
        if ok:
            bad.append(u)
    bad.sort(key=ss_key, reverse=True)
    return bad, (bad[0] if bad else None)


# ---------------------------------------------------------------------------
# catalogs


def _zvars(m: int, args=None) -> list:
    if args is None:
        return [Variable("z", i) for i in range(1, m + 1)]
    if len(args) != m:
        raise ValueError(f"expected {m} arguments")
    return list(args)


def catalog_fT(T: Iterable[int], m: int, field: FieldSpec, args=None) -> FreePolynomial:
    """z_{i1}...z_{il} [z_{j1},z_{j2}]...[z_{j(t-1)},z_{jt}] over the split (complement, T)."""
    T = sorted(T)
    if len(T) % 2 or len(set(T)) != len(T) or any(not 1 <= j <= m for j in T):
        raise ValueError("T must be an even-size subset of 1..m")
    zs = _zvars(m, args)
    rest = [i for i in range(1, m + 1) if i not in T]
    out = FreePolynomial.one(field)
    for i in rest:
        out = out * _as_poly(zs[i - 1], field)
    for a, b in zip(T[0::2], T[1::2]):
        out = out * _as_poly(zs[a - 1], field).commutator(_as_poly(zs[b - 1], field))
    return out


def catalog_rT(T: Iterable[int], m: int, field: FieldSpec, yvar=None, args=None) -> FreePolynomial:
    """z_{i1}...z_{il} [y1, z_{j1}][z_{j2},z_{j3}]... for odd |T|."""
    T = sorted(T)
    if len(T) % 2 == 0 or len(set(T)) != len(T) or any(not 1 <= j <= m for j in T):
        raise ValueError("T must be an odd-size subset of 1..m")
    zs = _zvars(m, args)
    yv = _as_poly(yvar if yvar is not None else Variable("y", 1), field)
    rest = [i for i in range(1, m + 1) if i not in T]
    out = FreePolynomial.one(field)
    for i in rest:
        out = out * _as_poly(zs[i - 1], field)
    out = out * yv.commutator(_as_poly(zs[T[0] - 1], field))
    for a, b in zip(T[1::2], T[2::2]):
        out = out * _as_poly(zs[a - 1], field).commutator(_as_poly(zs[b - 1], field))
    return out


def _as_poly(a, field):
    return a if isinstance(a, FreePolynomial) else FreePolynomial.variable(field, a)


def catalog_gm(m: int, field: FieldSpec, args=None) -> FreePolynomial:
    """g_m = sum over even T of (-2)^(-|T|/2) f_T; g_1(z) = z."""
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return _as_poly(_zvars(1, args)[0], field)
    F = field
    inv = F.inv(F.from_int(-2))
    out = FreePolynomial.zero(F)
    for t in range(0, m + 1, 2):
        coef = F.pow(inv, t // 2)
        for T in itertools.combinations(range(1, m + 1), t):
            out = out + catalog_fT(T, m, F, args).scale(FieldElement(F, coef))
    return out


def _ychain(ys: list, field) -> FreePolynomial:
    out = FreePolynomial.one(field)
    for a, b in zip(ys[0::2], ys[1::2]):
        out = out * left_normed([a, b], field)
    return out


def catalog_h(family: int, k: int, field: FieldSpec, l: int | None = None, x: Variable | None = None) -> FreePolynomial:
    """The G_k identity families.

    1: [y1,y2]...[yk,y(k+1)] (k odd); 2: [y1,y2]...[y(k-1),yk][y(k+1),x] (k even);
    3: g_(k-l+2)(z..) [y1,y2]...[y(l-1),yl] (l even); 4: g_(k-l+2)(z..) [z(k-l+3),y1][y2,y3]...
    (l odd); 5: [g_(k-l+2)(z..), y1][y2,y3]... (l odd).
    """
    Y = [Variable("y", i) for i in range(1, k + 3)]
    if family == 1:
        if k % 2 == 0:
            raise ValueError("family 1 needs odd k")
        return _ychain(Y[:k + 1], field)
    if family == 2:
        if k % 2:
            raise ValueError("family 2 needs even k")
        if x is None:
            x = Variable("x", 1)
        if x in Y[:k + 1]:
            raise ValueError("x must differ from y1..y(k+1)")
        return _ychain(Y[:k], field) * left_normed([Y[k], x], field)
    if l is None or not 0 <= l <= k:
        raise ValueError("l must satisfy 0 <= l <= k")
    m = k - l + 2
    g = catalog_gm(m, field)
    if family == 3:
        if l % 2:
            raise ValueError("family 3 needs even l")
        return g * _ychain(Y[:l], field)
    if l % 2 == 0:
        raise ValueError(f"family {family} needs odd l")
    if family == 4:
        return g * left_normed([Variable("z", m + 1), Y[0]], field) * _ychain(Y[1:l], field)
    if family == 5:
        return g.commutator(FreePolynomial.variable(field, Y[0])) * _ychain(Y[1:l], field)
    raise ValueError("family must be 1..5")


def labelled_basis(spec: GradingSpec, field: FieldSpec) -> list[tuple[str, FreePolynomial]]:
    F = field
    y1, y2, z1, z2 = (Variable("y", 1), Variable("y", 2), Variable("z", 1), Variable("z", 2))
    pq, p = F.p * F.q, F.p
    yfold = FreePolynomial.word(F, [y1] * pq) - FreePolynomial.word(F, [y1] * p)
    zp = FreePolynomial.word(F, [z1] * p)
    triple = left_normed([Variable("x", 1), Variable("x", 2), Variable("x", 3)], F)
    if spec.kind is Kind.CANONICAL:
        return [("[y1,y2]", left_normed([y1, y2], F)),
                ("[y1,z2]", left_normed([y1, z2], F)),
                ("z1z2+z2z1", FreePolynomial.word(F, [z1, z2]) + FreePolynomial.word(F, [z2, z1])),
                ("y1^pq-y1^p", yfold)]
    if spec.kind is Kind.INFINITY:
        return [("[x1,x2,x3]", triple), ("z1^p", zp), ("y1^pq-y1^p", yfold)]
    k = spec.k
    if spec.kind is Kind.KSTAR:
        return [("[x1,x2,x3]", triple),
                (f"z1...z{k + 1}", FreePolynomial.word(F, [Variable("z", i) for i in range(1, k + 2)])),
                ("z1^p", zp), ("y1^pq-y1^p", yfold)]
    out = []
    if k % 2:
        out.append(("(1)", catalog_h(1, k, F)))
    else:
        out.append(("(2) x=y", catalog_h(2, k, F, x=Variable("y", k + 2))))
        out.append(("(2) x=z", catalog_h(2, k, F, x=Variable("z", 1))))
    out.append(("(3)", triple))
    for l in range(0, k + 1, 2):
        out.append((f"(4) l={l}", catalog_h(3, k, F, l=l)))
    for l in range(1, k + 1, 2):
        out.append((f"(5) l={l}", catalog_h(4, k, F, l=l)))
    for l in range(1, k + 1, 2):
        out.append((f"(6) l={l}", catalog_h(5, k, F, l=l)))
    out.append(("(7)", zp))
    out.append(("(8)", yfold))
    return out


def basis_for_grading(spec: GradingSpec, field: FieldSpec) -> list[FreePolynomial]:
    return [f for _, f in labelled_basis(spec, field)]


# ---------------------------------------------------------------------------
# reduction


def split_p_part(mono: tuple, p: int) -> tuple[tuple, tuple]:
    """mono = (p-polynomial monomial) * (beg with y-exponents < p)."""
    pm, beg = [], []
    for v, e in mono:
        if v.kind == "y":
            hi, lo = divmod(e, p)
            if hi:
                pm.append((v, hi * p))
            if lo:
                beg.append((v, lo))
        else:
            beg.append((v, e))
    return tuple(pm), tuple(beg)


class Reducer:
    """Grading-aware reduction to test-polynomial form."""

    def __init__(self, spec: GradingSpec, field: FieldSpec):
        self.spec = spec
        self.F = field
        self.engine = CentralForm(field)
        self._memo: dict = {}
        self._classes: dict = {}
        self.unresolved: set = set()
        self._gm_cache: dict = {}

    # generic --------------------------------------------------------------------

    def central(self, f: FreePolynomial) -> dict:
        out: dict = {}
        for t, c in straighten(f).items():
            for key, c2 in self.engine.prterm(t).items():
                self.engine._add(out, key, self.F.mul(c.code, c2))
        return out

    def split(self, cf: dict) -> dict:
        """Central form -> {(p-monomial, SSMonomial): code}."""
        out: dict = {}
        p = self.F.p
        for (mono, chain), c in cf.items():
            pm, beg = split_p_part(mono, p)
            self.engine._add(out, (pm, SSMonomial(beg, chain)), c)
        return out

    # grading-specific -------------------------------------------------------------

    def reduce_ss(self, u: SSMonomial) -> dict:
        """u modulo the grading's identities: {(p-monomial, SSMonomial): code}."""
        r = self._memo.get(u)
        if r is None:
            kind = self.spec.kind
            if kind is Kind.INFINITY:
                r = {((), u): 1}
            elif kind is Kind.KSTAR:
                r = {} if u.deg_Z > self.spec.k else {((), u): 1}
            elif kind is Kind.CANONICAL:
                r = self._canonical(u)
            else:
                r = self._k_reduce(u)
            self._memo[u] = r
        return r

    def _canonical(self, u: SSMonomial) -> dict:
        F = self.F
        if any(v.kind == "y" for v in u.psi):
            return {}
        zb = [v for v, e in u.beg if v.kind == "z"]
        if any(e > 1 for v, e in u.beg if v.kind == "z"):
            return {}
        if set(zb) & set(u.psi):
            return {}
        # [a,b] = 2ab for anticommuting a, b
        s, T = chain_sort(zb + list(u.psi))
        n = len(T)
        coef = F.mul(F.from_int(s), F.pow(F.from_int(2), len(u.psi) // 2))
        coef = F.mul(coef, F.pow(F.inv(F.from_int(2)), n // 2))
        ybeg = tuple((v, e) for v, e in u.beg if v.kind == "y")
        if n % 2:
            beg = tuple(sorted(ybeg + ((T[0], 1),), key=lambda ve: ve[0].key))
            psi = T[1:]
        else:
            beg, psi = ybeg, T
        return {((), SSMonomial(beg, psi)): coef}

    # G_k --------------------------------------------------------------------------

    def k_status(self, u: SSMonomial) -> str:
        k = self.spec.k
        l = u.psiY_deg
        if l > k:
            return "zero"
        M = u.begZ_deg + l
        if M <= k:
            return "ok"
        if M == k + 1 and u.pr_z not in u.psi:
            return "ok"
        return "open"

    def _k_reduce(self, u: SSMonomial) -> dict:
        st = self.k_status(u)
        if st == "zero":
            return {}
        if st == "ok":
            return {((), u): 1}
        D = frozenset(u.multidegree().items())
        sol = self._classes.get(D)
        if sol is None:
            sol = self._solve_class(Counter(dict(D)))
            self._classes[D] = sol
        if u in sol:
            return sol[u]
        self.unresolved.add(u)
        return {((), u): 1}

    def _class_terms(self, D: Counter) -> list[SSMonomial]:
        vs = sorted(D, key=lambda v: v.key)
        p = self.F.p
        opts = []
        for v in vs:
            c = D[v]
            o = []
            if c <= p - 1:
                o.append((c, 0))
            if 1 <= c <= p:
                o.append((c - 1, 1))
            opts.append(o)
        out = []
        for choice in itertools.product(*opts):
            psi = tuple(v for v, (_, s) in zip(vs, choice) if s)
            if len(psi) % 2:
                continue
            beg = tuple((v, e) for v, (e, _) in zip(vs, choice) if e)
            out.append(SSMonomial(beg, psi))
        return out

    def _gm_central(self, C: tuple) -> dict:
        r = self._gm_cache.get(C)
        if r is None:
            r = self.engine.poly(catalog_gm(len(C), self.F, list(C)))
            self._gm_cache[C] = r
        return r

    def _instances(self, D: Counter):
        """Elements of the G_k identity ideal of multidegree D, in central form."""
        E = self.engine
        k = self.spec.k
        zs = sorted((v for v in D if v.kind == "z"), key=lambda v: v.key)
        seen = set()

        def sub(A: Counter, B: Counter) -> Counter | None:
            out = Counter(A)
            for v, e in B.items():
                out[v] -= e
                if out[v] < 0:
                    return None
                if out[v] == 0:
                    del out[v]
            return out

        def chains_of(rem: Counter):
            vs = sorted(rem, key=lambda v: v.key)
            for r in range(0, len(vs) + 1, 2):
                for R in itertools.combinations(vs, r):
                    yield R

        def multisets(vs, counts, size):
            if size == 0:
                yield ()
                return
            if not vs:
                return
            v, rest = vs[0], vs[1:]
            for t in range(min(counts[v], size), -1, -1):
                for tail in multisets(rest, counts, size - t):
                    yield (v,) * t + tail

        for m in range(2, k + 3):
            l = k + 2 - m
            for C in multisets(zs, D, m):
                rem = sub(D, Counter(C))
                gC = self._gm_central(C)
                # plain: Mono * g * Ch(R), and [Mono' * g * Ch(R'), x]-type commutators
                for R in chains_of(rem):
                    ny = sum(1 for v in R if v.kind == "y")
                    nz = len(R) - ny
                    if ny < l or ny > k or (l % 2 and nz == 0):
                        continue
                    mono = sub(rem, Counter(R))
                    key = ("g", C, R)
                    if key not in seen:
                        seen.add(key)
                        base = E.mul(gC, E.chain(R))
                        yield E.mul(E.word(mono_word(mono_from_counts(mono))), base)
                    for xv in list(mono):
                        m2 = sub(mono, Counter([xv]))
                        key = ("gc", C, R, xv)
                        if key in seen:
                            continue
                        seen.add(key)
                        base = E.commutator(E.mul(gC, E.chain(R)), E.var(xv))
                        yield E.mul(E.word(mono_word(mono_from_counts(m2))), base)
                # [g, y] * Ch(R) for odd l
                if l % 2:
                    for yv in [v for v in rem if v.kind == "y"]:
                        rem2 = sub(rem, Counter([yv]))
                        gy = E.commutator(gC, E.var(yv))
                        for R in chains_of(rem2):
                            ny = sum(1 for v in R if v.kind == "y")
                            if ny < l - 1 or ny + 1 > k:
                                continue
                            mono = sub(rem2, Counter(R))
                            key = ("gy", C, yv, R)
                            if key not in seen:
                                seen.add(key)
                                yield E.mul(E.word(mono_word(mono_from_counts(mono))), E.mul(gy, E.chain(R)))
                            for xv in list(mono):
                                m2 = sub(mono, Counter([xv]))
                                key = ("gyc", C, yv, R, xv)
                                if key in seen:
                                    continue
                                seen.add(key)
                                base = E.commutator(E.mul(gy, E.chain(R)), E.var(xv))
                                yield E.mul(E.word(mono_word(mono_from_counts(m2))), base)

    def _row(self, cf: dict, D: Counter) -> dict:
        """Relation in columns (p-monomial, SS); smaller classes are reduced first."""
        F = self.F
        p, pq = F.p, F.p * F.q
        row: dict = {}
        for (pm, u), c in self.split(cf).items():
            if not pm:
                st = self.k_status(u)
                if st == "zero":
                    continue
                if st == "ok" or u.multidegree() != D:
                    if st == "ok":
                        self.engine._add(row, ((), u), c)
                    else:
                        for key, c2 in self._k_reduce(u).items():
                            self.engine._add(row, key, F.mul(c, c2))
                    continue
                self.engine._add(row, ((), u), c)
            else:
                for (pm2, v), c2 in self._k_reduce(u).items():
                    self.engine._add(row, (_pmono_mul(pm, pm2, p, pq), v), F.mul(c, c2))
        return row

    def _solve_class(self, D: Counter) -> dict:
        F = self.F
        terms = self._class_terms(D)
        unknown = [u for u in terms if self.k_status(u) == "open"]
        unknown.sort(key=ss_key, reverse=True)
        ucols = [((), u) for u in unknown]
        uset = set(ucols)
        order = {c: i for i, c in enumerate(ucols)}
        pivots: dict = {}   # col -> row with coefficient 1 at col
        for cf in self._instances(D):
            row = self._row(cf, D)
            if not any(c in uset for c in row):
                continue
            # eliminate known pivots
            changed = True
            while changed:
                changed = False
                for col in [c for c in row if c in pivots]:
                    a = row.get(col)
                    if a:
                        prow = pivots[col]
                        na = F.neg(a)
                        for key, c in prow.items():
                            self.engine._add(row, key, F.mul(na, c))
                        changed = True
            cand = [c for c in row if c in uset]
            if not cand:
                continue
            col = min(cand, key=order.get)
            inv = F.inv(row[col])
            row = {key: F.mul(c, inv) for key, c in row.items()}
            for pc, prow in pivots.items():
                a = prow.get(col)
                if a:
                    na = F.neg(a)
                    for key, c in row.items():
                        self.engine._add(prow, key, F.mul(na, c))
            pivots[col] = row
            if len(pivots) == len(ucols):
                if all(not any(c in uset and c != pc for c in pr) for pc, pr in pivots.items()):
                    break
        sol = {}
        for col, prow in pivots.items():
            if any(c in uset and c != col for c in prow):
                continue
            sol[col[1]] = {key: F.neg(c) for key, c in prow.items() if key != col}
        return sol

    # driver ------------------------------------------------------------------------

    def reduce(self, f: FreePolynomial) -> TestPolynomial:
        F = self.F
        p, pq = F.p, F.p * F.q
        cf = self.central(f)
        if any(v.kind == "x" for (mono, ch) in cf for v in list(ch) + [w for w, _ in mono]):
            raise ValueError("schematic variable left after reduction; instantiate x as y or z")
        acc: dict = {}
        for (pm, u), c in self.split(cf).items():
            for (pm2, v), c2 in self.reduce_ss(u).items():
                self.engine._add(acc, (_pmono_mul(pm, pm2, p, pq), v), F.mul(c, c2))
        terms: dict = {}
        for (pm, v), c in acc.items():
            terms.setdefault(v, {})[pm] = c
        out = {v: PPolynomial(F, t) for v, t in terms.items()}
        f0 = out.pop(ONE, PPolynomial.zero(F))
        res = TestPolynomial(F, f0, out)
        left = {u for u in res.terms if self.spec.kind is Kind.K and self.k_status(u) == "open"}
        res.unresolved = frozenset(left)
        return res


_REDUCERS: dict = {}


def get_reducer(spec: GradingSpec, field: FieldSpec) -> Reducer:
    key = (spec, field.p, field.n, field.modulus)
    r = _REDUCERS.get(key)
    if r is None:
        r = _REDUCERS[key] = Reducer(spec, field)
    return r


def reduce(f: FreePolynomial, spec: GradingSpec, field: FieldSpec | None = None) -> TestPolynomial:
    """Rewrite f modulo the grading's identities into test-polynomial form."""
    field = field or f.field
    if field != f.field:
        raise ValueError("field mismatch")
    return get_reducer(spec, field).reduce(f)


def is_ss3(u: SSMonomial, k: int) -> bool:
    l = u.psiY_deg
    if l > k:
        return False
    M = u.begZ_deg + l
    return M <= k or (M == k + 1 and u.pr_z not in u.psi)
