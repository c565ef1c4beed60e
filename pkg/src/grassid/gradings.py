"""The four Z2-gradings of the Grassmann algebra making V homogeneous.

Each grading is induced by an order-two automorphism that negates a set of
generators; a generator's degree is 1 exactly when it is negated, and a
basis monomial's degree is the sum mod 2 of its generators' degrees.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from enum import Enum
from math import comb

from .grassmann import GrassmannElement, indices_of, mask_of, popcount


class Kind(str, Enum):
    CANONICAL = "canonical"
    INFINITY = "infinity"
    KSTAR = "kstar"
    K = "k"


class Unrealizable(ValueError):
    """No basis monomial with the requested parity/weight is available."""


@dataclass(frozen=True)
class GradingSpec:
    kind: Kind
    k: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind in (Kind.KSTAR, Kind.K):
            if self.k < 1:
                raise ValueError(f"grading {self.kind.value} needs k >= 1")
        elif self.k:
            raise ValueError(f"grading {self.kind.value} takes no parameter")

    @classmethod
    def parse(cls, text: str) -> "GradingSpec":
        text = text.strip().lower()
        mt = re.fullmatch(r"(canonical|can|infinity|inf|kstar|k)(?::(\d+))?", text)
        if not mt:
            raise ValueError(f"bad grading {text!r}; expected canonical | infinity | kstar:<k> | k:<k>")
        name, k = mt.group(1), mt.group(2)
        name = {"can": "canonical", "inf": "infinity"}.get(name, name)
        kind = Kind(name)
        if kind in (Kind.KSTAR, Kind.K):
            if k is None:
                raise ValueError(f"grading {name} needs a parameter, e.g. {name}:2")
            return cls(kind, int(k))
        if k is not None:
            raise ValueError(f"grading {name} takes no parameter")
        return cls(kind)

    def __str__(self) -> str:
        if self.kind in (Kind.KSTAR, Kind.K):
            return f"{self.kind.value}:{self.k}"
        return self.kind.value

    @property
    def bound_k(self) -> int:
        """The k term of the truncation bound 2*deg + k + 2 (0 when unparametrised)."""
        return self.k

    def odd_mask(self, N: int) -> int:
        """Mask of the generators of degree 1 among e_1..e_N."""
        full = (1 << N) - 1
        if self.kind is Kind.CANONICAL:
            return full
        if self.kind is Kind.INFINITY:
            # e_1, e_3, ...: bits 0, 2, 4, ...
            return int("01" * ((N + 1) // 2), 2) & full if N else 0
        low = (1 << min(self.k, N)) - 1
        if self.kind is Kind.KSTAR:
            return low
        return full & ~low

    def monomial_degree(self, mask: int, N: int | None = None) -> int:
        if N is None:
            N = max(mask.bit_length(), 1)
        return popcount(mask & self.odd_mask(N)) & 1

    def is_homogeneous(self, g: GrassmannElement, degree: int) -> bool:
        om = self.odd_mask(g.N)
        return all(popcount(m & om) & 1 == degree for m in g.terms)


def generator_degree(spec: GradingSpec, i: int, N: int | None = None) -> int:
    if i < 1 or (N is not None and i > N):
        raise IndexError(f"generator index {i} out of range")
    if spec.kind is Kind.CANONICAL:
        return 1
    if spec.kind is Kind.INFINITY:
        return i % 2
    if spec.kind is Kind.KSTAR:
        return 1 if i <= spec.k else 0
    return 0 if i <= spec.k else 1


def apply_automorphism(spec: GradingSpec, g: GrassmannElement) -> GrassmannElement:
    F = g.field
    om = spec.odd_mask(g.N)
    return GrassmannElement._raw(
        F, g.N, {m: (F.neg(c) if popcount(m & om) & 1 else c) for m, c in g.terms.items()})


def homogeneous_components(spec: GradingSpec, g: GrassmannElement):
    """(even, odd) with g = even + odd; even = (g + phi g)/2, odd = (g - phi g)/2."""
    phi = apply_automorphism(spec, g)
    half = g.field.inv(2)
    return (g + phi).scale(half), (g - phi).scale(half)


def _pools(spec: GradingSpec, N: int, forbidden: int):
    om = spec.odd_mask(N)
    avail = ((1 << N) - 1) & ~forbidden
    return list(indices_of(avail & ~om)), list(indices_of(avail & om))


def sample_homogeneous(spec: GradingSpec, degree: int, weight: int, N: int, field,
                       forbidden: int | set | frozenset = 0,
                       rng: random.Random | None = None) -> GrassmannElement:
    """A single basis monomial of the given degree and weight, avoiding ``forbidden``.

    Uniform over qualifying monomials when ``rng`` is given; with ``rng=None``
    the lexicographically first qualifying monomial is returned.
    """
    mask = sample_monomial_mask(spec, degree, weight, N, forbidden, rng)
    return GrassmannElement(field, N, {mask: 1})


def sample_monomial_mask(spec: GradingSpec, degree: int, weight: int, N: int,
                         forbidden=0, rng: random.Random | None = None) -> int:
    if not isinstance(forbidden, int):
        forbidden = mask_of(sorted(forbidden))
    even, odd = _pools(spec, N, forbidden)
    # j = number of odd generators used; need j = degree mod 2
    choices = [j for j in range(degree & 1, weight + 1, 2)
               if j <= len(odd) and weight - j <= len(even)]
    if not choices:
        raise Unrealizable(
            f"no monomial of weight {weight} and degree {degree} under {spec} in E_{N}")
    if rng is None:
        best = None
        for j in choices:
            idx = sorted(odd[:j] + even[:weight - j])
            if best is None or idx < best:
                best = idx
        return mask_of(best)
    counts = [comb(len(odd), j) * comb(len(even), weight - j) for j in choices]
    j = rng.choices(choices, weights=counts)[0]
    idx = rng.sample(odd, j) + rng.sample(even, weight - j)
    return mask_of(sorted(idx))
