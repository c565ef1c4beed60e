"""Identity checking over E_N and the structured witness sequences.

A non-identity is certified by a substitution with a nonzero value; the
value is computed in E_N, which embeds in G, so the certificate is sound
at any truncation.  Vanishing is only checked at a bound.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field as dc_field
from typing import Mapping

from .field import FieldElement, FieldSpec
from .freealg import FreePolynomial, Variable, gsubstitute
from .gradings import GradingSpec, Kind, Unrealizable, sample_monomial_mask
from .grassmann import GrassmannElement, format_element, g_commutator, mask_of, parse_element, popcount
from .ssform import PPolynomial, SSMonomial, TestPolynomial, bad_terms, leading_term, reduce

IDENTITY = "identity_verified_at_bound"
BELOW_BOUND = "identity_below_bound"
NON_IDENTITY = "non_identity"


def truncation_bound(f: FreePolynomial, spec: GradingSpec) -> int:
    return 2 * f.degree() + spec.bound_k + 2


# ---------------------------------------------------------------------------
# substitutions


@dataclass
class Substitution:
    """Variable -> homogeneous element of E_N."""

    mapping: dict
    spec: GradingSpec
    N: int

    def __post_init__(self):
        for v, g in self.mapping.items():
            if g.N != self.N:
                raise ValueError(f"image of {v} lives in E_{g.N}, expected E_{self.N}")
            if v.kind != "x" and not self.spec.is_homogeneous(g, v.degree):
                raise ValueError(f"image of {v} is not homogeneous of degree {v.degree}")

    @property
    def field(self) -> FieldSpec:
        return next(iter(self.mapping.values())).field

    def evaluate(self, f: FreePolynomial) -> GrassmannElement:
        return gsubstitute(f, self.mapping, self.spec)

    def to_json(self) -> dict:
        return {"grading": str(self.spec), "N": self.N,
                "substitution": {str(v): format_element(g) for v, g in
                                 sorted(self.mapping.items(), key=lambda t: t[0].key)}}

    @classmethod
    def from_json(cls, d: Mapping, field: FieldSpec) -> "Substitution":
        spec = GradingSpec.parse(d["grading"])
        N = int(d["N"])
        mapping = {Variable(k[0], int(k[1:])): parse_element(t, field, N)
                   for k, t in d["substitution"].items()}
        return cls(mapping, spec, N)

    def __str__(self):
        return ", ".join(f"{v} -> {g}" for v, g in sorted(self.mapping.items(), key=lambda t: t[0].key))


@dataclass
class IdentityVerdict:
    status: str
    strategy: str
    N_used: int
    seed: int | None = None
    witness: Substitution | None = None
    value: GrassmannElement | None = None
    polynomial: FreePolynomial | None = None   # the instantiation the witness refers to
    evaluations: int = 0
    note: str = ""

    @property
    def is_identity(self) -> bool:
        return self.status != NON_IDENTITY

    def certificate(self) -> dict:
        if self.witness is None:
            raise ValueError("no witness to certify")
        F = self.value.field
        d = {"field": str(F), "seed": self.seed, "polynomial": str(self.polynomial),
             "value": format_element(self.value), "strategy": self.strategy}
        d.update(self.witness.to_json())
        return d


def verify_certificate(cert: Mapping | str) -> tuple[bool, GrassmannElement]:
    """Replay a certificate: (value matches and is nonzero, recomputed value)."""
    from .parser import parse_polynomial

    if isinstance(cert, str):
        cert = json.loads(cert)
    F = FieldSpec.parse(cert["field"])
    sub = Substitution.from_json(cert, F)
    f = parse_polynomial(cert["polynomial"], F)
    val = sub.evaluate(f)
    recorded = parse_element(cert["value"], F, sub.N)
    return bool(val) and val == recorded, val


# ---------------------------------------------------------------------------
# generator pools


class _Pools:
    """Generators e_1..e_N split by degree and handed out in increasing order
    (or in a shuffled order when an rng is given)."""

    def __init__(self, spec: GradingSpec, N: int, rng: random.Random | None = None):
        om = spec.odd_mask(N)
        self.even = [i for i in range(1, N + 1) if not (om >> (i - 1)) & 1]
        self.odd = [i for i in range(1, N + 1) if (om >> (i - 1)) & 1]
        if rng is not None:
            rng.shuffle(self.even)
            rng.shuffle(self.odd)
        self.spec = spec
        self.N = N

    def take(self, n_even: int, n_odd: int) -> list[int]:
        if n_even > len(self.even) or n_odd > len(self.odd):
            raise Unrealizable(
                f"needs {n_even} even and {n_odd} odd generators; E_{self.N} under {self.spec} has "
                f"{len(self.even)} and {len(self.odd)} left")
        out = self.even[:n_even] + self.odd[:n_odd]
        del self.even[:n_even]
        del self.odd[:n_odd]
        return sorted(out)

    def weight2_even_split(self) -> tuple[int, int]:
        """(even, odd) generator counts for a weight-2 even-degree summand."""
        if self.spec.kind in (Kind.INFINITY, Kind.KSTAR):
            return 2, 0
        return 0, 2


def _summand_plan(u: SSMonomial, almost: bool) -> list[tuple[Variable, list[int]]]:
    """Per variable (in variable order) the support lengths of its summands."""
    plan = []
    special = u.pr_z if almost else None
    if almost and u.pr_z in u.psi:
        raise ValueError("almost-type target needs pr(z) outside psi")
    for v in u.variables():
        d = u.Deg(v)
        if v in u.psi or v == special:
            plan.append((v, [1] + [2] * (d - 1)))
        else:
            plan.append((v, [2] * d))
    return plan


def _plan_needs(spec: GradingSpec, plan) -> tuple[int, int]:
    ne = no = 0
    w2e = (2, 0) if spec.kind in (Kind.INFINITY, Kind.KSTAR) else (0, 2)
    for v, lens in plan:
        for w in lens:
            if v.kind == "y":
                e, o = (1, 0) if w == 1 else w2e
            else:
                e, o = (0, 1) if w == 1 else (1, 1)
            ne += e
            no += o
    return ne, no


@dataclass
class WitnessSequence:
    kind: str                   # "type" | "almost_type" | "scalar"
    target: SSMonomial | None
    entries: dict               # Variable -> GrassmannElement
    summands: dict              # Variable -> list of masks
    N: int
    spec: GradingSpec

    def support_mask(self) -> int:
        m = 0
        for masks in self.summands.values():
            for s in masks:
                m |= s
        return m

    def check(self) -> list[str]:
        """Violations of the sequence definition (empty when valid)."""
        errs = []
        u = self.target
        seen = 0
        for v, masks in self.summands.items():
            d = u.Deg(v)
            if len(masks) != d:
                errs.append(f"{v}: {len(masks)} summands, expected {d}")
            acc = 0
            for s in masks:
                if acc & s:
                    errs.append(f"{v}: overlapping summands")
                acc |= s
                if self.spec.monomial_degree(s, self.N) != v.degree:
                    errs.append(f"{v}: summand of wrong degree")
            if acc & seen:
                errs.append(f"{v}: support meets another variable")
            seen |= acc
            lens = sorted(popcount(s) for s in masks)
            special = self.kind == "almost_type" and v == u.pr_z
            if v in u.psi or special:
                want = sorted([1] + [2] * (d - 1))
            else:
                want = [2] * d
            if lens != want:
                errs.append(f"{v}: support lengths {lens}, expected {want}")
        return errs


def _build(u: SSMonomial, spec: GradingSpec, N: int | None, rng, almost: bool, field: FieldSpec) -> WitnessSequence:
    plan = _summand_plan(u, almost)
    ne, no = _plan_needs(spec, plan)
    if N is None:
        N = _min_truncation(spec, ne, no)
        if N is None:
            raise Unrealizable(f"{u} needs {ne} even and {no} odd generators; not available under {spec}")
        N += 2
    pools = _Pools(spec, N, rng)
    entries, summands = {}, {}
    w2e = pools.weight2_even_split()
    for v, lens in plan:
        masks = []
        for w in lens:
            if v.kind == "y":
                e, o = (1, 0) if w == 1 else w2e
            else:
                e, o = (0, 1) if w == 1 else (1, 1)
            masks.append(mask_of(pools.take(e, o)))
        summands[v] = masks
        entries[v] = GrassmannElement(field, N, {m: 1 for m in masks})
    return WitnessSequence("almost_type" if almost else "type", u, entries, summands, N, spec)


def _min_truncation(spec: GradingSpec, ne: int, no: int) -> int | None:
    for N in range(0, 257):
        om = spec.odd_mask(N)
        odd = popcount(om)
        if N - odd >= ne and odd >= no:
            return N
    return None


def build_type_sequence(u: SSMonomial, spec: GradingSpec, field: FieldSpec, N: int | None = None,
                        rng: random.Random | None = None) -> WitnessSequence:
    """Type-u sequence: one summand per occurrence, weight 1 only for chain variables."""
    return _build(u, spec, N, rng, False, field)


def build_almost_type_sequence(u: SSMonomial, spec: GradingSpec, field: FieldSpec, N: int | None = None,
                               rng: random.Random | None = None) -> WitnessSequence:
    """As a Type-u sequence, except pr(z)(u) also gets one weight-1 summand."""
    if u.begZ_deg == 0:
        raise ValueError("almost-type sequence needs a z in beg(u)")
    return _build(u, spec, N, rng, True, field)


# ---------------------------------------------------------------------------
# evaluation of normal forms


def eval_ss(u: SSMonomial, sigma: Mapping[Variable, GrassmannElement], field: FieldSpec, N: int) -> GrassmannElement:
    out = GrassmannElement.one(field, N)
    for v, e in u.beg:
        out = out * (sigma[v] ** e)
    for i in range(0, len(u.psi), 2):
        out = out * g_commutator(sigma[u.psi[i]], sigma[u.psi[i + 1]])
    return out


def eval_ppoly(P: PPolynomial, sigma: Mapping[Variable, GrassmannElement], N: int) -> GrassmannElement:
    F = P.field
    out = GrassmannElement.zero(F, N)
    for m, c in P.terms.items():
        t = GrassmannElement._raw(F, N, {0: c})
        for v, e in m:
            t = t * (sigma[v] ** e)
        out = out + t
    return out


def eval_test_polynomial(f: TestPolynomial, sigma, N: int) -> GrassmannElement:
    out = eval_ppoly(f.f0, sigma, N)
    for c, u in f.pairs():
        out = out + eval_ppoly(c, sigma, N) * eval_ss(u, sigma, f.field, N)
    return out


def component(g: GrassmannElement, weight: int) -> GrassmannElement:
    return GrassmannElement._raw(g.field, g.N, {m: c for m, c in g.terms.items() if popcount(m) == weight})


@dataclass
class DominantReport:
    dom: GrassmannElement
    dom_shifted: GrassmannElement | None
    coefficient: FieldElement     # lambda with dom = lambda * g
    monomial: int                 # mask of g
    complete: bool
    shift_invariant: bool | None


def dominant_check(u: SSMonomial, w: WitnessSequence,
                   scalars: Mapping[Variable, FieldElement] | None = None) -> DominantReport:
    F = next(iter(w.entries.values())).field if w.entries else None
    N = w.N
    val = eval_ss(u, w.entries, F, N)
    dom = val.dominant()
    single = len(dom.terms) == 1
    mask = next(iter(dom.terms)) if single else 0
    coef = FieldElement(F, dom.terms[mask]) if single else FieldElement(F, 0)
    complete = single and mask == w.support_mask()
    shifted = inv = None
    if scalars is not None:
        sig = {}
        for v, g in w.entries.items():
            lam = scalars.get(v)
            sig[v] = g + lam if (lam is not None and v.kind == "y") else g
        shifted = eval_ss(u, sig, F, N).dominant()
        inv = shifted == dom
    return DominantReport(dom, shifted, coef, mask, complete, inv)


# ---------------------------------------------------------------------------
# scalar witnesses


def scalar_witness(f0: PPolynomial) -> dict | None:
    """Exhaustive search over GF(q)^m for a point where f0 is nonzero; None if none exists."""
    F = f0.field
    vs = f0.variables()
    if not f0:
        return None
    if not vs:
        return {}
    for point in itertools.product(range(F.q), repeat=len(vs)):
        vals = dict(zip(vs, point))
        if f0.evaluate(vals):
            return {v: FieldElement(F, c) for v, c in vals.items()}
    return None


# ---------------------------------------------------------------------------
# leading-term witness construction


@dataclass
class TheoremWitness:
    case: str                 # "type_lt" | "almost_type_lt" | "type_lbt" | "scalar"
    target: SSMonomial | None
    sequence: WitnessSequence | None
    scalars: dict
    substitution: Substitution
    value: GrassmannElement
    dom: GrassmannElement
    coefficient: FieldElement
    complete: bool
    target_weight: int
    term_weights: dict = dc_field(default_factory=dict)   # other u -> weight of u(lambda + A)

    @property
    def ok(self) -> bool:
        return (bool(self.coefficient) and self.complete
                and all(w < self.target_weight for w in self.term_weights.values()))


def choose_case(f: TestPolynomial, spec: GradingSpec, field: FieldSpec, N=None, rng=None):
    lt = leading_term(f)
    try:
        return "type_lt", lt, build_type_sequence(lt, spec, field, N, rng)
    except Unrealizable:
        if lt.begZ_deg == 0:
            raise
    bad, lbt = bad_terms(f)
    if lbt is None:
        return "almost_type_lt", lt, build_almost_type_sequence(lt, spec, field, N, rng)
    return "type_lbt", lbt, build_type_sequence(lbt, spec, field, N, rng)


def theorem_witness(f: TestPolynomial, spec: GradingSpec, N: int | None = None,
                    rng: random.Random | None = None) -> TheoremWitness:
    """Scalars plus a Type-LT / AlmostType-LT / Type-LBT sequence, evaluated and checked."""
    F = f.field
    if not f.terms:
        raise ValueError("no SS part: f is a pure p-polynomial; use scalar_witness")
    case, target, seq = choose_case(f, spec, F, N, rng)
    N = seq.N
    lam = scalar_witness(f.terms[target]) or {}
    sigma = {}
    for v in f.variables():
        g = seq.entries.get(v, GrassmannElement.zero(F, N))
        if v.kind == "y" and v in lam:
            g = g + lam[v]
        sigma[v] = g
    value = eval_test_polynomial(f, sigma, N)
    target_val = eval_ss(target, seq.entries, F, N)
    tw = target_val.weight()
    dom = value.dominant()
    single = len(dom.terms) == 1
    mask = next(iter(dom.terms)) if single else 0
    coef = FieldElement(F, dom.terms[mask] if single else 0)
    complete = single and mask == seq.support_mask() and value.weight() == tw
    weights = {}
    for c, u in f.pairs():
        if u != target:
            weights[u] = eval_ss(u, sigma, F, N).weight() if eval_ss(u, sigma, F, N) else -1
    sub = Substitution(sigma, spec, N)
    return TheoremWitness(case, target, seq, lam, sub, value, dom, coef, complete, tw, weights)


# ---------------------------------------------------------------------------
# identity checking


def _instantiations(f: FreePolynomial) -> list[tuple[FreePolynomial, dict]]:
    """Replace schematic x-variables by y or z with fresh indices, in all ways."""
    xs = [v for v in f.variables() if v.kind == "x"]
    if not xs:
        return [(f, {})]
    used = {k: max([v.index for v in f.variables() if v.kind == k], default=0) for k in "yz"}
    out = []
    for kinds in itertools.product("yz", repeat=len(xs)):
        nxt = dict(used)
        mp = {}
        for x, k in zip(xs, kinds):
            nxt[k] += 1
            mp[x] = Variable(k, nxt[k])
        sub = {x: FreePolynomial.variable(f.field, v) for x, v in mp.items()}
        out.append((f.substitute(sub), mp))
    return out


def is_multihomogeneous_multilinear(f: FreePolynomial) -> bool:
    vs = None
    for w in f.terms:
        s = frozenset(w)
        if len(s) != len(w):
            return False
        if vs is None:
            vs = s
        elif s != vs:
            return False
    return True


_PATTERNS = {
    # (kind, weight parity) -> (even generators, odd generators)
    ("y", 0): (0, 0),
    ("y", 1): (1, 0),
    ("z", 1): (0, 1),
    ("z", 0): (1, 1),
}


def _exhaustive_multilinear(f: FreePolynomial, spec: GradingSpec, N: int):
    """Minimal-representative substitutions for every weight-parity pattern.

    For multilinear f the value on basis monomials only depends on each
    image's weight parity (reordering signs) and on disjointness, so one
    monomial per realizable pattern decides vanishing on all of them.
    """
    F = f.field
    vs = f.variables()
    count = 0
    for parities in itertools.product((0, 1), repeat=len(vs)):
        pools = _Pools(spec, N)
        sigma = {}
        try:
            for v, par in zip(vs, parities):
                e, o = _PATTERNS[(v.kind, par)]
                sigma[v] = GrassmannElement(F, N, {mask_of(pools.take(e, o)): 1})
        except Unrealizable:
            continue
        count += 1
        val = gsubstitute(f, sigma, spec)
        if val:
            return Substitution(sigma, spec, N), val, count
    return None, None, count


def _random_element(spec, degree, N, F, rng, terms, scalar):
    g = GrassmannElement.zero(F, N)
    if scalar:
        g = g + rng.randrange(F.q)
    used = 0
    for _ in range(terms):
        ws = [w for w in range(1, min(N, 5) + 1)]
        rng.shuffle(ws)
        for w in ws:
            try:
                m = sample_monomial_mask(spec, degree, w, N, used, rng)
            except Unrealizable:
                continue
            used |= m
            g = g + GrassmannElement._raw(F, N, {m: rng.randrange(1, F.q)})
            break
    return g


def _randomized(f: FreePolynomial, spec: GradingSpec, N: int, samples: int, rng: random.Random):
    F = f.field
    vs = f.variables()
    for s in range(samples):
        sigma = {}
        for v in vs:
            d = max(1, f.degree_in(v))
            sigma[v] = _random_element(spec, v.degree, N, F, rng, rng.randint(1, d), v.kind == "y")
        val = gsubstitute(f, sigma, spec)
        if val:
            return Substitution(sigma, spec, N), val, s + 1
    return None, None, samples


def homogeneous_elements(spec: GradingSpec, degree: int, N: int, F: FieldSpec):
    """Every element of E_N homogeneous of the given degree (small N only)."""
    masks = [m for m in range(1 << N) if spec.monomial_degree(m, N) == degree]
    for coefs in itertools.product(range(F.q), repeat=len(masks)):
        yield GrassmannElement(F, N, {m: c for m, c in zip(masks, coefs) if c})


def _tuple_count(f: FreePolynomial, spec: GradingSpec, N: int) -> int:
    total = 1
    for v in f.variables():
        nm = sum(1 for m in range(1 << N) if spec.monomial_degree(m, N) == v.degree)
        total *= f.field.q ** nm
    return total


def exhaustive_small(f: FreePolynomial, spec: GradingSpec, N: int = 4, limit: int = 200_000):
    """Evaluate f on every tuple of homogeneous elements of a small E_N."""
    F = f.field
    vs = f.variables()
    total = _tuple_count(f, spec, N)
    if total > limit:
        raise ValueError(f"exhaustive search over {total} tuples exceeds limit {limit}")
    pools = [list(homogeneous_elements(spec, v.degree, N, F)) for v in vs]
    count = 0
    for tup in itertools.product(*pools):
        sigma = dict(zip(vs, tup))
        count += 1
        val = gsubstitute(f, sigma, spec)
        if val:
            return Substitution(sigma, spec, N), val, count
    return None, None, count


def _witness_first(f, spec, N, samples, rng):
    F = f.field
    tp = reduce(f, spec)
    if tp.is_zero():
        return None, None, 0, "reduced to 0"
    sigma = None
    try:
        if tp.terms:
            tw = theorem_witness(tp, spec, None, None)
            if tw.substitution.N <= N:
                sigma = _widen(tw.substitution.mapping, F, N)
        else:
            lam = scalar_witness(tp.f0)
            if lam is not None:
                sigma = {v: GrassmannElement.scalar(F, N, lam.get(v, FieldElement(F, 0)))
                         if v.kind == "y" else GrassmannElement.zero(F, N) for v in f.variables()}
    except (Unrealizable, ValueError):
        sigma = None
    if sigma is not None:
        for v in f.variables():
            sigma.setdefault(v, GrassmannElement.zero(F, N))
        val = gsubstitute(f, sigma, spec)
        if val:
            return Substitution(sigma, spec, N), val, 1, "leading-term construction"
    w, val, n = _randomized(f, spec, N, samples, rng)
    return w, val, n + 1, "randomized fallback"


def _widen(mapping, F, N):
    return {v: GrassmannElement(F, N, dict(g.terms)) for v, g in mapping.items()}


def is_graded_identity(f: FreePolynomial, spec: GradingSpec, N: int | None = None,
                       strategy: str = "auto", samples: int = 200, seed: int = 0) -> IdentityVerdict:
    """Decide at truncation N whether f vanishes on all homogeneous substitutions.

    strategy: "exhaustive_multilinear", "randomized", "witness_first",
    "exhaustive_small" (tiny E_N, every element) or "auto".
    """
    bound = truncation_bound(f, spec)
    if N is None:
        N = bound
    rng = random.Random(seed)
    total = 0
    used = strategy
    for g, mp in _instantiations(f):
        if not g:
            continue
        strat = strategy
        if strat == "auto":
            if is_multihomogeneous_multilinear(g):
                strat = "exhaustive_multilinear"
            elif len(g.variables()) == 1:
                strat = "exhaustive_plus_randomized"
            else:
                strat = "witness_first"
        used = strat
        if strat == "exhaustive_multilinear":
            if not is_multihomogeneous_multilinear(g):
                raise ValueError("exhaustive_multilinear needs a multilinear, multihomogeneous polynomial")
            w, val, n = _exhaustive_multilinear(g, spec, N)
            note = "patterns"
        elif strat == "randomized":
            w, val, n = _randomized(g, spec, N, samples, rng)
            note = "samples"
        elif strat == "witness_first":
            w, val, n, note = _witness_first(g, spec, N, samples, rng)
        elif strat == "exhaustive_small":
            w, val, n = exhaustive_small(g, spec, min(N, 4))
            note = "tuples"
        elif strat == "exhaustive_plus_randomized":
            small = min(N, 4)
            while small > 1 and _tuple_count(g, spec, small) > 200_000:
                small -= 1
            w, val, n = exhaustive_small(g, spec, small)
            if w is None:
                w, val, n2 = _randomized(g, spec, N, samples, rng)
                n += n2
            note = "tuples + samples"
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        total += n
        if w is not None:
            return IdentityVerdict(NON_IDENTITY, strat, N, seed, w, val, g, total,
                                   f"instantiation {dict((str(a), str(b)) for a, b in mp.items())}" if mp else note)
    status = IDENTITY if N >= bound else BELOW_BOUND
    return IdentityVerdict(status, used, N, seed, None, None, f, total, "")
