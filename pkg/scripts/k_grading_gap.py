"""Where the K(k) reducer leaves terms in place at p = 3, and whether they vanish.

Four parts:
  1. a seeded stress run counting terms that reduce() flags as unresolved;
  2. numeric evaluation of the known leftovers (random homogeneous inputs);
  3. an exhaustive check of the multilinear linearization of z1^2*[y1,z1]
     (a genuine identity of G_2 that the reducer cannot rewrite);
  4. an explicit nonzero value of z1^2*z3*[z1,z2] under K(2), whose
     multidegree contains no SS3 monomial at all.

Run:  python3 scripts/k_grading_gap.py [--samples 300] [--polys 200]
"""

import argparse
import random
from collections import Counter
from dataclasses import dataclass

from grassid import FieldSpec, GradingSpec, gsubstitute, parse_polynomial, reduce
from grassid.freealg import FreePolynomial, Variable
from grassid.grassmann import GrassmannElement, format_element, parse_element
from grassid.gradings import Unrealizable, sample_homogeneous
from grassid.ssform import get_reducer, is_ss3
from grassid.witness import is_graded_identity


@dataclass
class GapConfig:
    field: str = "3"
    seed: int = 0
    polys: int = 200
    samples: int = 300
    N: int = 14


LEFTOVERS = [("k:2", "z1^2*[y1,z1]"), ("k:2", "y2*z1^2*[y3,z1]"), ("k:2", "z1^2*z3*[z1,z2]"),
             ("k:3", "z2^2*z3*[y2,z2]"), ("k:3", "y1*z1^2*z2*[y2,z1]")]


def random_element(spec, degree, N, F, rng):
    g = GrassmannElement.zero(F, N)
    if degree == 0:
        g = g + rng.randrange(F.q)
    for _ in range(3):
        try:
            m = sample_homogeneous(spec, degree, rng.randint(1, 4), N, F, rng=rng)
        except Unrealizable:
            continue
        g = g + m.scale(rng.randint(1, F.q - 1))
    return g


def stress(cfg, F, rng):
    vs = [Variable(k, i) for k in "yz" for i in (1, 2, 3)]
    for k in (1, 2, 3):
        spec = GradingSpec.parse(f"k:{k}")
        seen = Counter()
        for _ in range(cfg.polys):
            f = FreePolynomial.zero(F)
            for _ in range(rng.randint(1, 3)):
                f = f + FreePolynomial.word(F, [rng.choice(vs) for _ in range(rng.randint(1, 5))])
            for u in reduce(f, spec).unresolved:
                seen[str(u)] += 1
        flagged = ", ".join(f"{u} x{c}" for u, c in seen.most_common()) or "none"
        print(f"k={k}: polynomials with leftovers {sum(seen.values())}/{cfg.polys}; {flagged}")


def numeric(cfg, F, rng):
    for s, text in LEFTOVERS:
        spec = GradingSpec.parse(s)
        f = parse_polynomial(text, F)
        r = reduce(f, spec)
        nonzero = 0
        for _ in range(cfg.samples):
            sig = {v: random_element(spec, v.degree, cfg.N, F, rng) for v in f.variables()}
            nonzero += bool(gsubstitute(f, sig, spec))
        print(f"{s}: {text} reduces to {r} (unresolved: {len(r.unresolved)}); "
              f"nonzero on {nonzero}/{cfg.samples} random inputs")


def linearization(F):
    # h = sum over c of (z_a z_b + z_b z_a)[y1, z_c]; f = z1^2[y1,z1] is h(z1, z1, z1) / 2
    text = " + ".join(f"(z{a} z{b} + z{b} z{a})[y1,z{c}]" for a, b, c in ((1, 2, 3), (1, 3, 2), (2, 3, 1)))
    h = parse_polynomial(text, F)
    spec = GradingSpec.parse("k:2")
    v = is_graded_identity(h, spec, strategy="exhaustive_multilinear")
    print(f"k:2 linearization of z1^2*[y1,z1]: {v.status} ({v.evaluations} patterns, N={v.N_used})")


def no_ss3_class(F):
    spec = GradingSpec.parse("k:2")
    z1, z2, z3 = (Variable("z", i) for i in (1, 2, 3))
    cls = get_reducer(spec, F)._class_terms(Counter({z1: 3, z2: 1, z3: 1}))
    print("SS monomials of multidegree z1^3 z2 z3:",
          ", ".join(f"{u} (SS3: {is_ss3(u, 2)})" for u in cls))
    N = 7
    sig = {z1: parse_element("e3 + e1e4 + e2e5", F, N), z2: parse_element("e6", F, N),
           z3: parse_element("e7", F, N)}
    val = gsubstitute(parse_polynomial("z1^2*z3*[z1,z2]", F), sig, spec)
    print("z1^2*z3*[z1,z2] at z1 -> e3 + e1e4 + e2e5, z2 -> e6, z3 -> e7:", format_element(val))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, val in vars(GapConfig()).items():
        ap.add_argument(f"--{name}", type=type(val), default=val)
    cfg = GapConfig(**vars(ap.parse_args()))
    F = FieldSpec.parse(cfg.field)
    rng = random.Random(cfg.seed)
    stress(cfg, F, rng)
    numeric(cfg, F, rng)
    linearization(F)
    if F.p == 3:
        no_ss3_class(F)


if __name__ == "__main__":
    main()
