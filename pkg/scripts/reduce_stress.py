"""Random polynomials: reduce() against direct evaluation, per grading.

Reports evaluation mismatches (should be none), how often the K(k) reducer
leaves terms in place, and the average size of the normal form.

Run:  python3 scripts/reduce_stress.py [--field 3] [--polys 200] [--subs 20]
"""

import argparse
import random
import time

from grassid import FieldSpec, GradingSpec, gsubstitute, reduce
from grassid.freealg import FreePolynomial, Variable
from grassid.gradings import Unrealizable, sample_homogeneous
from grassid.grassmann import GrassmannElement


def random_element(spec, degree, N, F, rng):
    g = GrassmannElement.zero(F, N)
    if degree == 0:
        g = g + rng.randrange(F.q)
    for _ in range(rng.randint(1, 3)):
        try:
            g = g + sample_homogeneous(spec, degree, rng.randint(1, 4), N, F, rng=rng).scale(rng.randint(1, F.q - 1))
        except Unrealizable:
            pass
    return g


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--field", default="3")
    ap.add_argument("--polys", type=int, default=200)
    ap.add_argument("--subs", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    F = FieldSpec.parse(args.field)
    vs = [Variable(k, i) for k in "yz" for i in (1, 2, 3)]
    for g in ("canonical", "infinity", "kstar:1", "kstar:2", "kstar:3", "k:1", "k:2", "k:3"):
        spec = GradingSpec.parse(g)
        rng = random.Random(args.seed)
        t = time.perf_counter()
        mismatches = flagged = size = 0
        for _ in range(args.polys):
            f = FreePolynomial.zero(F)
            for _ in range(rng.randint(1, 3)):
                f = f + FreePolynomial.word(F, [rng.choice(vs) for _ in range(rng.randint(1, F.p + 2))],
                                            rng.randint(1, F.q - 1))
            r = reduce(f, spec)
            flagged += bool(r.unresolved)
            size += len(r.terms) + bool(r.f0)
            h = r.to_free()
            N = 2 * f.degree() + spec.k + 2
            for _ in range(args.subs):
                s = {v: random_element(spec, v.degree, N, F, rng) for v in vs}
                if gsubstitute(f, s, spec) != gsubstitute(h, s, spec):
                    mismatches += 1
                    print(f"  mismatch under {g}: {f}")
                    break
        print(f"{g:10} polys={args.polys} mismatches={mismatches} with_leftovers={flagged} "
              f"avg_terms={size / args.polys:.2f} {time.perf_counter() - t:.1f}s")


if __name__ == "__main__":
    main()
