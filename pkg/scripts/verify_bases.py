"""Check every generating identity of every grading over a few fields.

Run:  python3 scripts/verify_bases.py [--fields 3 3^2] [--kmax 3]
"""

import argparse
import time

from grassid import FieldSpec, GradingSpec
from grassid.ssform import labelled_basis
from grassid.witness import is_graded_identity


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fields", nargs="+", default=["3", "3^2"])
    ap.add_argument("--kmax", type=int, default=3)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    gradings = ["canonical", "infinity"] + [f"{g}:{k}" for g in ("kstar", "k") for k in range(1, args.kmax + 1)]
    bad = 0
    for ftext in args.fields:
        F = FieldSpec.parse(ftext)
        for g in gradings:
            spec = GradingSpec.parse(g)
            for label, f in labelled_basis(spec, F):
                t = time.perf_counter()
                v = is_graded_identity(f, spec, samples=args.samples, seed=args.seed)
                bad += not v.is_identity
                print(f"GF({F.q:>2}) {g:10} {label:14} {v.status:28} {v.strategy:26} N={v.N_used:<3} "
                      f"{time.perf_counter() - t:6.2f}s")
    print("all identities hold" if not bad else f"{bad} FAILED")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
