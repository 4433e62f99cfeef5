"""P-dimension of Ω(π) against rank(A1) + rank(A2) for random irreducible rose-2 modules.

Also reports the sandwich Pdim(Ψ(Ω(π))) ≤ Pdim(Ω(π)) ≤ 2 Pdim(Ψ(Ω(π))).
"""
import argparse
import collections

import numpy as np

from kgraphrep import analysis as an
from kgraphrep import catalog
from kgraphrep.linalg import rank


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--max-d", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    tally = collections.Counter()
    bad = 0
    done = 0
    while done < args.n:
        d = int(rng.integers(1, args.max_d + 1))
        r1 = int(rng.integers(1, d + 1))
        r2 = int(rng.integers(max(1, d - r1), d + 1))
        pi = catalog.random_rank_module(d, r1, r2, rng)
        if not an.is_irreducible(pi):
            continue
        done += 1
        ranks = rank(pi["a1"]) + rank(pi["a2"])
        om = catalog.omega(pi)
        pd = an.pdim(om)[1]
        sw = catalog.pdim_sandwich_check(om)
        tally[(d, ranks, pd)] += 1
        if pd != ranks or not sw["ok"]:
            bad += 1
    print("d  rank_sum  pdim_omega  count")
    for (d, r, pd), c in sorted(tally.items()):
        print(f"{d:<3}{r:<10}{pd:<12}{c}")
    print(f"violations: {bad} of {args.n}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
