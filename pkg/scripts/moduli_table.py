"""Dimension table and sampled irreducible fractions for small 1-graphs.

    python scripts/moduli_table.py --samples 200 --seed 0 > moduli.csv
"""
import argparse
import itertools
import sys

from kgraphrep import catalog
from kgraphrep.moduli import moduli_row, rows_to_csv

GRAPHS = ["rose:2", "rose:3", "complete2", "three_vertex"]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-d", type=int, default=3)
    args = p.parse_args(argv)
    for name in GRAPHS:
        g = catalog.graph(name)
        rows = []
        for d in itertools.product(range(args.max_d + 1), repeat=len(g.vertices)):
            if sum(d) == 0:
                continue
            rows.append(moduli_row(g, list(d), args.samples, args.seed))
        sys.stdout.write(f"# graph={name} seed={args.seed} samples={args.samples}\n")
        sys.stdout.write(rows_to_csv(g, rows))


if __name__ == "__main__":
    main()
