"""Run the lifted relation checks on every bundled module and print the worst residuals."""
import argparse

from kgraphrep import catalog
from kgraphrep.lift import j_embedding_check, verify_relations


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--depth", type=int, default=2, help="uniform depth per colour")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    failed = 0
    keys = ["projections", "isometries", "range_sum", "squares", "adjoint"]
    print(f"{'module':<24}{'keys':>7} " + " ".join(f"{k:>11}" for k in keys) + f"{'j':>11}")
    for name, m in catalog.bundled_modules(args.seed).items():
        rep = verify_relations(m, depth=(args.depth,) * m.graph.k)
        j = j_embedding_check(m)
        failed += not (rep.ok and j["ok"])
        cells = " ".join(f"{rep.residuals[k]:11.1e}" for k in keys)
        print(f"{name:<24}{rep.basis_size:>7} {cells}{j['residual']:11.1e}")
    print(f"failed: {failed}")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
