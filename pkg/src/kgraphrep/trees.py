"""Trees at a vertex, stored as leaf sets of paths.

Two gluing histories producing the same leaves give equal trees, which is the
whole point of labelling leaves by paths of the k-graph.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .kgraph import KGraph, Path, deg_join, deg_unit, deg_zero


class TreeError(ValueError):
    pass


@dataclass(frozen=True)
class Tree:
    root: str
    leaves: frozenset

    def __len__(self) -> int:
        return len(self.leaves)

    def sorted_leaves(self) -> list:
        return sorted(self.leaves)

    def __str__(self) -> str:
        return "{" + ", ".join(str(p) for p in self.sorted_leaves()) + "}"


def trivial_caret(g: KGraph, v: str) -> Tree:
    return Tree(v, frozenset([g.vertex(v)]))


def basic_caret(g: KGraph, v: str, color: int) -> Tree:
    """vΛ^{≤e_i}: the colour-i edges into v, or {v} when there are none."""
    return Tree(v, frozenset(g.paths_le(v, deg_unit(g.k, color))))


def glue(g: KGraph, t: Tree, mu: Path, color: int) -> Tree:
    """Replace leaf mu by {mu∘α : α ∈ s(mu)Λ^{≤e_i}}."""
    if mu not in t.leaves:
        raise TreeError(f"{mu} is not a leaf of {t}")
    caret = g.paths_le(mu.source, deg_unit(g.k, color))
    new = {g.compose(mu, a) for a in caret}
    return Tree(t.root, (t.leaves - {mu}) | frozenset(new))


def full_tree(g: KGraph, v: str, m) -> Tree:
    """t_v^m = vΛ^{≤m}."""
    return Tree(v, frozenset(g.paths_le(v, tuple(m))))


def full_tree_by_gluing(g: KGraph, v: str, m) -> Tree:
    """Build t_v^m one colour layer at a time by gluing basic carets at every leaf."""
    t = trivial_caret(g, v)
    for c in range(1, g.k + 1):
        for _ in range(m[c - 1]):
            for leaf in sorted(t.leaves):
                t = glue(g, t, leaf, c)
    return t


def is_refinement(g: KGraph, t: Tree, t2: Tree) -> bool:
    """t ≤ t2: every leaf of t2 extends some leaf of t."""
    if t.root != t2.root:
        raise TreeError("trees have different roots")
    return all(any(g.extends(a, b) is not None for a in t.leaves) for b in t2.leaves)


def leaf_degree_join(g: KGraph, t: Tree) -> tuple:
    return reduce(deg_join, (p.degree for p in t.leaves), deg_zero(g.k))
