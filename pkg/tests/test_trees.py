import itertools

import pytest

from kgraphrep import catalog
from kgraphrep.trees import (Tree, TreeError, basic_caret, full_tree, full_tree_by_gluing, glue,
                             is_refinement, leaf_degree_join, trivial_caret)


def test_carets():
    g = catalog.rose(2)
    assert {p.edges for p in basic_caret(g, "v", 1).leaves} == {("a1",), ("a2",)}
    assert trivial_caret(g, "v").leaves == {g.vertex("v")}
    # vertex 2 of the two-colour graph below receives no colour-2 edge
    c = catalog.two_graph_example()
    assert len(basic_caret(c, "v", 2)) == 2


def test_caret_at_vertex_without_edges():
    g = catalog.three_vertex()
    # nothing has source 2, but 2 still receives (21); use a graph where a vertex receives nothing
    from kgraphrep.kgraph import Edge, KGraph
    h = KGraph(1, ["u", "w"], [Edge("e", 1, "u", "w")])
    assert basic_caret(h, "u", 1).leaves == {h.vertex("u")}
    assert len(basic_caret(g, "2", 1)) == 1


def test_glue_and_errors():
    g = catalog.rose(2)
    t = basic_caret(g, "v", 1)
    leaf = g.path("a1")
    t2 = glue(g, t, leaf, 1)
    assert len(t2) == len(t) - 1 + 2
    with pytest.raises(TreeError):
        glue(g, t, g.path("a1", "a1"), 1)


def test_glue_trivial_caret_keeps_tree():
    from kgraphrep.kgraph import Edge, KGraph
    h = KGraph(1, ["u", "w"], [Edge("e", 1, "u", "w")])
    t = basic_caret(h, "w", 1)
    assert glue(h, t, h.path("e"), 1) == t


def test_two_gluing_orders_agree():
    g = catalog.two_graph_example()
    t1 = glue(g, basic_caret(g, "v", 1), g.path("nu"), 2)
    t2 = basic_caret(g, "v", 2)
    t2 = glue(g, t2, g.path("mu1"), 1)
    t2 = glue(g, t2, g.path("mu2"), 1)
    assert t1 == t2
    assert t1 == full_tree(g, "v", (1, 1))


@pytest.mark.parametrize("name", list(catalog.all_graphs()))
def test_full_tree_equals_gluing(name):
    g = catalog.all_graphs()[name]
    for m in itertools.product(range(3), repeat=g.k):
        for v in g.vertices:
            assert full_tree(g, v, m) == full_tree_by_gluing(g, v, m)
    assert full_tree(g, g.vertices[0], (0,) * g.k) == trivial_caret(g, g.vertices[0])


@pytest.mark.parametrize("name", list(catalog.all_graphs()))
def test_cofinal_refinement(name):
    g = catalog.all_graphs()[name]
    degs = list(itertools.product(range(3), repeat=g.k))
    for v in g.vertices:
        for m, n in itertools.product(degs, repeat=2):
            if all(a <= b for a, b in zip(m, n)):
                assert is_refinement(g, full_tree(g, v, m), full_tree(g, v, n))


def _small_trees(g, v, steps=2):
    out = {trivial_caret(g, v)}
    frontier = list(out)
    for _ in range(steps):
        nxt = []
        for t in frontier:
            for leaf in sorted(t.leaves):
                for c in range(1, g.k + 1):
                    t2 = glue(g, t, leaf, c)
                    if t2 not in out:
                        out.add(t2)
                        nxt.append(t2)
        frontier = nxt
    return out


@pytest.mark.parametrize("name", ["rose:2", "complete2", "two_graph_example"])
def test_refinement_properties(name):
    g = catalog.graph(name)
    v = g.vertices[0]
    for t in _small_trees(g, v):
        assert is_refinement(g, t, t)
        assert is_refinement(g, trivial_caret(g, v), t)
        # leaves are pairwise incomparable
        for a, b in itertools.permutations(t.leaves, 2):
            assert g.extends(a, b) is None
        # cofinality: the full tree at the join of leaf degrees refines t
        assert is_refinement(g, t, full_tree(g, v, leaf_degree_join(g, t)))
        for leaf in t.leaves:
            for c in range(1, g.k + 1):
                t2 = glue(g, t, leaf, c)
                if t2 != t:
                    assert not is_refinement(g, t2, t)
                    assert is_refinement(g, t, t2)


def test_tree_str_sorted():
    g = catalog.rose(2)
    assert str(full_tree(g, "v", (1,))) == "{[a1], [a2]}"
    assert isinstance(trivial_caret(g, "v"), Tree)
