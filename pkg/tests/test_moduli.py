import csv
import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kgraphrep import catalog
from kgraphrep.analysis import is_irreducible
from kgraphrep.linalg import random_unitary
from kgraphrep.module import InfeasibleDimensionError, check_module, random_module
from kgraphrep.moduli import (D_vector, discrepancy_flags, estimate_irr_fraction, moduli_row,
                              mr_dim, mr_nonempty, rows_to_csv, spec_dim)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("d", [0, 1, 2, 3])
def test_rose_formulas(n, d):
    g = catalog.rose(n)
    assert mr_dim(g, [d]) == (2 * n - 1) * d * d
    assert spec_dim(g, [d]) == 2 * (n - 1) * d * d + 1


def test_rose2_spec_column():
    g = catalog.rose(2)
    assert [spec_dim(g, [d]) for d in (1, 2, 3, 4)] == [3, 9, 19, 33]


@pytest.mark.parametrize("q", [1, 2, 3])
def test_complete2_formulas(q):
    g = catalog.complete2()
    assert D_vector(g, [q, q]) == {"1": 2 * q, "2": 2 * q}
    assert mr_dim(g, [q, q]) == 6 * q * q
    assert spec_dim(g, [q, q]) == 1 + 4 * q * q
    (flag,) = discrepancy_flags(g, [q, q])
    assert str(1 + 2 * q * q) in flag and str(1 + 4 * q * q) in flag


def test_three_vertex_feasibility():
    g = catalog.three_vertex()
    # every vertex receives exactly one edge, all sourced at 1, so D(v) = d_1
    assert D_vector(g, [2, 1, 0]) == {"1": 2, "2": 2, "3": 2}
    assert mr_nonempty(g, [1, 0, 0])
    assert mr_nonempty(g, [1, 1, 0])
    assert not mr_nonempty(g, [0, 1, 0])
    with pytest.raises(InfeasibleDimensionError):
        mr_dim(g, [0, 1, 0])
    row = moduli_row(g, [0, 1, 0])
    assert not row.feasible and row.flags


def _feasible_vectors(g, top=3):
    import itertools
    for d in itertools.product(range(top + 1), repeat=len(g.vertices)):
        if mr_nonempty(g, list(d)):
            yield list(d)


@pytest.mark.parametrize("name", ["rose:1", "rose:2", "rose:3", "complete2", "three_vertex"])
def test_consistency_identity(name):
    g = catalog.graph(name)
    for d in _feasible_vectors(g):
        assert mr_dim(g, d) == spec_dim(g, d) - 1 + sum(x * x for x in d)
        assert spec_dim(g, d) >= 1
        assert mr_dim(g, d) >= sum(x * x for x in d)


def test_needs_1graph():
    with pytest.raises(ValueError):
        mr_dim(catalog.two_graph_4loops(), [1])


def test_irr_fraction_examples():
    assert estimate_irr_fraction(catalog.rose(2), [1], samples=30, seed=1).irr_fraction == 1.0
    for n in (2, 3):
        rep = estimate_irr_fraction(catalog.three_vertex(), [n, 0, 0], samples=20, seed=2)
        assert rep.irr_fraction == 0.0
    assert estimate_irr_fraction(catalog.complete2(), [2, 2], samples=10, seed=3).irr_fraction > 0


def test_irr_fraction_deterministic():
    g = catalog.complete2()
    a = estimate_irr_fraction(g, [2, 1], samples=15, seed=7).to_dict()
    b = estimate_irr_fraction(g, [2, 1], samples=15, seed=7).to_dict()
    assert a == b


def test_example_modules():
    m = catalog.m_z(1)
    assert m.dims == {"1": 1, "2": 0, "3": 0} and m["11"][0, 0] == 1
    assert check_module(m).ok and is_irreducible(m)
    assert check_module(catalog.complete2_module(1, [1], [1])).ok
    s = catalog.sphere_module([1, 0, 0])
    assert check_module(s).ok and is_irreducible(s)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["rose:2", "complete2", "three_vertex"]),
       st.lists(st.integers(0, 3), min_size=3, max_size=3), st.integers(0, 2**32 - 1))
def test_irreducibility_orbit_invariant(name, ds, seed):
    g = catalog.graph(name)
    d = dict(zip(g.vertices, ds))
    if not mr_nonempty(g, d) or sum(d.values()) == 0:
        return
    rng = np.random.default_rng(seed)
    m = random_module(g, d, rng)
    u = {v: random_unitary(m.dims[v], rng) for v in g.vertices}
    assert is_irreducible(m) == is_irreducible(m.conjugate(u))


def test_csv_layout():
    g = catalog.complete2()
    rows = [moduli_row(g, [1, 1]), moduli_row(g, [3, 0])]
    text = rows_to_csv(g, rows)
    assert text.splitlines()[0] == "d,D,feasible,mr_dim,spec_dim,samples,irr_fraction,flags"
    _, r1, r2 = csv.reader(io.StringIO(text))
    assert r1[:7] == ["1;1", "2;2", "1", "6", "5", "0", ""]
    assert r1[7].startswith("complete2 d=(q,q)")
    assert r2[:7] == ["3;0", "3;3", "1", "9", "1", "0", ""]
    # complete2 is always feasible; the three-vertex graph is not
    t = catalog.three_vertex()
    _, r3 = csv.reader(io.StringIO(rows_to_csv(t, [moduli_row(t, [0, 1, 0])])))
    assert r3 == ["0;1;0", "0;0;0", "0", "", "", "0", "", "infeasible: MR(d) is empty"]
