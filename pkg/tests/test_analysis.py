import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kgraphrep import analysis as an
from kgraphrep import catalog
from kgraphrep.linalg import random_unitary
from kgraphrep.module import check_module, direct_sum, random_module

import oracles


def test_reducible_example_socle():
    m = catalog.reducible_example()
    s = an.socle(m)
    assert s.dim == 2
    # socle is span{e1, e2}
    p = s.projector()
    assert np.allclose(p, np.diag([0, 1, 1]), atol=1e-10)
    res = an.decompose(m)
    assert res.n == 2 and res.residual.dim == 1 and res.pdim == 2
    assert len(an.generated_algebra(m)) == 5
    assert an.is_residual(m, res.residual)
    assert np.allclose(res.residual.projector(), np.diag([1, 0, 0]), atol=1e-10)


def test_reducible_example_invariance():
    m = catalog.reducible_example()
    e0 = an.span(m, [[1, 0, 0]])
    ok, gen = an.is_invariant(m, e0)
    assert not ok and gen in ("a1", "a2")
    assert an.is_invariant(m, an.span(m, [[0, 1, 0]]))[0]
    assert an.is_complete_submodule(m, an.span(m, [[0, 1, 0], [0, 0, 1]]))
    assert not an.is_complete_submodule(m, an.span(m, [[0, 1, 0]]))
    with pytest.raises(an.NotInvariantError):
        an.is_complete_submodule(m, e0)


def test_three_by_three_and_omega():
    m = catalog.three_by_three()
    assert an.is_irreducible(m)
    assert an.pdim(m)[1] == 3
    om = catalog.omega(m)
    res = an.decompose(om)
    assert res.pdim == 4
    assert [h.dim for h in res.irreducibles] == [4]
    assert res.residual.dim == 2
    chk = catalog.pdim_sandwich_check(om)
    assert chk == {"pdim_rose": 3, "pdim_complete": 4, "left": True, "right": True, "ok": True}


def test_zero_module_raises():
    g = catalog.three_vertex()
    from kgraphrep.module import MatrixModule
    z = MatrixModule(g, {}, {})
    with pytest.raises(ValueError):
        an.decompose(z)
    with pytest.raises(ValueError):
        an.is_irreducible(z)


def test_direct_sum_classes():
    a = catalog.three_by_three()
    b = catalog.sphere_module([0.6, 0.8])
    ab = direct_sum(direct_sum(a, b), a)
    res = an.decompose(ab)
    assert res.n == 3
    assert sorted(len(c) for c in res.classes) == [1, 2]
    assert res.pdim == 7 and res.residual.dim == 0
    assert len(an.intertwiners(a, direct_sum(a, a))) == 2


def test_intertwiners_schur():
    a = catalog.three_by_three()
    assert len(an.intertwiners(a, a)) == 1
    rng = np.random.default_rng(3)
    b = random_module(catalog.rose(2), {"v": 3}, rng)
    assert an.intertwiners(a, b) == []
    u = random_unitary(3, rng)
    c = a.conjugate({"v": u})
    (t,) = an.intertwiners(a, c)
    t = t["v"]
    for e in ("a1", "a2"):
        assert np.allclose(t @ a[e], c[e] @ t, atol=1e-10)
    assert an.module_isomorphic(a, c) and not an.module_isomorphic(a, b)


def test_isomorphic_but_not_unitarily_equivalent():
    # two 1-dim rose-1 modules are always unitary conjugates; a non-unitary similarity
    # of a reducible module need not be
    m = catalog.reducible_example()
    s = np.array([[1, 0, 0], [0, 1, 0.5], [0, 0, 1]], dtype=complex)
    si = np.linalg.inv(s)
    from kgraphrep.module import MatrixModule
    sim = MatrixModule(m.graph, m.dims, {e: s @ m[e] @ si for e in ("a1", "a2")})
    assert an.module_isomorphic(m, sim)
    assert not check_module(sim).ok


def test_unitary_equivalence_conjugate():
    rng = np.random.default_rng(11)
    a = random_module(catalog.complete2(), {"1": 2, "2": 1}, rng)
    u = {"1": random_unitary(2, rng), "2": random_unitary(1, rng)}
    ok, cert = an.unitarily_equivalent(a, a.conjugate(u))
    assert ok and cert["objective"] < 1e-10
    b = random_module(catalog.complete2(), {"1": 2, "2": 1}, rng)
    ok, cert = an.unitarily_equivalent(a, b, restarts=5)
    assert not ok


def test_unitary_equivalence_dims_differ():
    a = catalog.three_by_three()
    ok, cert = an.unitarily_equivalent(a, catalog.sphere_module([0.6, 0.8]))
    assert not ok and cert["reason"] == "dimension vectors differ"


def test_m_z_pieces():
    for z in np.exp(1j * np.linspace(0, 6, 5)):
        res = an.decompose(catalog.m_z(z))
        assert res.n == 1 and res.irreducibles[0].dims == {"1": 1, "2": 0, "3": 0}


def _mixed(rng):
    g = catalog.rose(2)
    kind = rng.integers(4)
    if kind == 0:
        return random_module(g, {"v": int(rng.integers(1, 4))}, rng)
    if kind == 1:
        return direct_sum(random_module(g, {"v": 1}, rng), random_module(g, {"v": 2}, rng))
    if kind == 2:
        return catalog.doubled(random_module(g, {"v": 1}, rng))
    m = catalog.reducible_example()
    return m.conjugate({"v": random_unitary(3, rng)})


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_burnside_matches_optimisation_oracle(seed):
    rng = np.random.default_rng(seed)
    m = _mixed(rng)
    assert an.is_irreducible(m) == oracles.oracle_is_irreducible(m, np.random.default_rng(seed))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_decomposition_invariants(seed):
    m = _mixed(np.random.default_rng(seed))
    res = an.decompose(m, seed=seed)
    assert sum(h.dim for h in res.irreducibles) == res.socle.dim
    assert res.socle.dim + res.residual.dim == m.total
    assert an.is_residual(m, res.residual)
    for h in res.irreducibles:
        assert an.is_invariant(m, h)[0]
        assert an.is_irreducible(m.restrict(h.basis))
