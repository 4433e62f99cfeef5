import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kgraphrep import catalog
from kgraphrep.linalg import random_unitary
from kgraphrep.module import (InfeasibleDimensionError, MatrixModule, ModuleStructureError,
                              check_module, direct_sum, load_module, module_from_dict,
                              path_operator, random_module, save_module, tensor_module,
                              word_operator)


def test_three_by_three_valid():
    rep = check_module(catalog.three_by_three())
    assert rep.max_residual < 1e-12


def test_zeroed_edge_reports_pythagorean_defect():
    m = catalog.three_by_three()
    bad = MatrixModule(m.graph, m.dims, {"a1": m["a1"], "a2": np.zeros((3, 3))})
    rep = check_module(bad)
    assert not rep.ok
    expect = np.linalg.norm(np.eye(3) - m["a1"].conj().T @ m["a1"], 2)
    assert rep.pythagorean == pytest.approx(expect, abs=1e-12)


def test_shape_errors():
    g = catalog.rose(2)
    with pytest.raises(ModuleStructureError):
        MatrixModule(g, {"v": 2}, {"a1": np.eye(2), "a2": np.eye(3)})
    with pytest.raises(ModuleStructureError):
        MatrixModule(g, {"v": 2}, {"a1": np.eye(2)})
    with pytest.raises(ModuleStructureError):
        MatrixModule(g, {"v": 1}, {"a1": [[1]], "a2": [[0]], "b": [[0]]})


@pytest.mark.parametrize("name", list(catalog.bundled_modules()))
def test_bundled_modules_valid(name):
    m = catalog.bundled_modules()[name]
    assert check_module(m).ok, check_module(m).to_dict()


def test_square_violation_detected():
    m = catalog.example_2graph_module(0.6, 0.8j)
    # swapping the roles of mu1 and mu2 breaks the squares but keeps each colour isometric
    bad = MatrixModule(m.graph, m.dims, {"nu": m["nu"], "mu1": m["mu1"], "mu2": m["mu1"]})
    assert check_module(bad).squares > 0.1


def test_path_operator_order():
    g = catalog.rose(2)
    m = catalog.three_by_three()
    p = g.path("a1", "a2")
    assert np.allclose(path_operator(m, p), m["a2"] @ m["a1"])
    assert np.allclose(word_operator(m, ["a1", "a2"]), m["a2"] @ m["a1"])


def test_complete2_literal_only_q1_q4():
    for q in (1, 2, 3, 4):
        w = np.exp(2j * np.pi * np.arange(q) / q)
        e = np.exp(2j * np.pi * (np.arange(q) + 0.5) / q)
        m = catalog.complete2_module(q, w, e)
        assert check_module(m).ok == (q in (1, 4))
        f = catalog.complete2_module(q, w, e, variant="fourier")
        assert check_module(f).ok
    with pytest.raises(ValueError):
        catalog.complete2_module(2, [1, 1], [1, -1])


def test_random_module_infeasible():
    g = catalog.three_vertex()
    with pytest.raises(InfeasibleDimensionError):
        random_module(g, {"1": 0, "2": 1, "3": 0}, seed=0)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["rose:1", "rose:2", "rose:3", "complete2", "three_vertex"]),
       st.lists(st.integers(0, 3), min_size=3, max_size=3), st.integers(0, 2**32 - 1))
def test_random_module_satisfies_axioms(name, ds, seed):
    g = catalog.graph(name)
    d = dict(zip(g.vertices, ds))
    try:
        m = random_module(g, d, seed=seed)
    except InfeasibleDimensionError:
        return
    assert check_module(m).ok


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_direct_sum_and_conjugate_valid(a, b, seed):
    g = catalog.rose(2)
    rng = np.random.default_rng(seed)
    m = direct_sum(random_module(g, {"v": a}, rng), random_module(g, {"v": b}, rng))
    assert m.total == a + b and check_module(m).ok
    u = m.conjugate({"v": random_unitary(a + b, rng)})
    assert check_module(u).ok


def test_tensor_module():
    s = 1 / np.sqrt(2)
    t = tensor_module(catalog.three_by_three(), catalog.sphere_module([s, 1j * s]))
    assert t.total == 3 and check_module(t).ok
    with pytest.raises(ValueError):
        tensor_module(catalog.sphere_module([1, 0, 0]), catalog.three_by_three())


def test_json_round_trip(tmp_path):
    for name, m in catalog.bundled_modules().items():
        path = tmp_path / f"{name}.json"
        save_module(m, str(path))
        back = load_module(str(path))
        assert back.dims == m.dims
        for e in m.graph.edges:
            assert np.array_equal(back[e.id], m[e.id])
        assert back.to_json() == m.to_json()


def test_graph_reference_forms(tmp_path):
    m = catalog.three_by_three()
    by_name = module_from_dict(m.to_dict("rose:2"))
    assert np.array_equal(by_name["a1"], m["a1"])
    from kgraphrep.kgraph import save_graph
    save_graph(m.graph, str(tmp_path / "g.json"))
    save_module(m, str(tmp_path / "m.json"), graph_ref="g.json")
    assert load_module(str(tmp_path / "m.json")).graph == m.graph
    with pytest.raises(ModuleStructureError):
        module_from_dict({"graph": "rose:2", "dims": {"v": 1}})


def test_restrict_graded():
    m = direct_sum(catalog.three_by_three(), catalog.sphere_module([0.6, 0.8]))
    basis = np.eye(4)[:, 3:]
    sub = m.restrict(basis)
    assert sub.dims == {"v": 1}
    assert np.allclose(sub["a1"], [[0.6]])
