import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kgraphrep import analysis as an
from kgraphrep import catalog
from kgraphrep.lift import verify_relations
from kgraphrep.linalg import rank
from kgraphrep.module import check_module, random_module


def test_omega_of_sphere_point_irreducible():
    om = catalog.omega(catalog.sphere_module([0.6, 0.8j]))
    assert om.dims == {"1": 1, "2": 1}
    assert check_module(om).ok and an.is_irreducible(om)
    # B_ij = a_j
    assert om["a11"][0, 0] == om["a21"][0, 0] == 0.6
    assert om["a12"][0, 0] == om["a22"][0, 0] == 0.8j


def test_omega_degenerate_pdim_vector():
    om = catalog.omega(catalog.sphere_module([1, 0]))
    assert not an.is_irreducible(om)
    vec, total = an.pdim(om)
    assert vec == {"1": 1, "2": 0} and total == 1


def test_sandwich_examples():
    chk = catalog.pdim_sandwich_check(catalog.omega(catalog.sphere_module([0.6, 0.8])))
    assert (chk["pdim_rose"], chk["pdim_complete"]) == (1, 2) and chk["ok"]
    chk = catalog.pdim_sandwich_check(catalog.omega(catalog.sphere_module([1, 0])))
    assert (chk["pdim_rose"], chk["pdim_complete"]) == (1, 1) and chk["ok"]
    chk = catalog.pdim_sandwich_check(catalog.omega(catalog.three_by_three()))
    assert (chk["pdim_rose"], chk["pdim_complete"]) == (3, 4) and chk["ok"]


def test_psi_blocks():
    rng = np.random.default_rng(0)
    sig = random_module(catalog.complete2(), {"1": 2, "2": 1}, rng)
    p = catalog.psi(sig)
    assert p.total == sig.total
    assert np.array_equal(p["a1"][:2, :2], sig["a11"])
    assert np.array_equal(p["a1"][2:, :2], sig["a12"])
    assert np.array_equal(p["a2"][:2, 2:], sig["a21"])
    assert np.array_equal(p["a2"][2:, 2:], sig["a22"])
    assert not p["a1"][:, 2:].any() and not p["a2"][:, :2].any()
    assert check_module(p).ok


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 2), st.integers(1, 2), st.integers(0, 2**32 - 1))
def test_psi_preserves_irreducibility(d1, d2, seed):
    sig = random_module(catalog.complete2(), {"1": d1, "2": d2}, np.random.default_rng(seed))
    if an.is_irreducible(sig):
        assert an.is_irreducible(catalog.psi(sig))


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_round_trip_is_doubled(d, seed):
    pi = random_module(catalog.rose(2), {"v": d}, np.random.default_rng(seed))
    back = catalog.psi(catalog.omega(pi))
    dbl = catalog.doubled(pi)
    assert check_module(back).ok and check_module(dbl).ok
    assert an.module_isomorphic(back, dbl)
    assert an.pdim(back)[1] == an.pdim(pi)[1]


def _rank_identity_cases(n, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        d = int(rng.integers(1, 5))
        r1 = int(rng.integers(1, d + 1))
        r2 = int(rng.integers(max(1, d - r1), d + 1))
        pi = catalog.random_rank_module(d, r1, r2, rng)
        if an.is_irreducible(pi):
            out.append(pi)
    return out


def test_omega_rank_identity():
    cases = _rank_identity_cases(100)
    assert any(rank(pi["a1"]) + rank(pi["a2"]) < 2 * pi.total for pi in cases)
    for pi in cases:
        om = catalog.omega(pi)
        assert an.pdim(om)[1] == rank(pi["a1"]) + rank(pi["a2"])


def test_random_rank_module():
    rng = np.random.default_rng(4)
    m = catalog.random_rank_module(3, 1, 2, rng)
    assert check_module(m).ok
    assert (rank(m["a1"]), rank(m["a2"])) == (1, 2)
    with pytest.raises(ValueError):
        catalog.random_rank_module(3, 1, 1, rng)


def test_tensor_modules_relations():
    s = 1 / np.sqrt(2)
    rng = np.random.default_rng(5)
    for a, b in [(catalog.sphere_module([s, s]), catalog.sphere_module([0.6, 0.8j])),
                 (random_module(catalog.rose(2), {"v": 2}, rng), catalog.three_by_three())]:
        from kgraphrep.module import tensor_module
        t = tensor_module(a, b)
        assert check_module(t).ok
        assert verify_relations(t, depth=(2, 2)).ok


def test_two_dim_family():
    rng = np.random.default_rng(6)
    assert catalog.TWO_DIM_FAMILY_DIMENSION == 11
    for _ in range(25):
        m = catalog.random_two_dim_family(rng)
        assert check_module(m).ok
        assert an.is_irreducible(m)
    with pytest.raises(ValueError):
        catalog.two_dim_family((0.1, 0.2), (1, 0), 0.5, 0, 0.0)


def test_example_2graph_module():
    m = catalog.example_2graph_module(0.6, 0.8j)
    assert check_module(m).ok
    assert verify_relations(m, depth=(2, 2)).ok
