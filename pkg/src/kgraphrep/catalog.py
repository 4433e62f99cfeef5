"""Named example graphs and modules.

Graph naming on the command line: ``rose:N``, ``complete2``, ``three_vertex``,
``two_graph_4loops``, ``two_graph_example``.

Edge conventions.  In ``complete2`` the edge ``aij`` has range i and source j,
so A_aij maps H_i -> H_j.  In ``three_vertex`` the edge ``ij`` goes from j to i
(range i, source j), so A_ij maps H_i -> H_1.
"""
from __future__ import annotations

import numpy as np

from .kgraph import Edge, KGraph
from .module import MatrixModule, tensor_module


# -- graphs -------------------------------------------------------------------

def rose(n: int) -> KGraph:
    edges = [Edge(f"a{i}", 1, "v", "v") for i in range(1, n + 1)]
    return KGraph(1, ["v"], edges, name=f"rose:{n}")


def complete2() -> KGraph:
    edges = [Edge(f"a{i}{j}", 1, str(j), str(i)) for i in (1, 2) for j in (1, 2)]
    return KGraph(1, ["1", "2"], edges, name="complete2")


def three_vertex() -> KGraph:
    edges = [Edge("11", 1, "1", "1"), Edge("21", 1, "1", "2"), Edge("31", 1, "1", "3")]
    return KGraph(1, ["1", "2", "3"], edges, name="three_vertex")


def two_graph_4loops() -> KGraph:
    edges = [Edge("f1", 1, "v", "v"), Edge("f2", 1, "v", "v"),
             Edge("g1", 2, "v", "v"), Edge("g2", 2, "v", "v")]
    squares = [((f, g), (g, f)) for f in ("f1", "f2") for g in ("g1", "g2")]
    return KGraph(2, ["v"], edges, squares, name="two_graph_4loops")


def two_graph_example() -> KGraph:
    """One vertex, ν of colour 1, μ1 and μ2 of colour 2, ν∘μ1 = μ2∘ν and ν∘μ2 = μ1∘ν."""
    edges = [Edge("nu", 1, "v", "v"), Edge("mu1", 2, "v", "v"), Edge("mu2", 2, "v", "v")]
    squares = [(("nu", "mu1"), ("mu2", "nu")), (("nu", "mu2"), ("mu1", "nu"))]
    return KGraph(2, ["v"], edges, squares, name="two_graph_example")


GRAPHS = {
    "complete2": complete2,
    "three_vertex": three_vertex,
    "two_graph_4loops": two_graph_4loops,
    "two_graph_example": two_graph_example,
}


def graph(name: str) -> KGraph:
    key = name.strip()
    if key.startswith("rose"):
        n = key[4:].lstrip(":-_")
        if not n.isdigit() or int(n) < 1:
            raise KeyError(f"bad rose spec {name!r}")
        return rose(int(n))
    if key not in GRAPHS:
        raise KeyError(f"unknown catalog graph {name!r}")
    return GRAPHS[key]()


def all_graphs() -> dict:
    out = {f"rose:{n}": rose(n) for n in (1, 2, 3)}
    out.update({k: f() for k, f in GRAPHS.items()})
    return out


# -- modules ------------------------------------------------------------------

def sphere_module(z) -> MatrixModule:
    """One-dimensional rose-n module a_i -> z_i with Σ|z_i|² = 1."""
    z = np.asarray(z, dtype=complex)
    g = rose(len(z))
    return MatrixModule(g, {"v": 1}, {f"a{i + 1}": [[z[i]]] for i in range(len(z))},
                        name=f"sphere{len(z)}")


def reducible_example() -> MatrixModule:
    """C^3 with e0 -> (e1, e2)/√2 under A1⊕A2, e1 -> (0, e1), e2 -> (e2, 0)."""
    s = 1 / np.sqrt(2)
    a1 = np.array([[0, 0, 0], [s, 0, 0], [0, 0, 1]], dtype=complex)
    a2 = np.array([[0, 0, 0], [0, 1, 0], [s, 0, 0]], dtype=complex)
    return MatrixModule(rose(2), {"v": 3}, {"a1": a1, "a2": a2}, name="reducible3")


def three_by_three() -> MatrixModule:
    """The irreducible 3-dimensional rose-2 module whose Ω has P-dimension 4."""
    r3, r6 = np.sqrt(3), np.sqrt(6)
    a1 = np.array([[1 / r3, 1 / 3, 0],
                   [1 / r3, 1 / 3, 0],
                   [1 / r3, -2 / 3, 0]], dtype=complex)
    a2 = np.array([[0, 1 / 3, -2 / r6],
                   [0, 1 / 3, 1 / r6],
                   [0, 1 / 3, 1 / r6]], dtype=complex)
    return MatrixModule(rose(2), {"v": 3}, {"a1": a1, "a2": a2}, name="three_by_three")


def _check_distinct(x, label):
    x = np.asarray(x, dtype=complex)
    for i in range(len(x)):
        for j in range(i):
            if abs(x[i] - x[j]) < 1e-12:
                raise ValueError(f"{label} entries must be pairwise distinct")
    return x


def complete2_module(q: int, omega, eps, variant: str = "literal") -> MatrixModule:
    """Dimension (q, q) module on the complete graph.

    A11 = diag(ω)/√2, A22 = diag(ε)/√2, A21 = I/√2 and
    ``literal``: A12 = (J − 2I)/√(2q), entries (−1)^{δij}/√(2q);
    ``fourier``: A12 = F/√2 with F the unitary DFT matrix.
    The literal A12 only satisfies A12^*A12 = I/2 when q is 1 or 4.
    """
    omega = _check_distinct(omega, "omega")
    eps = _check_distinct(eps, "eps")
    if len(omega) != q or len(eps) != q:
        raise ValueError("omega and eps need q entries")
    s = 1 / np.sqrt(2)
    if variant == "literal":
        a12 = (np.ones((q, q)) - 2 * np.eye(q)) / np.sqrt(2 * q)
    elif variant == "fourier":
        j = np.arange(q)
        a12 = np.exp(2j * np.pi * np.outer(j, j) / q) / np.sqrt(2 * q)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    mats = {
        "a11": np.diag(omega) * s,
        "a22": np.diag(eps) * s,
        "a12": a12.astype(complex),
        "a21": np.eye(q, dtype=complex) * s,
    }
    return MatrixModule(complete2(), {"1": q, "2": q}, mats, name=f"complete2_{variant}_q{q}")


def m_z(z: complex) -> MatrixModule:
    """Three-vertex module with H = H_1 = C and A_11 = z."""
    g = three_vertex()
    mats = {"11": [[z]], "21": np.zeros((1, 0)), "31": np.zeros((1, 0))}
    return MatrixModule(g, {"1": 1, "2": 0, "3": 0}, mats, name="M_z")


def omega(pi: MatrixModule) -> MatrixModule:
    """Rose-2 module (A1, A2) on H -> complete-graph module on H⊕H with B_ij = A_j."""
    a = [pi.mats["a1"], pi.mats["a2"]]
    d = pi.total
    mats = {f"a{i}{j}": a[j - 1] for i in (1, 2) for j in (1, 2)}
    return MatrixModule(complete2(), {"1": d, "2": d}, mats, name=f"Omega({pi.name})")


def psi(sigma: MatrixModule) -> MatrixModule:
    """Complete-graph module -> rose-2 module on H_1⊕H_2.

    A1 = [[B11, 0], [B12, 0]] and A2 = [[0, B21], [0, B22]].
    """
    d1, d2 = sigma.dims["1"], sigma.dims["2"]
    B = sigma.mats
    a1 = np.zeros((d1 + d2, d1 + d2), dtype=complex)
    a2 = np.zeros_like(a1)
    a1[:d1, :d1] = B["a11"]
    a1[d1:, :d1] = B["a12"]
    a2[:d1, d1:] = B["a21"]
    a2[d1:, d1:] = B["a22"]
    return MatrixModule(rose(2), {"v": d1 + d2}, {"a1": a1, "a2": a2}, name=f"Psi({sigma.name})")


def random_rank_module(d: int, r1: int, r2: int, rng: np.random.Generator) -> MatrixModule:
    """Rose-2 module on C^d with rank(A1) ≤ r1 and rank(A2) ≤ r2 (generically equal).

    A_i = P_i X_i with P_i a d x r_i isometry and [X1; X2] an isometry C^d -> C^{r1+r2}.
    """
    if r1 + r2 < d:
        raise ValueError("need r1 + r2 >= d for an isometry")

    def gauss(a, b):
        return rng.standard_normal((a, b)) + 1j * rng.standard_normal((a, b))

    x, _ = np.linalg.qr(gauss(r1 + r2, d))
    p1, _ = np.linalg.qr(gauss(d, r1))
    p2, _ = np.linalg.qr(gauss(d, r2))
    return MatrixModule(rose(2), {"v": d}, {"a1": p1 @ x[:r1], "a2": p2 @ x[r1:]},
                        name=f"rank{r1},{r2}")


def doubled(pi: MatrixModule) -> MatrixModule:
    """π'_d on H⊕H: a1(ξ,η) = (A1ξ, A2ξ), a2(ξ,η) = (A1η, A2η)."""
    a1, a2 = pi.mats["a1"], pi.mats["a2"]
    d = pi.total
    z = np.zeros((d, d), dtype=complex)
    m1 = np.block([[a1, z], [a2, z]])
    m2 = np.block([[z, a1], [z, a2]])
    return MatrixModule(rose(2), {"v": 2 * d}, {"a1": m1, "a2": m2}, name=f"doubled({pi.name})")


def two_dim_family(lam, mu, c11, c21, c12_phase) -> MatrixModule:
    """Two-dimensional modules on the 4-loop 2-graph.

    A1 = diag(λ1, λ2) with |λ_i| < 1 distinct, B_j = μ_j I with |μ1|²+|μ2|² = 1,
    A2 = (c_ij) with |c11|²+|c21|² = 1−|λ1|², c21 ≠ 0,
    |c12|² = (1−|λ2|²)/(1+|c11|²/|c21|²) and c22 = −conj(c11) c12 / conj(c21).
    """
    l1, l2 = complex(lam[0]), complex(lam[1])
    c11, c21 = complex(c11), complex(c21)
    if abs(c21) == 0:
        raise ValueError("c21 must be nonzero")
    if abs(abs(c11) ** 2 + abs(c21) ** 2 - (1 - abs(l1) ** 2)) > 1e-12:
        raise ValueError("|c11|^2 + |c21|^2 must equal 1 - |λ1|^2")
    r12 = np.sqrt((1 - abs(l2) ** 2) / (1 + abs(c11) ** 2 / abs(c21) ** 2))
    c12 = r12 * np.exp(1j * c12_phase)
    c22 = -np.conj(c11) * c12 / np.conj(c21)
    a1 = np.diag([l1, l2])
    a2 = np.array([[c11, c12], [c21, c22]])
    b1, b2 = mu[0] * np.eye(2), mu[1] * np.eye(2)
    return MatrixModule(two_graph_4loops(), {"v": 2},
                        {"f1": a1, "f2": a2, "g1": b1, "g2": b2}, name="two_dim_family")


TWO_DIM_FAMILY_DIMENSION = 2 + 2 + 3 + 3 + 1  # B × B × S3 × (S3 \ S1) × S1


def random_two_dim_family(rng: np.random.Generator) -> MatrixModule:
    def ball():
        r = np.sqrt(rng.uniform(0.01, 0.9))
        return r * np.exp(2j * np.pi * rng.uniform())

    lam = (ball(), ball())
    mu = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    mu /= np.linalg.norm(mu)
    c = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    c *= np.sqrt(1 - abs(lam[0]) ** 2) / np.linalg.norm(c)
    return two_dim_family(lam, mu, c[0], c[1], rng.uniform(0, 2 * np.pi))


def example_2graph_module(alpha: complex, beta: complex) -> MatrixModule:
    """Two-dimensional module on the ν, μ1, μ2 graph: ν swaps, μ1 = diag(α,β), μ2 = diag(β,α)."""
    g = two_graph_example()
    mats = {"nu": np.array([[0, 1], [1, 0]], dtype=complex),
            "mu1": np.diag([alpha, beta]).astype(complex),
            "mu2": np.diag([beta, alpha]).astype(complex)}
    return MatrixModule(g, {"v": 2}, mats, name="example_2graph")


def bundled_modules(seed: int = 0) -> dict:
    """Every valid bundled module, keyed by name (deterministic)."""
    from .module import random_module
    rng = np.random.default_rng(seed)
    s = 1 / np.sqrt(2)
    out = {
        "sphere2": sphere_module([0.6, 0.8j]),
        "sphere3": sphere_module([1, 0, 0]),
        "reducible3": reducible_example(),
        "three_by_three": three_by_three(),
        "omega_three_by_three": omega(three_by_three()),
        "complete2_q1": complete2_module(1, [1], [1j]),
        "complete2_q4": complete2_module(4, np.exp(2j * np.pi * np.arange(4) / 4),
                                         np.exp(2j * np.pi * (np.arange(4) + 0.5) / 4)),
        "complete2_fourier_q3": complete2_module(3, np.exp(2j * np.pi * np.arange(3) / 3),
                                                 np.exp(2j * np.pi * (np.arange(3) + 0.5) / 3),
                                                 variant="fourier"),
        "M_z": m_z(np.exp(0.3j)),
        "three_vertex_random": random_module(three_vertex(), {"1": 2, "2": 1, "3": 1}, rng),
        "tensor_1x1": tensor_module(sphere_module([s, s]), sphere_module([0.6, 0.8])),
        "tensor_3x2": tensor_module(three_by_three(), random_module(rose(2), {"v": 2}, rng)),
        "two_dim_family": random_two_dim_family(rng),
        "example_2graph": example_2graph_module(0.6, 0.8j),
    }
    return out


def pdim_sandwich_check(rho: MatrixModule) -> dict:
    """Pdim of Ψ(ρ) over the rose ≤ Pdim of ρ over the complete graph ≤ twice the former."""
    from .analysis import pdim
    _, inner = pdim(psi(rho))
    _, outer = pdim(rho)
    return {"pdim_rose": inner, "pdim_complete": outer,
            "left": inner <= outer, "right": outer <= 2 * inner,
            "ok": inner <= outer <= 2 * inner}
