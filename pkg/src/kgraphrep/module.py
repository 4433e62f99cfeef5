"""Finite-dimensional matrix modules over a k-graph.

A module assigns a Hilbert space H_v = C^{d_v} to each vertex and a matrix
A_λ : H_{r(λ)} -> H_{s(λ)} (shape d_{s(λ)} x d_{r(λ)}) to each edge.  The
axioms are the per-colour isometry identity

    sum_{λ in vΛ^{e_i}} A_λ^* A_λ = I   (whenever vΛ^{e_i} is nonempty)

and compatibility with factorisation squares: f∘g = g'∘f' implies
A_g A_f = A_{f'} A_{g'}.
"""
from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .kgraph import KGraph, Path, deg_unit

DEFAULT_TOL = 1e-9


class ModuleStructureError(ValueError):
    """Shapes or keys inconsistent with the dimension vector."""


class InfeasibleDimensionError(ValueError):
    """MR(d) is empty: some d_v exceeds D(v)."""


class MatrixModule:
    """Dimension vector plus one complex matrix per edge.  Treated as immutable."""

    def __init__(self, graph: KGraph, dims: dict, mats: dict, name: str = ""):
        self.graph = graph
        self.dims = {v: int(dims.get(v, 0)) for v in graph.vertices}
        self.name = name
        self.mats = {}
        for e in graph.edges:
            ds, dr = self.dims[e.source], self.dims[e.range]
            a = mats.get(e.id)
            if a is None:
                if ds * dr:
                    raise ModuleStructureError(f"missing matrix for edge {e.id!r}")
                a = np.zeros((ds, dr), dtype=complex)
            a = np.asarray(a, dtype=complex)
            if a.ndim != 2 or a.shape != (ds, dr):
                raise ModuleStructureError(
                    f"edge {e.id!r}: expected shape {(ds, dr)}, got {a.shape}")
            a = a.copy()
            a.setflags(write=False)
            self.mats[e.id] = a
        extra = set(mats) - set(self.mats)
        if extra:
            raise ModuleStructureError(f"matrices for unknown edges {sorted(extra)}")
        self.offsets = {}
        off = 0
        for v in graph.vertices:
            self.offsets[v] = off
            off += self.dims[v]
        self.total = off
        self._cache = {}

    def __getitem__(self, eid: str) -> np.ndarray:
        return self.mats[eid]

    def __repr__(self) -> str:
        return f"MatrixModule({self.name or '?'}, d={self.dims})"

    def block(self, v: str) -> slice:
        return slice(self.offsets[v], self.offsets[v] + self.dims[v])

    def projection(self, v: str) -> np.ndarray:
        p = np.zeros((self.total, self.total), dtype=complex)
        b = self.block(v)
        p[b, b] = np.eye(self.dims[v])
        return p

    def embedded(self, eid: str) -> np.ndarray:
        """A_λ as a D x D operator on ⊕H_v (block row s(λ), block column r(λ))."""
        e = self.graph.edge[eid]
        out = np.zeros((self.total, self.total), dtype=complex)
        out[self.block(e.source), self.block(e.range)] = self.mats[eid]
        return out

    def generators(self) -> list:
        """Vertex projections followed by embedded edge operators."""
        gens = [self.projection(v) for v in self.graph.vertices if self.dims[v]]
        gens += [self.embedded(e.id) for e in self.graph.edges
                 if self.mats[e.id].size]
        return gens

    def conjugate(self, unitaries: dict) -> "MatrixModule":
        """The module U·M: A_λ -> U_{s(λ)} A_λ U_{r(λ)}^*."""
        mats = {}
        for e in self.graph.edges:
            mats[e.id] = unitaries[e.source] @ self.mats[e.id] @ unitaries[e.range].conj().T
        return MatrixModule(self.graph, self.dims, mats, name=self.name + "^U")

    def restrict(self, basis: np.ndarray) -> "MatrixModule":
        """Restriction to an invariant graded subspace given by orthonormal columns.

        Each column must be supported in one vertex block.
        """
        per_vertex = {}
        for v in self.graph.vertices:
            b = self.block(v)
            cols = [j for j in range(basis.shape[1])
                    if np.linalg.norm(basis[b, j]) > 0.5]
            per_vertex[v] = basis[b][:, cols]
        mats = {}
        for e in self.graph.edges:
            qs, qr = per_vertex[e.source], per_vertex[e.range]
            mats[e.id] = qs.conj().T @ self.mats[e.id] @ qr
        return MatrixModule(self.graph, {v: per_vertex[v].shape[1] for v in per_vertex},
                            mats, name=self.name + "|sub")

    # -- serialisation ----------------------------------------------------

    def to_dict(self, graph_ref=None) -> dict:
        ref = graph_ref if graph_ref is not None else self.graph.to_dict()
        return {
            "graph": ref,
            "dims": {v: self.dims[v] for v in self.graph.vertices},
            "matrices": {
                e.id: [[[float(z.real), float(z.imag)] for z in row] for row in self.mats[e.id]]
                for e in self.graph.edges
            },
        }

    def to_json(self, graph_ref=None) -> str:
        return json.dumps(self.to_dict(graph_ref), indent=1) + "\n"


def _resolve_graph(ref, base_dir: str = ".") -> KGraph:
    from . import catalog
    if isinstance(ref, dict):
        return KGraph.from_dict(ref)
    if isinstance(ref, str):
        path = ref if os.path.isabs(ref) else os.path.join(base_dir, ref)
        if os.path.exists(path):
            from .kgraph import load_graph
            return load_graph(path)
        return catalog.graph(ref)
    raise ModuleStructureError(f"cannot interpret graph reference {ref!r}")


def module_from_dict(data: dict, base_dir: str = ".", graph: KGraph | None = None) -> MatrixModule:
    try:
        g = graph if graph is not None else _resolve_graph(data["graph"], base_dir)
        mats = {}
        for eid, rows in data["matrices"].items():
            arr = np.array(rows, dtype=float)
            if arr.size == 0:
                mats[eid] = np.zeros((len(rows), 0), dtype=complex)
                continue
            z = np.empty(arr.shape[:-1], dtype=complex)
            z.real, z.imag = arr[..., 0], arr[..., 1]  # keeps signed zeros
            mats[eid] = z
        return MatrixModule(g, data["dims"], mats)
    except (KeyError, TypeError, IndexError) as exc:
        raise ModuleStructureError(f"malformed module document: {exc}") from exc


def load_module(path: str, graph: KGraph | None = None) -> MatrixModule:
    with open(path) as fh:
        data = json.load(fh)
    return module_from_dict(data, os.path.dirname(os.path.abspath(path)), graph)


def save_module(m: MatrixModule, path: str, graph_ref=None) -> None:
    with open(path, "w") as fh:
        fh.write(m.to_json(graph_ref))


# -- axioms -------------------------------------------------------------------

@dataclass
class ModuleReport:
    pythagorean: float = 0.0
    squares: float = 0.0
    path_isometry: float = 0.0
    norm_excess: float = 0.0
    tol: float = DEFAULT_TOL
    details: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(self.pythagorean, self.squares, self.path_isometry, self.norm_excess)

    @property
    def ok(self) -> bool:
        return self.max_residual < self.tol

    def to_dict(self) -> dict:
        return {"valid": self.ok, "tol": self.tol, "pythagorean": self.pythagorean,
                "squares": self.squares, "path_isometry": self.path_isometry,
                "norm_excess": self.norm_excess, "details": self.details}


def path_operator(m: MatrixModule, p: Path) -> np.ndarray:
    """A_p = A_{e_N} ... A_{e_1} for p = e_1∘...∘e_N, mapping H_{r(p)} -> H_{s(p)}."""
    out = np.eye(m.dims[p.range], dtype=complex)
    for eid in p.edges:
        out = m.mats[eid] @ out
    return out


def word_operator(m: MatrixModule, edges) -> np.ndarray:
    """Same product for an arbitrary (not necessarily normal) composable word."""
    r = m.graph.edge[edges[0]].range
    out = np.eye(m.dims[r], dtype=complex)
    for eid in edges:
        out = m.mats[eid] @ out
    return out


def pythagorean_residuals(m: MatrixModule) -> dict:
    """‖Σ_{λ∈vΛ^{e_i}} A_λ^*A_λ − I‖ per (vertex, colour) with edges."""
    g = m.graph
    out = {}
    for v in g.vertices:
        dv = m.dims[v]
        for c in range(1, g.k + 1):
            edges = g.edges_into(v, c)
            if not edges or dv == 0:
                continue
            s = sum(m.mats[e].conj().T @ m.mats[e] for e in edges)
            out[(v, c)] = float(np.linalg.norm(s - np.eye(dv), 2))
    return out


def small_degrees(k: int, total: int):
    for m in itertools.product(range(total + 1), repeat=k):
        if 0 < sum(m) <= total:
            yield m


def check_module(m: MatrixModule, tol: float = DEFAULT_TOL, path_depth: int = 3) -> ModuleReport:
    g = m.graph
    rep = ModuleReport(tol=tol)
    py = pythagorean_residuals(m)
    rep.pythagorean = max(py.values(), default=0.0)
    rep.details["pythagorean"] = {f"{v}:{c}": r for (v, c), r in py.items()}
    for (f, gg), (g2, f2) in g.squares:
        lhs = m.mats[gg] @ m.mats[f]
        rhs = m.mats[f2] @ m.mats[g2]
        rep.squares = max(rep.squares, float(np.linalg.norm(lhs - rhs, 2)) if lhs.size else 0.0)
    for e in g.edges:
        a = m.mats[e.id]
        if a.size:
            rep.norm_excess = max(rep.norm_excess, float(np.linalg.norm(a, 2)) - 1.0)
    for v in g.vertices:
        dv = m.dims[v]
        if dv == 0:
            continue
        for deg in small_degrees(g.k, path_depth):
            s = np.zeros((dv, dv), dtype=complex)
            for p in g.paths_le(v, deg):
                a = path_operator(m, p)
                s += a.conj().T @ a
            rep.path_isometry = max(rep.path_isometry, float(np.linalg.norm(s - np.eye(dv), 2)))
    return rep


# -- constructors -------------------------------------------------------------

def D_of(g: KGraph, d: dict, v: str) -> int:
    """D(v) = Σ_{λ∈vΛ^1} d_{s(λ)} (1-graphs)."""
    return sum(d.get(g.edge[e].source, 0) for e in g.edges_into(v, 1))


def random_module(g: KGraph, d: dict, seed=None) -> MatrixModule:
    """Column-orthonormalised complex Gaussian R_v, sliced into edge blocks."""
    if g.k != 1:
        raise ValueError("random_module samples 1-graphs only")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    d = {v: int(d.get(v, 0)) for v in g.vertices}
    for v in g.vertices:
        if d[v] > D_of(g, d, v):
            raise InfeasibleDimensionError(
                f"d_{v} = {d[v]} exceeds D({v}) = {D_of(g, d, v)}; MR(d) is empty")
    mats = {}
    for v in g.vertices:
        dv = d[v]
        edges = g.edges_into(v, 1)
        if dv == 0:
            continue
        Dv = D_of(g, d, v)
        z = rng.standard_normal((Dv, dv)) + 1j * rng.standard_normal((Dv, dv))
        q, _ = np.linalg.qr(z)
        row = 0
        for e in edges:
            ds = d[g.edge[e].source]
            mats[e] = q[row:row + ds, :]
            row += ds
    return MatrixModule(g, d, mats, name=f"random{tuple(d.values())}")


def direct_sum(m1: MatrixModule, m2: MatrixModule) -> MatrixModule:
    if m1.graph != m2.graph:
        raise ValueError("direct_sum needs modules over the same graph")
    g = m1.graph
    dims = {v: m1.dims[v] + m2.dims[v] for v in g.vertices}
    mats = {}
    for e in g.edges:
        a, b = m1.mats[e.id], m2.mats[e.id]
        out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=complex)
        out[:a.shape[0], :a.shape[1]] = a
        out[a.shape[0]:, a.shape[1]:] = b
        mats[e.id] = out
    return MatrixModule(g, dims, mats, name=f"{m1.name}+{m2.name}")


def tensor_module(p1: MatrixModule, p2: MatrixModule, graph: KGraph | None = None) -> MatrixModule:
    """Rose-2 modules (A_1,A_2), (B_1,B_2) -> A_i⊗I on f_i and I⊗B_j on g_j."""
    from . import catalog
    g = graph or catalog.two_graph_4loops()
    e1 = [e.id for e in p1.graph.edges]
    e2 = [e.id for e in p2.graph.edges]
    if len(p1.graph.vertices) != 1 or len(e1) != 2 or len(p2.graph.vertices) != 1 or len(e2) != 2:
        raise ValueError("tensor_module expects two rose-2 modules")
    d1, d2 = p1.total, p2.total
    mats = {
        "f1": np.kron(p1.mats[e1[0]], np.eye(d2)),
        "f2": np.kron(p1.mats[e1[1]], np.eye(d2)),
        "g1": np.kron(np.eye(d1), p2.mats[e2[0]]),
        "g2": np.kron(np.eye(d1), p2.mats[e2[1]]),
    }
    return MatrixModule(g, {g.vertices[0]: d1 * d2}, mats, name=f"{p1.name}⊗{p2.name}")


def module_from_blocks(g: KGraph, dims: dict, mats: dict, name: str = "") -> MatrixModule:
    return MatrixModule(g, dims, mats, name=name)
