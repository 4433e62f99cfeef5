"""Depth-truncated model of the lifted Hilbert space L.

At depth m (a degree) the space is ⊕_{λ ∈ Λ^{≤m}} H_{s(λ)}, one block per key
λ, the keys ranging over vΛ^{≤m} for every vertex v.  Blocks are mutually
orthogonal.  Depth m embeds isometrically in depth n ≥ m via the caret identity

    [λ, ξ] = Σ_{μ ∈ s(λ)Λ^{≤ n−d(λ)}} [λμ, A_μ ξ].

Every identity is checked at a depth where both sides are exact, so the only
error is floating point.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .kgraph import Path, deg_add, deg_join, deg_le, deg_sub, deg_unit, deg_zero
from .module import MatrixModule, path_operator

MAX_KEYS = 10**6


class LiftMemoryError(MemoryError):
    """The requested truncation has more keys than the guard allows."""


class LiftSpace:
    def __init__(self, m: MatrixModule, depth: tuple):
        self.depth = depth
        self.keys = m.graph.all_paths_le(depth)
        self.index = {}
        self.offsets = []
        off = 0
        for i, key in enumerate(self.keys):
            self.index[key] = i
            self.offsets.append(off)
            off += m.dims[key.source]
        self.offsets.append(off)
        self.size = off

    def block(self, key: Path) -> slice:
        i = self.index[key]
        return slice(self.offsets[i], self.offsets[i + 1])


class Lift:
    def __init__(self, m: MatrixModule, max_keys: int = MAX_KEYS):
        self.module = m
        self.graph = m.graph
        self.max_keys = max_keys
        self._spaces = {}
        self._mats = {}

    # -- bookkeeping ------------------------------------------------------

    def count_keys(self, depth: tuple) -> int:
        g = self.graph

        @lru_cache(maxsize=None)
        def count(v, m):
            for c in range(1, g.k + 1):
                if m[c - 1] > 0:
                    rest = tuple(x - (1 if i == c - 1 else 0) for i, x in enumerate(m))
                    edges = g.edges_into(v, c)
                    if not edges:
                        return count(v, rest)
                    return sum(count(g.edge[e].source, rest) for e in edges)
            return 1

        return sum(count(v, tuple(depth)) for v in g.vertices)

    def space(self, depth) -> LiftSpace:
        depth = tuple(depth)
        sp = self._spaces.get(depth)
        if sp is None:
            n = self.count_keys(depth)
            if n > self.max_keys:
                raise LiftMemoryError(
                    f"depth {depth} needs {n} keys, above the limit of {self.max_keys}")
            sp = self._spaces[depth] = LiftSpace(self.module, depth)
        return sp

    def embed_matrix(self, m, n) -> np.ndarray:
        m, n = tuple(m), tuple(n)
        if not deg_le(m, n):
            raise ValueError(f"cannot embed depth {m} into {n}")
        key = ("E", m, n)
        if key in self._mats:
            return self._mats[key]
        src, dst = self.space(m), self.space(n)
        g = self.graph
        out = np.zeros((dst.size, src.size), dtype=complex)
        for lam in src.keys:
            if not self.module.dims[lam.source]:
                continue
            for mu in g.paths_le(lam.source, deg_sub(n, lam.degree)):
                a = path_operator(self.module, mu)
                if a.size:
                    out[dst.block(g.compose(lam, mu)), src.block(lam)] = a
        self._mats[key] = out
        return out

    def x_matrix(self, p: Path, m) -> np.ndarray:
        """X_p from depth m to depth m + d(p)."""
        m = tuple(m)
        key = ("X", p, m)
        if key in self._mats:
            return self._mats[key]
        src, dst = self.space(m), self.space(deg_add(m, p.degree))
        out = np.zeros((dst.size, src.size), dtype=complex)
        for lam in src.keys:
            if lam.range == p.source and self.module.dims[lam.source]:
                out[dst.block(self.graph.compose(p, lam)), src.block(lam)] = np.eye(
                    self.module.dims[lam.source])
        self._mats[key] = out
        return out

    def adj_depths(self, p: Path, m) -> tuple:
        n = deg_join(tuple(m), p.degree)
        return n, deg_sub(n, p.degree)

    def xadj_matrix(self, p: Path, m) -> np.ndarray:
        """X_p^* from depth m to depth (m ∨ d(p)) − d(p): embed, then strip the prefix p."""
        m = tuple(m)
        key = ("Xa", p, m)
        if key in self._mats:
            return self._mats[key]
        n, out_depth = self.adj_depths(p, m)
        mid, dst = self.space(n), self.space(out_depth)
        sel = np.zeros((dst.size, mid.size), dtype=complex)
        g = self.graph
        for kappa in mid.keys:
            if kappa.range != p.range or not deg_le(p.degree, kappa.degree):
                continue
            if not self.module.dims[kappa.source]:
                continue
            head, tail = g.factorize(kappa, p.degree)
            if head == p:
                sel[dst.block(tail), mid.block(kappa)] = np.eye(self.module.dims[kappa.source])
        out = sel @ self.embed_matrix(m, n)
        self._mats[key] = out
        return out

    def projection_matrix(self, v: str, m) -> np.ndarray:
        sp = self.space(m)
        out = np.zeros((sp.size, sp.size), dtype=complex)
        for lam in sp.keys:
            if lam.range == v:
                b = sp.block(lam)
                out[b, b] = np.eye(b.stop - b.start)
        return out


def lift_of(m: MatrixModule) -> Lift:
    lf = m._cache.get("lift")
    if lf is None:
        lf = m._cache["lift"] = Lift(m)
    return lf


@dataclass(frozen=True)
class LiftVector:
    lift: Lift
    depth: tuple
    data: np.ndarray

    def components(self) -> dict:
        sp = self.lift.space(self.depth)
        return {k: self.data[sp.block(k)] for k in sp.keys}

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))


def zero_vector(m: MatrixModule, depth) -> LiftVector:
    lf = lift_of(m)
    return LiftVector(lf, tuple(depth), np.zeros(lf.space(depth).size, dtype=complex))


def basic_vector(m: MatrixModule, lam: Path, xi) -> LiftVector:
    """[λ, ξ] at depth d(λ)."""
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    if xi.shape[0] != m.dims[lam.source]:
        raise ValueError(f"ξ must lie in H_{lam.source} of dimension {m.dims[lam.source]}")
    lf = lift_of(m)
    sp = lf.space(lam.degree)
    data = np.zeros(sp.size, dtype=complex)
    data[sp.block(lam)] = xi
    return LiftVector(lf, lam.degree, data)


def embed(x: LiftVector, n) -> LiftVector:
    n = tuple(n)
    if n == x.depth:
        return x
    return LiftVector(x.lift, n, x.lift.embed_matrix(x.depth, n) @ x.data)


def inner(x: LiftVector, y: LiftVector) -> complex:
    """⟨x, y⟩, linear in x, computed at the join of the two depths."""
    n = deg_join(x.depth, y.depth)
    return complex(np.vdot(embed(y, n).data, embed(x, n).data))


def add(x: LiftVector, y: LiftVector) -> LiftVector:
    n = deg_join(x.depth, y.depth)
    return LiftVector(x.lift, n, embed(x, n).data + embed(y, n).data)


def x_op(m: MatrixModule, p: Path, x: LiftVector) -> LiftVector:
    lf = lift_of(m)
    return LiftVector(lf, deg_add(x.depth, p.degree), lf.x_matrix(p, x.depth) @ x.data)


def x_adj(m: MatrixModule, p: Path, x: LiftVector) -> LiftVector:
    lf = lift_of(m)
    _, out_depth = lf.adj_depths(p, x.depth)
    return LiftVector(lf, out_depth, lf.xadj_matrix(p, x.depth) @ x.data)


def inner_product_formula(m: MatrixModule, lam: Path, xi, mu: Path, eta) -> complex:
    """Σ over λν = μγ ∈ Λ^{≤ d(λ)+d(μ)} of ⟨A_ν ξ, A_γ η⟩."""
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    eta = np.asarray(eta, dtype=complex).reshape(-1)
    total = 0j
    for nu, gamma in m.graph.common_extensions(lam, mu):
        total += np.vdot(path_operator(m, gamma) @ eta, path_operator(m, nu) @ xi)
    return complex(total)


# -- relation checks ----------------------------------------------------------

@dataclass
class RelationReport:
    residuals: dict
    depth: tuple
    basis_size: int
    tol: float

    @property
    def ok(self) -> bool:
        return all(r < self.tol for r in self.residuals.values())

    def failing(self) -> list:
        return [k for k, r in self.residuals.items() if r >= self.tol]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "depth": list(self.depth), "basis_size": self.basis_size,
                "tol": self.tol, "residuals": dict(self.residuals), "failing": self.failing()}


def _nrm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2)) if a.size else 0.0


def verify_relations(m: MatrixModule, depth=None, tol: float = 1e-9) -> RelationReport:
    """Check the four Cuntz–Krieger relations for the X_λ on every depth ≤ ``depth``.

    (1) X_v are mutually orthogonal projections; (2) X_λ^*X_λ = X_{s(λ)};
    (3) Σ_{λ∈vΛ^{e_i}} X_λX_λ^* = X_v; (4) X_f X_g = X_{g'} X_{f'} on squares,
    together with the adjoint form X_g^*X_f^* = X_{f'}^*X_{g'}^*.  Relation (3)
    is compared both in the deeper space and pulled back along the embedding,
    which exposes any failure of the isometry identity.
    """
    g = m.graph
    lf = lift_of(m)
    depth = tuple(depth) if depth is not None else (2,) * g.k
    lf.space(depth)  # memory guard before any work
    res = {"projections": 0.0, "isometries": 0.0, "range_sum": 0.0, "squares": 0.0,
           "adjoint": 0.0}
    edge_paths = {e.id: g.edge_path(e.id) for e in g.edges}
    for mp in itertools.product(*(range(x + 1) for x in depth)):
        mp = tuple(mp)
        projs = {v: lf.projection_matrix(v, mp) for v in g.vertices}
        for v, p in projs.items():
            res["projections"] = max(res["projections"], _nrm(p @ p - p), _nrm(p.conj().T - p))
            for w, q in projs.items():
                if w != v:
                    res["projections"] = max(res["projections"], _nrm(p @ q))
        for e in g.edges:
            p = edge_paths[e.id]
            up = deg_add(mp, p.degree)
            lhs = lf.xadj_matrix(p, up) @ lf.x_matrix(p, mp)
            res["isometries"] = max(res["isometries"], _nrm(lhs - projs[e.source]))
            res["adjoint"] = max(res["adjoint"],
                                 _nrm(lf.x_matrix(p, mp) - lf.xadj_matrix(p, up).conj().T))
        for v in g.vertices:
            for c in range(1, g.k + 1):
                edges = g.edges_into(v, c)
                if not edges:
                    continue
                n = deg_join(mp, deg_unit(g.k, c))
                lhs = sum(lf.x_matrix(edge_paths[eid], deg_sub(n, deg_unit(g.k, c)))
                          @ lf.xadj_matrix(edge_paths[eid], mp) for eid in edges)
                emb = lf.embed_matrix(mp, n)
                rhs = emb @ projs[v]
                res["range_sum"] = max(res["range_sum"], _nrm(lhs - rhs),
                                       _nrm(emb.conj().T @ lhs - projs[v]))
        for (f, gg), (g2, f2) in g.squares:
            pf, pg, pg2, pf2 = (edge_paths[x] for x in (f, gg, g2, f2))
            left = lf.x_matrix(pf, deg_add(mp, pg.degree)) @ lf.x_matrix(pg, mp)
            right = lf.x_matrix(pg2, deg_add(mp, pf2.degree)) @ lf.x_matrix(pf2, mp)
            res["squares"] = max(res["squares"], _nrm(left - right))
            d1 = lf.adj_depths(pf, mp)[1]
            d2 = lf.adj_depths(pg2, mp)[1]
            left = lf.xadj_matrix(pg, d1) @ lf.xadj_matrix(pf, mp)
            right = lf.xadj_matrix(pf2, d2) @ lf.xadj_matrix(pg2, mp)
            res["squares"] = max(res["squares"], _nrm(left - right))
    return RelationReport(res, depth, lf.space(depth).size, tol)


def j_embedding_check(m: MatrixModule, tol: float = 1e-12) -> dict:
    """X_λ^* [v, ξ] = [s(λ), A_λ ξ] for r(λ) = v, and 0 otherwise; ‖[v, ξ]‖ = ‖ξ‖."""
    g = m.graph
    worst = 0.0
    for v in g.vertices:
        for j in range(m.dims[v]):
            xi = np.zeros(m.dims[v], dtype=complex)
            xi[j] = 1
            jv = basic_vector(m, g.vertex(v), xi)
            worst = max(worst, abs(jv.norm() - 1.0))
            for e in g.edges:
                p = g.edge_path(e.id)
                lhs = x_adj(m, p, jv)
                if e.range == v:
                    rhs = basic_vector(m, g.vertex(e.source), m.mats[e.id] @ xi)
                else:
                    rhs = zero_vector(m, deg_zero(g.k))
                diff = add(lhs, LiftVector(rhs.lift, rhs.depth, -rhs.data))
                worst = max(worst, np.sqrt(abs(inner(diff, diff))))
    return {"ok": worst < tol, "residual": worst, "tol": tol}


def completeness_defect(m: MatrixModule, k, v: str, xi, depth) -> float:
    """Σ_{μ ∈ t_v^m} ‖A_μ ξ − proj_K A_μ ξ‖² for a graded subspace K."""
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    total = 0.0
    for mu in m.graph.paths_le(v, tuple(depth)):
        s = mu.source
        q = k.basis[m.block(s)]
        y = path_operator(m, mu) @ xi
        total += float(np.linalg.norm(y - q @ (q.conj().T @ y)) ** 2)
    return total
