"""Submodules, socle, decomposition and equivalence of matrix modules.

The algebra acting on H = ⊕H_v is generated by the vertex projections P_v and
the edges A_λ embedded as D x D block operators.  Submodules are the subspaces
invariant under all generators (hence graded).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .linalg import RANK_RTOL, complement, null_space, orth, polar_unitary
from .module import MatrixModule, path_operator


class DecompositionInconsistency(RuntimeError):
    """The irreducible pieces failed to exhaust the socle."""


class NotInvariantError(ValueError):
    pass


@dataclass
class Subspace:
    basis: np.ndarray
    dims: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def ambient(self) -> int:
        return self.basis.shape[0]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T


def graded(m: MatrixModule, basis: np.ndarray) -> Subspace:
    """Re-express a P_v-invariant subspace with one orthonormal basis per vertex block."""
    cols, dims = [], {}
    for v in m.graph.vertices:
        b = m.block(v)
        part = np.zeros_like(basis)
        part[b] = basis[b]
        q = orth(part)
        dims[v] = q.shape[1]
        cols.append(q)
    out = np.hstack(cols) if cols else np.zeros((m.total, 0), dtype=complex)
    return Subspace(out.astype(complex), dims)


def whole(m: MatrixModule) -> Subspace:
    return Subspace(np.eye(m.total, dtype=complex), dict(m.dims))


def zero(m: MatrixModule) -> Subspace:
    return Subspace(np.zeros((m.total, 0), dtype=complex), {v: 0 for v in m.graph.vertices})


def span(m: MatrixModule, vectors) -> Subspace:
    """Graded span of a list of vectors in ⊕H_v."""
    cols = np.atleast_2d(np.asarray(vectors, dtype=complex)).T
    return graded(m, orth(cols))


# -- algebra ------------------------------------------------------------------

def generated_algebra(m: MatrixModule, tol: float = 1e-9) -> list:
    """Frobenius-orthonormal basis of the unital algebra generated by the P_v and A_λ."""
    D = m.total
    if D == 0:
        return []
    gens = m.generators()
    basis = np.zeros((0, D * D), dtype=complex)
    out = []

    def add(x):
        nonlocal basis
        v = x.reshape(-1)
        nrm = np.linalg.norm(v)
        if nrm < 1e-14:
            return False
        v = v / nrm
        for _ in range(2):
            v = v - basis.conj().T @ (basis @ v) if basis.shape[0] else v
        r = np.linalg.norm(v)
        if r < tol:
            return False
        v = v / r
        basis = np.vstack([basis, v.conj()[None, :]])
        out.append(v.reshape(D, D))
        return True

    queue = []
    for x in [np.eye(D, dtype=complex)] + gens:
        if add(x):
            queue.append(out[-1])
    while queue and len(out) < D * D:
        w = queue.pop()
        for g in gens:
            if add(g @ w):
                queue.append(out[-1])
            if len(out) == D * D:
                break
    return out


def is_irreducible(m: MatrixModule) -> bool:
    if m.total == 0:
        raise ValueError("irreducibility is undefined for the zero module")
    return len(generated_algebra(m)) == m.total ** 2


# -- submodules ---------------------------------------------------------------

def is_invariant(m: MatrixModule, k: Subspace, tol: float = 1e-8) -> tuple:
    q = k.basis
    if q.shape[1] == 0:
        return True, None
    perp = np.eye(m.total) - q @ q.conj().T
    for v in m.graph.vertices:
        if np.linalg.norm(perp @ m.projection(v) @ q) > tol:
            return False, f"P_{v}"
    for e in m.graph.edges:
        if np.linalg.norm(perp @ m.embedded(e.id) @ q) > tol:
            return False, e.id
    return True, None


def largest_submodule_within(m: MatrixModule, w: Subspace) -> Subspace:
    gens = m.generators()
    u = w.basis
    while u.shape[1]:
        perp = np.eye(m.total) - u @ u.conj().T
        stacked = np.vstack([perp @ g @ u for g in gens])
        c = null_space(stacked)
        if c.shape[1] == u.shape[1]:
            break
        u = orth(u @ c)
    return graded(m, u)


def is_residual(m: MatrixModule, z: Subspace) -> bool:
    return largest_submodule_within(m, z).dim == 0


def orthogonal_complement(m: MatrixModule, k: Subspace, within: Subspace | None = None) -> Subspace:
    return graded(m, complement(k.basis, None if within is None else within.basis))


def radical(m: MatrixModule) -> list:
    """Jacobson radical of the generated algebra: kernel of the trace form."""
    alg = generated_algebra(m)
    n = len(alg)
    if n == 0:
        return []
    gram = np.array([[np.trace(a @ b) for b in alg] for a in alg])
    coeffs = null_space(gram)
    return [sum(c[j] * alg[j] for j in range(n)) for c in coeffs.T]


def socle(m: MatrixModule) -> Subspace:
    """Sum of all irreducible submodules = joint kernel of the radical."""
    rad = radical(m)
    if not rad:
        return whole(m)
    return graded(m, null_space(np.vstack(rad)))


def pdim(m: MatrixModule) -> tuple:
    s = socle(m)
    return dict(s.dims), s.dim


def is_full(m: MatrixModule) -> bool:
    return socle(m).dim == m.total


def is_complete_submodule(m: MatrixModule, k: Subspace) -> bool:
    ok, gen = is_invariant(m, k)
    if not ok:
        raise NotInvariantError(f"subspace is not invariant under {gen}")
    return is_residual(m, orthogonal_complement(m, k))


# -- intertwiners -------------------------------------------------------------

def intertwiners(m1: MatrixModule, m2: MatrixModule) -> list:
    """Basis of {T = ⊕T_v : T_{s(λ)} A_λ = B_λ T_{r(λ)}}, each as {v: T_v}."""
    if m1.graph != m2.graph:
        raise ValueError("modules live over different graphs")
    g = m1.graph
    shapes = {v: (m2.dims[v], m1.dims[v]) for v in g.vertices}
    offs, n = {}, 0
    for v in g.vertices:
        offs[v] = n
        n += shapes[v][0] * shapes[v][1]
    if n == 0:
        return []
    rows = []
    for e in g.edges:
        s, r = e.source, e.range
        a, b = m1.mats[e.id], m2.mats[e.id]
        p, q = shapes[s][0], shapes[r][1]  # equation block is d2_s x d1_r
        if p * q == 0:
            continue
        blk = np.zeros((p * q, n), dtype=complex)
        # vec(T_s A) = (A^T ⊗ I) vec(T_s), vec(B T_r) = (I ⊗ B) vec(T_r), column-major
        if shapes[s][0] * shapes[s][1]:
            blk[:, offs[s]:offs[s] + shapes[s][0] * shapes[s][1]] += np.kron(a.T, np.eye(p))
        if shapes[r][0] * shapes[r][1]:
            blk[:, offs[r]:offs[r] + shapes[r][0] * shapes[r][1]] -= np.kron(np.eye(q), b)
        rows.append(blk)
    ker = null_space(np.vstack(rows)) if rows else np.eye(n, dtype=complex)
    out = []
    for x in ker.T:
        t = {}
        for v in g.vertices:
            sz = shapes[v][0] * shapes[v][1]
            t[v] = x[offs[v]:offs[v] + sz].reshape(shapes[v], order="F")
        out.append(t)
    return out


def block_matrix(m1: MatrixModule, m2: MatrixModule, t: dict) -> np.ndarray:
    out = np.zeros((m2.total, m1.total), dtype=complex)
    for v in m1.graph.vertices:
        out[m2.block(v), m1.block(v)] = t[v]
    return out


def _generic(basis: list, rng: np.random.Generator) -> dict:
    c = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
    return {v: sum(ci * t[v] for ci, t in zip(c, basis)) for v in basis[0]}


def module_isomorphic(m1: MatrixModule, m2: MatrixModule, seed: int = 0) -> bool:
    """True iff a generic intertwiner is invertible."""
    if m1.dims != m2.dims:
        return False
    if m1.total == 0:
        return True
    basis = intertwiners(m1, m2)
    if not basis:
        return False
    t = block_matrix(m1, m2, _generic(basis, np.random.default_rng(seed)))
    s = np.linalg.svd(t, compute_uv=False)
    return bool(s[-1] > RANK_RTOL * s[0])


# -- unitary equivalence ------------------------------------------------------

def closed_path_traces(m: MatrixModule, max_len: int = 4) -> dict:
    g = m.graph
    out = {}
    for total in range(1, max_len + 1):
        for deg in itertools.product(range(total + 1), repeat=g.k):
            if sum(deg) != total:
                continue
            for v in g.vertices:
                if not m.dims[v]:
                    continue
                for p in g.paths_of_degree(v, deg):
                    if p.source == v:
                        out[p] = complex(np.trace(path_operator(m, p)))
    return out


def _objective(m1, m2, u) -> float:
    tot = 0.0
    for e in m1.graph.edges:
        a = m1.mats[e.id]
        if a.size:
            tot += float(np.linalg.norm(u[e.source] @ a @ u[e.range].conj().T - m2.mats[e.id]) ** 2)
    return tot


def _mm_sweep(m1, m2, u, shift):
    g = m1.graph
    for v in g.vertices:
        if not m1.dims[v]:
            continue
        grad = shift * u[v]
        for e in g.edges:
            a, b = m1.mats[e.id], m2.mats[e.id]
            if not a.size:
                continue
            if e.source == v:
                grad = grad + b @ u[e.range] @ a.conj().T
            if e.range == v:
                grad = grad + b.conj().T @ u[e.source] @ a
        u[v] = polar_unitary(grad)
    return u


def unitarily_equivalent(m1: MatrixModule, m2: MatrixModule, tol: float = 1e-10,
                         restarts: int = 100, iters: int = 400, seed: int = 0) -> tuple:
    """Search for block unitaries with U_{s(λ)} A_λ U_{r(λ)}^* = B_λ.

    Returns (verdict, certificate).  A negative verdict means no conjugating
    unitary was found at this tolerance, not a proof of inequivalence.
    """
    if m1.graph != m2.graph or m1.dims != m2.dims:
        return False, {"reason": "dimension vectors differ", "objective": None}
    vs = [v for v in m1.graph.vertices if m1.dims[v]]
    if not vs:
        return True, {"reason": "zero modules", "objective": 0.0, "unitaries": {}}
    t1, t2 = closed_path_traces(m1), closed_path_traces(m2)
    for p, x in t1.items():
        if abs(x - t2[p]) > 1e-6 * max(1.0, abs(x)):
            return False, {"reason": f"trace of closed path {p} differs", "objective": None}
    shift = 2.0 * sum(np.linalg.norm(m1.mats[e.id], 2) * np.linalg.norm(m2.mats[e.id], 2)
                      for e in m1.graph.edges if m1.mats[e.id].size) + 1e-3
    rng = np.random.default_rng(seed)
    from .linalg import random_unitary
    best, best_u = np.inf, None
    basis = intertwiners(m1, m2)
    for attempt in range(restarts):
        if attempt == 0 and basis:
            t = _generic(basis, rng)
            u = {v: polar_unitary(t[v]) if t[v].size else np.eye(0) for v in m1.graph.vertices}
        else:
            u = {v: random_unitary(m1.dims[v], rng) for v in m1.graph.vertices}
        obj = _objective(m1, m2, u)
        for _ in range(iters):
            if obj < tol:
                break
            u = _mm_sweep(m1, m2, u, shift)
            new = _objective(m1, m2, u)
            if obj - new < 1e-15 * max(1.0, obj):
                obj = new
                break
            obj = new
        if obj < best:
            best, best_u = obj, {v: x.copy() for v, x in u.items()}
        if best < tol:
            return True, {"reason": "conjugating unitaries found", "objective": best,
                          "restarts": attempt + 1, "unitaries": best_u}
    return False, {"reason": "not equivalent at tolerance", "objective": best,
                   "restarts": restarts, "unitaries": best_u}


# -- decomposition ------------------------------------------------------------

@dataclass
class DecompositionResult:
    irreducibles: list
    residual: Subspace
    socle: Subspace
    pdim_vector: dict
    classes: list
    total: int

    @property
    def n(self) -> int:
        return len(self.irreducibles)

    @property
    def pdim(self) -> int:
        return sum(self.pdim_vector.values())

    def to_dict(self) -> dict:
        return {
            "n_irreducibles": self.n,
            "pieces": [dict(h.dims) for h in self.irreducibles],
            "classes": [{"members": c, "multiplicity": len(c)} for c in self.classes],
            "residual_dim": self.residual.dim,
            "pdim_vector": dict(self.pdim_vector),
            "pdim": self.pdim,
            "total_dim": self.total,
        }


def commutant(gens: list) -> list:
    """Basis of matrices commuting with every generator."""
    n = gens[0].shape[0]
    eye = np.eye(n)
    rows = [np.kron(eye, g) - np.kron(g.T, eye) for g in gens]
    ker = null_space(np.vstack(rows))
    return [x.reshape((n, n), order="F") for x in ker.T]


def _cluster(vals: np.ndarray, rtol: float = 1e-7) -> list:
    scale = max(1.0, float(np.max(np.abs(vals))))
    groups = []
    for i in np.argsort(vals.real):
        for grp in groups:
            if abs(vals[i] - vals[grp[0]]) < rtol * scale:
                grp.append(i)
                break
        else:
            groups.append([i])
    return groups


def _split_off_irreducible(m: MatrixModule, w: Subspace, rng, tries: int = 20) -> Subspace:
    q = w.basis
    sub = m.restrict(q)
    # coordinates inside w follow the graded column order of q
    gens = sub.generators()
    if len(generated_algebra(sub)) == w.dim ** 2:
        return w
    comm = commutant(gens)
    for _ in range(tries):
        c = rng.standard_normal(len(comm)) + 1j * rng.standard_normal(len(comm))
        x = sum(ci * b for ci, b in zip(c, comm))
        vals = np.linalg.eigvals(x)
        groups = sorted(_cluster(vals), key=len)
        for grp in groups:
            lam = np.mean(vals[grp])
            vecs = null_space(x - lam * np.eye(w.dim), rtol=1e-6)
            if vecs.shape[1] == 0:
                continue
            h = graded(m, orth(q @ vecs))
            ok, _ = is_invariant(m, h, tol=1e-7)
            if ok and is_irreducible(m.restrict(h.basis)):
                return h
    raise DecompositionInconsistency("no irreducible eigenspace found in the commutant")


def decompose(m: MatrixModule, seed: int = 0) -> DecompositionResult:
    if m.total == 0:
        raise ValueError("cannot decompose the zero module")
    rng = np.random.default_rng(seed)
    soc = socle(m)
    pieces = []
    chosen = np.zeros((m.total, 0), dtype=complex)
    w = soc
    while w.dim:
        h = _split_off_irreducible(m, w, rng)
        pieces.append(h)
        chosen = np.hstack([chosen, h.basis])
        rest = graded(m, complement(chosen, soc.basis))
        w = largest_submodule_within(m, rest)
        if w.dim != rest.dim:
            raise DecompositionInconsistency(
                f"socle ⊖ chosen pieces has dim {rest.dim} but its largest submodule has dim {w.dim}")
    if sum(h.dim for h in pieces) != soc.dim:
        raise DecompositionInconsistency("irreducible pieces do not exhaust the socle")
    residual = orthogonal_complement(m, soc)
    subs = [m.restrict(h.basis) for h in pieces]
    classes = []
    for i, s in enumerate(subs):
        for cls in classes:
            if s.dims == subs[cls[0]].dims and intertwiners(s, subs[cls[0]]):
                cls.append(i)
                break
        else:
            classes.append([i])
    return DecompositionResult(pieces, residual, soc, dict(soc.dims), classes, m.total)
