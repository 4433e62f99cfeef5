"""Finite k-graphs: validation, path normal forms and enumeration of vΛ^{≤m}.

Degrees are plain tuples of non-negative ints, one entry per colour.  Paths are
stored in colour-sorted normal form: all colour-1 edges leftmost, then colour 2,
and so on.  Composition is right to left, so in ``(e1, e2, ..., eN)`` the edge
``eN`` is traversed first and ``r(path) = r(e1)``, ``s(path) = s(eN)``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Degree = tuple


class GraphStructureError(ValueError):
    """Malformed graph data (dangling ids, bad colours, duplicate ids)."""


class CompositionError(ValueError):
    pass


class DegreeError(ValueError):
    pass


# -- degree arithmetic --------------------------------------------------------

def deg_zero(k: int) -> Degree:
    return (0,) * k


def deg_unit(k: int, color: int) -> Degree:
    """Standard basis vector e_color (colours are 1-based)."""
    return tuple(1 if i == color - 1 else 0 for i in range(k))


def deg_add(m: Degree, n: Degree) -> Degree:
    return tuple(a + b for a, b in zip(m, n))


def deg_sub(m: Degree, n: Degree) -> Degree:
    out = tuple(a - b for a, b in zip(m, n))
    if any(x < 0 for x in out):
        raise DegreeError(f"{n} is not <= {m}")
    return out


def deg_le(m: Degree, n: Degree) -> bool:
    return all(a <= b for a, b in zip(m, n))


def deg_join(m: Degree, n: Degree) -> Degree:
    return tuple(max(a, b) for a, b in zip(m, n))


def parse_degree(text: str | Sequence[int] | int) -> Degree:
    """Accept ``"(2,2)"``, ``"2,2"``, ``"2"``, an int or a sequence."""
    if isinstance(text, int):
        return (text,)
    if isinstance(text, str):
        body = text.strip().strip("()[] ")
        if not body:
            return ()
        return tuple(int(x) for x in body.split(","))
    return tuple(int(x) for x in text)


# -- data model ---------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    id: str
    color: int
    source: str
    range: str


@dataclass(frozen=True, order=True)
class Path:
    """A morphism of the k-graph in colour-sorted normal form.

    The empty edge tuple is the vertex ``range == source``.
    """
    degree: Degree
    edges: tuple
    range: str
    source: str

    @property
    def is_vertex(self) -> bool:
        return not self.edges

    def __len__(self) -> int:
        return len(self.edges)

    def __str__(self) -> str:
        if self.is_vertex:
            return self.range
        return "".join(f"[{e}]" for e in self.edges)


@dataclass
class ValidationIssue:
    axiom: str
    message: str
    elements: tuple = ()


@dataclass
class ValidationReport:
    issues: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, axiom: str, message: str, *elements) -> None:
        self.issues.append(ValidationIssue(axiom, message, tuple(elements)))

    def axioms(self) -> set:
        return {i.axiom for i in self.issues}

    def to_dict(self) -> dict:
        return {
            "valid": self.ok,
            "issues": [
                {"axiom": i.axiom, "message": i.message, "elements": list(i.elements)}
                for i in self.issues
            ],
        }


class KGraph:
    """A finite k-coloured graph together with its factorisation squares.

    ``squares`` is a list of ``((f, g), (g2, f2))`` meaning the path ``f∘g``
    equals ``g2∘f2``.  Either colour order is accepted; the table is indexed in
    both directions for constant-time square moves.
    """

    def __init__(self, k: int, vertices: Iterable[str], edges: Iterable[Edge],
                 squares: Iterable = (), name: str = ""):
        self.k = int(k)
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self.squares = tuple((tuple(a), tuple(b)) for a, b in squares)
        self.name = name
        self._check_structure()
        self.edge = {e.id: e for e in self.edges}
        # (v, colour) -> edges with range v of that colour, in declaration order
        self._into = {}
        for e in self.edges:
            self._into.setdefault((e.range, e.color), []).append(e.id)
        self._swap = {}
        for (f, g), (g2, f2) in self.squares:
            self._swap.setdefault((f, g), (g2, f2))
            self._swap.setdefault((g2, f2), (f, g))
        self._paths_le_cache = {}

    def _check_structure(self) -> None:
        if self.k < 1:
            raise GraphStructureError("k must be >= 1")
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphStructureError("duplicate vertex ids")
        vs = set(self.vertices)
        seen = set()
        for e in self.edges:
            if e.id in seen or e.id in vs:
                raise GraphStructureError(f"duplicate id {e.id!r}")
            seen.add(e.id)
            if e.source not in vs or e.range not in vs:
                raise GraphStructureError(f"edge {e.id!r} references an unknown vertex")
            if not 1 <= e.color <= self.k:
                raise GraphStructureError(f"edge {e.id!r} has colour {e.color} outside 1..{self.k}")
        for sq in self.squares:
            for eid in (*sq[0], *sq[1]):
                if eid not in seen:
                    raise GraphStructureError(f"square {sq} references unknown edge {eid!r}")
            if len(sq[0]) != 2 or len(sq[1]) != 2:
                raise GraphStructureError(f"square {sq} must relate two edge pairs")

    # -- basic queries --------------------------------------------------------

    def edges_into(self, v: str, color: int) -> list:
        """Ids of the colour-``color`` edges with range ``v`` (the set vΛ^{e_i})."""
        return self._into.get((v, color), [])

    def color(self, eid: str) -> int:
        return self.edge[eid].color

    def vertex(self, v: str) -> Path:
        if v not in self.vertices:
            raise GraphStructureError(f"unknown vertex {v!r}")
        return Path(deg_zero(self.k), (), v, v)

    def edge_path(self, eid: str) -> Path:
        e = self.edge[eid]
        return Path(deg_unit(self.k, e.color), (eid,), e.range, e.source)

    def __repr__(self) -> str:
        return f"KGraph({self.name or '?'}, k={self.k}, |V|={len(self.vertices)}, |E|={len(self.edges)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, KGraph):
            return NotImplemented
        return (self.k, self.vertices, self.edges, self.squares) == (
            other.k, other.vertices, other.edges, other.squares)

    def __hash__(self) -> int:
        return hash((self.k, self.vertices, self.edges, self.squares))

    # -- normal forms ---------------------------------------------------------

    def _check_composable(self, seq: Sequence[str]) -> None:
        for a, b in zip(seq, seq[1:]):
            if self.edge[a].source != self.edge[b].range:
                raise CompositionError(f"{a}∘{b}: s({a}) != r({b})")

    def _swap_pair(self, a: str, b: str) -> tuple:
        try:
            return self._swap[(a, b)]
        except KeyError:
            raise CompositionError(f"no factorisation square for {a}∘{b}") from None

    def normalize(self, edges: Sequence[str], range_vertex: str | None = None) -> Path:
        """Bubble-sort an edge word into colour-ascending blocks via square moves."""
        seq = list(edges)
        for eid in seq:
            if eid not in self.edge:
                raise CompositionError(f"unknown edge {eid!r}")
        self._check_composable(seq)
        if not seq:
            if range_vertex is None:
                raise CompositionError("empty word needs an explicit vertex")
            return self.vertex(range_vertex)
        changed = True
        while changed:
            changed = False
            for i in range(len(seq) - 1):
                if self.color(seq[i]) > self.color(seq[i + 1]):
                    seq[i], seq[i + 1] = self._swap_pair(seq[i], seq[i + 1])
                    changed = True
        deg = [0] * self.k
        for eid in seq:
            deg[self.color(eid) - 1] += 1
        return Path(tuple(deg), tuple(seq), self.edge[seq[0]].range, self.edge[seq[-1]].source)

    def compose(self, p: Path, q: Path) -> Path:
        """The path p∘q (q traversed first)."""
        if p.source != q.range:
            raise CompositionError(f"s(p)={p.source} != r(q)={q.range}")
        if p.is_vertex:
            return q
        if q.is_vertex:
            return p
        return self.normalize(p.edges + q.edges)

    def path(self, *edges: str) -> Path:
        return self.normalize(edges)

    def factorize(self, p: Path, m: Degree) -> tuple:
        """Unique (head, tail) with p = head∘tail and d(head) = m."""
        m = tuple(m)
        if not deg_le(m, p.degree):
            raise DegreeError(f"{m} is not <= d(p) = {p.degree}")
        rest = deg_sub(p.degree, m)
        # target colour pattern: head sorted by colour, then tail sorted by colour
        pattern = [c for c in range(1, self.k + 1) for _ in range(m[c - 1])]
        pattern += [c for c in range(1, self.k + 1) for _ in range(rest[c - 1])]
        seq = list(p.edges)
        # insertion-sort towards the pattern using square moves; each move swaps
        # an adjacent pair of distinct colours, so it is always available
        for pos, want in enumerate(pattern):
            j = pos
            while self.color(seq[j]) != want:
                j += 1
            while j > pos:
                seq[j - 1], seq[j] = self._swap_pair(seq[j - 1], seq[j])
                j -= 1
        n = sum(m)
        head_edges, tail_edges = seq[:n], seq[n:]
        head = self.normalize(head_edges, range_vertex=p.range) if head_edges else None
        if head is None:
            head = self.vertex(p.range)
        tail = self.normalize(tail_edges) if tail_edges else self.vertex(head.source)
        return head, tail

    def extends(self, p: Path, q: Path) -> Path | None:
        """If q = p∘x return x, else None."""
        if p.range != q.range or not deg_le(p.degree, q.degree):
            return None
        head, tail = self.factorize(q, p.degree)
        return tail if head == p else None

    # -- enumeration ----------------------------------------------------------

    def paths_of_degree(self, v: str, m: Degree) -> list:
        """vΛ^m: all paths with range v and degree exactly m."""
        return [p for p in self.paths_le(v, m) if p.degree == tuple(m)]

    def paths_le(self, v: str, m: Degree) -> list:
        """vΛ^{≤m}, sorted; depth-first extension with normal-form deduplication."""
        m = tuple(m)
        if len(m) != self.k:
            raise DegreeError(f"degree {m} has wrong length for k={self.k}")
        key = (v, m)
        cached = self._paths_le_cache.get(key)
        if cached is not None:
            return list(cached)
        start = self.vertex(v)
        seen = {start}
        stack = [start]
        result = []
        while stack:
            mu = stack.pop()
            maximal = True
            for c in range(1, self.k + 1):
                if mu.degree[c - 1] >= m[c - 1]:
                    continue
                nxt = self.edges_into(mu.source, c)
                if not nxt:
                    continue
                maximal = False
                for eid in nxt:
                    ext = self.normalize(mu.edges + (eid,)) if mu.edges else self.edge_path(eid)
                    if ext not in seen:
                        seen.add(ext)
                        stack.append(ext)
            if maximal:
                result.append(mu)
        result.sort()
        self._paths_le_cache[key] = tuple(result)
        return list(result)

    def all_paths_le(self, m: Degree) -> list:
        """Λ^{≤m} over every root vertex, grouped by root in vertex order."""
        return [p for v in self.vertices for p in self.paths_le(v, m)]

    def paths_up_to(self, m: Degree) -> list:
        """Every path of degree ≤ m (not just the maximal ones)."""
        out = []
        for v in self.vertices:
            start = self.vertex(v)
            seen = {start}
            stack = [start]
            while stack:
                mu = stack.pop()
                for c in range(1, self.k + 1):
                    if mu.degree[c - 1] >= m[c - 1]:
                        continue
                    for eid in self.edges_into(mu.source, c):
                        ext = self.normalize(mu.edges + (eid,)) if mu.edges else self.edge_path(eid)
                        if ext not in seen:
                            seen.add(ext)
                            stack.append(ext)
            out.extend(sorted(seen))
        return out

    def common_extensions(self, lam: Path, mu: Path) -> list:
        """Pairs (ν, γ) with λ∘ν = μ∘γ ∈ Λ^{≤ d(λ)+d(μ)}."""
        if lam.range != mu.range:
            return []
        out = []
        for nu in self.paths_le(lam.source, mu.degree):
            kappa = self.compose(lam, nu)
            gamma = self.extends(mu, kappa)
            if gamma is not None:
                out.append((nu, gamma))
        return out

    # -- validation -----------------------------------------------------------

    def validate(self) -> ValidationReport:
        return validate_graph(self)

    # -- serialisation --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "vertices": list(self.vertices),
            "edges": [
                {"id": e.id, "color": e.color, "source": e.source, "range": e.range}
                for e in self.edges
            ],
            "squares": [
                {"outer_inner": list(a), "equals_outer_inner": list(b)}
                for a, b in self.squares
            ],
        }

    @classmethod
    def from_dict(cls, data: dict, name: str = "") -> "KGraph":
        try:
            edges = [Edge(str(e["id"]), int(e["color"]), str(e["source"]), str(e["range"]))
                     for e in data["edges"]]
            squares = [(tuple(s["outer_inner"]), tuple(s["equals_outer_inner"]))
                       for s in data.get("squares", [])]
            return cls(int(data["k"]), [str(v) for v in data["vertices"]], edges, squares, name=name)
        except (KeyError, TypeError) as exc:
            raise GraphStructureError(f"malformed graph document: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str, name: str = "") -> "KGraph":
        return cls.from_dict(json.loads(text), name=name)


def validate_graph(g: KGraph) -> ValidationReport:
    """Check square well-formedness, totality/bijectivity, local convexity, cube consistency."""
    report = ValidationReport()
    col = g.color
    E = g.edge

    for (f, gg), (g2, f2) in g.squares:
        if col(f) == col(gg):
            report.add("square_shape", f"square {f}∘{gg} uses a single colour", f, gg)
            continue
        if not (col(g2) == col(gg) and col(f2) == col(f)):
            report.add("square_shape", f"{f}∘{gg} = {g2}∘{f2} does not swap colours", f, gg, g2, f2)
        if E[f].source != E[gg].range or E[g2].source != E[f2].range:
            report.add("square_shape", f"{f}∘{gg} = {g2}∘{f2} has a non-composable side", f, gg, g2, f2)
        if E[g2].range != E[f].range or E[f2].source != E[gg].source:
            report.add("square_shape", f"{f}∘{gg} = {g2}∘{f2} has mismatched endpoints", f, gg, g2, f2)

    # each composable two-colour word must occur exactly once as the left side
    # or the right side of some square
    occurrences = {}
    for a, b in g.squares:
        occurrences[a] = occurrences.get(a, 0) + 1
        occurrences[b] = occurrences.get(b, 0) + 1
    for a in g.edges:
        for b in g.edges:
            if a.color == b.color or a.source != b.range:
                continue
            n = occurrences.get((a.id, b.id), 0)
            if n == 0:
                report.add("square_total", f"square table not total: {a.id}∘{b.id} missing", a.id, b.id)
            elif n > 1:
                report.add("square_bijective", f"{a.id}∘{b.id} appears {n} times", a.id, b.id)
    for word, n in occurrences.items():
        a, b = word
        if a in E and b in E and (E[a].color == E[b].color or E[a].source != E[b].range):
            report.add("square_shape", f"{a}∘{b} is not a composable two-colour word", a, b)

    for v in g.vertices:
        for i, j in itertools.combinations(range(1, g.k + 1), 2):
            vi, vj = g.edges_into(v, i), g.edges_into(v, j)
            if not vi or not vj:
                continue
            for mu in vi:
                if not g.edges_into(E[mu].source, j):
                    report.add("locally_convex", f"s({mu}) receives no colour-{j} edge", v, mu)
            for nu in vj:
                if not g.edges_into(E[nu].source, i):
                    report.add("locally_convex", f"s({nu}) receives no colour-{i} edge", v, nu)

    if g.k >= 3 and "square_total" not in report.axioms():
        _check_cubes(g, report)
    return report


def _reduce(g: KGraph, seq: list, leftmost: bool) -> tuple:
    seq = list(seq)
    while True:
        idx = [i for i in range(len(seq) - 1) if g.color(seq[i]) > g.color(seq[i + 1])]
        if not idx:
            return tuple(seq)
        i = idx[0] if leftmost else idx[-1]
        seq[i], seq[i + 1] = g._swap_pair(seq[i], seq[i + 1])


def _check_cubes(g: KGraph, report: ValidationReport) -> None:
    for a in g.edges:
        for b in g.edges:
            if b.range != a.source or b.color == a.color:
                continue
            for c in g.edges:
                if c.range != b.source or c.color in (a.color, b.color):
                    continue
                try:
                    left = _reduce(g, [a.id, b.id, c.id], leftmost=True)
                    right = _reduce(g, [a.id, b.id, c.id], leftmost=False)
                except CompositionError as exc:
                    report.add("cube", str(exc), a.id, b.id, c.id)
                    continue
                if left != right:
                    report.add("cube", f"{a.id}∘{b.id}∘{c.id} normalises inconsistently", a.id, b.id, c.id)


def load_graph(path: str) -> KGraph:
    with open(path) as fh:
        return KGraph.from_json(fh.read(), name=path)


def save_graph(g: KGraph, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(g.to_json())
