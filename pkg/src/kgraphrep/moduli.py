"""Dimension formulas, nonemptiness and sampling for moduli of 1-graph modules."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .analysis import is_irreducible
from .kgraph import KGraph
from .module import D_of, InfeasibleDimensionError, random_module


@dataclass
class ModuliConfig:
    samples: int = 100
    seed: int = 0


@dataclass
class ModuliReport:
    d: dict
    D: dict
    feasible: bool
    mr_dim: int | None = None
    spec_dim: int | None = None
    samples: int = 0
    irreducible: int = 0
    seed: int | None = None
    flags: list = field(default_factory=list)

    @property
    def irr_fraction(self) -> float | None:
        return self.irreducible / self.samples if self.samples else None

    def to_dict(self) -> dict:
        return {"d": self.d, "D": self.D, "feasible": self.feasible, "mr_dim": self.mr_dim,
                "spec_dim": self.spec_dim, "samples": self.samples,
                "irreducible": self.irreducible, "irr_fraction": self.irr_fraction,
                "seed": self.seed, "flags": list(self.flags)}


def _norm_d(g: KGraph, d) -> dict:
    if isinstance(d, dict):
        return {v: int(d.get(v, 0)) for v in g.vertices}
    d = list(d)
    if len(d) != len(g.vertices):
        raise ValueError(f"dimension vector needs {len(g.vertices)} entries")
    return {v: int(x) for v, x in zip(g.vertices, d)}


def _need_1graph(g: KGraph):
    if g.k != 1:
        raise ValueError("moduli formulas are for 1-graphs")


def D_vector(g: KGraph, d) -> dict:
    d = _norm_d(g, d)
    return {v: D_of(g, d, v) for v in g.vertices}


def mr_nonempty(g: KGraph, d) -> bool:
    _need_1graph(g)
    d = _norm_d(g, d)
    return all(d[v] <= D_of(g, d, v) for v in g.vertices)


def _require_feasible(g, d):
    if not mr_nonempty(g, d):
        bad = [v for v in g.vertices if d[v] > D_of(g, d, v)]
        raise InfeasibleDimensionError(
            f"d_v > D(v) at {bad}: MR(d) is empty (the bound must hold at every vertex)")


def mr_dim(g: KGraph, d) -> int:
    """Real dimension of MR(d); both closed forms are evaluated and compared."""
    _need_1graph(g)
    d = _norm_d(g, d)
    _require_feasible(g, d)
    by_vertex = sum(d[v] * (2 * D_of(g, d, v) - d[v]) for v in g.vertices)
    by_edge = 2 * sum(d[e.source] * d[e.range] for e in g.edges) - sum(x * x for x in d.values())
    assert by_vertex == by_edge, (by_vertex, by_edge)
    return by_vertex


def spec_dim(g: KGraph, d) -> int:
    """1 + 2 Σ d_v (D(v) − d_v)."""
    _need_1graph(g)
    d = _norm_d(g, d)
    _require_feasible(g, d)
    return 1 + 2 * sum(d[v] * (D_of(g, d, v) - d[v]) for v in g.vertices)


def discrepancy_flags(g: KGraph, d) -> list:
    """Known disagreement for the two-vertex complete graph at d = (q, q)."""
    d = _norm_d(g, d)
    if g.name == "complete2" and len(set(d.values())) == 1 and d[g.vertices[0]] > 0:
        q = d[g.vertices[0]]
        return [f"complete2 d=(q,q): formula gives {1 + 4 * q * q}, "
                f"the worked example states 1+2q^2 = {1 + 2 * q * q}"]
    return []


def estimate_irr_fraction(g: KGraph, d, samples: int = 100, seed: int = 0) -> ModuliReport:
    _need_1graph(g)
    d = _norm_d(g, d)
    _require_feasible(g, d)
    rng = np.random.default_rng(seed)
    rep = ModuliReport(d, D_vector(g, d), True, mr_dim(g, d), spec_dim(g, d),
                       samples=samples, seed=seed, flags=discrepancy_flags(g, d))
    if sum(d.values()) == 0:
        return rep
    for _ in range(samples):
        if is_irreducible(random_module(g, d, rng)):
            rep.irreducible += 1
    return rep


def moduli_row(g: KGraph, d, samples: int = 0, seed: int = 0) -> ModuliReport:
    d = _norm_d(g, d)
    if g.k == 1 and not mr_nonempty(g, d):
        return ModuliReport(d, D_vector(g, d), False, flags=["infeasible: MR(d) is empty"])
    if samples:
        return estimate_irr_fraction(g, d, samples, seed)
    return ModuliReport(d, D_vector(g, d), True, mr_dim(g, d), spec_dim(g, d),
                        seed=seed, flags=discrepancy_flags(g, d))


CSV_FIELDS = ["d", "D", "feasible", "mr_dim", "spec_dim", "samples", "irr_fraction", "flags"]


def rows_to_csv(g: KGraph, rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        frac = "" if r.irr_fraction is None else f"{r.irr_fraction:.6f}"
        w.writerow([
            ";".join(str(r.d[v]) for v in g.vertices),
            ";".join(str(r.D[v]) for v in g.vertices),
            int(r.feasible),
            "" if r.mr_dim is None else r.mr_dim,
            "" if r.spec_dim is None else r.spec_dim,
            r.samples,
            frac,
            " | ".join(r.flags),
        ])
    return buf.getvalue()
