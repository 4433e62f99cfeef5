"""Command-line entry point.

Exit codes: 0 success, 1 domain failure (axiom violated, infeasible, not
equivalent), 2 input error (unreadable or malformed files, bad arguments).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import analysis, catalog, lift, moduli
from .kgraph import GraphStructureError, KGraph, load_graph, parse_degree
from .module import (InfeasibleDimensionError, ModuleStructureError, check_module,
                     load_module)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    modules: list = field(default_factory=list)
    depth: tuple | None = None
    tol: float = 1e-9
    seed: int = 0
    samples: int = 0
    out: str | None = None
    format: str = "text"
    dims: list = field(default_factory=list)
    dim_range: str | None = None
    functor: str | None = None

    def __post_init__(self):
        if not self.tol > 0:
            raise InputError("--tol must be positive")


def resolve_graph(ref: str) -> KGraph:
    if os.path.exists(ref):
        return load_graph(ref)
    try:
        return catalog.graph(ref)
    except KeyError as exc:
        raise InputError(f"no graph file or catalog entry named {ref!r}") from exc


def _load_module(path: str, graph: KGraph | None):
    if not os.path.exists(path):
        raise InputError(f"module file {path!r} not found")
    return load_module(path, graph)


def _dump(obj, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(obj, indent=2, sort_keys=True, default=_jsonable) + "\n"
    return _text(obj)


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(type(x))


def _text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(i, (dict, list)) for i in
                                                         (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1).rstrip("\n"))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, default=_jsonable, sort_keys=True)}")
    elif isinstance(obj, list):
        for v in obj:
            lines.append(f"{pad}- {json.dumps(v, default=_jsonable, sort_keys=True)}")
    else:
        lines.append(f"{pad}{obj}")
    return "\n".join(lines) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------

def cmd_validate(cfg: RunConfig) -> int:
    g = resolve_graph(cfg.graph)
    rep = g.validate().to_dict()
    rep = {"graph": cfg.graph, **rep}
    _emit(cfg, _dump(rep, cfg.format))
    return EXIT_OK if rep["valid"] else EXIT_FAIL


def _module_or_fail(cfg, path, graph=None):
    m = _load_module(path, graph)
    chk = check_module(m, cfg.tol)
    return m, chk


def cmd_analyze(cfg: RunConfig) -> int:
    g = resolve_graph(cfg.graph) if cfg.graph else None
    m, chk = _module_or_fail(cfg, cfg.modules[0], g)
    if m.total == 0:
        _emit(cfg, _dump({"error": "zero-dimensional module"}, cfg.format))
        return EXIT_FAIL
    if not chk.ok:
        _emit(cfg, _dump({"valid": False, "check": chk.to_dict()}, cfg.format))
        return EXIT_FAIL
    dec = analysis.decompose(m, seed=cfg.seed)
    rep = {"seed": cfg.seed, "valid": True, "max_residual": chk.max_residual,
           "irreducible": dec.n == 1 and dec.residual.dim == 0,
           "full": dec.residual.dim == 0, **dec.to_dict()}
    _emit(cfg, _dump(rep, cfg.format))
    return EXIT_OK


def cmd_lift_check(cfg: RunConfig) -> int:
    g = resolve_graph(cfg.graph) if cfg.graph else None
    m = _load_module(cfg.modules[0], g)
    try:
        rel = lift.verify_relations(m, cfg.depth, cfg.tol)
    except lift.LiftMemoryError as exc:
        _emit(cfg, _dump({"error": "memory guard", "detail": str(exc)}, cfg.format))
        return EXIT_INPUT
    jchk = lift.j_embedding_check(m, max(cfg.tol, 1e-12))
    rep = {"relations": rel.to_dict(), "j_embedding": jchk,
           "ok": rel.ok and jchk["ok"]}
    _emit(cfg, _dump(rep, cfg.format))
    return EXIT_OK if rep["ok"] else EXIT_FAIL


def _dim_vectors(cfg: RunConfig, g: KGraph) -> list:
    out = [list(parse_degree(d)) for d in cfg.dims]
    if cfg.dim_range:
        try:
            a, b = (int(x) for x in cfg.dim_range.split(":"))
        except ValueError as exc:
            raise InputError("--range expects a:b") from exc
        out += [[x] * len(g.vertices) for x in range(a, b + 1)]
    if not out:
        raise InputError("give --d or --range")
    for d in out:
        if len(d) != len(g.vertices) or min(d) < 0:
            raise InputError(f"dimension vector {d} does not fit {len(g.vertices)} vertices")
    return out


def cmd_moduli(cfg: RunConfig) -> int:
    g = resolve_graph(cfg.graph)
    if g.k != 1:
        raise InputError("moduli applies to 1-graphs only")
    rows = [moduli.moduli_row(g, d, cfg.samples, cfg.seed) for d in _dim_vectors(cfg, g)]
    if cfg.format == "csv":
        text = f"# graph={g.name} seed={cfg.seed} samples={cfg.samples}\n" + moduli.rows_to_csv(g, rows)
    else:
        text = _dump({"graph": g.name, "seed": cfg.seed, "samples": cfg.samples,
                      "rows": [r.to_dict() for r in rows]}, cfg.format)
    _emit(cfg, text)
    return EXIT_OK if all(r.feasible for r in rows) else EXIT_FAIL


def cmd_equiv(cfg: RunConfig) -> int:
    if len(cfg.modules) != 2:
        raise InputError("equiv needs two --module arguments")
    g = resolve_graph(cfg.graph) if cfg.graph else None
    m1 = _load_module(cfg.modules[0], g)
    m2 = _load_module(cfg.modules[1], g if g is not None else m1.graph)
    rep = {"seed": cfg.seed, "dims_match": m1.dims == m2.dims}
    rep["isomorphic"] = analysis.module_isomorphic(m1, m2, seed=cfg.seed)
    rep["intertwiner_dim"] = len(analysis.intertwiners(m1, m2)) if m1.graph == m2.graph else 0
    ok, cert = analysis.unitarily_equivalent(m1, m2, tol=min(cfg.tol, 1e-10), seed=cfg.seed)
    rep["unitarily_equivalent"] = ok
    rep["objective"] = cert.get("objective")
    rep["reason"] = cert.get("reason")
    if ok:
        rep["unitaries"] = {v: [[[z.real, z.imag] for z in row] for row in u]
                            for v, u in cert["unitaries"].items()}
    _emit(cfg, _dump(rep, cfg.format))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_functor(cfg: RunConfig) -> int:
    m = _load_module(cfg.modules[0], None)
    if cfg.functor == "omega":
        if m.graph != catalog.rose(2):
            raise InputError("omega expects a rose-2 module")
        out, ref = catalog.omega(m), "complete2"
    elif cfg.functor == "psi":
        if m.graph != catalog.complete2():
            raise InputError("psi expects a complete2 module")
        out, ref = catalog.psi(m), "rose:2"
    else:
        raise InputError("functor must be omega or psi")
    _emit(cfg, out.to_json(graph_ref=ref))
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "lift-check": cmd_lift_check,
    "moduli": cmd_moduli,
    "equiv": cmd_equiv,
    "functor": cmd_functor,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kgraphrep", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt="text"):
        sp.add_argument("--graph")
        sp.add_argument("--module", action="append", default=[], dest="modules")
        sp.add_argument("--tol", type=float, default=1e-9)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out")
        sp.add_argument("--format", choices=["text", "json", "csv"], default=fmt)

    common(sub.add_parser("validate", help="check the k-graph axioms"))
    common(sub.add_parser("analyze", help="decompose a module and report its P-dimension"))
    sp = sub.add_parser("lift-check", help="verify the relations on a truncated lift")
    common(sp)
    sp.add_argument("--depth")
    sp = sub.add_parser("moduli", help="dimension formulas and irreducible fractions")
    common(sp, fmt="csv")
    sp.add_argument("--d", action="append", default=[], dest="dims",
                    help="dimension vector such as 1,0,0 (repeatable)")
    sp.add_argument("--range", dest="dim_range", help="uniform d from a to b, as a:b")
    sp.add_argument("--samples", type=int, default=0)
    common(sub.add_parser("equiv", help="module isomorphism and unitary equivalence"))
    sp = sub.add_parser("functor", help="apply omega or psi to a module file")
    sp.add_argument("functor", choices=["omega", "psi"])
    common(sp)
    return p


def config_from_args(ns) -> RunConfig:
    kw = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__}
    if kw.get("depth") is not None:
        kw["depth"] = parse_degree(kw["depth"])
    return RunConfig(**kw)


def run(cfg: RunConfig) -> int:
    if cfg.command in ("validate", "moduli") and not cfg.graph:
        raise InputError("--graph is required")
    if cfg.command in ("analyze", "lift-check", "equiv", "functor") and not cfg.modules:
        raise InputError("--module is required")
    return COMMANDS[cfg.command](cfg)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return run(config_from_args(ns))
    except (InputError, GraphStructureError, ModuleStructureError, json.JSONDecodeError,
            ValueError) as exc:
        if isinstance(exc, InfeasibleDimensionError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAIL
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
