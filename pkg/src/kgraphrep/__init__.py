"""Finite k-graphs, their Pythagorean matrix modules and the lifted representations."""
from .kgraph import KGraph, Path, validate_graph
from .module import MatrixModule, check_module, path_operator, random_module

__all__ = ["KGraph", "Path", "validate_graph", "MatrixModule", "check_module",
           "path_operator", "random_module"]
