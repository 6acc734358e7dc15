"""Reduction compiler from CNF-SAT to block graphs of genus-two blocks and
triangulated 3-manifolds."""
from . import blockgraph, compiler, farey, formula, splitting, tri
from .blockgraph import BlockGraph, BlockType, build_block_graph, structural_check
from .compiler import Certificate, compile_formula, tet_budget
from .farey import Slope, farey_distance, parse_slope
from .formula import brute_force_sat, length, parse_dimacs, parse_expr, parse_formula
from .splitting import amalgamated_genus, min_genus

__version__ = "0.1.0"

__all__ = [
    "blockgraph",
    "compiler",
    "farey",
    "formula",
    "splitting",
    "tri",
    "BlockGraph",
    "BlockType",
    "build_block_graph",
    "structural_check",
    "Certificate",
    "compile_formula",
    "tet_budget",
    "Slope",
    "farey_distance",
    "parse_slope",
    "brute_force_sat",
    "length",
    "parse_dimacs",
    "parse_expr",
    "parse_formula",
    "amalgamated_genus",
    "min_genus",
]
