"""Exact near-bipartiteness, IFVS and IOCT algorithms for P5-free graphs.

The public surface is the Graph type with its parsers and generators,
the solver entry points in nearbip.solvers, the list-colouring engine
in nearbip.lsac, the hardness gadgets in nearbip.gadgets and the
brute-force oracles in nearbip.oracle.
"""

from .graph import (
    Graph,
    GenerationError,
    NotP5FreeError,
    ParseError,
    parse_edgelist,
    parse_graph6,
    emit_edgelist,
    emit_graph6,
)
from .solvers import (
    SolveResult,
    ifvs_decision,
    ifvs_exact_size,
    is_near_bipartite,
    max_ifvs,
    min_ifvs,
    min_ioct,
    verify_ifvs,
    verify_ioct,
)
from .troublefree import PipelineInvariantError

__version__ = "0.1.0"

__all__ = [
    "Graph", "GenerationError", "NotP5FreeError", "ParseError",
    "PipelineInvariantError", "SolveResult", "emit_edgelist", "emit_graph6",
    "ifvs_decision", "ifvs_exact_size", "is_near_bipartite", "max_ifvs",
    "min_ifvs", "min_ioct", "parse_edgelist", "parse_graph6",
    "verify_ifvs", "verify_ioct", "__version__",
]
