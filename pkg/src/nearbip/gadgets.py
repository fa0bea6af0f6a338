"""Executable hardness constructions.

Three reductions witness why the main solvers insist on P5-free inputs:

* CNF satisfiability embeds into list semi-acyclic 3-colouring of
  general graphs, so the listed problem is NP-complete without the
  P5-free restriction.
* Hamiltonicity through a fixed edge of a cubic graph embeds into
  near-bipartiteness of a line graph, so even deciding the unlisted
  problem is NP-complete on line graphs (which are claw-free).
* Subdividing every edge once turns minimum feedback vertex set into
  minimum independent feedback vertex set without changing the optimum,
  so the independent variant inherits FVS hardness.

Each construction is deterministic and checks its own census (vertex
and edge counts, degrees) before returning.  The equivalence claims are
exercised by brute-force oracles in the test suite; the builders here
only guarantee shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .graph import Graph, ParseError, line_graph, subdivide_all


class GadgetError(RuntimeError):
    """A constructed gadget failed its own census."""


class DegenerateFormulaError(ValueError):
    """Normalisation decided the formula outright, so there is nothing
    left to reduce; satisfiable tells which way it was decided."""

    def __init__(self, satisfiable: bool):
        super().__init__(
            "formula decided during normalisation: "
            + ("satisfiable" if satisfiable else "unsatisfiable"))
        self.satisfiable = satisfiable


@dataclass(frozen=True)
class CnfFormula:
    """CNF with DIMACS-style literals: +v / -v for v in 1..var_count."""

    var_count: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.var_count < 0:
            raise ValueError("var_count must be non-negative")
        for cl in self.clauses:
            for lit in cl:
                if lit == 0 or abs(lit) > self.var_count:
                    raise ValueError(f"literal {lit} out of range")

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.var_count} {len(self.clauses)}"]
        for cl in self.clauses:
            lines.append(" ".join(str(l) for l in cl) + " 0")
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF; comment lines start with c, clauses end in 0."""
    var_count = None
    clause_count = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"line {lineno}: malformed problem line")
            var_count, clause_count = int(parts[2]), int(parts[3])
            continue
        if var_count is None:
            raise ParseError(f"line {lineno}: clause before problem line")
        try:
            toks = [int(t) for t in line.split()]
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer token") from None
        for t in toks:
            if t == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(t)
    if current:
        raise ParseError("unterminated clause at end of input")
    if var_count is None:
        raise ParseError("missing problem line")
    if clause_count is not None and len(clauses) != clause_count:
        raise ParseError(f"problem line promises {clause_count} clauses, "
                         f"found {len(clauses)}")
    return CnfFormula(var_count, tuple(clauses))


def normalize_cnf(formula: CnfFormula) -> CnfFormula:
    """Simplify to the shape the colouring gadget needs.

    Duplicate literals and tautological clauses are dropped, unit
    clauses are propagated and pure literals eliminated, to exhaustion;
    then variables are renumbered densely in order of first appearance.
    The result has only clauses of length >= 2 and every variable
    occurring in both polarities, and it is equisatisfiable with the
    input.  A formula that collapses entirely raises
    DegenerateFormulaError carrying the decided verdict.
    """
    clauses = [tuple(dict.fromkeys(cl)) for cl in formula.clauses]
    clauses = [cl for cl in clauses if not any(-l in cl for l in cl)]
    while True:
        if any(not cl for cl in clauses):
            raise DegenerateFormulaError(False)
        unit = next((cl[0] for cl in clauses if len(cl) == 1), None)
        if unit is None:
            polarity: dict[int, set[bool]] = {}
            for cl in clauses:
                for l in cl:
                    polarity.setdefault(abs(l), set()).add(l > 0)
            unit = next((v if True in ps else -v
                         for v, ps in sorted(polarity.items())
                         if len(ps) == 1), None)
            if unit is None:
                break
        nxt = []
        for cl in clauses:
            if unit in cl:
                continue
            nxt.append(tuple(l for l in cl if l != -unit))
        clauses = nxt
    if not clauses:
        raise DegenerateFormulaError(True)
    renum: dict[int, int] = {}
    for cl in clauses:
        for l in cl:
            if abs(l) not in renum:
                renum[abs(l)] = len(renum) + 1
    out = tuple(tuple(renum[abs(l)] * (1 if l > 0 else -1) for l in cl)
                for cl in clauses)
    return CnfFormula(len(renum), out)


@dataclass(frozen=True)
class SatGadget:
    """Colouring instance built from a normalised formula.

    lists[v] is the allowed colour set of vertex v.  clause_cycles[j]
    holds clause j's cycle vertices in order, literal vertices at even
    positions; literal_vertex maps (clause index, literal) to the
    vertex representing that occurrence, and var_vertex picks the
    representative v_x of each variable.
    """

    formula: CnfFormula
    graph: Graph
    lists: tuple[frozenset[int], ...]
    clause_cycles: tuple[tuple[int, ...], ...]
    literal_vertex: dict[tuple[int, int], int]
    var_vertex: dict[int, int]
    middle_vertices: tuple[int, ...]


def sat_to_lsac(formula: CnfFormula) -> SatGadget:
    """Reduce satisfiability to list semi-acyclic 3-colouring.

    Each clause becomes a cycle of twice its length whose lists
    alternate {1,3} and {2}; only a literal vertex coloured 1 (a true
    literal) breaks the cycle out of the colour classes {2,3}.  The
    first positive occurrence of each variable is its representative:
    later positive occurrences are tied to it through a middle {1,3}
    vertex, which forces equal colours, and negative occurrences are
    joined to it directly, which forces different colours.
    """
    formula = normalize_cnf(formula)
    lists: list[frozenset[int]] = []
    edges: list[tuple[int, int]] = []
    cycles: list[tuple[int, ...]] = []
    literal_vertex: dict[tuple[int, int], int] = {}
    l13, l2 = frozenset((1, 3)), frozenset((2,))

    def fresh(l: frozenset[int]) -> int:
        lists.append(l)
        return len(lists) - 1

    for j, cl in enumerate(formula.clauses):
        cyc = []
        for lit in cl:
            v = fresh(l13)
            literal_vertex[(j, lit)] = v
            cyc.append(v)
            cyc.append(fresh(l2))
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            edges.append((a, b))
        cycles.append(tuple(cyc))

    var_vertex: dict[int, int] = {}
    middles: list[int] = []
    for x in range(1, formula.var_count + 1):
        pos = [(j, literal_vertex[(j, x)])
               for j, cl in enumerate(formula.clauses) if x in cl]
        neg = [literal_vertex[(j, -x)]
               for j, cl in enumerate(formula.clauses) if -x in cl]
        if not pos or not neg:
            raise GadgetError(f"variable {x} lost a polarity in normalisation")
        vx = pos[0][1]
        var_vertex[x] = vx
        for _, u in pos[1:]:
            w = fresh(l13)
            middles.append(w)
            edges.extend([(u, w), (w, vx)])
        for u in neg:
            edges.append((u, vx))

    if len(set((min(a, b), max(a, b)) for a, b in edges)) != len(edges):
        raise GadgetError("reduction produced a repeated edge")
    g = Graph(len(lists), edges)
    want_n = sum(2 * len(cl) for cl in formula.clauses) + len(middles)
    neg_count = sum(1 for cl in formula.clauses for l in cl if l < 0)
    want_m = sum(2 * len(cl) for cl in formula.clauses) + 2 * len(middles) + neg_count
    if g.n != want_n or g.m != want_m:
        raise GadgetError(f"census mismatch: built {g.n}/{g.m}, "
                          f"expected {want_n}/{want_m}")
    return SatGadget(formula, g, tuple(lists), tuple(cycles),
                     literal_vertex, var_vertex, tuple(middles))


def decode_assignment(gadget: SatGadget, coloring: dict[int, int]) -> dict[int, bool]:
    """Read the satisfying assignment off a semi-acyclic colouring."""
    out = {}
    for x, vx in gadget.var_vertex.items():
        c = coloring[vx]
        if c not in (1, 3):
            raise ValueError(f"representative of variable {x} has colour {c}")
        out[x] = c == 1
    return out


@dataclass(frozen=True)
class HamiltonGadget:
    """Line graph used to tie near-bipartiteness to Hamiltonicity.

    gprime is the input with the chosen edge removed and a pendant
    hung on each of its endpoints; graph is the line graph of gprime.
    pendant_line_vertices are the two line-graph vertices standing for
    the pendant edges; edge_map sends each line-graph vertex back to
    the gprime edge it represents.
    """

    base: Graph
    through_edge: tuple[int, int]
    gprime: Graph
    graph: Graph
    edge_map: tuple[tuple[int, int], ...]
    pendant_line_vertices: tuple[int, int]


def hamilton_gadget(g: Graph, e: tuple[int, int]) -> HamiltonGadget:
    """Near-bipartiteness target for Hamiltonicity through an edge.

    The input must be cubic.  The edge is removed, each endpoint gets a
    pendant neighbour, and the line graph of the result is returned: it
    is near-bipartite exactly when the input has a Hamilton cycle
    through the chosen edge.  All non-pendant line vertices end up with
    degree 4 and the line graph has 3n/2 + 1 vertices.
    """
    if any(len(g.neighbors(v)) != 3 for v in range(g.n)):
        raise ValueError("input graph must be cubic")
    u, v = e
    if not g.has_edge(u, v):
        raise ValueError(f"({u},{v}) is not an edge")
    u, v = min(u, v), max(u, v)
    p1, p2 = g.n, g.n + 1
    edges = [ed for ed in g.edges() if ed != (u, v)]
    edges.extend([(u, p1), (v, p2)])
    gprime = Graph(g.n + 2, edges)
    lg, edge_map = line_graph(gprime)
    if lg.n != 3 * g.n // 2 + 1:
        raise GadgetError(f"line graph has {lg.n} vertices, "
                          f"expected {3 * g.n // 2 + 1}")
    pend = tuple(i for i, ed in enumerate(edge_map) if p1 in ed or p2 in ed)
    if len(pend) != 2:
        raise GadgetError("expected exactly two pendant line vertices")
    for i in range(lg.n):
        want = 2 if i in pend else 4
        if len(lg.neighbors(i)) != want:
            raise GadgetError(f"line vertex {i} has degree "
                              f"{len(lg.neighbors(i))}, expected {want}")
    return HamiltonGadget(g, (u, v), gprime, lg, edge_map, (pend[0], pend[1]))


@dataclass(frozen=True)
class SubdivisionGadget:
    """Once-subdivided graph, where minimum FVS and minimum independent
    FVS coincide with the original minimum FVS.

    Original vertices keep their ids; edge_vertex maps each original
    edge to its subdivision vertex.
    """

    base: Graph
    graph: Graph
    edge_vertex: dict[tuple[int, int], int]

    def push_fvs(self, vertices: Iterable[int]) -> tuple[int, ...]:
        """An FVS of the base graph, as a vertex set of the subdivided
        graph, where it is automatically independent."""
        vs = sorted(set(vertices))
        for x in vs:
            if not 0 <= x < self.base.n:
                raise ValueError(f"vertex {x} not in the base graph")
        return tuple(vs)


def subdivision_chain(g: Graph) -> SubdivisionGadget:
    """Subdivide every edge once; original vertices become independent."""
    sub = subdivide_all(g)
    ev = {e: g.n + i for i, e in enumerate(g.edges())}
    if sub.n != g.n + g.m or sub.m != 2 * g.m:
        raise GadgetError("subdivision census mismatch")
    for (a, b), w in ev.items():
        if not (sub.has_edge(a, w) and sub.has_edge(w, b)):
            raise GadgetError("subdivision vertex wired incorrectly")
    return SubdivisionGadget(g, sub, ev)
