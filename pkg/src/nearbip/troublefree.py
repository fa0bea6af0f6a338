"""Minimum weight of colour 1 over trouble-free colourings.

A troublesome instance is a graph whose vertex set splits into an
independent set ``l2`` of vertices that must take colour 2 and a set
``l13`` inducing a bipartite graph whose vertices choose between colours
1 and 3.  A colouring is trouble-free when adjacent ``l13`` vertices get
different colours and every pair of non-adjacent ``l13`` vertices with at
least two common ``l2`` neighbours carries colour 1 on at least one side.
Those pairs are exactly the diagonals of induced 4-cycles that could
otherwise be coloured alternately with 2 and 3.

The minimum number of colour-1 vertices is computed exactly through an
auxiliary graph: red edges copy the ``l13`` adjacency, blue edges join
the constrained pairs.  Reduction rules shrink the auxiliary graph while
preserving feasible colourings one to one, the two sides of every red
component are contracted into weighted vertices, and the remaining blue
structure decomposes into cliques whenever the underlying graph has no
induced five-vertex path.  A blue component that is not a clique yields
an induced P5 witness instead of an answer.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional

from .graph import Graph, NotP5FreeError, bipartition, find_induced_path

FeasibleColoring = dict[int, int]


class PipelineInvariantError(RuntimeError):
    """An internal structural guarantee failed.

    Raised when a state that the solver proves impossible is observed
    anyway; it signals a bug or an undetected violated precondition,
    never an unsatisfiable input.
    """


@dataclass(frozen=True)
class TroublesomeInstance:
    """A graph split into an independent {2}-set and a bipartite {1,3}-set."""

    graph: Graph
    l2: frozenset[int]
    l13: frozenset[int]

    def __init__(self, graph: Graph, l2: Iterable[int], l13: Iterable[int]):
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "l2", frozenset(l2))
        object.__setattr__(self, "l13", frozenset(l13))
        if self.l2 & self.l13:
            raise ValueError("l2 and l13 overlap")
        if self.l2 | self.l13 != set(range(graph.n)):
            raise ValueError("l2 and l13 must partition the vertex set")
        for u, v in graph.edges():
            if u in self.l2 and v in self.l2:
                raise ValueError(f"l2 is not independent: edge {u}-{v}")
        if bipartition(graph, self.l13) is None:
            raise ValueError("l13 does not induce a bipartite graph")


def blue_pairs(g: Graph, l2: Iterable[int], l13: Iterable[int]) -> list[tuple[int, int]]:
    """Non-adjacent l13 pairs with two or more common l2 neighbours."""
    l2set = frozenset(l2)
    vs = sorted(l13)
    out = []
    for i, u in enumerate(vs):
        for v in vs[i + 1:]:
            if g.has_edge(u, v):
                continue
            if len(g.neighbors(u) & g.neighbors(v) & l2set) >= 2:
                out.append((u, v))
    return out


class AuxGraph:
    """Weighted graph with red and blue edges over (contracted) l13 vertices.

    ``members`` maps each vertex back to the original l13 vertices it
    represents, ``assigned`` records every colour ever fixed here, and
    ``ones_weight`` accumulates the weight of colour-1 vertices that the
    rules removed.  Contracted graphs keep a reference to their source
    and the map from source vertices to their representative.
    """

    def __init__(self, inst: TroublesomeInstance, kind: str = "H"):
        self.inst = inst
        self.kind = kind
        self.alive: set[int] = set()
        self.red: dict[int, set[int]] = {}
        self.blue: dict[int, set[int]] = {}
        self.weight: dict[int, int] = {}
        self.members: dict[int, tuple[int, ...]] = {}
        self.assigned: dict[int, int] = {}
        self.ones_weight = 0
        self.comp_side: Optional[dict[int, tuple[int, int]]] = None
        self.source: Optional["AuxGraph"] = None
        self.rep_of: dict[int, int] = {}
        self.rule_counts: Counter = Counter()

    def add_vertex(self, v: int, weight: int, members: tuple[int, ...]):
        self.alive.add(v)
        self.red[v] = set()
        self.blue[v] = set()
        self.weight[v] = weight
        self.members[v] = members

    def add_red(self, u: int, v: int):
        self.red[u].add(v)
        self.red[v].add(u)

    def add_blue(self, u: int, v: int):
        self.blue[u].add(v)
        self.blue[v].add(u)

    def remove(self, v: int):
        self.alive.discard(v)
        for w in self.red.pop(v, ()):
            self.red[w].discard(v)
        for w in self.blue.pop(v, ()):
            self.blue[w].discard(v)

    def copy(self) -> "AuxGraph":
        c = AuxGraph(self.inst, self.kind)
        c.alive = set(self.alive)
        c.red = {v: set(ws) for v, ws in self.red.items()}
        c.blue = {v: set(ws) for v, ws in self.blue.items()}
        c.weight = dict(self.weight)
        c.members = dict(self.members)
        c.assigned = dict(self.assigned)
        c.ones_weight = self.ones_weight
        c.comp_side = None if self.comp_side is None else dict(self.comp_side)
        c.source = self.source
        c.rep_of = dict(self.rep_of)
        c.rule_counts = Counter(self.rule_counts)
        return c

    def dot(self) -> str:
        """Edge-list dump in DOT style, for debugging."""
        lines = [f"graph {self.kind} {{"]
        for v in sorted(self.alive):
            c = self.assigned.get(v)
            tag = "" if c is None else f" colour={c}"
            lines.append(f"  {v} [w={self.weight[v]}{tag} members={list(self.members[v])}]")
        for v in sorted(self.alive):
            for w in sorted(self.red[v]):
                if w > v:
                    lines.append(f"  {v} -- {w} [red]")
        for v in sorted(self.alive):
            for w in sorted(self.blue[v]):
                if w > v:
                    lines.append(f"  {v} -- {w} [blue]")
        lines.append("}")
        return "\n".join(lines)


def build_h(inst: TroublesomeInstance, *, include_blue: bool = True) -> AuxGraph:
    """Auxiliary graph of a troublesome instance.

    Red edges are the edges inside l13; blue edges join the constrained
    non-adjacent pairs.  With include_blue=False only red edges are
    built, which drops the 4-cycle constraints (the transversal variant
    of the pipeline needs exactly that).
    """
    h = AuxGraph(inst, "H")
    for v in sorted(inst.l13):
        h.add_vertex(v, 1, (v,))
    for u, v in inst.graph.edges():
        if u in inst.l13 and v in inst.l13:
            h.add_red(u, v)
    if include_blue:
        for u, v in blue_pairs(inst.graph, inst.l2, inst.l13):
            h.add_blue(u, v)
    return h


def _ensure_sides(h: AuxGraph):
    """Component id and side of every vertex, from the first red structure seen.

    Sides are fixed once: removals only refine red components, and the
    rules that consult sides never need the refreshed partition.
    """
    if h.comp_side is not None:
        return
    h.comp_side = {}
    for cid, comp in enumerate(connected_components_red(h)):
        side = {comp[0]: 0}
        queue = [comp[0]]
        while queue:
            nxt = []
            for v in queue:
                for w in h.red[v]:
                    if w in side:
                        if side[w] == side[v]:
                            raise PipelineInvariantError("red subgraph is not bipartite")
                    else:
                        side[w] = side[v] ^ 1
                        nxt.append(w)
            queue = nxt
        for v in comp:
            h.comp_side[v] = (cid, side[v])


def connected_components_red(h: AuxGraph) -> list[tuple[int, ...]]:
    """Red components among alive vertices, each sorted, by least vertex."""
    seen: set[int] = set()
    comps = []
    for s in sorted(h.alive):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            v = stack.pop()
            for w in h.red[v]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


def _assign(h: AuxGraph, v: int, c: int) -> Optional[bool]:
    """Fix a colour; True if changed, False if already so, None on conflict."""
    cur = h.assigned.get(v)
    if cur is None:
        h.assigned[v] = c
        return True
    return False if cur == c else None


# Each rule applies its first instance in canonical order and reports
# "changed", "none", or "no".  The engine restarts from the top after
# every change, so exhaustiveness comes from the loop, not the rule.


def _rule1(h: AuxGraph) -> str:
    _ensure_sides(h)
    for u in sorted(h.alive):
        for v in sorted(h.blue[u]):
            if v < u:
                continue
            if h.comp_side[u] != h.comp_side[v]:
                continue
            # blue edge inside one side of a red component: both ends get 1
            ru = _assign(h, u, 1)
            rv = _assign(h, v, 1)
            if ru is None or rv is None:
                return "no"
            if ru or rv:
                return "changed"
    return "none"


def _rule2(h: AuxGraph) -> str:
    _ensure_sides(h)
    for u in sorted(h.alive):
        for v in sorted(h.blue[u]):
            if v < u:
                continue
            cu, su = h.comp_side[u]
            cv, sv = h.comp_side[v]
            if cu == cv and su != sv:
                # the red structure already forces opposite colours here
                h.blue[u].discard(v)
                h.blue[v].discard(u)
                return "changed"
    return "none"


def _rule3(h: AuxGraph) -> str:
    _ensure_sides(h)
    for u in sorted(h.alive):
        seen_sides: dict[int, int] = {}
        for v in h.blue[u]:
            cv, sv = h.comp_side[v]
            if cv == h.comp_side[u][0]:
                continue
            seen_sides[cv] = seen_sides.get(cv, 0) | (1 << sv)
            if seen_sides[cv] == 3:
                r = _assign(h, u, 1)
                if r is None:
                    return "no"
                if r:
                    return "changed"
                break
    return "none"


def _rule4(h: AuxGraph) -> str:
    for u in sorted(h.alive):
        if u in h.assigned:
            continue
        if any(h.assigned.get(v) == 3 for v in h.blue[u]):
            if _assign(h, u, 1) is None:
                return "no"
            return "changed"
    return "none"


def _rule5(h: AuxGraph) -> str:
    for u in sorted(h.alive):
        if u in h.assigned:
            continue
        for v in sorted(h.red[u]):
            cv = h.assigned.get(v)
            if cv is not None:
                if _assign(h, u, 1 if cv == 3 else 3) is None:
                    return "no"
                return "changed"
    return "none"


def _rule6(h: AuxGraph) -> str:
    for u in sorted(h.alive):
        cu = h.assigned.get(u)
        if cu is None:
            continue
        for v in h.red[u]:
            if h.assigned.get(v) == cu:
                return "no"
        if cu == 3:
            for v in h.blue[u]:
                if h.assigned.get(v) == 3:
                    return "no"
    return "none"


def _rule7(h: AuxGraph) -> str:
    coloured = [v for v in sorted(h.alive) if v in h.assigned]
    if not coloured:
        return "none"
    for v in coloured:
        if h.assigned[v] == 1:
            h.ones_weight += h.weight[v]
        h.remove(v)
    return "changed"


def _rule8(h: AuxGraph) -> str:
    bcomps = blue_components(h)
    for i in range(len(bcomps)):
        for j in range(i + 1, len(bcomps)):
            between = sorted(
                (u, v)
                for u in bcomps[i]
                for v in h.red[u]
                if v in set(bcomps[j])
            )
            if len(between) < 2:
                continue
            core = {between[0][0], between[0][1], between[1][0], between[1][1]}
            rest = sorted((set(bcomps[i]) | set(bcomps[j])) - core)
            if not rest:
                continue
            # two vertex-disjoint red edges between two blue cliques force
            # colour 1 everywhere except on the four edge endpoints
            for v in rest:
                if _assign(h, v, 1) is None:
                    return "no"
            return "changed"
    return "none"


_RULES = {
    "R1": _rule1,
    "R2": _rule2,
    "R3": _rule3,
    "R4": _rule4,
    "R5": _rule5,
    "R6": _rule6,
    "R7": _rule7,
    "R8": _rule8,
}

_REDUCE_ORDER = ("R1", "R2", "R3", "R4", "R5", "R6", "R7")
_CLOSURE_ORDER = ("R4", "R5", "R6", "R7", "R8")


def apply_rule(h: AuxGraph, rule: str) -> str:
    """Apply the first instance of one named rule; for targeted testing."""
    return _RULES[rule](h)


def _run_rules(h: AuxGraph, order: tuple[str, ...]) -> bool:
    while True:
        for name in order:
            res = _RULES[name](h)
            if res == "no":
                return False
            if res == "changed":
                h.rule_counts[name] += 1
                break
        else:
            return True


def reduce_h(h: AuxGraph) -> Optional[AuxGraph]:
    """Exhaust the seven reduction rules in priority order.

    Mutates and returns h, with removed colour-1 weight accumulated in
    ones_weight and every fixed colour kept in ``assigned``.  Returns
    None when a rule certifies infeasibility.
    """
    _ensure_sides(h)
    return h if _run_rules(h, _REDUCE_ORDER) else None


def blue_components(h: AuxGraph) -> list[tuple[int, ...]]:
    """Blue components among alive vertices, each sorted, by least vertex."""
    seen: set[int] = set()
    comps = []
    for s in sorted(h.alive):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            v = stack.pop()
            for w in h.blue[v]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


def build_hstar(h: AuxGraph) -> AuxGraph:
    """Contract each red component side into one weighted vertex.

    Red components are recomputed on the reduced graph.  A side is
    represented by its least vertex; a component with both sides present
    yields one red edge between its two representatives.  Blue edges are
    inherited between representatives; the reduction rules guarantee no
    blue edge survives inside a single red component.
    """
    hs = AuxGraph(h.inst, "H*")
    hs.source = h
    hs.ones_weight = h.ones_weight
    comp_of: dict[int, int] = {}
    for cid, comp in enumerate(connected_components_red(h)):
        sides = bipartition_red(h, comp)
        for side in sides:
            if not side:
                continue
            rep = side[0]
            hs.add_vertex(rep, sum(h.weight[v] for v in side), tuple(side))
            for v in side:
                hs.rep_of[v] = rep
                comp_of[v] = cid
        if sides[0] and sides[1]:
            hs.add_red(sides[0][0], sides[1][0])
    for u in sorted(h.alive):
        for v in sorted(h.blue[u]):
            if v < u:
                continue
            if comp_of[u] == comp_of[v]:
                raise PipelineInvariantError(
                    "blue edge inside a red component survived reduction"
                )
            hs.add_blue(hs.rep_of[u], hs.rep_of[v])
    return hs


def bipartition_red(h: AuxGraph, comp: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Two sides of one red component; the least vertex goes left."""
    side = {comp[0]: 0}
    queue = [comp[0]]
    while queue:
        nxt = []
        for v in queue:
            for w in h.red[v]:
                if w in side:
                    if side[w] == side[v]:
                        raise PipelineInvariantError("red component is not bipartite")
                else:
                    side[w] = side[v] ^ 1
                    nxt.append(w)
        queue = nxt
    left = tuple(v for v in comp if side[v] == 0)
    right = tuple(v for v in comp if side[v] == 1)
    return left, right


# ---------------------------------------------------------------------------
# Induced P5 extraction from a non-clique blue component


def _common_l2(g: Graph, l2: frozenset[int], a: int, b: int) -> list[int]:
    return sorted(g.neighbors(a) & g.neighbors(b) & l2)


def _is_induced_p5(g: Graph, path: tuple[int, ...]) -> bool:
    if len(path) != 5 or len(set(path)) != 5:
        return False
    for i in range(5):
        for j in range(i + 1, 5):
            want = j == i + 1
            if g.has_edge(path[i], path[j]) != want:
                return False
    return True


def assert_blue_cliques(hs: AuxGraph) -> Optional[tuple[int, ...]]:
    """None when every blue component is a clique, else an induced P5.

    The witness lives in the instance graph.  Its construction walks two
    blue edges u-v, v-w whose far ends u, w are not blue-adjacent and
    assembles a five-vertex path from common l2 neighbours; when the
    local patterns are exhausted a global search backs it up.
    """
    for comp in blue_components(hs):
        cs = set(comp)
        for v in comp:
            nbrs = sorted(hs.blue[v] & cs)
            for ii, u in enumerate(nbrs):
                for w in nbrs[ii + 1:]:
                    if w in hs.blue[u]:
                        continue
                    path = _extract_p5(hs, u, v, w)
                    if path is None or not _is_induced_p5(hs.inst.graph, path):
                        path = find_induced_path(hs.inst.graph, 5)
                        if path is None:
                            raise PipelineInvariantError(
                                "non-clique blue component in a P5-free instance"
                            )
                    return tuple(path)
    return None


def _h_blue_edge(h: AuxGraph, aside: tuple[int, ...], bside: tuple[int, ...]) -> tuple[int, int]:
    for a in sorted(aside):
        for b in sorted(bside):
            if b in h.blue[a]:
                return a, b
    raise PipelineInvariantError("contracted blue edge without a source edge")


def _extract_p5(hs: AuxGraph, u: int, v: int, w: int) -> Optional[tuple[int, ...]]:
    h = hs.source
    if h is None:
        return None
    u1, v1 = _h_blue_edge(h, hs.members[u], hs.members[v])
    v2, w1 = _h_blue_edge(h, hs.members[v], hs.members[w])
    if v1 == v2:
        return _case_shared_centre(hs, u1, v1, w1)
    return _case_split_centre(hs, u1, v1, v2, w1)


def _case_shared_centre(hs: AuxGraph, u: int, z: int, w: int) -> Optional[tuple[int, ...]]:
    g = hs.inst.graph
    l2 = hs.inst.l2
    ps = [x for x in _common_l2(g, l2, u, z) if not g.has_edge(x, w)]
    qs = [x for x in _common_l2(g, l2, z, w) if not g.has_edge(x, u)]
    if not ps or not qs:
        return None
    return (u, ps[0], z, qs[0], w)


def _red_shortest_path(h: AuxGraph, a: int, b: int) -> list[int]:
    prev = {a: -1}
    queue = [a]
    while queue:
        nxt = []
        for v in queue:
            for x in sorted(h.red[v]):
                if x not in prev:
                    prev[x] = v
                    if x == b:
                        path = [x]
                        while path[-1] != a:
                            path.append(prev[path[-1]])
                        return path[::-1]
                    nxt.append(x)
        queue = nxt
    raise PipelineInvariantError("side mates not red-connected")


def _case_split_centre(hs: AuxGraph, u: int, v1: int, v2: int, w: int) -> Optional[tuple[int, ...]]:
    g = hs.inst.graph
    l2 = hs.inst.l2
    h = hs.source
    path = _red_shortest_path(h, v1, v2)
    if len(path) >= 5:
        return tuple(path[:5])
    s = path[1]
    ps = _common_l2(g, l2, u, v1)
    qs = _common_l2(g, l2, v2, w)
    for p in ps:
        if not g.has_edge(p, s) and not g.has_edge(p, v2):
            return (u, p, v1, s, v2)
    for q in qs:
        if not g.has_edge(q, s) and not g.has_edge(q, v1):
            return (w, q, v2, s, v1)
    b = [p for p in ps if g.has_edge(p, v2)]
    d = [q for q in qs if g.has_edge(q, v1)]
    if len(b) >= 2:
        return _case_shared_centre(hs, u, v2, w)
    if len(d) >= 2:
        return _case_shared_centre(hs, u, v1, w)
    rest_p = [p for p in ps if p not in b]
    rest_q = [q for q in qs if q not in d]
    if b and rest_p and rest_q:
        return (rest_p[0], v1, b[0], v2, rest_q[0])
    return None


# ---------------------------------------------------------------------------
# Minimisation over the contracted graph


def minimize(hstar: AuxGraph) -> Optional[tuple[int, FeasibleColoring]]:
    """Minimum colour-1 weight and a witness colouring, or None.

    Works on a copy.  The result weight includes ones_weight carried in
    by the reduction, and the colouring covers every vertex alive when
    minimisation started.
    """
    per = _solve_components(hstar)
    if per is None:
        return None
    base_w, base_col, comp_opts = per
    total = base_w
    col = dict(base_col)
    for opts in comp_opts:
        best = None
        for w, part in opts:
            if best is None or w < best[0]:
                best = (w, part)
        total += best[0]
        col.update(best[1])
    return total, col


def achievable_weights(hstar: AuxGraph) -> dict[int, FeasibleColoring]:
    """Every achievable colour-1 weight with one witness colouring each.

    The per-component option lists are provably exhaustive, so the
    Minkowski sum below enumerates the full set of feasible weights,
    not only the minimum.
    """
    per = _solve_components(hstar)
    if per is None:
        return {}
    base_w, base_col, comp_opts = per
    acc: dict[int, FeasibleColoring] = {base_w: dict(base_col)}
    for opts in comp_opts:
        nxt: dict[int, FeasibleColoring] = {}
        for w0 in sorted(acc):
            for w, part in opts:
                tw = w0 + w
                if tw not in nxt:
                    merged = dict(acc[w0])
                    merged.update(part)
                    nxt[tw] = merged
        acc = nxt
    return acc


def _solve_components(
    hstar: AuxGraph,
) -> Optional[tuple[int, FeasibleColoring, list[list[tuple[int, FeasibleColoring]]]]]:
    hs = hstar.copy()
    if not _run_rules(hs, _CLOSURE_ORDER):
        return None
    comp_opts = []
    for comp in _mixed_components(hs):
        opts = _component_options(hs, comp)
        if not opts:
            return None
        comp_opts.append(opts)
    return hs.ones_weight, dict(hs.assigned), comp_opts


def _mixed_components(hs: AuxGraph) -> list[tuple[int, ...]]:
    seen: set[int] = set()
    comps = []
    for s in sorted(hs.alive):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            v = stack.pop()
            for w in hs.red[v] | hs.blue[v]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


def _component_options(hs: AuxGraph, comp: tuple[int, ...]) -> list[tuple[int, FeasibleColoring]]:
    """All feasible colourings of one component, as (weight, colouring).

    Either one blue clique keeps its red-covered part fully at colour 1,
    which propagates everywhere else, or every clique spends its single
    colour 3 inside that part; the second shape collapses to at most two
    rooted propagations per leftover cycle structure.
    """
    comp_set = set(comp)
    bcomps = [b for b in blue_components(hs) if b[0] in comp_set]
    double = _double_red_pair(hs, bcomps)
    if double is not None:
        u1, u2, v1, v2 = double
        if len(comp) != 4:
            raise PipelineInvariantError("double red pair not isolated")
        return [
            (hs.weight[u1] + hs.weight[v2], {u1: 1, v1: 3, v2: 1, u2: 3}),
            (hs.weight[u2] + hs.weight[v1], {u2: 1, v2: 3, v1: 1, u1: 3}),
        ]
    options: list[tuple[int, FeasibleColoring]] = []
    for bc in bcomps:
        inner = [v for v in bc if not hs.red[v]]
        seeds = [v for v in bc if hs.red[v]]
        col: FeasibleColoring = {}
        ok = all(_propagate(hs, col, v, 1) for v in seeds)
        if not ok:
            continue
        if set(col) != comp_set - set(inner):
            raise PipelineInvariantError("all-ones propagation stalled")
        base_w = sum(hs.weight[v] for v in col if col[v] == 1)
        full_inner_w = sum(hs.weight[v] for v in inner)
        plain = dict(col)
        plain.update({v: 1 for v in inner})
        options.append((base_w + full_inner_w, plain))
        for z in inner:
            var = dict(col)
            var.update({v: (3 if v == z else 1) for v in inner})
            options.append((base_w + full_inner_w - hs.weight[z], var))
    options.extend(_residual_options(hs, comp_set, bcomps))
    return options


def _double_red_pair(hs: AuxGraph, bcomps) -> Optional[tuple[int, int, int, int]]:
    for i in range(len(bcomps)):
        for j in range(i + 1, len(bcomps)):
            bj = set(bcomps[j])
            between = sorted((u, v) for u in bcomps[i] for v in hs.red[u] if v in bj)
            if len(between) >= 2:
                (u1, v1), (u2, v2) = between[0], between[1]
                if len(between) > 2 or len(bcomps[i]) != 2 or len(bcomps[j]) != 2:
                    raise PipelineInvariantError("unreduced double red pair")
                return u1, u2, v1, v2
    return None


def _propagate(hs: AuxGraph, col: FeasibleColoring, v: int, c: int) -> bool:
    """Force v to c and chase consequences; False on contradiction.

    Colour 1 forces 3 on the red partner; colour 3 forces 1 on the red
    partner and on every blue clique mate.
    """
    cur = col.get(v)
    if cur is not None:
        return cur == c
    col[v] = c
    if c == 3:
        for m in hs.blue[v]:
            if col.get(m) == 3:
                return False
            if m not in col and not _propagate(hs, col, m, 1):
                return False
        for p in hs.red[v]:
            if not _propagate(hs, col, p, 1):
                return False
    else:
        for p in hs.red[v]:
            if not _propagate(hs, col, p, 3):
                return False
    return True


def _residual_options(
    hs: AuxGraph, comp_set: set[int], bcomps
) -> list[tuple[int, FeasibleColoring]]:
    """Colourings where every red-covered clique part holds one colour 3."""
    col: FeasibleColoring = {}
    for bc in bcomps:
        for v in bc:
            if not hs.red[v]:
                col[v] = 1
    while True:
        progressed = False
        for bc in bcomps:
            if any(col.get(v) == 3 for v in bc):
                continue
            open_vs = [v for v in bc if v not in col and hs.red[v]]
            if not open_vs:
                return []  # the clique can no longer take its colour 3
            if len(open_vs) == 1:
                if not _propagate(hs, col, open_vs[0], 3):
                    return []
                progressed = True
                break
        if not progressed:
            break
    left = sorted(comp_set - set(col))
    forced_w = sum(hs.weight[v] for v in col if col[v] == 1)
    if not left:
        _check_assignment(hs, comp_set, col)
        return [(forced_w, dict(col))]
    part_options = _cycle_orientations(hs, comp_set, bcomps, col, left)
    if part_options is None:
        return []
    out: list[tuple[int, FeasibleColoring]] = [(forced_w, dict(col))]
    for opts in part_options:
        nxt = []
        for w0, col0 in out:
            for w1, col1 in opts:
                merged = dict(col0)
                merged.update(col1)
                nxt.append((w0 + w1, merged))
        out = nxt
    for w, full in out:
        _check_assignment(hs, comp_set, full)
    return out


def _cycle_orientations(hs, comp_set, bcomps, col, left):
    """Per leftover part, both rooted propagations that finish the colouring."""
    left_set = set(left)
    clique_of: dict[int, int] = {}
    for idx, bc in enumerate(bcomps):
        for v in bc:
            clique_of[v] = idx
    edges: dict[tuple[int, int], tuple[int, int]] = {}
    adj: dict[int, set[int]] = {}
    for v in left:
        partners = [p for p in hs.red[v] if p in left_set]
        if len(hs.red[v]) != 1 or len(partners) != 1:
            raise PipelineInvariantError("leftover vertex without an open red edge")
        p = partners[0]
        a, b = clique_of[v], clique_of[p]
        key = (min(a, b), max(a, b))
        edges.setdefault(key, (v, p) if a < b else (p, v))
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    for idx in adj:
        if len(adj[idx]) < 2:
            raise PipelineInvariantError("leftover clique graph has degree below 2")
    parts = []
    for nodes in _node_components(adj):
        part_edges = sorted(k for k in edges if k[0] in nodes)
        bridges = _bridges(nodes, adj)
        pick = next((k for k in part_edges if k not in bridges), None)
        if pick is None:
            raise PipelineInvariantError("leftover clique graph is a tree")
        u, v = edges[pick]
        scope = {x for x in left if clique_of[x] in nodes}
        opts = []
        for root in (u, v):
            trial: FeasibleColoring = dict(col)
            if not _propagate(hs, trial, root, 1):
                continue
            if any(x not in trial for x in scope):
                raise PipelineInvariantError("rooted propagation stalled")
            part = {x: trial[x] for x in scope}
            opts.append((sum(hs.weight[x] for x in scope if part[x] == 1), part))
        if not opts:
            return None
        parts.append(opts)
    return parts


def _node_components(adj: dict[int, set[int]]) -> list[tuple[int, ...]]:
    seen: set[int] = set()
    out = []
    for s in sorted(adj):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            a = stack.pop()
            for b in adj[a]:
                if b not in seen:
                    seen.add(b)
                    comp.append(b)
                    stack.append(b)
        out.append(tuple(sorted(comp)))
    return out


def _bridges(nodes: tuple[int, ...], adj: dict[int, set[int]]) -> set[tuple[int, int]]:
    """Bridge edges of one simple connected component, by iterative lowlink."""
    order: dict[int, int] = {}
    low: dict[int, int] = {}
    bridges: set[tuple[int, int]] = set()
    counter = 0
    root = nodes[0]
    stack: list[tuple[int, int, Iterable[int]]] = [(root, -1, iter(sorted(adj[root])))]
    order[root] = low[root] = counter
    counter += 1
    while stack:
        v, parent, it = stack[-1]
        advanced = False
        for w in it:
            if w not in order:
                order[w] = low[w] = counter
                counter += 1
                stack.append((w, v, iter(sorted(adj[w]))))
                advanced = True
                break
            if w != parent:
                low[v] = min(low[v], order[w])
        if not advanced:
            stack.pop()
            if parent != -1:
                low[parent] = min(low[parent], low[v])
                if low[v] > order[parent]:
                    bridges.add((min(parent, v), max(parent, v)))
    return bridges


def _check_assignment(hs: AuxGraph, comp_set: set[int], col: FeasibleColoring):
    for v in comp_set:
        if v not in col:
            raise PipelineInvariantError("component colouring is incomplete")
        for p in hs.red[v]:
            if col[p] == col[v]:
                raise PipelineInvariantError("red edge coloured monochromatically")
        if col[v] == 3:
            for m in hs.blue[v]:
                if col[m] == 3:
                    raise PipelineInvariantError("blue edge coloured 3-3")


# ---------------------------------------------------------------------------
# Entry points


def t_of(
    inst: TroublesomeInstance, *, ioct: bool = False, stats=None
) -> tuple[float, Optional[FeasibleColoring]]:
    """Minimum number of colour-1 vertices over trouble-free colourings.

    Returns (t, colouring) with t = math.inf and colouring None when no
    trouble-free colouring exists.  With ioct=True the 4-cycle pair
    constraints are dropped, which is the transversal variant.  Raises
    NotP5FreeError when the auxiliary structure certifies an induced P5.
    """
    res = _pipeline(inst, ioct)
    if res is None:
        return math.inf, None
    h, hs = res
    out = minimize(hs)
    _merge_counts(stats, h, hs)
    if out is None:
        return math.inf, None
    w, aux_col = out
    col = _translate(inst, h, hs, aux_col)
    _verify_trouble_free(inst, col, ioct=ioct)
    if sum(1 for v in inst.l13 if col[v] == 1) != w:
        raise PipelineInvariantError("weight accounting mismatch")
    return w, col


def t_achievable(
    inst: TroublesomeInstance, *, ioct: bool = False, stats=None
) -> dict[int, FeasibleColoring]:
    """All achievable colour-1 counts with one verified witness each."""
    res = _pipeline(inst, ioct)
    if res is None:
        return {}
    h, hs = res
    table = achievable_weights(hs)
    _merge_counts(stats, h, hs)
    out = {}
    for w in sorted(table):
        col = _translate(inst, h, hs, table[w])
        _verify_trouble_free(inst, col, ioct=ioct)
        if sum(1 for v in inst.l13 if col[v] == 1) != w:
            raise PipelineInvariantError("weight accounting mismatch")
        out[w] = col
    return out


def _pipeline(inst: TroublesomeInstance, ioct: bool) -> Optional[tuple[AuxGraph, AuxGraph]]:
    h = build_h(inst, include_blue=not ioct)
    if reduce_h(h) is None:
        return None
    hs = build_hstar(h)
    witness = assert_blue_cliques(hs)
    if witness is not None:
        raise NotP5FreeError(witness)
    return h, hs


def _merge_counts(stats, h: AuxGraph, hs: AuxGraph):
    if stats is not None:
        for name, k in h.rule_counts.items():
            stats.rules[f"H-{name}"] += k
        for name, k in hs.rule_counts.items():
            stats.rules[f"H*-{name}"] += k


def _translate(
    inst: TroublesomeInstance, h: AuxGraph, hs: AuxGraph, aux_col: FeasibleColoring
) -> FeasibleColoring:
    col: FeasibleColoring = {v: 2 for v in inst.l2}
    for v in inst.l13:
        if v in h.assigned:
            col[v] = h.assigned[v]
        else:
            rep = hs.rep_of[v]
            if rep not in aux_col:
                raise PipelineInvariantError(f"vertex {v} left uncoloured")
            col[v] = aux_col[rep]
    return col


def _verify_trouble_free(inst: TroublesomeInstance, col: FeasibleColoring, *, ioct: bool):
    g = inst.graph
    for v in inst.l2:
        if col.get(v) != 2:
            raise PipelineInvariantError("l2 vertex not coloured 2")
    for v in inst.l13:
        if col.get(v) not in (1, 3):
            raise PipelineInvariantError("l13 vertex outside {1,3}")
    for u, v in g.edges():
        if u in inst.l13 and v in inst.l13 and col[u] == col[v]:
            raise PipelineInvariantError("adjacent l13 vertices share a colour")
    if not ioct:
        for u, v in blue_pairs(g, inst.l2, inst.l13):
            if col[u] != 1 and col[v] != 1:
                raise PipelineInvariantError("constrained pair without colour 1")
