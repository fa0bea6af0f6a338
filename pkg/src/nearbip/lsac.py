"""List semi-acyclic 3-colouring of P5-free graphs.

A semi-acyclic 3-colouring is a proper colouring with colours {1,2,3}
whose classes 2 and 3 together induce a forest; each vertex carries a
list of allowed colours.  The solver branches on the colours of a small
dominating set, propagates five exact pruning rules, eliminates edges
between the remaining full-pair list regions by chain branching, and
decides what is left through a 2-SAT encoding of the trouble-free
problem on two vertex-disjoint troublesome instances.

Chain branching leans on the input being P5-free: when a neighbourhood
chain fails to be laminar the solver extracts an induced five-vertex
path and raises instead of guessing.  In the transversal variant
(``ioct=True``) the forest requirement on classes {2,3} is dropped to
bipartiteness, which holds automatically for proper colourings; the two
4-cycle rules and the pair constraints are switched off accordingly.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .graph import (
    Graph,
    NotP5FreeError,
    ParseError,
    bipartition,
    connected_components,
    contains_k4,
    dominating_clique_or_p3,
    enumerate_induced_c4,
    find_induced_path,
    is_forest,
)
from .troublefree import PipelineInvariantError, TroublesomeInstance, blue_pairs
from . import twosat
from .twosat import TwoSatInstance

log = logging.getLogger("nearbip.lsac")

FULL = 0b111
Coloring = dict[int, int]


def _bit(c: int) -> int:
    return 1 << (c - 1)


def _colors(mask: int) -> tuple[int, ...]:
    return tuple(c for c in (1, 2, 3) if mask & _bit(c))


def to_masks(lists: Optional[Sequence[Iterable[int]]], n: int) -> list[int]:
    """Colour lists as bitmasks; None means every list is {1,2,3}."""
    if lists is None:
        return [FULL] * n
    if len(lists) != n:
        raise ValueError(f"expected {n} lists, got {len(lists)}")
    out = []
    for l in lists:
        m = 0
        for c in l:
            if c not in (1, 2, 3):
                raise ValueError(f"colour {c} outside {{1,2,3}}")
            m |= _bit(c)
        out.append(m)
    return out


def parse_lists(text: str, n: int) -> list[frozenset[int]]:
    """Parse ``v: c1 c2`` lines; vertices without a line get {1,2,3}."""
    lists = [frozenset((1, 2, 3)) for _ in range(n)]
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(f"line {lineno}: expected 'vertex: colours'")
        head, tail = line.split(":", 1)
        try:
            v = int(head)
            cols = tuple(int(t) for t in tail.split())
        except ValueError as e:
            raise ParseError(f"line {lineno}: {e}") from None
        if not 0 <= v < n:
            raise ParseError(f"line {lineno}: vertex {v} out of range")
        if not cols or any(c not in (1, 2, 3) for c in cols):
            raise ParseError(f"line {lineno}: colours must be a nonempty subset of 1 2 3")
        lists[v] = frozenset(cols)
    return lists


def emit_lists(lists: Sequence[Iterable[int]]) -> str:
    lines = []
    for v, l in enumerate(lists):
        cols = sorted(set(l))
        lines.append(f"{v}: " + " ".join(str(c) for c in cols))
    return "\n".join(lines) + "\n"


class Stats:
    """Mutable counters shared across one solver run."""

    def __init__(self):
        self.outer_branches = 0
        self.elimination_branches = 0
        self.leaves = 0
        self.twosat_calls = 0
        self.rules: Counter = Counter()
        self.wall_time = 0.0

    def to_record(self) -> dict:
        # wall time is excluded: records must be byte-identical across runs
        return {
            "branches": self.leaves,
            "elimination_branches": self.elimination_branches,
            "outer_branches": self.outer_branches,
            "rules_fired": int(sum(self.rules.values())),
            "twosat_calls": self.twosat_calls,
        }


@dataclass(frozen=True)
class TrickyC4:
    """An induced C4 that could go fully to colours {2,3}, with the
    vertices still allowed to take colour 1 instead."""

    cycle: tuple[int, int, int, int]
    good: tuple[int, ...]


class BranchState:
    """One node of the branching tree over a single connected component.

    The graph, the cached induced C4 list, the anchor triple and the
    region labels are shared between clones; only the list masks and the
    forced log are copied.
    """

    __slots__ = ("g", "lists", "anchors", "anchor_colors", "region", "c4s",
                 "ioct", "trusted", "stats", "forced")

    def __init__(self, g: Graph, lists: list[int], *, ioct: bool, trusted: bool,
                 stats: Stats, c4s: tuple = ()):
        self.g = g
        self.lists = lists
        self.anchors: Optional[tuple[int, int, int]] = None
        self.anchor_colors: Optional[tuple[int, int, int]] = None
        self.region: Optional[list[int]] = None
        self.c4s = c4s
        self.ioct = ioct
        self.trusted = trusted
        self.stats = stats
        self.forced: list[tuple[int, int]] = []

    def clone(self) -> "BranchState":
        st = BranchState(self.g, list(self.lists), ioct=self.ioct,
                         trusted=self.trusted, stats=self.stats, c4s=self.c4s)
        st.anchors = self.anchors
        st.anchor_colors = self.anchor_colors
        st.region = self.region
        st.forced = list(self.forced)
        return st

    def narrow(self, v: int, mask: int) -> bool:
        """Intersect a list with mask; True if it changed."""
        new = self.lists[v] & mask
        if new == self.lists[v]:
            return False
        self.lists[v] = new
        if new and new & (new - 1) == 0:
            self.forced.append((v, _colors(new)[0]))
        return True


# Propagation rules.  Every rule is safe: it never changes the set of
# list-respecting semi-acyclic colourings (narrowing rules) or it reports
# infeasibility exactly when that set is empty (pure checks).  Batched
# application inside one pass stays safe because each deduction is a
# consequence of the pass's starting lists alone.


def _prop_singletons(state: BranchState) -> str:
    g = state.g
    queue = [v for v in range(g.n) if state.lists[v] and state.lists[v] & (state.lists[v] - 1) == 0]
    changed = False
    while queue:
        v = queue.pop()
        keep = ~state.lists[v]
        for w in g.neighbors(v):
            old = state.lists[w]
            if old & state.lists[v]:
                state.narrow(w, keep)
                changed = True
                new = state.lists[w]
                if new == 0:
                    return "changed"  # the emptiness check reports the No
                if new & (new - 1) == 0:
                    queue.append(w)
    return "changed" if changed else "none"


def _prop_empty(state: BranchState) -> str:
    return "no" if any(m == 0 for m in state.lists) else "none"


def _prop_excluded_bipartite(state: BranchState) -> str:
    for c in (1, 2, 3):
        vs = [v for v in range(state.g.n) if not state.lists[v] & _bit(c)]
        if bipartition(state.g, vs) is None:
            return "no"
    return "none"


def _c4_patterns(state: BranchState, cyc) -> bool:
    """Whether the cycle could be coloured 2,3,2,3 or 3,2,3,2 in order."""
    a, b, c, d = (state.lists[v] for v in cyc)
    two, three = _bit(2), _bit(3)
    if a & two and b & three and c & two and d & three:
        return True
    return bool(a & three and b & two and c & three and d & two)


def _prop_c4_all_blocked(state: BranchState) -> str:
    if state.ioct:
        return "none"
    # hot loop over every cached induced C4; bits: 1 = colour 1, 2 = colour 2,
    # 4 = colour 3, mirroring _bit, with _c4_patterns inlined
    L = state.lists
    for a, b, c, d in state.c4s:
        la, lb, lc, ld = L[a], L[b], L[c], L[d]
        if not (la and lb and lc and ld):
            continue
        if not ((la & 2 and lb & 4 and lc & 2 and ld & 4)
                or (la & 4 and lb & 2 and lc & 4 and ld & 2)):
            continue
        if not (la | lb | lc | ld) & 1:
            return "no"
    return "none"


def _prop_c4_single_good(state: BranchState) -> str:
    if state.ioct:
        return "none"
    L = state.lists
    fixes = []
    for cyc in state.c4s:
        a, b, c, d = cyc
        la, lb, lc, ld = L[a], L[b], L[c], L[d]
        if not (la and lb and lc and ld):
            continue
        if not ((la & 2 and lb & 4 and lc & 2 and ld & 4)
                or (la & 4 and lb & 2 and lc & 4 and ld & 2)):
            continue
        goods = [v for v in cyc if L[v] & 1]
        if len(goods) == 1 and L[goods[0]] != 1:
            fixes.append(goods[0])
    changed = False
    for v in fixes:
        if state.narrow(v, 1):
            changed = True
    return "changed" if changed else "none"


_PROP_RULES = (
    ("R1", _prop_singletons),
    ("R2", _prop_empty),
    ("R3", _prop_excluded_bipartite),
    ("R4", _prop_c4_all_blocked),
    ("R5", _prop_c4_single_good),
)


def apply_rule(state: BranchState, rule: str) -> str:
    """One pass of one named rule; for targeted safety testing."""
    for name, fn in _PROP_RULES:
        if name == rule:
            return fn(state)
    raise KeyError(rule)


def propagate(state: BranchState) -> bool:
    """Exhaust the rules, restarting from the first after any change."""
    while True:
        for name, fn in _PROP_RULES:
            res = fn(state)
            if res == "no":
                if log.isEnabledFor(logging.DEBUG):
                    log.debug("rule %s refuted the branch", name)
                return False
            if res == "changed":
                state.stats.rules[name] += 1
                if log.isEnabledFor(logging.DEBUG):
                    log.debug("rule %s narrowed lists", name)
                break
        else:
            return True


# ---------------------------------------------------------------------------
# Branching


def tiny_colorings(g: Graph, masks: Sequence[int], ioct: bool) -> list[Coloring]:
    """All list-respecting proper colourings of a graph on <= 2 vertices."""
    if g.n > 2:
        raise ValueError("tiny enumeration is for at most two vertices")
    out = []
    for combo in itertools.product(*(_colors(m) for m in masks)):
        if g.n == 2 and g.has_edge(0, 1) and combo[0] == combo[1]:
            continue
        out.append(dict(enumerate(combo)))
    return out


def branch_leaves(g: Graph, masks: Sequence[int], *, ioct: bool, trusted: bool,
                  stats: Stats) -> Iterator[BranchState]:
    """Fully propagated branch leaves of one connected component.

    Every yielded state has no edges between distinct full-pair regions,
    so it splits cleanly into forced colours and two troublesome
    instances.  Components on <= 2 vertices never reach here; callers
    enumerate those directly.
    """
    if g.n <= 2:
        raise ValueError("branching needs at least 3 vertices")
    if contains_k4(g):
        return
    base = BranchState(g, list(masks), ioct=ioct, trusted=trusted, stats=stats)
    if not propagate(base):
        return
    dom = dominating_clique_or_p3(g)
    if dom is None:
        # connected P5-free graphs always have one; its absence certifies a P5
        path = find_induced_path(g, 5)
        if path is None:
            raise PipelineInvariantError("no dominating clique or P3 and no P5")
        raise NotP5FreeError(path)
    anchors = sorted(dom)
    for v in range(g.n):
        if len(anchors) == 3:
            break
        if v not in anchors:
            anchors.append(v)
    anchors = tuple(sorted(anchors))
    a1, a2, a3 = anchors
    region = [0] * g.n
    n1 = g.neighbors(a1)
    n2 = g.neighbors(a2)
    sset = set(anchors)
    for v in range(g.n):
        if v in sset:
            continue
        if v in n1:
            region[v] = 1
        elif v in n2:
            region[v] = 2
        else:
            region[v] = 3
            if v not in g.neighbors(a3):
                raise PipelineInvariantError("anchor triple is not dominating")
    c4s = () if ioct else tuple(enumerate_induced_c4(g))
    base.anchors = anchors
    base.region = region
    base.c4s = c4s
    for combo in itertools.product((1, 2, 3), repeat=3):
        if any(not base.lists[a] & _bit(c) for a, c in zip(anchors, combo)):
            continue
        stats.outer_branches += 1
        st = base.clone()
        st.anchor_colors = combo
        for a, c in zip(anchors, combo):
            st.narrow(a, _bit(c))
        if not propagate(st):
            continue
        yield from _eliminate(st)


def eliminate_cross_edges(state: BranchState) -> Iterator[BranchState]:
    """Branch until no edge joins two distinct full-pair regions."""
    yield from _eliminate(state)


def _full_pair_sides(state: BranchState):
    """Current full-pair region vertices, bipartitioned per region."""
    sides = {}
    for i in (1, 2, 3):
        pair_mask = FULL ^ _bit(state.anchor_colors[i - 1])
        vs = [v for v in range(state.g.n)
              if state.region[v] == i and state.lists[v] == pair_mask]
        if vs:
            bp = bipartition(state.g, vs)
            if bp is None:
                raise PipelineInvariantError("full-pair region is not bipartite")
            sides[i] = bp
        else:
            sides[i] = ((), ())
    return sides


def _first_cross_combo(state: BranchState):
    g = state.g
    sides = _full_pair_sides(state)
    for i, j in ((1, 2), (1, 3), (2, 3)):
        for sa, sb in ((0, 0), (0, 1), (1, 0), (1, 1)):
            a_side = sides[i][sa]
            b_side = sides[j][sb]
            if not a_side or not b_side:
                continue
            bset = frozenset(b_side)
            if any(g.neighbors(a) & bset for a in a_side):
                return i, j, a_side, bset
    return None


def _chain_order(state: BranchState, i: int, a_side, bset) -> tuple[int, ...]:
    """A-side sorted by neighbourhood inclusion into the B side.

    P5-freeness makes these neighbourhoods laminar; a violating pair
    yields two disjoint edges joined through the region anchor, which is
    an induced P5.
    """
    g = state.g
    nbs = {a: g.neighbors(a) & bset for a in a_side}
    order = sorted((a for a in a_side if nbs[a]),
                   key=lambda a: (-len(nbs[a]), a))
    anchor = state.anchors[i - 1]
    for s, t in zip(order, order[1:]):
        if not nbs[t] <= nbs[s]:
            u = min(nbs[s] - nbs[t])
            v = min(nbs[t] - nbs[s])
            path = (u, s, anchor, t, v)
            if not _is_induced_p5(g, path):
                raise PipelineInvariantError("chain violation without a P5")
            raise NotP5FreeError(path)
    return tuple(order)


def _is_induced_p5(g: Graph, path) -> bool:
    if len(set(path)) != 5:
        return False
    return all(g.has_edge(path[a], path[b]) == (b == a + 1)
               for a in range(5) for b in range(a + 1, 5))


def _eliminate(state: BranchState) -> Iterator[BranchState]:
    combo = _first_cross_combo(state)
    if combo is None:
        yield state
        return
    i, j, a_side, bset = combo
    order = _chain_order(state, i, a_side, bset)
    # giving a chain vertex the colour spared by both regions turns all its
    # B-side neighbours into singletons, so each branch clears the side pair
    ci = state.anchor_colors[i - 1]
    cj = state.anchor_colors[j - 1]
    spare = min(c for c in (1, 2, 3) if c not in (ci, cj))
    keep = FULL ^ _bit(spare)
    for t in range(len(order) + 1):
        st = state.clone()
        state.stats.elimination_branches += 1
        for u in order[:t]:
            st.narrow(u, keep)
        if t < len(order):
            st.narrow(order[t], _bit(spare))
        if propagate(st):
            yield from _eliminate(st)


# ---------------------------------------------------------------------------
# Post-elimination split and 2-SAT decision


@dataclass(frozen=True)
class BranchSplit:
    """A leaf state decomposed into forced colours and two instances."""

    l1: tuple[int, ...]
    l2: tuple[int, ...]
    l3: tuple[int, ...]
    l23_coloring: Coloring
    inst_a: TroublesomeInstance
    map_a: tuple[int, ...]
    inst_b: TroublesomeInstance
    map_b: tuple[int, ...]


def split_branch(state: BranchState) -> BranchSplit:
    """Partition a leaf by list and build its two troublesome instances.

    The second instance swaps colours 2 and 3: its {2}-role is played by
    the {3}-singletons and its {1,3}-role by the {1,2}-pairs, so colour
    3 there decodes to colour 2 in the real graph.
    """
    g = state.g
    groups: dict[int, list[int]] = {m: [] for m in (1, 2, 4, 3, 5, 6)}
    for v in range(g.n):
        m = state.lists[v]
        if m not in groups:
            raise PipelineInvariantError(f"unexpected leaf list {_colors(m)} at {v}")
        groups[m].append(v)
    l1, l2, l3 = groups[1], groups[2], groups[4]
    l12, l13, l23 = groups[3], groups[5], groups[6]
    l23_col: Coloring = {}
    for comp in connected_components(g, l23):
        bp = bipartition(g, comp)
        if bp is None:
            raise PipelineInvariantError("{2,3} region is not bipartite")
        for v in bp[0]:
            l23_col[v] = 2
        for v in bp[1]:
            l23_col[v] = 3
    sub_a, map_a = g.subgraph(l2 + l13)
    sub_b, map_b = g.subgraph(l3 + l12)
    pos_a = {v: i for i, v in enumerate(map_a)}
    pos_b = {v: i for i, v in enumerate(map_b)}
    try:
        inst_a = TroublesomeInstance(sub_a, [pos_a[v] for v in l2], [pos_a[v] for v in l13])
        inst_b = TroublesomeInstance(sub_b, [pos_b[v] for v in l3], [pos_b[v] for v in l12])
    except ValueError as e:
        raise PipelineInvariantError(f"leaf does not split into instances: {e}") from None
    return BranchSplit(tuple(l1), tuple(l2), tuple(l3), l23_col,
                       inst_a, tuple(map_a), inst_b, tuple(map_b))


def classify_strongly_tricky(state: BranchState) -> list[TrickyC4]:
    """Tricky induced C4s of a leaf, with their colour-1-capable vertices.

    In a propagated leaf every such cycle alternates a two-colour list
    with a singleton, so exactly the two non-adjacent pair-list vertices
    are capable; anything else breaks a structural invariant.
    """
    out = []
    one = _bit(1)
    for cyc in state.c4s:
        if not _c4_patterns(state, cyc):
            continue
        goods = tuple(v for v in cyc if state.lists[v] & one)
        if len(goods) != 2 or state.g.has_edge(*goods):
            raise PipelineInvariantError("tricky C4 is not in strong normal form")
        out.append(TrickyC4(cyc, goods))
    return out


def encode_trouble_free(inst: TroublesomeInstance, *, ioct: bool = False) -> TwoSatInstance:
    """2-SAT formulation of the trouble-free decision.

    Vertex v in l13 (sorted order, index i) owns variable 2i ("v takes
    colour 1") and variable 2i+1 ("v takes colour 3"); exactly one holds.
    Adjacent l13 vertices exclude equal colours, and each constrained
    pair requires colour 1 somewhere unless ioct drops those clauses.
    """
    vs = sorted(inst.l13)
    idx = {v: i for i, v in enumerate(vs)}
    clauses: list[tuple[tuple[int, bool], tuple[int, bool]]] = []
    for v in vs:
        i = idx[v]
        clauses.append(((2 * i, True), (2 * i + 1, True)))
        clauses.append(((2 * i, False), (2 * i + 1, False)))
    for u, v in inst.graph.edges():
        if u in idx and v in idx:
            clauses.append(((2 * idx[u], False), (2 * idx[v], False)))
            clauses.append(((2 * idx[u] + 1, False), (2 * idx[v] + 1, False)))
    if not ioct:
        for u, v in blue_pairs(inst.graph, inst.l2, inst.l13):
            clauses.append(((2 * idx[u], True), (2 * idx[v], True)))
    return TwoSatInstance(2 * len(vs), tuple(clauses))


def decide_trouble_free(inst: TroublesomeInstance, *, ioct: bool = False,
                        stats: Optional[Stats] = None) -> Optional[Coloring]:
    """A trouble-free colouring via 2-SAT, or None."""
    tsi = encode_trouble_free(inst, ioct=ioct)
    if stats is not None:
        stats.twosat_calls += 1
    values = twosat.solve(tsi)
    if values is None:
        return None
    vs = sorted(inst.l13)
    col: Coloring = {v: 2 for v in inst.l2}
    for i, v in enumerate(vs):
        if values[2 * i] == values[2 * i + 1]:
            raise PipelineInvariantError("2-SAT model violates exactly-one")
        col[v] = 1 if values[2 * i] else 3
    return col


def assemble(split: BranchSplit, col_a: Coloring, col_b: Coloring) -> Coloring:
    """Combine forced colours, the {2,3} forest part and both instance
    colourings into one colouring of the component graph."""
    col: Coloring = {}
    for v in split.l1:
        col[v] = 1
    for v in split.l2:
        col[v] = 2
    for v in split.l3:
        col[v] = 3
    col.update(split.l23_coloring)
    for new, orig in enumerate(split.map_a):
        if new in split.inst_a.l13:
            col[orig] = col_a[new]
    for new, orig in enumerate(split.map_b):
        if new in split.inst_b.l13:
            col[orig] = 1 if col_b[new] == 1 else 2  # swap colour 3 back to 2
    return col


def verify_semi_acyclic(g: Graph, masks: Optional[Sequence[int]], col: Coloring,
                        *, ioct: bool = False) -> bool:
    """Unconditional check: complete, list-respecting, proper, and the
    classes {2,3} induce a forest (properness alone settles the
    transversal variant, where they only need to induce a bipartite
    graph)."""
    if set(col) != set(range(g.n)):
        return False
    for v in range(g.n):
        c = col[v]
        if c not in (1, 2, 3):
            return False
        if masks is not None and not masks[v] & _bit(c):
            return False
    for u, v in g.edges():
        if col[u] == col[v]:
            return False
    if not ioct:
        rest = [v for v in range(g.n) if col[v] != 1]
        if not is_forest(g, rest):
            return False
    return True


def _finish_branch(state: BranchState) -> Optional[Coloring]:
    split = split_branch(state)
    col_a = decide_trouble_free(split.inst_a, ioct=state.ioct, stats=state.stats)
    if col_a is None:
        return None
    col_b = decide_trouble_free(split.inst_b, ioct=state.ioct, stats=state.stats)
    if col_b is None:
        return None
    col = assemble(split, col_a, col_b)
    if not verify_semi_acyclic(state.g, state.lists, col, ioct=state.ioct):
        if state.trusted:
            raise PipelineInvariantError("assembled colouring failed verification")
        return None  # without the P5-free guarantee the branch is just dropped
    return col


def _solve_component(g: Graph, masks: list[int], *, ioct: bool, trusted: bool,
                     stats: Stats) -> Optional[Coloring]:
    if g.n <= 2:
        for col in tiny_colorings(g, masks, ioct):
            return col
        return None
    for leaf in branch_leaves(g, masks, ioct=ioct, trusted=trusted, stats=stats):
        stats.leaves += 1
        col = _finish_branch(leaf)
        if col is not None:
            return col
    return None


def solve(g: Graph, lists: Optional[Sequence[Iterable[int]]] = None, *,
          ioct: bool = False, checked: bool = True,
          stats: Optional[Stats] = None) -> Optional[Coloring]:
    """A list-respecting semi-acyclic 3-colouring of g, or None.

    With checked=True (default) the graph is first verified P5-free and
    NotP5FreeError carries a witness path otherwise; checked=False skips
    the scan, in which case a None answer is only reliable for P5-free
    inputs while any returned colouring is still verified.
    """
    masks = to_masks(lists, g.n)
    if stats is None:
        stats = Stats()
    if checked:
        path = find_induced_path(g, 5)
        if path is not None:
            raise NotP5FreeError(path)
    col: Coloring = {}
    for comp in connected_components(g):
        sub, vmap = g.subgraph(comp)
        sub_masks = [masks[v] for v in vmap]
        part = _solve_component(sub, sub_masks, ioct=ioct, trusted=checked, stats=stats)
        if part is None:
            return None
        for new, c in part.items():
            col[vmap[new]] = c
        if log.isEnabledFor(logging.DEBUG):
            log.debug("component %s coloured, %d leaves so far", comp[:4], stats.leaves)
    if not verify_semi_acyclic(g, masks, col, ioct=ioct):
        raise PipelineInvariantError("final colouring failed verification")
    return col
