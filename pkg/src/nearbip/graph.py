"""Graph representation, I/O, generators and small-pattern detectors.

Everything in this package works on simple undirected graphs with dense
vertex indices 0..n-1.  The detectors used by the solvers (induced P5 /
claw / K4 / C4 search, bipartitions, dominating sets) live here, together
with the two external text formats (edge lists and graph6) and the random
instance generators used by the fuzzing harness and the test suite.

All detectors are deterministic: witnesses are produced by searches that
iterate vertices in increasing index order, so repeated runs on the same
graph return identical answers.
"""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterable, Optional, Sequence


class ParseError(ValueError):
    """Malformed graph input (bad line, index out of range, self-loop)."""


class GenerationError(RuntimeError):
    """Random generation budget exhausted; lower n or pick another family."""


class NotP5FreeError(ValueError):
    """A solver precondition failed: the graph contains an induced P5.

    The offending path is stored in ``witness`` as a vertex tuple.
    """

    def __init__(self, witness: Sequence[int], message: str = ""):
        self.witness = tuple(witness)
        text = message or "graph is not P5-free"
        super().__init__(f"{text}: induced path {'-'.join(map(str, self.witness))}")


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1.

    Adjacency is stored as one frozenset per vertex.  Self-loops and
    duplicate edges are rejected/collapsed at construction time, so the
    symmetry invariant (u in N(v) iff v in N(u)) holds by construction.
    """

    __slots__ = ("n", "_adj", "_edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self._adj: tuple[frozenset[int], ...] = tuple(frozenset(s) for s in adj)
        self._edges: tuple[tuple[int, int], ...] = tuple(
            (u, v) for u in range(n) for v in sorted(adj[u]) if u < v
        )

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def sorted_neighbors(self, v: int) -> list[int]:
        return sorted(self._adj[v])

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> tuple[tuple[int, int], ...]:
        """All edges as (u, v) with u < v, in lexicographic order."""
        return self._edges

    @property
    def m(self) -> int:
        return len(self._edges)

    def vertices(self) -> range:
        return range(self.n)

    def subgraph(self, vertices: Sequence[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``vertices`` plus the map back to self.

        The returned list maps new index -> original index; new indices
        follow the sorted order of ``vertices``.
        """
        vs = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(vs)}
        edges = [
            (pos[u], pos[v])
            for u, v in self._edges
            if u in pos and v in pos
        ]
        return Graph(len(vs), edges), vs

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self.n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------------------
# Text formats


def parse_edgelist(text: str) -> Graph:
    """Parse the plain edge-list format: first line "n m", then m lines "u v".

    Duplicate edge lines collapse to a single edge.  Malformed lines,
    out-of-range indices and self-loops raise ParseError naming the line.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty input: expected a header line 'n m'")
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError(f"line 1: expected 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError(f"line 1: expected integers 'n m', got {lines[0]!r}") from None
    if n < 0 or m < 0:
        raise ParseError("line 1: n and m must be non-negative")
    if len(lines) - 1 != m:
        raise ParseError(f"header says {m} edges but {len(lines) - 1} edge lines follow")
    edges = []
    for i, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"line {i}: expected 'u v', got {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"line {i}: expected integers, got {ln!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"line {i}: index out of range for n={n}: {ln!r}")
        if u == v:
            raise ParseError(f"line {i}: self-loop at {u}")
        edges.append((u, v))
    return Graph(n, edges)


def emit_edgelist(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def parse_graph6(line: str) -> Graph:
    """Decode one graph6 line (n <= 62; the long forms are not supported)."""
    s = line.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise ParseError("empty graph6 string")
    if s[0] == "~":
        raise ParseError("graph6 long size forms (n > 62) are not supported")
    n = ord(s[0]) - 63
    if not 0 <= n <= 62:
        raise ParseError(f"invalid graph6 size byte {s[0]!r}")
    bits = []
    for ch in s[1:]:
        val = ord(ch) - 63
        if not 0 <= val < 64:
            raise ParseError(f"invalid graph6 character {ch!r}")
        bits.extend((val >> k) & 1 for k in (5, 4, 3, 2, 1, 0))
    need = n * (n - 1) // 2
    if len(bits) < need:
        raise ParseError("graph6 bit stream truncated")
    if len(bits) - need >= 6:
        raise ParseError("graph6 bit stream has trailing data")
    edges = []
    # Upper triangle, column by column: bit order is (0,1),(0,2),(1,2),(0,3)...
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                edges.append((i, j))
            idx += 1
    return Graph(n, edges)


def emit_graph6(g: Graph) -> str:
    """Encode a graph (n <= 62) as a graph6 string."""
    if g.n > 62:
        raise ValueError("graph6 encoding supported only for n <= 62")
    bits = []
    for j in range(1, g.n):
        for i in range(j):
            bits.append(1 if g.has_edge(i, j) else 0)
    while len(bits) % 6:
        bits.append(0)
    out = [chr(g.n + 63)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


# ---------------------------------------------------------------------------
# Pattern detectors
#
# These are pruned backtracking searches over ordered vertex tuples; the
# patterns are tiny and fixed so no general isomorphism machinery is used.


def find_induced_path(g: Graph, r: int) -> Optional[tuple[int, ...]]:
    """First induced path on r vertices in DFS order, or None.

    Consecutive path vertices are adjacent, all other pairs non-adjacent.
    With r=5 this is the P5-freeness refuter used by the checked solvers.
    """
    if r < 1:
        raise ValueError("path length must be at least 1")
    if r == 1:
        return (0,) if g.n >= 1 else None
    if r == 2:
        return g.edges()[0] if g.m else None

    path = []

    def extend() -> Optional[tuple[int, ...]]:
        last = path[-1]
        for w in g.sorted_neighbors(last):
            # w must be new and non-adjacent to every vertex before `last`.
            if w in path:
                continue
            if any(g.has_edge(w, p) for p in path[:-1]):
                continue
            path.append(w)
            if len(path) == r:
                return tuple(path)
            found = extend()
            if found is not None:
                return found
            path.pop()
        return None

    for start in range(g.n):
        path = [start]
        found = extend()
        if found is not None:
            return found
    return None


def find_induced_claw(g: Graph) -> Optional[tuple[int, int, int, int]]:
    """A claw as (centre, leaf, leaf, leaf) with pairwise non-adjacent leaves."""
    for c in range(g.n):
        nbrs = g.sorted_neighbors(c)
        if len(nbrs) < 3:
            continue
        for i, a in enumerate(nbrs):
            for j in range(i + 1, len(nbrs)):
                b = nbrs[j]
                if g.has_edge(a, b):
                    continue
                for k in range(j + 1, len(nbrs)):
                    d = nbrs[k]
                    if not g.has_edge(a, d) and not g.has_edge(b, d):
                        return (c, a, b, d)
    return None


def contains_k4(g: Graph) -> bool:
    """True iff some four vertices are pairwise adjacent."""
    for u, v in g.edges():
        common = g.neighbors(u) & g.neighbors(v)
        cand = sorted(w for w in common if w > v)
        for i, w in enumerate(cand):
            inner = g.neighbors(w) & common
            for x in cand[i + 1:]:
                if x in inner:
                    return True
    return False


def _canonical_c4(a: int, b: int, c: int, d: int) -> tuple[int, int, int, int]:
    """Lexicographically least among the 8 rotations/reflections of cycle a-b-c-d.

    The least form starts at the overall minimum vertex and continues with
    the smaller of its two cycle neighbours; the opposite vertex is pinned.
    """
    m = min(a, b, c, d)
    if m == a:
        n1, n2, opp = b, d, c
    elif m == b:
        n1, n2, opp = a, c, d
    elif m == c:
        n1, n2, opp = b, d, a
    else:
        n1, n2, opp = a, c, b
    lo, hi = (n1, n2) if n1 < n2 else (n2, n1)
    return (m, lo, opp, hi)


def enumerate_induced_c4(g: Graph) -> list[tuple[int, int, int, int]]:
    """All induced 4-cycles, one canonical representative each, sorted.

    A result (v1,v2,v3,v4) has edges v1v2, v2v3, v3v4, v4v1 and non-edges
    v1v3, v2v4.
    """
    seen = set()
    for a in range(g.n):
        for c in range(a + 1, g.n):
            if g.has_edge(a, c):
                continue
            common = sorted(g.neighbors(a) & g.neighbors(c))
            for i, b in enumerate(common):
                for d in common[i + 1:]:
                    if not g.has_edge(b, d):
                        seen.add(_canonical_c4(a, b, c, d))
    return sorted(seen)


def connected_components(g: Graph, vertices: Optional[Iterable[int]] = None) -> list[tuple[int, ...]]:
    """Components of the induced subgraph, each sorted, ordered by least vertex."""
    if vertices is None:
        vs = set(range(g.n))
    else:
        vs = set(vertices)
    comps = []
    remaining = sorted(vs)
    seen: set[int] = set()
    for s in remaining:
        if s in seen:
            continue
        comp = []
        stack = [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g.neighbors(v):
                if w in vs and w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


def bipartition(g: Graph, vertices: Optional[Iterable[int]] = None) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """2-colour the induced subgraph by BFS, or None if an odd cycle exists.

    Deterministic: components are processed in order of their least vertex,
    and within each component the least vertex goes into the left class.
    """
    if vertices is None:
        vs = set(range(g.n))
    else:
        vs = set(vertices)
    side: dict[int, int] = {}
    for s in sorted(vs):
        if s in side:
            continue
        side[s] = 0
        queue = [s]
        while queue:
            nxt = []
            for v in queue:
                for w in g.neighbors(v):
                    if w not in vs:
                        continue
                    if w in side:
                        if side[w] == side[v]:
                            return None
                    else:
                        side[w] = side[v] ^ 1
                        nxt.append(w)
            queue = nxt
    left = tuple(sorted(v for v in vs if side[v] == 0))
    right = tuple(sorted(v for v in vs if side[v] == 1))
    return left, right


def is_forest(g: Graph, vertices: Optional[Iterable[int]] = None) -> bool:
    """True iff the induced subgraph is acyclic (|E| = |V| - #components)."""
    if vertices is None:
        vs = set(range(g.n))
    else:
        vs = set(vertices)
    edge_count = sum(1 for u, v in g.edges() if u in vs and v in vs)
    return edge_count == len(vs) - len(connected_components(g, vs))


def girth(g: Graph) -> Optional[int]:
    """Length of a shortest cycle, or None for forests."""
    best: Optional[int] = None
    for s in range(g.n):
        # BFS from s; a non-tree edge at depths d1, d2 closes a cycle of
        # length d1 + d2 + 1 through s or an ancestor.
        dist = {s: 0}
        parent = {s: -1}
        queue = [s]
        while queue:
            nxt = []
            for v in queue:
                for w in g.sorted_neighbors(v):
                    if w not in dist:
                        dist[w] = dist[v] + 1
                        parent[w] = v
                        nxt.append(w)
                    elif w != parent[v]:
                        cyc = dist[v] + dist[w] + 1
                        if best is None or cyc < best:
                            best = cyc
            queue = nxt
    return best


def line_graph(g: Graph) -> tuple[Graph, tuple[tuple[int, int], ...]]:
    """Line graph plus the map from its vertices back to edges of g."""
    es = g.edges()
    idx_pairs = []
    for i in range(len(es)):
        for j in range(i + 1, len(es)):
            a, b = es[i], es[j]
            if a[0] in b or a[1] in b:
                idx_pairs.append((i, j))
    return Graph(len(es), idx_pairs), es


def subdivide_edge(g: Graph, u: int, v: int) -> Graph:
    """Replace edge uv by a path u-w-v where w is the new vertex n."""
    if not g.has_edge(u, v):
        raise ValueError(f"({u},{v}) is not an edge")
    w = g.n
    edges = [e for e in g.edges() if e != (min(u, v), max(u, v))]
    edges.extend([(u, w), (w, v)])
    return Graph(g.n + 1, edges)


def subdivide_all(g: Graph) -> Graph:
    """Subdivide every original edge once, simultaneously."""
    edges = []
    for i, (u, v) in enumerate(g.edges()):
        w = g.n + i
        edges.extend([(u, w), (w, v)])
    return Graph(g.n + g.m, edges)


def dominating_clique_or_p3(g: Graph) -> Optional[tuple[int, ...]]:
    """Smallest dominating set of <= 3 vertices inducing a clique or a P3.

    Subsets are scanned in increasing size then lexicographic order, so the
    answer is canonical.  Returns None when no such set exists; on connected
    K4-free P5-free graphs a result is guaranteed.
    """
    comps = connected_components(g)
    if len(comps) != 1:
        raise ValueError("dominating set search requires a connected graph")
    all_vs = frozenset(range(g.n))
    for v in range(g.n):
        if len(g.neighbors(v)) + 1 == g.n:
            return (v,)
    for u, v in combinations(range(g.n), 2):
        if not g.has_edge(u, v):
            continue
        if g.neighbors(u) | g.neighbors(v) | {u, v} == all_vs:
            return (u, v)
    for trip in combinations(range(g.n), 3):
        a, b, c = trip
        ecount = g.has_edge(a, b) + g.has_edge(a, c) + g.has_edge(b, c)
        if ecount < 2:
            continue  # neither a triangle nor a path
        covered = g.neighbors(a) | g.neighbors(b) | g.neighbors(c) | set(trip)
        if covered == all_vs:
            return trip
    return None


# ---------------------------------------------------------------------------
# Generators


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, list(combinations(range(n), 2)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_multipartite(sizes: Sequence[int]) -> Graph:
    """Complete multipartite graph; parts take consecutive index blocks."""
    bounds = []
    start = 0
    for s in sizes:
        if s <= 0:
            raise ValueError("part sizes must be positive")
        bounds.append(range(start, start + s))
        start += s
    edges = []
    for i in range(len(bounds)):
        for j in range(i + 1, len(bounds)):
            edges.extend((u, v) for u in bounds[i] for v in bounds[j])
    return Graph(start, edges)


def cube_graph() -> Graph:
    """The 3-cube Q3: vertices are 3-bit strings, edges flip one bit."""
    edges = []
    for v in range(8):
        for k in range(3):
            w = v ^ (1 << k)
            if v < w:
                edges.append((v, w))
    return Graph(8, edges)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def prism_graph(k: int = 3) -> Graph:
    """Circular ladder: two k-cycles joined by a perfect matching."""
    if k < 3:
        raise ValueError("prism needs cycles of length at least 3")
    edges = [(i, (i + 1) % k) for i in range(k)]
    edges += [(k + i, k + (i + 1) % k) for i in range(k)]
    edges += [(i, k + i) for i in range(k)]
    return Graph(2 * k, edges)


def chain_graph(left: int, right: int, seed: int) -> Graph:
    """Random chain graph: bipartite with nested left neighbourhoods.

    2K2-free bipartite, hence P5-free.
    """
    rng = random.Random(seed)
    cuts = sorted(rng.randint(0, right) for _ in range(left))
    edges = []
    for i, c in enumerate(sorted(cuts, reverse=True)):
        edges.extend((i, left + j) for j in range(c))
    return Graph(left + right, edges)


def random_graph(n: int, p: float, seed: int) -> Graph:
    if not 0 <= p <= 1:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return Graph(n, edges)


def _random_cograph(n: int, rng: random.Random) -> Graph:
    """Cograph from a random binary cotree (union/join of smaller cographs)."""

    def build(k: int) -> Graph:
        if k == 1:
            return Graph(1)
        split = rng.randint(1, k - 1)
        a, b = build(split), build(k - split)
        edges = list(a.edges())
        edges.extend((u + a.n, v + a.n) for u, v in b.edges())
        if rng.random() < 0.5:
            edges.extend((u, a.n + v) for u in range(a.n) for v in range(b.n))
        return Graph(k, edges)

    return build(n)


def _random_split_graph(n: int, rng: random.Random) -> Graph:
    clique = rng.randint(0, n)
    edges = list(combinations(range(clique), 2))
    for v in range(clique, n):
        for u in range(clique):
            if rng.random() < 0.5:
                edges.append((u, v))
    return Graph(n, edges)


def random_p5free_graph(n: int, seed: int) -> Graph:
    """Seed-deterministic random P5-free graph.

    Mixes constructive families (cographs, split graphs, complete
    multipartite, chain graphs) with rejection-sampled G(n,p) and with
    cographs perturbed by extra edges that are re-checked and reverted if
    they create a P5.  The result always passes find_induced_path(g, 5).
    """
    if n <= 0:
        raise GenerationError("need at least one vertex")
    rng = random.Random(seed)
    family = rng.choice(["gnp", "cograph", "split", "multipartite", "chain", "cograph-plus"])
    if family == "gnp":
        for _ in range(60):
            p = rng.choice([0.1, 0.2, 0.3, 0.5, 0.7])
            g = random_graph(n, p, rng.randrange(1 << 30))
            if find_induced_path(g, 5) is None:
                return g
        family = "cograph"  # dense fallback always succeeds
    if family == "cograph":
        return _random_cograph(n, rng)
    if family == "split":
        return _random_split_graph(n, rng)
    if family == "multipartite":
        sizes = []
        left = n
        while left > 0:
            s = rng.randint(1, left)
            sizes.append(s)
            left -= s
        return complete_multipartite(sizes)
    if family == "chain":
        left = rng.randint(1, max(1, n - 1)) if n > 1 else 1
        return chain_graph(left, n - left, rng.randrange(1 << 30)) if n > 1 else Graph(1)
    # cograph-plus: sprinkle extra edges over a cograph, keeping P5-freeness
    g = _random_cograph(n, rng)
    edges = set(g.edges())
    non_edges = [e for e in combinations(range(n), 2) if e not in edges]
    rng.shuffle(non_edges)
    for e in non_edges[: max(1, n // 2)]:
        trial = Graph(n, list(edges | {e}))
        if find_induced_path(trial, 5) is None:
            edges.add(e)
    return Graph(n, sorted(edges))


NAMED_GRAPHS = {
    "cube": cube_graph,
    "q3": cube_graph,
    "petersen": petersen_graph,
    "k4": lambda: complete_graph(4),
    "k33": lambda: complete_multipartite([3, 3]),
    "prism": prism_graph,
    "c5": lambda: cycle_graph(5),
}


def named_graph(name: str) -> Graph:
    try:
        return NAMED_GRAPHS[name.lower()]()
    except KeyError:
        raise ValueError(f"unknown graph name {name!r}; known: {sorted(NAMED_GRAPHS)}") from None
