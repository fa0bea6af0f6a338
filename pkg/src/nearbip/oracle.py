"""Exponential reference implementations, used only for testing.

Every oracle realizes a problem definition by exhaustive enumeration and
fails loudly when its size guard is exceeded; a silently truncated oracle
would poison every test built on it.  Enumeration order is fixed (subsets
by size, then lexicographic; colourings lexicographic), so the first
witness is stable across runs and platforms.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Optional, Sequence, TYPE_CHECKING

from .graph import Graph, bipartition, is_forest

if TYPE_CHECKING:  # pragma: no cover - type-only import, keeps oracles decoupled
    from .troublefree import TroublesomeInstance


class OracleGuardError(ValueError):
    """An oracle was asked for an instance beyond its exhaustive-search guard."""


def _guard(ok: bool, what: str):
    if not ok:
        raise OracleGuardError(what)


def _is_independent(g: Graph, subset: Sequence[int]) -> bool:
    return not any(g.has_edge(u, v) for u, v in combinations(subset, 2))


def brute_min_ifvs(g: Graph) -> Optional[tuple[int, tuple[int, ...]]]:
    """Exact minimum independent feedback vertex set, or None if none exists."""
    _guard(g.n <= 22, f"brute_min_ifvs guard: n={g.n} > 22")
    rest = set(range(g.n))
    for k in range(g.n + 1):
        for s in combinations(range(g.n), k):
            if _is_independent(g, s) and is_forest(g, rest - set(s)):
                return k, s
    return None


def brute_max_ifvs(g: Graph) -> Optional[tuple[int, tuple[int, ...]]]:
    """Exact maximum independent feedback vertex set, or None if none exists."""
    _guard(g.n <= 22, f"brute_max_ifvs guard: n={g.n} > 22")
    rest = set(range(g.n))
    for k in range(g.n, -1, -1):
        for s in combinations(range(g.n), k):
            if _is_independent(g, s) and is_forest(g, rest - set(s)):
                return k, s
    return None


def brute_min_ioct(g: Graph) -> Optional[tuple[int, tuple[int, ...]]]:
    """Exact minimum independent odd cycle transversal, or None."""
    _guard(g.n <= 22, f"brute_min_ioct guard: n={g.n} > 22")
    rest = set(range(g.n))
    for k in range(g.n + 1):
        for s in combinations(range(g.n), k):
            if _is_independent(g, s) and bipartition(g, rest - set(s)) is not None:
                return k, s
    return None


def brute_min_fvs(g: Graph) -> tuple[int, tuple[int, ...]]:
    """Exact minimum feedback vertex set (independence not required)."""
    _guard(g.n <= 22, f"brute_min_fvs guard: n={g.n} > 22")
    rest = set(range(g.n))
    for k in range(g.n + 1):
        for s in combinations(range(g.n), k):
            if is_forest(g, rest - set(s)):
                return k, s
    raise AssertionError("unreachable: deleting all vertices leaves a forest")


def all_min_fvs(g: Graph) -> list[tuple[int, ...]]:
    """Every minimum feedback vertex set (used by the subdivision tests)."""
    _guard(g.n <= 22, f"all_min_fvs guard: n={g.n} > 22")
    size, _ = brute_min_fvs(g)
    rest = set(range(g.n))
    return [s for s in combinations(range(g.n), size) if is_forest(g, rest - set(s))]


def brute_lsac(g: Graph, lists: Sequence[Sequence[int]], *, ioct: bool = False) -> Optional[list[int]]:
    """First list-respecting semi-acyclic 3-colouring, else None.

    Colourings are enumerated lexicographically over sorted per-vertex
    lists.  With ioct=True the acyclicity requirement on colour classes
    {2,3} is relaxed to bipartiteness (no requirement beyond properness,
    since any proper colouring makes classes {2,3} bipartite).
    """
    if len(lists) != g.n:
        raise ValueError("lists length must equal vertex count")
    domains = []
    total = 1
    for l in lists:
        dom = sorted(set(l))
        if any(c not in (1, 2, 3) for c in dom):
            raise ValueError("colours must be from {1,2,3}")
        if not dom:
            return None
        domains.append(dom)
        total *= len(dom)
        _guard(total <= 10 ** 7, f"brute_lsac guard: {total} > 1e7 colourings")
    for colours in product(*domains):
        if any(colours[u] == colours[v] for u, v in g.edges()):
            continue
        if not ioct:
            rest = [v for v in range(g.n) if colours[v] != 1]
            if not is_forest(g, rest):
                continue
        return list(colours)
    return None


def tricky_pairs(g: Graph, l2: Sequence[int], l13: Sequence[int]) -> list[tuple[int, int]]:
    """Pairs of non-adjacent {1,3}-vertices on a strongly tricky induced C4.

    Two such vertices lie on one exactly when they share at least two
    common neighbours with list {2}.
    """
    l2set = set(l2)
    out = []
    l13s = sorted(l13)
    for i, u in enumerate(l13s):
        for v in l13s[i + 1:]:
            if g.has_edge(u, v):
                continue
            if len(g.neighbors(u) & g.neighbors(v) & l2set) >= 2:
                out.append((u, v))
    return out


def brute_trouble_free(inst: "TroublesomeInstance", *, ioct: bool = False) -> Optional[tuple[int, dict[int, int]]]:
    """Exact minimum colour-1 count over trouble-free colourings.

    A trouble-free colouring assigns 2 to every {2}-vertex and 1 or 3 to
    every {1,3}-vertex so that adjacent {1,3}-vertices differ and every
    strongly tricky induced C4 receives at least one colour-1 vertex.
    With ioct=True the C4 constraints are dropped.  Returns (t,
    colouring) or None when no such colouring exists.
    """
    g, l2, l13 = inst.graph, inst.l2, inst.l13
    l13s = sorted(l13)
    _guard(len(l13s) <= 22, f"brute_trouble_free guard: |l13|={len(l13s)} > 22")
    constraints = [] if ioct else tricky_pairs(g, sorted(l2), l13s)
    inner_edges = [(u, v) for u, v in g.edges() if u in set(l13s) and v in set(l13s)]
    pos = {v: i for i, v in enumerate(l13s)}
    best: Optional[tuple[int, tuple[int, ...]]] = None
    for colours in product((1, 3), repeat=len(l13s)):
        if any(colours[pos[u]] == colours[pos[v]] for u, v in inner_edges):
            continue
        if any(colours[pos[u]] != 1 and colours[pos[v]] != 1 for u, v in constraints):
            continue
        ones = sum(1 for c in colours if c == 1)
        if best is None or ones < best[0]:
            best = (ones, colours)
    if best is None:
        return None
    colouring = {v: 2 for v in l2}
    colouring.update({v: best[1][pos[v]] for v in l13s})
    return best[0], colouring


def brute_hamilton_through_edge(g: Graph, e: tuple[int, int]) -> bool:
    """Whether g has a Hamilton cycle using edge e, by bitmask DP."""
    _guard(g.n <= 20, f"brute_hamilton_through_edge guard: n={g.n} > 20")
    u, v = e
    if not g.has_edge(u, v):
        raise ValueError(f"({u},{v}) is not an edge")
    if g.n < 3:
        return False
    # Hamilton cycle through uv == Hamilton u-v path in g minus that edge.
    nbr_masks = [0] * g.n
    for a in range(g.n):
        for b in g.neighbors(a):
            nbr_masks[a] |= 1 << b
    nbr_masks[u] &= ~(1 << v)
    nbr_masks[v] &= ~(1 << u)
    full = (1 << g.n) - 1
    ends = [0] * (full + 1)  # ends[mask] = bitmask of reachable path endpoints
    ends[1 << u] = 1 << u
    for mask in range(full + 1):
        e_mask = ends[mask]
        if not e_mask or not (mask >> u) & 1:
            continue
        rest = e_mask
        while rest:
            last_bit = rest & -rest
            rest ^= last_bit
            last = last_bit.bit_length() - 1
            ext = nbr_masks[last] & ~mask
            while ext:
                wbit = ext & -ext
                ext ^= wbit
                w = wbit.bit_length() - 1
                ends[mask | wbit] |= wbit
    return bool((ends[full] >> v) & 1)
