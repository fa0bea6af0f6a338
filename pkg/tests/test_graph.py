"""Graph type, parsers, detectors and generators."""

import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from nearbip.graph import (
    Graph,
    NotP5FreeError,
    ParseError,
    bipartition,
    chain_graph,
    complete_graph,
    complete_multipartite,
    connected_components,
    contains_k4,
    cube_graph,
    cycle_graph,
    dominating_clique_or_p3,
    emit_edgelist,
    emit_graph6,
    enumerate_induced_c4,
    find_induced_claw,
    find_induced_path,
    girth,
    is_forest,
    line_graph,
    named_graph,
    parse_edgelist,
    parse_graph6,
    path_graph,
    petersen_graph,
    prism_graph,
    random_graph,
    random_p5free_graph,
    star_graph,
    subdivide_all,
    subdivide_edge,
)


def random_graphs(count, max_n, seed, lo=1):
    rng = random.Random(seed)
    for _ in range(count):
        yield random_graph(rng.randint(lo, max_n), rng.random(), rng.randrange(1 << 30))


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


# parsing


def test_edgelist_roundtrip():
    g = cycle_graph(5)
    assert parse_edgelist(emit_edgelist(g)).edges() == g.edges()


def test_edgelist_errors():
    with pytest.raises(ParseError):
        parse_edgelist("")
    with pytest.raises(ParseError):
        parse_edgelist("2 1\n0 5")
    with pytest.raises(ParseError):
        parse_edgelist("2 1\n0 0")
    with pytest.raises(ParseError):
        parse_edgelist("2 2\n0 1")
    with pytest.raises(ParseError):
        parse_edgelist("x y\n")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 30), st.integers(0, 10 ** 6))
def test_graph6_roundtrip(n, seed):
    g = random_graph(n, 0.4, seed)
    h = parse_graph6(emit_graph6(g))
    assert h.n == g.n and h.edges() == g.edges()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 40), st.integers(0, 10 ** 6))
def test_graph6_matches_networkx(n, seed):
    g = random_graph(n, 0.3, seed)
    ours = emit_graph6(g)
    theirs = nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()
    assert ours == theirs
    back = nx.from_graph6_bytes(ours.encode())
    assert sorted(tuple(sorted(e)) for e in back.edges()) == list(g.edges())


def test_graph6_rejects_garbage():
    with pytest.raises(ParseError):
        parse_graph6("")
    with pytest.raises(ParseError):
        parse_graph6("\x01\x02")


# basic structure


def test_graph_validates():
    with pytest.raises(ValueError):
        Graph(2, [(0, 2)])
    with pytest.raises(ValueError):
        Graph(2, [(1, 1)])


def test_neighbors_and_edges():
    g = parse_edgelist("4 3\n0 1\n2 1\n2 3")
    assert g.neighbors(1) == {0, 2}
    assert g.edges() == ((0, 1), (1, 2), (2, 3))
    assert g.has_edge(2, 1) and not g.has_edge(0, 3)


def test_subgraph_relabels_sorted():
    g = cycle_graph(6)
    sub, vmap = g.subgraph([5, 1, 3, 4])
    assert vmap == [1, 3, 4, 5]
    assert sub.edges() == ((1, 2), (2, 3))


def test_connected_components_partition():
    g = parse_edgelist("6 3\n0 1\n2 3\n3 4")
    comps = connected_components(g)
    assert comps == [(0, 1), (2, 3, 4), (5,)]


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 12), st.integers(0, 10 ** 6))
def test_bipartition_agrees_with_networkx(n, seed):
    g = random_graph(n, 0.35, seed)
    ours = bipartition(g)
    assert (ours is not None) == nx.is_bipartite(to_nx(g))
    if ours is not None:
        left, right = set(ours[0]), set(ours[1])
        assert left | right == set(range(n)) and not left & right
        for u, v in g.edges():
            assert (u in left) != (v in left)


def test_is_forest():
    assert is_forest(path_graph(5))
    assert not is_forest(cycle_graph(3))
    assert is_forest(cycle_graph(4), [0, 1, 2])
    assert is_forest(Graph(0, []))


def test_girth():
    assert girth(path_graph(4)) is None
    assert girth(cycle_graph(7)) == 7
    assert girth(complete_graph(4)) == 3
    assert girth(cube_graph()) == 4


# induced substructure detectors


def brute_induced_path(g, r):
    for perm in itertools.permutations(range(g.n), r):
        if not all(g.has_edge(perm[i], perm[i + 1]) for i in range(r - 1)):
            continue
        if all(not g.has_edge(perm[i], perm[j])
               for i in range(r) for j in range(i + 2, r)):
            return True
    return False


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(0, 10 ** 6))
def test_find_induced_path_matches_brute(n, seed):
    g = random_graph(n, 0.45, seed)
    got = find_induced_path(g, 5)
    assert (got is not None) == brute_induced_path(g, 5)
    if got is not None:
        for i in range(5):
            for j in range(i + 1, 5):
                assert g.has_edge(got[i], got[j]) == (j == i + 1)


def test_find_induced_path_on_known():
    assert find_induced_path(path_graph(5), 5) == (0, 1, 2, 3, 4)
    assert find_induced_path(complete_graph(6), 5) is None
    assert find_induced_path(cycle_graph(6), 5) is not None
    assert find_induced_path(cycle_graph(4), 5) is None


def test_find_induced_claw():
    got = find_induced_claw(star_graph(3))
    assert got is not None
    centre, *leaves = got
    assert all(star_graph(3).has_edge(centre, l) for l in leaves)
    assert find_induced_claw(cycle_graph(6)) is None
    # line graphs are claw-free
    for base in (cube_graph(), petersen_graph(), complete_graph(4)):
        lg, _ = line_graph(base)
        assert find_induced_claw(lg) is None


def test_contains_k4():
    assert contains_k4(complete_graph(4))
    assert contains_k4(complete_graph(5))
    assert not contains_k4(complete_multipartite([2, 2, 2]))
    assert not contains_k4(cycle_graph(9))


def brute_induced_c4(g):
    out = set()
    for quad in itertools.combinations(range(g.n), 4):
        sub = [(a, b) for a, b in itertools.combinations(quad, 2) if g.has_edge(a, b)]
        if len(sub) == 4 and all(sum(v in e for e in sub) == 2 for v in quad):
            out.add(quad)
    return out


@settings(max_examples=50, deadline=None)
@given(st.integers(4, 8), st.integers(0, 10 ** 6))
def test_enumerate_induced_c4_complete(n, seed):
    g = random_graph(n, 0.5, seed)
    got = enumerate_induced_c4(g)
    assert len(got) == len(set(got))
    assert {tuple(sorted(c)) for c in got} == brute_induced_c4(g)
    for a, b, c, d in got:
        assert g.has_edge(a, b) and g.has_edge(b, c)
        assert g.has_edge(c, d) and g.has_edge(d, a)
        assert not g.has_edge(a, c) and not g.has_edge(b, d)
        # canonical orientation: least vertex first, then its lesser neighbour
        assert a == min(a, b, c, d) and b < d


# dominating structures


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(0, 10 ** 6))
def test_dominating_clique_or_p3(n, seed):
    g = random_p5free_graph(n, seed)
    for comp in connected_components(g):
        sub, _ = g.subgraph(comp)
        dom = dominating_clique_or_p3(sub)
        assert dom is not None, "connected P5-free graphs always have one"
        ds = set(dom)
        for v in range(sub.n):
            assert v in ds or sub.neighbors(v) & ds
        if len(dom) == 3:
            a, b, c = dom
            edges = sub.has_edge(a, b) + sub.has_edge(b, c) + sub.has_edge(a, c)
            assert edges >= 2  # triangle or P3


def test_dominating_absent_on_c6():
    assert dominating_clique_or_p3(cycle_graph(6)) is None


# transformations


def test_line_graph_matches_networkx():
    for base in (path_graph(4), cycle_graph(5), cube_graph(), star_graph(4)):
        lg, edge_map = line_graph(base)
        ref = nx.line_graph(to_nx(base))
        assert lg.n == ref.number_of_nodes()
        assert lg.m == ref.number_of_edges()
        relabel = {e: i for i, e in enumerate(edge_map)}
        for a, b in ref.edges():
            assert lg.has_edge(relabel[tuple(sorted(a))], relabel[tuple(sorted(b))])


def test_subdivide_edge():
    g = subdivide_edge(cycle_graph(3), 0, 1)
    assert g.n == 4 and g.m == 4
    assert girth(g) == 4
    with pytest.raises(ValueError):
        subdivide_edge(path_graph(3), 0, 2)


def test_subdivide_all():
    g = subdivide_all(complete_graph(4))
    assert g.n == 4 + 6 and g.m == 12
    assert bipartition(g) is not None  # subdivision is always bipartite


# generators


def test_generator_shapes():
    assert path_graph(1).m == 0
    assert cycle_graph(3).m == 3
    assert complete_graph(5).m == 10
    assert star_graph(4).m == 4
    assert complete_multipartite([2, 3]).m == 6
    assert cube_graph().n == 8 and cube_graph().m == 12
    assert petersen_graph().n == 10 and petersen_graph().m == 15
    assert prism_graph().n == 6 and prism_graph().m == 9


def test_cycle_graph_rejects_short():
    with pytest.raises(ValueError):
        cycle_graph(2)


def test_named_graph():
    assert named_graph("cube").n == 8
    assert named_graph("K33").m == 9
    with pytest.raises(ValueError):
        named_graph("nope")


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 16), st.integers(0, 10 ** 6))
def test_random_p5free_is_p5free(n, seed):
    g = random_p5free_graph(n, seed)
    assert g.n == n
    assert find_induced_path(g, 5) is None


def test_random_generators_deterministic():
    assert random_graph(9, 0.5, 42).edges() == random_graph(9, 0.5, 42).edges()
    assert random_p5free_graph(11, 7).edges() == random_p5free_graph(11, 7).edges()
    assert chain_graph(5, 6, 3).edges() == chain_graph(5, 6, 3).edges()


def test_chain_graph_is_chain():
    g = chain_graph(6, 5, 11)
    left = list(range(6))
    nbrs = [g.neighbors(v) for v in left]
    order = sorted(nbrs, key=len)
    for a, b in zip(order, order[1:]):
        assert a <= b, "left neighbourhoods must be nested"
    assert find_induced_path(g, 5) is None


def test_notp5free_error_carries_witness():
    e = NotP5FreeError((3, 1, 4, 1, 5))
    assert e.witness == (3, 1, 4, 1, 5)
