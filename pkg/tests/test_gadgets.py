"""Hardness constructions against the brute-force oracles.

Each reduction ships a structural census of its own; here the actual
equivalence claims are checked the slow way: formula satisfiability by
assignment enumeration, near-bipartiteness and feedback sets by subset
enumeration.
"""

import random
from itertools import combinations, product

import pytest

from nearbip.gadgets import (
    CnfFormula,
    DegenerateFormulaError,
    decode_assignment,
    hamilton_gadget,
    normalize_cnf,
    parse_dimacs,
    sat_to_lsac,
    subdivision_chain,
)
from nearbip.graph import (
    Graph,
    ParseError,
    complete_graph,
    cycle_graph,
    is_forest,
    named_graph,
    random_graph,
)
from nearbip.oracle import (
    all_min_fvs,
    brute_hamilton_through_edge,
    brute_lsac,
    brute_min_fvs,
    brute_min_ifvs,
)


def cnf_satisfiable(f: CnfFormula) -> bool:
    for bits in product([False, True], repeat=f.var_count):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in cl) for cl in f.clauses):
            return True
    return False


def satisfies(f: CnfFormula, assignment: dict[int, bool]) -> bool:
    return all(any(assignment[abs(l)] == (l > 0) for l in cl) for cl in f.clauses)


def check_semi_acyclic(g: Graph, lists, colours) -> None:
    assert len(colours) == g.n
    for v in range(g.n):
        assert colours[v] in lists[v]
    for u, v in g.edges():
        assert colours[u] != colours[v]
    assert is_forest(g, [v for v in range(g.n) if colours[v] != 1])


def random_formula(rng: random.Random, unit_ok: bool = False) -> CnfFormula:
    nvars = rng.randint(2, 4)
    low = 1 if unit_ok else 2
    clauses = []
    for _ in range(rng.randint(2, 5)):
        k = min(rng.randint(low, 3), nvars)
        vs = rng.sample(range(1, nvars + 1), k)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CnfFormula(nvars, tuple(clauses))


# ---------------------------------------------------------------- formulas


def test_formula_validation():
    with pytest.raises(ValueError):
        CnfFormula(2, ((1, -3),))
    with pytest.raises(ValueError):
        CnfFormula(2, ((0,),))
    with pytest.raises(ValueError):
        CnfFormula(-1, ())
    assert CnfFormula(0, ()).clauses == ()


def test_dimacs_roundtrip():
    f = CnfFormula(3, ((1, -2), (2, 3, -1)))
    assert f.to_dimacs() == "p cnf 3 2\n1 -2 0\n2 3 -1 0\n"
    assert parse_dimacs(f.to_dimacs()) == f


def test_parse_dimacs_layout():
    # comments, blank lines, clauses split and joined across lines
    text = "c header\n\np cnf 3 3\n1 -2\n0\nc mid\n2 3 0 -1 -3 0\n"
    f = parse_dimacs(text)
    assert f == CnfFormula(3, ((1, -2), (2, 3), (-1, -3)))


def test_parse_dimacs_errors():
    with pytest.raises(ParseError, match="problem line"):
        parse_dimacs("p dnf 2 1\n1 2 0\n")
    with pytest.raises(ParseError, match="before problem line"):
        parse_dimacs("1 2 0\n")
    with pytest.raises(ParseError, match="non-integer"):
        parse_dimacs("p cnf 2 1\n1 x 0\n")
    with pytest.raises(ParseError, match="unterminated"):
        parse_dimacs("p cnf 2 1\n1 2\n")
    with pytest.raises(ParseError, match="missing problem line"):
        parse_dimacs("c nothing\n")
    with pytest.raises(ParseError, match="promises 2"):
        parse_dimacs("p cnf 2 2\n1 2 0\n")


def test_normalize_drops_duplicates_and_tautologies():
    f = CnfFormula(3, ((1, 1, -2), (-1, 2), (1, -1, 3)))
    assert normalize_cnf(f) == CnfFormula(2, ((1, -2), (-1, 2)))


def test_normalize_unit_propagation():
    f = CnfFormula(3, ((1,), (1, 2), (-1, 2, 3), (-2, -3)))
    # forcing x1 leaves (x2 or x3) and (not x2 or not x3), renumbered
    assert normalize_cnf(f) == CnfFormula(2, ((1, 2), (-1, -2)))


def test_normalize_pure_literal_collapse():
    f = CnfFormula(3, ((1, 2), (-2, 3), (1, 3)))
    with pytest.raises(DegenerateFormulaError) as exc:
        normalize_cnf(f)
    assert exc.value.satisfiable is True


def test_normalize_contradiction_collapse():
    with pytest.raises(DegenerateFormulaError) as exc:
        normalize_cnf(CnfFormula(1, ((1,), (-1,))))
    assert exc.value.satisfiable is False


def test_normalize_keeps_undecided_unsat_formula():
    f = CnfFormula(2, ((1, 2), (1, -2), (-1, 2), (-1, -2)))
    assert normalize_cnf(f) == f
    assert not cnf_satisfiable(f)


def test_normalize_random_formulas():
    """Normalisation decides correctly or preserves satisfiability."""
    rng = random.Random(424201)
    decided = {True: 0, False: 0}
    survived = 0
    for i in range(400):
        f = random_formula(rng, unit_ok=i % 2 == 0)
        try:
            g = normalize_cnf(f)
        except DegenerateFormulaError as exc:
            assert exc.satisfiable == cnf_satisfiable(f)
            decided[exc.satisfiable] += 1
            continue
        survived += 1
        assert cnf_satisfiable(g) == cnf_satisfiable(f)
        assert normalize_cnf(g) == g
        seen_polarity: dict[int, set[bool]] = {}
        for cl in g.clauses:
            assert len(cl) >= 2
            assert len(set(cl)) == len(cl)
            assert not any(-l in cl for l in cl)
            for l in cl:
                seen_polarity.setdefault(abs(l), set()).add(l > 0)
        assert sorted(seen_polarity) == list(range(1, g.var_count + 1))
        assert all(ps == {True, False} for ps in seen_polarity.values())
    assert decided[True] > 20 and decided[False] > 20 and survived > 50


# ------------------------------------------------------- formula to lists


def test_sat_gadget_census():
    f = CnfFormula(5, ((-1, 2, 3), (1, -3, 4), (1, -4, -5), (-2, 3, 5)))
    gadget = sat_to_lsac(f)
    assert gadget.formula == f  # already normalised
    g = gadget.graph
    assert (g.n, g.m) == (26, 33)
    assert len(gadget.clause_cycles) == 4
    for j, cyc in enumerate(gadget.clause_cycles):
        assert len(cyc) == 6
        for pos, v in enumerate(cyc):
            want = frozenset({1, 3}) if pos % 2 == 0 else frozenset({2})
            assert gadget.lists[v] == want
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            assert g.has_edge(a, b)
        for pos, lit in enumerate(f.clauses[j]):
            assert gadget.literal_vertex[(j, lit)] == cyc[2 * pos]
    # representative of each variable is its first positive occurrence
    assert gadget.var_vertex == {
        1: gadget.literal_vertex[(1, 1)],
        2: gadget.literal_vertex[(0, 2)],
        3: gadget.literal_vertex[(0, 3)],
        4: gadget.literal_vertex[(1, 4)],
        5: gadget.literal_vertex[(3, 5)],
    }
    # x1 and x3 repeat positively, so exactly two equality middles exist
    assert len(gadget.middle_vertices) == 2
    for w in gadget.middle_vertices:
        assert gadget.lists[w] == frozenset({1, 3})
        assert len(g.neighbors(w)) == 2
    # negative occurrences attach straight to the representative
    for j, lit in [(0, -1), (1, -3), (2, -4), (2, -5), (3, -2)]:
        assert g.has_edge(gadget.literal_vertex[(j, lit)], gadget.var_vertex[-lit])


def test_sat_gadget_is_deterministic():
    f = CnfFormula(3, ((1, 2), (-1, -2, 3), (2, -3)))
    assert sat_to_lsac(f) == sat_to_lsac(f)


def test_sat_gadget_decode():
    f = CnfFormula(5, ((-1, 2, 3), (1, -3, 4), (1, -4, -5), (-2, 3, 5)))
    gadget = sat_to_lsac(f)
    colours = brute_lsac(gadget.graph, gadget.lists)
    assert colours is not None
    check_semi_acyclic(gadget.graph, gadget.lists, colours)
    assignment = decode_assignment(gadget, dict(enumerate(colours)))
    assert satisfies(gadget.formula, assignment)
    # every occurrence of a variable agrees with its representative
    for (j, lit), v in gadget.literal_vertex.items():
        truth = colours[v] == 1
        assert truth == (assignment[abs(lit)] if lit > 0 else not assignment[abs(lit)])
    with pytest.raises(ValueError, match="colour 2"):
        decode_assignment(gadget, {v: 2 for v in range(gadget.graph.n)})


def test_sat_gadget_degenerate_input():
    with pytest.raises(DegenerateFormulaError):
        sat_to_lsac(CnfFormula(1, ((1,),)))


def test_unsat_formula_gives_infeasible_gadget():
    f = CnfFormula(2, ((1, 2), (1, -2), (-1, 2), (-1, -2)))
    gadget = sat_to_lsac(f)
    assert (gadget.graph.n, gadget.graph.m) == (18, 24)
    assert brute_lsac(gadget.graph, gadget.lists) is None


def test_sat_gadget_equivalence_sweep():
    """Satisfiability transfers exactly, both directions, on a seeded set."""
    rng = random.Random(9109)

    def dense_formula() -> CnfFormula:
        # few variables under many short clauses, so unsatisfiable
        # cores survive normalisation often enough to matter
        nvars = rng.randint(2, 3)
        clauses = []
        for _ in range(rng.randint(nvars + 2, 6)):
            vs = rng.sample(range(1, nvars + 1), 2)
            clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
        return CnfFormula(nvars, tuple(clauses))

    verdicts = {True: 0, False: 0}
    built = 0
    for i in range(1200):
        if built >= 80 and min(verdicts.values()) >= 10:
            break
        f = random_formula(rng) if i % 2 else dense_formula()
        try:
            gadget = sat_to_lsac(f)
        except DegenerateFormulaError as exc:
            assert exc.satisfiable == cnf_satisfiable(f)
            continue
        if sum(1 for l in gadget.lists if len(l) == 2) > 14:
            continue  # keep the brute enumeration cheap
        built += 1
        expected = cnf_satisfiable(f)
        colours = brute_lsac(gadget.graph, gadget.lists)
        assert (colours is not None) == expected
        verdicts[expected] += 1
        if colours is not None:
            check_semi_acyclic(gadget.graph, gadget.lists, colours)
            # a clause cycle is only broken by a true literal
            for j, cyc in enumerate(gadget.clause_cycles):
                assert any(colours[v] == 1 for v in cyc[::2])
            assignment = decode_assignment(gadget, dict(enumerate(colours)))
            assert satisfies(gadget.formula, assignment)
    assert built >= 60
    assert verdicts[True] >= 10 and verdicts[False] >= 10


# ------------------------------------------------ hamiltonicity gadget


def test_hamilton_gadget_census():
    g = named_graph("q3")
    hg = hamilton_gadget(g, (1, 0))
    assert hg.through_edge == (0, 1)
    assert hg.gprime.n == 10
    assert not hg.gprime.has_edge(0, 1)
    assert hg.gprime.has_edge(0, 8) and hg.gprime.has_edge(1, 9)
    lg = hg.graph
    assert lg.n == 3 * g.n // 2 + 1 == 13
    for i in range(lg.n):
        want = 2 if i in hg.pendant_line_vertices else 4
        assert len(lg.neighbors(i)) == want
    # line-graph adjacency is exactly edge intersection in gprime
    for i, j in combinations(range(lg.n), 2):
        shares = bool(set(hg.edge_map[i]) & set(hg.edge_map[j]))
        assert lg.has_edge(i, j) == shares
    assert hamilton_gadget(g, (0, 1)) == hg


def test_hamilton_gadget_rejects_bad_input():
    with pytest.raises(ValueError, match="cubic"):
        hamilton_gadget(cycle_graph(4), (0, 1))
    with pytest.raises(ValueError, match="not an edge"):
        hamilton_gadget(named_graph("q3"), (0, 7))


def test_hamilton_equivalence_positive():
    """Near-bipartite gadget iff a Hamilton cycle uses the chosen edge.

    The cube, the triangular prism and K33 all carry a Hamilton cycle
    through every single edge, so both oracles must say yes everywhere.
    """
    for name in ["q3", "prism", "k33"]:
        g = named_graph(name)
        for e in g.edges():
            assert brute_hamilton_through_edge(g, e)
            hg = hamilton_gadget(g, e)
            assert brute_min_ifvs(hg.graph) is not None, (name, e)


def test_hamilton_equivalence_negative():
    # the Petersen graph has no Hamilton cycle at all; it is
    # edge-transitive, so two sample edges stand in for the rest
    g = named_graph("petersen")
    for e in [(0, 1), (0, 5)]:
        assert not brute_hamilton_through_edge(g, e)
        hg = hamilton_gadget(g, e)
        assert hg.graph.n == 16
        assert brute_min_ifvs(hg.graph) is None, e


# ------------------------------------------------- subdivision gadget


def test_subdivision_structure():
    g = complete_graph(4)
    sg = subdivision_chain(g)
    assert sg.graph.n == 10 and sg.graph.m == 12
    assert len(sg.edge_vertex) == 6
    for (a, b), w in sg.edge_vertex.items():
        assert sg.graph.neighbors(w) == frozenset({a, b})
    for x, y in combinations(range(4), 2):
        assert not sg.graph.has_edge(x, y)
    for v in range(4):
        assert len(sg.graph.neighbors(v)) == len(g.neighbors(v))
    empty = subdivision_chain(Graph(3))
    assert empty.graph.n == 3 and empty.edge_vertex == {}


def test_push_fvs_validation():
    sg = subdivision_chain(complete_graph(4))
    assert sg.push_fvs([2, 0]) == (0, 2)
    with pytest.raises(ValueError, match="not in the base graph"):
        sg.push_fvs([4])


def test_subdivision_preserves_min_fvs():
    """min FVS, subdivided min FVS and subdivided min IFVS all agree."""
    rng = random.Random(515001)
    cyclic = 0
    checked = 0
    while checked < 30:
        n = rng.randint(3, 8)
        g = random_graph(n, rng.choice([0.25, 0.4, 0.6, 0.8]), rng.randrange(1 << 30))
        if g.n + g.m > 22:
            continue
        checked += 1
        sg = subdivision_chain(g)
        base_size, base_witness = brute_min_fvs(g)
        assert brute_min_fvs(sg.graph)[0] == base_size
        ires = brute_min_ifvs(sg.graph)
        assert ires is not None and ires[0] == base_size
        pushed = sg.push_fvs(base_witness)
        assert not any(sg.graph.has_edge(u, v) for u, v in combinations(pushed, 2))
        assert is_forest(sg.graph, set(range(sg.graph.n)) - set(pushed))
        if base_size > 0:
            cyclic += 1
    assert cyclic >= 10


def test_min_fvs_of_subdivision_is_always_independent():
    # a subdivision vertex only lies on cycles through both endpoints,
    # so a minimum set never needs it next to a chosen original vertex
    rng = random.Random(77003)
    bases = [complete_graph(4), cycle_graph(5)]
    while len(bases) < 8:
        g = random_graph(rng.randint(3, 6), 0.5, rng.randrange(1 << 30))
        if g.n + g.m <= 14 and brute_min_fvs(g)[0] > 0:
            bases.append(g)
    for g in bases:
        sg = subdivision_chain(g)
        for witness in all_min_fvs(sg.graph):
            assert not any(
                sg.graph.has_edge(u, v) for u, v in combinations(witness, 2)
            )
