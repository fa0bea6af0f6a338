"""Command-line front end.

Verbs: solve (nb/ifvs/ioct with optional size bound), check (structural
detectors with witnesses), generate (graph families), reduce (hardness
gadgets), oracle (brute-force cross-check), fuzz (solver-vs-oracle
loop), report (batch CSV plus rendered figures).

Exit codes: 0 for a yes-verdict, 1 for a no-verdict (or a fuzz
mismatch), 2 for errors of any kind.  JSON output (--json) is the
stable machine interface; the human text is not.  Input files may
carry '#' comments; they are stripped here, not in the parsers.
Set NEARBIP_LOG=debug for rule-level tracing on stderr.
"""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import os
import random
import sys
from typing import Optional, Sequence

from . import gadgets, lsac, oracle, solvers
from .graph import (
    Graph,
    NAMED_GRAPHS,
    NotP5FreeError,
    ParseError,
    bipartition,
    complete_graph,
    cycle_graph,
    emit_edgelist,
    emit_graph6,
    find_induced_claw,
    find_induced_path,
    line_graph,
    named_graph,
    parse_edgelist,
    parse_graph6,
    path_graph,
    random_graph,
    random_p5free_graph,
    star_graph,
)
from .oracle import OracleGuardError
from .solvers import SolveResult
from .troublefree import PipelineInvariantError

log = logging.getLogger("nearbip.cli")


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def _read_input(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_graph(path: Optional[str], fmt: str) -> Graph:
    text = _strip_comments(_read_input(path))
    if fmt == "graph6":
        for line in text.splitlines():
            if line.strip():
                return parse_graph6(line.strip())
        raise ParseError("no graph6 line found in input")
    return parse_edgelist(text)


def _emit_graph(g: Graph, fmt: str) -> str:
    return emit_graph6(g) + "\n" if fmt == "graph6" else emit_edgelist(g)


def _emit_record(record: dict) -> None:
    print(json.dumps(record, sort_keys=True, separators=(",", ":")))


def _print_result(res: SolveResult, as_json: bool) -> int:
    if as_json:
        print(res.to_json())
    else:
        print(res.verdict)
        if res.size is not None:
            print(f"size={res.size}")
        if res.witness is not None:
            print("witness=" + " ".join(str(v) for v in res.witness))
        st = res.stats
        print(f"stats: leaves={st.leaves} outer={st.outer_branches} "
              f"elim={st.elimination_branches} rules={sum(st.rules.values())} "
              f"twosat={st.twosat_calls} wall={st.wall_time:.3f}s")
    return 0 if res.verdict == "yes" else 1


# ---------------------------------------------------------------------------
# solve


def cmd_solve(args) -> int:
    g = _load_graph(args.input, args.format)
    checked = not args.unchecked
    if args.problem == "nb":
        if args.k is not None:
            raise ValueError("--k does not apply to problem nb")
        res = solvers.is_near_bipartite(g, checked=checked)
    elif args.problem == "ifvs":
        if args.k is not None:
            res = solvers.ifvs_decision(g, args.k, checked=checked)
        else:
            res = solvers.min_ifvs(g, checked=checked, parallel=args.parallel)
    else:
        res = solvers.min_ioct(g, checked=checked, parallel=args.parallel)
        if args.k is not None:
            if args.k < 0:
                raise ValueError("k must be non-negative")
            if res.verdict == "yes" and res.size > args.k:
                res = SolveResult("ioct-decision", "no", res.size, None, res.stats)
            else:
                res = SolveResult("ioct-decision", res.verdict, res.size,
                                  res.witness, res.stats)
    return _print_result(res, args.json)


# ---------------------------------------------------------------------------
# check


def _find_k4(g: Graph) -> Optional[tuple[int, int, int, int]]:
    for u, v in g.edges():
        common = sorted(g.neighbors(u) & g.neighbors(v))
        for w, x in itertools.combinations(common, 2):
            if g.has_edge(w, x):
                return (u, v, w, x)
    return None


def _odd_cycle(g: Graph) -> list[int]:
    """An odd cycle of a non-bipartite graph, via BFS parent links."""
    color = {}
    parent = {}
    for root in range(g.n):
        if root in color:
            continue
        color[root] = 0
        parent[root] = None
        queue = [root]
        while queue:
            u = queue.pop(0)
            for w in sorted(g.neighbors(u)):
                if w not in color:
                    color[w] = color[u] ^ 1
                    parent[w] = u
                    queue.append(w)
                elif color[w] == color[u]:
                    pu, pw = [], []
                    a, b = u, w
                    while a is not None:
                        pu.append(a)
                        a = parent[a]
                    while b is not None:
                        pw.append(b)
                        b = parent[b]
                    common = set(pu) & set(pw)
                    iu = next(i for i, x in enumerate(pu) if x in common)
                    iw = next(i for i, x in enumerate(pw) if x in common)
                    if pu[iu] != pw[iw]:
                        raise PipelineInvariantError("BFS ancestry disagrees")
                    return pu[:iu + 1] + pw[:iw][::-1]
    raise ValueError("graph is bipartite, no odd cycle exists")


def cmd_check(args) -> int:
    g = _load_graph(args.input, args.format)
    witness: Optional[Sequence[int]] = None
    if args.detector == "p5free":
        witness = find_induced_path(g, 5)
    elif args.detector == "clawfree":
        witness = find_induced_claw(g)
    elif args.detector == "k4free":
        witness = _find_k4(g)
    else:
        if bipartition(g) is None:
            witness = _odd_cycle(g)
    verdict = "yes" if witness is None else "no"
    if args.json:
        _emit_record({
            "detector": args.detector,
            "verdict": verdict,
            "witness": list(witness) if witness is not None else None,
        })
    elif witness is None:
        print("yes")
    else:
        kind = {"p5free": "witness", "clawfree": "claw", "k4free": "clique",
                "bipartite": "odd cycle"}[args.detector]
        print(f"no, {kind} " + "-".join(str(v) for v in witness))
    return 0 if witness is None else 1


# ---------------------------------------------------------------------------
# generate


def cmd_generate(args) -> int:
    fam = args.family
    params = args.params

    def size_arg() -> int:
        if params:
            return int(params[0])
        if args.n is not None:
            return args.n
        raise ValueError(f"family {fam!r} needs a size (positional or --n)")

    if fam == "path":
        g = path_graph(size_arg())
    elif fam == "cycle":
        g = cycle_graph(size_arg())
    elif fam == "complete":
        g = complete_graph(size_arg())
    elif fam == "star":
        g = star_graph(size_arg())
    elif fam == "random":
        if args.n is None:
            raise ValueError("random needs --n")
        g = random_graph(args.n, args.p, args.seed)
    elif fam == "p5free-random":
        if args.n is None:
            raise ValueError("p5free-random needs --n")
        g = random_p5free_graph(args.n, args.seed)
    elif fam == "linegraph-of":
        if not params:
            raise ValueError(f"linegraph-of needs a graph name, one of "
                             f"{sorted(NAMED_GRAPHS)}")
        g, _ = line_graph(named_graph(params[0]))
    else:
        raise ValueError(f"unknown family {fam!r}")
    sys.stdout.write(_emit_graph(g, args.format))
    return 0


# ---------------------------------------------------------------------------
# reduce


def cmd_reduce(args) -> int:
    if args.kind == "sat":
        formula = gadgets.parse_dimacs(_read_input(args.input))
        gd = gadgets.sat_to_lsac(formula)
        if args.json:
            _emit_record({
                "kind": "sat",
                "n": gd.graph.n,
                "m": gd.graph.m,
                "edges": [list(e) for e in gd.graph.edges()],
                "lists": [sorted(l) for l in gd.lists],
                "clause_cycles": [list(c) for c in gd.clause_cycles],
                "var_vertex": {str(x): v for x, v in sorted(gd.var_vertex.items())},
                "middle_vertices": list(gd.middle_vertices),
            })
        else:
            sys.stdout.write(_emit_graph(gd.graph, args.format))
            print()
            sys.stdout.write(lsac.emit_lists(gd.lists))
        return 0
    if args.kind == "hamilton":
        if args.name is not None:
            g = named_graph(args.name)
        else:
            g = _load_graph(args.input, args.format)
        if args.edge is not None:
            e = (args.edge[0], args.edge[1])
        else:
            e = g.edges()[0]
        gd = gadgets.hamilton_gadget(g, e)
        if args.json:
            _emit_record({
                "kind": "hamilton",
                "through_edge": list(gd.through_edge),
                "n": gd.graph.n,
                "m": gd.graph.m,
                "edges": [list(x) for x in gd.graph.edges()],
                "edge_map": [list(x) for x in gd.edge_map],
                "pendant_line_vertices": list(gd.pendant_line_vertices),
            })
        else:
            sys.stdout.write(_emit_graph(gd.graph, args.format))
        return 0
    g = _load_graph(args.input, args.format)
    gd = gadgets.subdivision_chain(g)
    if args.json:
        _emit_record({
            "kind": "subdivide",
            "n": gd.graph.n,
            "m": gd.graph.m,
            "edges": [list(x) for x in gd.graph.edges()],
            "edge_vertex": {f"{a},{b}": w for (a, b), w in sorted(gd.edge_vertex.items())},
        })
    else:
        sys.stdout.write(_emit_graph(gd.graph, args.format))
    return 0


# ---------------------------------------------------------------------------
# oracle


def cmd_oracle(args) -> int:
    g = _load_graph(args.input, args.format)
    if args.problem == "nb":
        got = oracle.brute_min_ifvs(g)
        record = {"problem": "oracle-nb",
                  "verdict": "yes" if got is not None else "no",
                  "size": None,
                  "witness": list(got[1]) if got is not None else None}
    elif args.problem == "ifvs":
        got = oracle.brute_min_ifvs(g)
        record = {"problem": "oracle-min-ifvs",
                  "verdict": "yes" if got is not None else "no",
                  "size": got[0] if got is not None else None,
                  "witness": list(got[1]) if got is not None else None}
    else:
        got = oracle.brute_min_ioct(g)
        record = {"problem": "oracle-min-ioct",
                  "verdict": "yes" if got is not None else "no",
                  "size": got[0] if got is not None else None,
                  "witness": list(got[1]) if got is not None else None}
    if args.json:
        _emit_record(record)
    else:
        print(record["verdict"])
        if record["size"] is not None:
            print(f"size={record['size']}")
        if record["witness"] is not None:
            print("witness=" + " ".join(str(v) for v in record["witness"]))
    return 0 if record["verdict"] == "yes" else 1


# ---------------------------------------------------------------------------
# fuzz


def run_fuzz(problem: str, iters: int, max_n: int, seed: int, *,
             solver_fn=None, out=print) -> tuple[int, Optional[Graph]]:
    """Random P5-free graphs, solver vs oracle; mismatch count and the
    first offending graph.  solver_fn overrides the real solver so the
    harness itself stays testable against a deliberately broken one."""
    rng = random.Random(seed)
    mismatches = 0
    first_bad = None
    for i in range(iters):
        n = rng.randint(1, max_n)
        g = random_p5free_graph(n, rng.randrange(1 << 30))
        if problem == "nb":
            want = oracle.brute_min_ifvs(g) is not None
            res = (solver_fn or solvers.is_near_bipartite)(g)
            ok = (res.verdict == "yes") == want
            if ok and res.verdict == "yes":
                ok = solvers.verify_ifvs(g, res.witness)
        elif problem == "ifvs":
            want = oracle.brute_min_ifvs(g)
            res = (solver_fn or solvers.min_ifvs)(g)
            ok = (res.verdict == "yes") == (want is not None)
            if ok and want is not None:
                ok = res.size == want[0] and solvers.verify_ifvs(g, res.witness)
        else:
            want = oracle.brute_min_ioct(g)
            res = (solver_fn or solvers.min_ioct)(g)
            ok = (res.verdict == "yes") == (want is not None)
            if ok and want is not None:
                ok = res.size == want[0] and solvers.verify_ioct(g, res.witness)
        if not ok:
            mismatches += 1
            if first_bad is None:
                first_bad = g
                out(f"mismatch at iteration {i}: solver said "
                    f"{res.verdict}/{res.size}, oracle disagrees")
                out(emit_edgelist(g).rstrip("\n"))
    return mismatches, first_bad


def cmd_fuzz(args) -> int:
    if args.iters <= 0:
        raise ValueError("--iters must be positive")
    if not 1 <= args.max_n <= 14:
        raise ValueError("--max-n must lie in 1..14 (oracle territory)")
    mismatches, _ = run_fuzz(args.problem, args.iters, args.max_n, args.seed)
    if args.json:
        _emit_record({"iterations": args.iters, "max_n": args.max_n,
                      "mismatches": mismatches, "problem": args.problem,
                      "seed": args.seed})
    else:
        print(f"{args.iters} iterations, {mismatches} mismatches")
    return 0 if mismatches == 0 else 1


# ---------------------------------------------------------------------------
# report


def cmd_report(args) -> int:
    import csv

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    solver = {"nb": solvers.is_near_bipartite, "ifvs": solvers.min_ifvs,
              "ioct": solvers.min_ioct}[args.problem]
    os.makedirs(args.out, exist_ok=True)
    rows = []
    for path in args.inputs:
        g = _load_graph(path, args.format)
        res = solver(g, checked=not args.unchecked)
        st = res.stats
        rows.append({
            "input": os.path.basename(path),
            "n": g.n,
            "m": g.m,
            "problem": res.problem,
            "verdict": res.verdict,
            "size": "" if res.size is None else res.size,
            "leaves": st.leaves,
            "outer_branches": st.outer_branches,
            "elimination_branches": st.elimination_branches,
            "rules_fired": sum(st.rules.values()),
            "twosat_calls": st.twosat_calls,
            "wall_ms": round(st.wall_time * 1000.0, 3),
        })
    csv_path = os.path.join(args.out, "report.csv")
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.scatter([r["n"] for r in rows], [r["wall_ms"] for r in rows])
    for r in rows:
        ax.annotate(r["input"], (r["n"], r["wall_ms"]), fontsize=7,
                    xytext=(3, 3), textcoords="offset points")
    ax.set_xlabel("vertices")
    ax.set_ylabel("wall time (ms)")
    ax.set_title(f"{args.problem} solve time")
    times_path = os.path.join(args.out, "times.png")
    fig.tight_layout()
    fig.savefig(times_path, dpi=120)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6, 4))
    xs = range(len(rows))
    ax.bar([x - 0.2 for x in xs], [r["leaves"] for r in rows], 0.4,
           label="leaves")
    ax.bar([x + 0.2 for x in xs], [r["elimination_branches"] for r in rows],
           0.4, label="elimination branches")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([r["input"] for r in rows], rotation=45, ha="right",
                       fontsize=7)
    ax.set_ylabel("count")
    ax.set_title("branching effort")
    ax.legend()
    branches_path = os.path.join(args.out, "branches.png")
    fig.tight_layout()
    fig.savefig(branches_path, dpi=120)
    plt.close(fig)

    for p in (csv_path, times_path, branches_path):
        print(p)
    return 0


# ---------------------------------------------------------------------------
# wiring


def _add_io_flags(p, *, output_only: bool = False) -> None:
    p.add_argument("--format", choices=("edgelist", "graph6"),
                   default="edgelist", help="graph serialization format")
    if not output_only:
        p.add_argument("--json", action="store_true",
                       help="emit a machine-readable record")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nearbip",
        description="Exact near-bipartiteness, IFVS and IOCT solvers "
                    "for P5-free graphs, with gadgets and oracles.")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("solve", help="run a solver on one graph")
    p.add_argument("input", nargs="?", help="graph file, or stdin")
    p.add_argument("--problem", choices=("nb", "ifvs", "ioct"), required=True)
    p.add_argument("--k", type=int, default=None,
                   help="decision bound: is there a solution of size <= k")
    p.add_argument("--unchecked", action="store_true",
                   help="skip the P5-freeness precondition scan")
    p.add_argument("--parallel", action="store_true",
                   help="evaluate minimization branches concurrently")
    _add_io_flags(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("check", help="structural detectors with witnesses")
    p.add_argument("detector", choices=("p5free", "clawfree", "k4free",
                                        "bipartite"))
    p.add_argument("input", nargs="?")
    _add_io_flags(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("generate", help="emit a graph from a family")
    p.add_argument("family", choices=("path", "cycle", "complete", "star",
                                      "random", "p5free-random",
                                      "linegraph-of"))
    p.add_argument("params", nargs="*", help="family-specific positionals")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    _add_io_flags(p, output_only=True)
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("reduce", help="emit a hardness gadget")
    p.add_argument("kind", choices=("sat", "hamilton", "subdivide"))
    p.add_argument("input", nargs="?",
                   help="DIMACS file for sat, graph file otherwise")
    p.add_argument("--name", default=None,
                   help="named base graph for hamilton, e.g. cube")
    p.add_argument("--edge", type=int, nargs=2, default=None,
                   help="edge the Hamilton cycle must pass through")
    _add_io_flags(p)
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("oracle", help="brute-force reference answer")
    p.add_argument("input", nargs="?")
    p.add_argument("--problem", choices=("nb", "ifvs", "ioct"), required=True)
    _add_io_flags(p)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("fuzz", help="solver-vs-oracle random comparison")
    p.add_argument("--problem", choices=("nb", "ifvs", "ioct"), default="ifvs")
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_fuzz)

    p = sub.add_parser("report", help="batch solve with CSV and figures")
    p.add_argument("inputs", nargs="+", help="graph files")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--problem", choices=("nb", "ifvs", "ioct"), default="ifvs")
    p.add_argument("--unchecked", action="store_true")
    p.add_argument("--format", choices=("edgelist", "graph6"),
                   default="edgelist")
    p.set_defaults(fn=cmd_report)

    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    level = os.environ.get("NEARBIP_LOG", "").upper()
    if level:
        logging.basicConfig(stream=sys.stderr,
                            level=getattr(logging, level, logging.INFO),
                            format="%(name)s %(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except NotP5FreeError as e:
        path = "-".join(str(v) for v in e.witness)
        print(f"error: input is not P5-free, induced path {path}",
              file=sys.stderr)
        return 2
    except (ParseError, ValueError, OracleGuardError,
            gadgets.GadgetError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except PipelineInvariantError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
