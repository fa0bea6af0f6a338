"""2-SAT via strongly connected components of the implication graph.

The trouble-free colouring step encodes its constraints as 2-SAT and this
module decides them.  The solver is linear time and deterministic: the SCC
pass visits vertices in a fixed order, so the same instance always yields
the same assignment.  A unit clause is modelled as a clause repeating its
literal twice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

Literal = tuple[int, bool]  # (variable index, True = positive)


@dataclass(frozen=True)
class TwoSatInstance:
    var_count: int
    clauses: tuple[tuple[Literal, Literal], ...]

    def __post_init__(self):
        for (a, pa), (b, pb) in self.clauses:
            if not (0 <= a < self.var_count and 0 <= b < self.var_count):
                raise ValueError("clause variable index out of range")


def _node(lit: Literal) -> int:
    var, positive = lit
    return 2 * var + (0 if positive else 1)


def _negate(node: int) -> int:
    return node ^ 1


def solve(inst: TwoSatInstance) -> Optional[list[bool]]:
    """A satisfying assignment, or None.

    Builds the implication graph (clause (a or b) gives edges not-a -> b and
    not-b -> a), runs an iterative Tarjan SCC pass in fixed vertex order,
    and reads the assignment off the component numbering.  The assignment
    is re-checked against every clause before being returned.
    """
    size = 2 * inst.var_count
    succ: list[list[int]] = [[] for _ in range(size)]
    for la, lb in inst.clauses:
        a, b = _node(la), _node(lb)
        succ[_negate(a)].append(b)
        succ[_negate(b)].append(a)
    for lst in succ:
        lst.sort()

    # Iterative Tarjan.  Components are numbered in completion order, which
    # is reverse topological: if an edge leads from SCC A to SCC B != A then
    # B completes first and gets the smaller number.
    index = [-1] * size
    low = [0] * size
    comp = [-1] * size
    on_stack = [False] * size
    stack: list[int] = []
    counter = 0
    comp_count = 0
    for root in range(size):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work.pop()
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for i in range(pi, len(succ[v])):
                w = succ[v][i]
                if index[w] == -1:
                    work.append((v, i + 1))
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = comp_count
                    if w == v:
                        break
                comp_count += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])

    values = []
    for var in range(inst.var_count):
        pos, neg = comp[2 * var], comp[2 * var + 1]
        if pos == neg:
            return None
        # A literal in an earlier-completed (sink-ward) SCC is safe to set true.
        values.append(pos < neg)

    assert evaluate(inst, values), "SCC assignment failed clause re-check"
    return values


def evaluate(inst: TwoSatInstance, values: list[bool]) -> bool:
    """True iff every clause has a true literal under ``values``."""
    for (a, pa), (b, pb) in inst.clauses:
        if values[a] == pa or values[b] == pb:
            continue
        return False
    return True


def to_dimacs(inst: TwoSatInstance) -> str:
    """Debug dump in DIMACS CNF style (1-based, negative = negated)."""
    lines = [f"p cnf {inst.var_count} {len(inst.clauses)}"]
    for (a, pa), (b, pb) in inst.clauses:
        la = (a + 1) if pa else -(a + 1)
        lb = (b + 1) if pb else -(b + 1)
        lines.append(f"{la} {lb} 0")
    return "\n".join(lines) + "\n"
