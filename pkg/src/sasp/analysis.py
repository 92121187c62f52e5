"""Call graph, odd-loop detection and static legality warnings."""

from __future__ import annotations

from dataclasses import dataclass, field

from .syntax import Builtin, Clause, Literal, Program, goal_vars
from .terms import Var


def pred_name(pred) -> str:
    return f"{pred[0]}/{pred[1]}"


@dataclass
class CallGraph:
    nodes: set = field(default_factory=set)
    # (from, to, weight, clause_id)
    edges: list = field(default_factory=list)

    def successors(self, node):
        return [(e[1], e[2]) for e in self.edges if e[0] == node]


@dataclass
class Classification:
    olon: bool
    ordinary: bool


@dataclass
class Diagnostic:
    severity: str
    message: str
    line: int = 0
    col: int = 0

    def __str__(self):
        return f"{self.severity}: {self.message} at {self.line}:{self.col}"


def build_call_graph(p: Program) -> CallGraph:
    g = CallGraph()
    for cid, c in enumerate(p.clauses):
        if c.head is not None:
            g.nodes.add(c.head.pred)
        for goal in c.body:
            if type(goal) is Literal:
                g.nodes.add(goal.pred)
                if c.head is not None:
                    g.edges.append((c.head.pred, goal.pred, 1 if goal.naf else 0, cid))
    return g


def _parity_reach(g: CallGraph) -> dict:
    """For each node, the set of (node, parity) states reachable from (node, 0)."""
    succ: dict = {n: [] for n in g.nodes}
    for a, b, w, _ in g.edges:
        succ[a].append((b, w))
    reach = {}
    for start in g.nodes:
        seen = {(start, 0)}
        todo = [(start, 0)]
        while todo:
            n, par = todo.pop()
            for m, w in succ[n]:
                s = (m, par ^ w)
                if s not in seen:
                    seen.add(s)
                    todo.append(s)
        reach[start] = seen
    return reach


def detect_olon_rules(g: CallGraph, p: Program) -> dict:
    """Map clause index to its classification."""
    reach = _parity_reach(g)
    on_odd: dict = {}
    for a, b, w, cid in g.edges:
        # the edge closes an odd cycle if b reaches a with parity 1 - w
        if (a, 1 - w) in reach[b]:
            on_odd[cid] = on_odd.get(cid, 0) + 1
    out = {}
    for cid, c in enumerate(p.clauses):
        if c.head is None:
            out[cid] = Classification(True, False)
            continue
        n_edges = sum(1 for goal in c.body if type(goal) is Literal)
        odd = on_odd.get(cid, 0)
        out[cid] = Classification(odd > 0, odd < n_edges or n_edges == 0)
    return out


def odd_cycle_witness(g: CallGraph, edge) -> list | None:
    """An explicit odd-weight cycle through the given edge, as a node list."""
    a, b, w, _ = edge
    succ: dict = {n: [] for n in g.nodes}
    for x, y, ww, _ in g.edges:
        succ[x].append((y, ww))
    target = (a, 1 - w)
    prev = {(b, 0): None}
    todo = [(b, 0)]
    while todo:
        s = todo.pop(0)
        if s == target:
            path = []
            while s is not None:
                path.append(s[0])
                s = prev[s]
            return [a] + path[::-1]
        n, par = s
        for m, ww in succ[n]:
            t = (m, par ^ ww)
            if t not in prev:
                prev[t] = s
                todo.append(t)
    return None


_ARITH = ("is", "<", ">", ">=", "=<", "=:=", "=\\=")


def check_legality(p: Program) -> list:
    diags: list = []
    for c in p.clauses:
        bound = set()
        if c.head is not None:
            bound.update(id(v) for v in goal_vars(c.head))
        for goal in c.body:
            if type(goal) is Builtin and goal.op in _ARITH:
                operands = [goal.rhs] if goal.op == "is" else [goal.lhs, goal.rhs]
                for t in operands:
                    for v in goal_vars(Builtin("=", t, t)):
                        if id(v) not in bound:
                            diags.append(Diagnostic(
                                "warning",
                                f"arithmetic operand {v.display()} may be unbound",
                                c.line, c.col))
                            bound.add(id(v))
                bound.update(id(v) for v in goal_vars(goal))
            elif type(goal) is Builtin and goal.op == "=":
                bound.update(id(v) for v in goal_vars(goal))
            elif type(goal) is Literal and not goal.naf:
                bound.update(id(v) for v in goal_vars(goal))

    for pred, clauses in p.by_pred.items():
        def recursive(c):
            return any(type(g) is Literal and not g.naf and g.pred == pred for g in c.body)

        if clauses and all(recursive(c) for c in clauses):
            for c in clauses:
                diags.append(Diagnostic(
                    "warning",
                    f"potential nontermination in {pred_name(pred)}, no base case and no unifying ancestor",
                    c.line, c.col))

    called_negatively = set()
    for c in p.clauses:
        for goal in c.body:
            if type(goal) is Literal and goal.naf:
                called_negatively.add(goal.pred)
    for pred in sorted(called_negatively, key=str):
        for c in p.by_pred.get(pred, ()):
            if _repeats_head_var(c.head):
                diags.append(Diagnostic(
                    "note",
                    f"dual of {pred_name(pred)} disunifies head arguments; "
                    "calling it with two unbound variables is a runtime error",
                    c.line, c.col))
                break
    return diags


def _repeats_head_var(head: Literal) -> bool:
    seen = []
    for a in head.args:
        if type(a) is Var:
            if any(a is v for v in seen):
                return True
            seen.append(a)
    return False
