"""Program transformation: head abstraction, dual rules and the NMR check."""

from __future__ import annotations

from dataclasses import dataclass, field

from .analysis import build_call_graph, detect_olon_rules
from .syntax import (
    ISNOT,
    Builtin,
    Clause,
    Forall,
    Literal,
    Program,
    format_clause,
    goal_vars,
    make_clause,
    map_goal,
)
from .terms import Var, substitute

NEGATED_OP = {
    "=": "\\=",
    "\\=": "=",
    "<": ">=",
    ">=": "<",
    ">": "=<",
    "=<": ">",
    "=:=": "=\\=",
    "=\\=": "=:=",
    "is": ISNOT,
}

NMR_CHECK = "_nmr_check"


@dataclass
class TransformedProgram:
    originals: Program
    duals: Program
    checks: Program
    nmr_check: Clause
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        self.index = {}
        for prog in (self.originals, self.duals, self.checks):
            for c in prog.clauses:
                if c.head is not None:
                    self.index.setdefault(c.head.key, []).append(c)

    def clauses_for(self, lit: Literal) -> list:
        found = self.index.get(lit.key)
        if found is not None:
            return found
        if lit.naf and (False, lit.pred) not in self.index:
            # a predicate the program never mentions is false everywhere
            V = tuple(Var() for _ in lit.args)
            found = self.index[lit.key] = [make_clause(Literal(lit.name, V, True, lit.classical), [])]
            return found
        return []

    def dump(self) -> str:
        lines = []
        for title, prog in (("originals", self.originals), ("duals", self.duals), ("checks", self.checks)):
            lines.append(f"% {title}")
            lines.extend(format_clause(c) for c in prog.clauses)
        lines.append("% nmr check")
        if self.nmr_check.body:
            lines.append(format_clause(self.nmr_check))
        else:
            lines.append(f"{NMR_CHECK}.")
        return "\n".join(lines) + "\n"


def abstract_head(c: Clause) -> Clause:
    """Make head arguments distinct fresh variables, moving the rest into `=` goals."""
    if c.head is None:
        return c
    seen: list = []
    args = []
    pre = []
    for a in c.head.args:
        if type(a) is Var and not any(a is v for v in seen):
            seen.append(a)
            args.append(a)
            continue
        nv = Var()
        args.append(nv)
        if type(a) is Var:
            pre.append(Builtin("=", a, nv))
        else:
            pre.append(Builtin("=", nv, a))
    if not pre:
        return c
    return make_clause(c.head.with_args(args), pre + list(c.body), c.line, c.col)


def negate(goal):
    if type(goal) is Literal:
        return goal.negated()
    if type(goal) is Builtin:
        return Builtin(NEGATED_OP[goal.op], goal.lhs, goal.rhs)
    raise ValueError("foralls are never negated")


class _Names:
    def __init__(self, taken):
        self.used = set(taken)

    def fresh(self, base: str) -> str:
        name = base
        k = 2
        while name in self.used:
            name = f"{base}_{k}"
            k += 1
        self.used.add(name)
        return name


def _stem(pred) -> str:
    name, _arity = pred
    return ("c_" + name[1:]) if name.startswith("-") else name


def _wrap_forall(vars_, goal):
    for v in reversed(vars_):
        goal = Forall(v, goal)
    return goal


def _dual_bodies(body: list, has_vars: bool) -> list:
    out = []
    for t in range(len(body)):
        prefix = list(body[:t]) if has_vars else []
        out.append(prefix + [negate(body[t])])
    return out


def _dualize(head: Literal, parts: list, names: _Names, stem: str, line=0, col=0) -> list:
    """Dual clauses for `head` given the clause parts [(head_vars, body), ...].

    head's arguments are fresh distinct variables V; each part's head
    variables are renamed onto V.
    """
    V = list(head.args)
    out = []
    if not parts:
        return [make_clause(head, [], line, col)]

    def renamed(part):
        hv, body = part
        mapping = {a: v for a, v in zip(hv, V)}
        body = [map_goal(g, lambda t: substitute(t, mapping)) for g in body]
        bvars = []
        for g in body:
            goal_vars(g, bvars)
        bvars = [b for b in bvars if not any(b is v for v in V)]
        has_vars = bool(V) or bool(bvars)
        return body, bvars, has_vars

    if len(parts) == 1:
        body, bvars, has_vars = renamed(parts[0])
        if not bvars:
            for db in _dual_bodies(body, has_vars):
                out.append(make_clause(head, db, line, col))
            return out
        hname = names.fresh(f"_{stem}_1")
        helper = Literal(hname, tuple(V + bvars))
        out.append(make_clause(head, [_wrap_forall(bvars, helper)], line, col))
        for db in _dual_bodies(body, has_vars):
            out.append(make_clause(helper, db, line, col))
        return out

    calls = []
    helpers = []
    for i, part in enumerate(parts, 1):
        body, bvars, has_vars = renamed(part)
        hname = names.fresh(f"_{stem}_{i}")
        helper = Literal(hname, tuple(V + bvars))
        calls.append(_wrap_forall(bvars, helper) if bvars else helper)
        for db in _dual_bodies(body, has_vars):
            helpers.append(make_clause(helper, db, line, col))
    out.append(make_clause(head, calls, line, col))
    return out + helpers


def _all_preds(p: Program) -> list:
    seen = {}
    for c in p.clauses:
        if c.head is not None:
            seen.setdefault(c.head.pred, c.head)
        for g in c.body:
            if type(g) is Literal:
                seen.setdefault(g.pred, g)
    return list(seen.items())


def _taken_names(p: Program) -> set:
    return {pred[0] for pred, _ in _all_preds(p)}


def generate_duals(p: Program, names: _Names | None = None) -> Program:
    names = names or _Names(_taken_names(p))
    out = []
    for pred, sample in _all_preds(p):
        V = tuple(Var() for _ in range(pred[1]))
        head = Literal(sample.name, V, naf=True, classical=sample.classical)
        clauses = p.by_pred.get(pred, [])
        parts = [(list(c.head.args), list(c.body)) for c in clauses]
        loc = (clauses[0].line, clauses[0].col) if clauses else (0, 0)
        out.extend(_dualize(head, parts, names, "n" + _stem(pred), *loc))
    return Program(out)


def classical_constraints(p: Program) -> list:
    """Headless clauses forbidding p(X..) together with -p(X..)."""
    preds = set(p.by_pred)
    out = []
    for name, arity in sorted(preds):
        if name.startswith("-") or ("-" + name, arity) not in preds:
            continue
        V = tuple(Var() for _ in range(arity))
        out.append(make_clause(None, [Literal(name, V), Literal(name, V, classical=True)]))
    return out


def generate_nmr_check(p: Program, rc: dict, names: _Names | None = None, extra: list = ()):
    """Return (nmr_check clause, program of sub-check clauses)."""
    names = names or _Names(_taken_names(p))
    calls = []
    checks = []
    olon = [c for cid, c in enumerate(p.clauses) if rc[cid].olon] + list(extra)
    for k, c in enumerate(olon, 1):
        body = list(c.body)
        if c.head is not None:
            neg = c.head.negated()
            if not any(type(g) is Literal and g == neg for g in body):
                body.append(neg)
            V = list(c.head.args)
            stem = f"chk_{_stem(c.head.pred)}_{k}"
        else:
            V = []
            stem = f"chk_{k}"
        cname = names.fresh("_" + stem)
        fresh = [Var() for _ in V]
        head = Literal(cname, tuple(fresh))
        checks.extend(_dualize(head, [(V, body)], names, stem, c.line, c.col))
        calls.append(_wrap_forall(fresh, head))
    nmr = make_clause(Literal(NMR_CHECK, ()), calls)
    return nmr, Program(checks)


def transform(p: Program) -> TransformedProgram:
    abstracted = Program([abstract_head(c) for c in p.clauses], p.queries)
    names = _Names(_taken_names(abstracted))
    rc = detect_olon_rules(build_call_graph(abstracted), abstracted)
    duals = generate_duals(abstracted, names)
    nmr, checks = generate_nmr_check(abstracted, rc, names, classical_constraints(abstracted))
    return TransformedProgram(abstracted, duals, checks, nmr)
