"""Rendering of partial models and answer bindings."""

from __future__ import annotations

from .syntax import format_goal
from .terms import Compound, Var, term_str


def _vars_in(t, out):
    if type(t) is Var:
        out.append(t)
    elif type(t) is Compound and not t.ground:
        for a in t.args:
            _vars_in(a, out)


class _Namer:
    def __init__(self, pm, canonical: bool):
        self.pm = pm
        self.canonical = canonical
        self.names: dict = {}
        counts: dict = {}
        occurrences: list = []
        for lit in pm.literals:
            for a in lit.args:
                _vars_in(a, occurrences)
        for _, t in pm.bindings:
            _vars_in(t, occurrences)
        for lst in pm.constraints.values():
            for x in lst:
                _vars_in(x, occurrences)
        for v in occurrences:
            counts[v] = counts.get(v, 0) + 1
        self.counts = counts
        self.query_names = {name for name, _ in pm.bindings}

    def anonymous(self, v) -> bool:
        return (
            self.counts.get(v, 0) <= 1
            and not self.pm.constraints.get(v)
            and v not in self.pm.loopvars
            and (v.name is None or v.name == "_" or v.name not in self.query_names)
        )

    def __call__(self, v) -> str:
        if self.anonymous(v):
            return "_"
        name = self.names.get(v)
        if name is None:
            if self.canonical:
                name = f"V{len(self.names) + 1}"
            elif v.name and v.name != "_" and v.name in self.query_names:
                name = v.name
            else:
                name = f"Var{v.id}"
            self.names[v] = name
        return ("?" + name) if v in self.pm.loopvars else name


def _constraint_text(vs, pm, namer) -> str:
    parts = []
    for v in vs:
        for x in pm.constraints.get(v, ()):
            parts.append(f"{namer(v)} \\= {term_str(x, namer, 699)}")
    return " ( " + ", ".join(parts) + " )" if parts else ""


def _unique(vs):
    out = []
    for v in vs:
        if not any(v is w for w in out):
            out.append(v)
    return out


def format_literal(lit, pm, namer) -> str:
    vs: list = []
    for a in lit.args:
        _vars_in(a, vs)
    return format_goal(lit, namer) + _constraint_text(_unique(vs), pm, namer)


def model_literals(pm, canonical=False) -> list:
    namer = _Namer(pm, canonical)
    # sort on a variable-blind rendering so names can follow the sorted order
    keyed = []
    for lit in pm.literals:
        sort_key = (1 if lit.naf else 0, format_goal(lit, lambda v: "_"))
        keyed.append((sort_key, lit))
    keyed.sort(key=lambda kv: kv[0])
    out = []
    seen = set()
    for _, lit in keyed:
        s = format_literal(lit, pm, namer)
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out, namer


def format_bindings(pm, namer=None) -> list:
    namer = namer or _Namer(pm, False)
    lines = []
    for name, t in pm.bindings:
        if type(t) is Var and (t.name == name):
            cons = pm.constraints.get(t, ())
            if cons:
                lines.append(", ".join(f"{namer(t)} \\= {term_str(x, namer, 699)}" for x in cons))
            continue
        vs: list = []
        _vars_in(t, vs)
        lines.append(f"{name} = {term_str(t, namer)}" + _constraint_text(_unique(vs), pm, namer))
    return lines


def format_model(pm, canonical: bool = False, bindings: bool = True) -> str:
    lits, namer = model_literals(pm, canonical)
    text = "{ " + ", ".join(lits) + " }" if lits else "{ }"
    if bindings:
        b = format_bindings(pm, namer)
        if b:
            text += "\n" + "\n".join(b)
    return text
