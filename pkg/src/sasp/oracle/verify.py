"""Conformance of goal-directed answers against the ground semantics."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..syntax import Builtin, Literal, Program, goal_vars
from ..terms import Compound, Var
from .ground import FALSE, GroundProgram, atom_key, classical_closure, eval_builtin, ground, make_universe
from .stable import enumerate_stable_models


@dataclass
class Verdict:
    ok: bool
    witness: frozenset | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _vars_of(t, out):
    if type(t) is Var:
        if not any(t is v for v in out):
            out.append(t)
    elif type(t) is Compound and not t.ground:
        for a in t.args:
            _vars_of(a, out)


def _replace(t, mapping):
    if type(t) is Var:
        return mapping.get(t, t)
    if type(t) is Compound and not t.ground:
        return Compound(t.functor, tuple(_replace(a, mapping) for a in t.args))
    return t


def _admissible(v, pm, universe, mapping):
    banned = [_replace(x, mapping) for x in pm.prohibited(v)]
    return [u for u in universe if u not in banned]


def _ground_literals(lits, pm, universe, fixed):
    """Every instance of lits over the universe, loop variables held at fixed values."""
    out = []
    for lit in lits:
        vs: list = []
        for a in lit.args:
            _vars_of(a, vs)
        free = [v for v in vs if v not in fixed]
        for values in itertools.product(*[_admissible(v, pm, universe, fixed) for v in free]):
            mapping = dict(fixed)
            mapping.update(zip(free, values))
            ok = all(
                mapping[v] not in [_replace(x, mapping) for x in pm.prohibited(v)] for v in free
            )
            if ok:
                out.append((lit.naf, atom_key(lit, [_replace(a, mapping) for a in lit.args])))
    return out


def _with_requirements(gp: GroundProgram, required) -> GroundProgram | None:
    out = gp.copy()
    for naf, key in required:
        i = out.index.get(key)
        if i is None:
            if not naf:
                return None
            continue
        if naf:
            out.add_rule(FALSE, (i,), ())
        else:
            out.add_rule(FALSE, (), (i,))
    return out


def prepare(program: Program, universe=None, extra: int = 1) -> tuple:
    if universe is None:
        universe = make_universe(program, extra)
    gp = classical_closure(ground(program, universe))
    return gp, list(universe)


def verify_partial_model(program: Program, pm, universe=None, extra: int = 1, bound: int = 20,
                         prepared=None) -> Verdict:
    """Is there a stable model containing every grounding of the partial model?"""
    gp, universe = prepared or prepare(program, universe, extra)
    lits = [lit for lit in pm.literals if not lit.name.startswith("_")]
    loops: list = []
    for lit in lits:
        for a in lit.args:
            _vars_of(a, loops)
    loops = [v for v in loops if pm.is_loop(v)]
    choices = [_admissible(v, pm, universe, {}) for v in loops]
    for values in itertools.product(*choices):
        fixed = dict(zip(loops, values))
        required = _ground_literals(lits, pm, universe, fixed)
        g2 = _with_requirements(gp, required)
        if g2 is None:
            continue
        models = enumerate_stable_models(g2, bound)
        if len(models):
            return Verdict(True, models.models[0])
    return Verdict(False, None, "no stable model contains the grounded partial model")


def oracle_query(program: Program, goals: list, universe=None, extra: int = 1, bound: int = 20,
                 prepared=None) -> list:
    """Ground answers to a query: a list of (substitution, stable model)."""
    gp, universe = prepared or prepare(program, universe, extra)
    models = enumerate_stable_models(gp, bound)
    qvars: list = []
    for g in goals:
        goal_vars(g, qvars)
    answers = []
    for values in itertools.product(universe, repeat=len(qvars)):
        mapping = dict(zip(qvars, values))
        for m in models:
            if _holds(goals, mapping, gp, m):
                answers.append((mapping, m))
                break
    return answers


def _holds(goals, mapping, gp, model) -> bool:
    for g in goals:
        if type(g) is Literal:
            i = gp.index.get(atom_key(g, [_replace(a, mapping) for a in g.args]))
            inside = i is not None and i in model
            if inside == g.naf:
                return False
        elif type(g) is Builtin:
            b = Builtin(g.op, _replace(g.lhs, mapping), _replace(g.rhs, mapping))
            if not eval_builtin(b, ()):
                return False
    return True


def literal_in_some_model(gp: GroundProgram, key, naf: bool, bound: int = 20) -> bool:
    g2 = _with_requirements(gp, [(naf, key)])
    if g2 is None:
        return False
    return len(enumerate_stable_models(g2, bound)) > 0
