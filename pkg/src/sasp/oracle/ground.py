"""Grounding of normal programs over a finite universe."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..errors import SaspError, UniverseTooLarge
from ..solver import BINARY, COMPARE, UNARY
from ..syntax import Builtin, Literal, Program
from ..terms import Atom, Compound, Num, Var

FALSE = -1
ARITH_FUNCTORS = set(BINARY) | set(UNARY) | {"abs", "min", "max"}


@dataclass
class GroundProgram:
    """Atoms are (pred, args) keys; rules are (head, pos, neg) over atom ids.

    A head of FALSE marks a constraint.
    """

    atoms: list = field(default_factory=list)
    index: dict = field(default_factory=dict)
    rules: list = field(default_factory=list)

    def atom_id(self, key) -> int:
        i = self.index.get(key)
        if i is None:
            i = self.index[key] = len(self.atoms)
            self.atoms.append(key)
        return i

    def add_rule(self, head, pos, neg) -> None:
        self.rules.append((head, tuple(pos), tuple(neg)))

    def atom_str(self, i) -> str:
        from ..syntax import format_goal

        (name, _arity), args = self.atoms[i]
        classical = name.startswith("-")
        return format_goal(Literal(name[1:] if classical else name, args, classical=classical))

    def copy(self) -> "GroundProgram":
        gp = GroundProgram(list(self.atoms), dict(self.index), list(self.rules))
        return gp


def atom_key(lit: Literal, args=None):
    return (lit.pred, tuple(args if args is not None else lit.args))


def program_constants(p: Program) -> list:
    out = []
    seen = set()

    def walk(t):
        tt = type(t)
        if tt is Compound:
            if t.functor in ARITH_FUNCTORS and len(t.args) in (1, 2):
                return
            for a in t.args:
                walk(a)
        elif tt in (Atom, Num):
            if t not in seen:
                seen.add(t)
                out.append(t)

    for c in p.clauses:
        goals = ([c.head] if c.head is not None else []) + list(c.body)
        for g in goals:
            if type(g) is Literal:
                for a in g.args:
                    walk(a)
            elif type(g) is Builtin and g.op in ("=", "\\="):
                walk(g.lhs)
                walk(g.rhs)
    return out


def fresh_constants(k: int, taken=()) -> list:
    names = {t.name for t in taken if type(t) is Atom}
    out = []
    i = 1
    while len(out) < k:
        name = f"_k{i}"
        if name not in names:
            out.append(Atom(name))
        i += 1
    return out


def make_universe(p: Program, extra: int = 1, given=None) -> list:
    base = list(given) if given is not None else program_constants(p)
    return base + fresh_constants(extra, base)


def _subst(t, values):
    tt = type(t)
    if tt is Var:
        return values[t.index]
    if tt is Compound and not t.ground:
        return Compound(t.functor, tuple(_subst(a, values) for a in t.args))
    return t


def _eval(t):
    tt = type(t)
    if tt is Num:
        return t.value
    if tt is Compound:
        if len(t.args) == 2 and t.functor in BINARY:
            return BINARY[t.functor](_eval(t.args[0]), _eval(t.args[1]))
        if len(t.args) == 1 and t.functor in UNARY:
            return UNARY[t.functor](_eval(t.args[0]))
    raise TypeError("not arithmetic")


def eval_builtin(b: Builtin, values) -> bool:
    lhs = _subst(b.lhs, values)
    rhs = _subst(b.rhs, values)
    if b.op == "=":
        return lhs == rhs
    if b.op == "\\=":
        return lhs != rhs
    try:
        if b.op == "is":
            return type(lhs) is Num and lhs.value == _eval(rhs)
        return COMPARE[b.op](_eval(lhs), _eval(rhs))
    except (TypeError, SaspError):
        return False


def ground(p: Program, universe, max_instances: int = 2_000_000) -> GroundProgram:
    """Instantiate every clause over the universe, evaluating builtins."""
    universe = list(universe)
    gp = GroundProgram()
    total = 0
    for c in p.clauses:
        total += len(universe) ** c.nvars
    if total > max_instances:
        raise UniverseTooLarge(f"grounding needs {total} clause instances (limit {max_instances})")
    for c in p.clauses:
        lits = [g for g in c.body if type(g) is Literal]
        builtins = [g for g in c.body if type(g) is Builtin]
        for values in itertools.product(universe, repeat=c.nvars):
            if not all(eval_builtin(b, values) for b in builtins):
                continue
            head = FALSE
            if c.head is not None:
                head = gp.atom_id(atom_key(c.head, [_subst(a, values) for a in c.head.args]))
            pos, neg = [], []
            for g in lits:
                i = gp.atom_id(atom_key(g, [_subst(a, values) for a in g.args]))
                (neg if g.naf else pos).append(i)
            gp.add_rule(head, pos, neg)
    return gp


def classical_closure(gp: GroundProgram) -> GroundProgram:
    """Add constraints forbidding an atom together with its classical complement."""
    out = gp.copy()
    for i, ((name, arity), args) in enumerate(gp.atoms):
        if name.startswith("-"):
            j = gp.index.get(((name[1:], arity), args))
            if j is not None:
                out.add_rule(FALSE, (i, j), ())
    return out
