"""Goal-directed execution of transformed programs.

The engine is an explicit continuation machine. A continuation is a linked
list of tasks; choice points pair a trail mark with a generator that yields
the continuation of each remaining alternative. Resuming a choice point
first undoes the store to its mark.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from fractions import Fraction

from .constraints import BindingStore
from .errors import DepthLimitExceeded, DivisionByZero, NonGroundArithmetic, SaspError
from .syntax import ISNOT, Builtin, Forall, Literal, format_goal, query_variables, rename_clause
from .terms import Atom, Compound, Num, Var, term_str
from .transform import TransformedProgram

CALL, EXIT, FORALL_CHECK, FORALL_DONE, STACK, FINAL, FILTER, EXCLUDE, ADD = range(9)


@dataclass
class SolverConfig:
    max_models: int | None = None
    depth_limit: int | None = None
    dedup: bool = True
    show_internal: bool = False
    nmr: bool = True


class Frame:
    __slots__ = ("lit", "parent", "depth")

    def __init__(self, lit, parent, depth):
        self.lit = lit
        self.parent = parent
        self.depth = depth


@dataclass
class PartialModel:
    """A snapshot of one answer: the CHS literals plus query bindings."""

    literals: list
    bindings: list
    constraints: dict = field(default_factory=dict)
    loopvars: set = field(default_factory=set)

    def prohibited(self, v) -> tuple:
        return self.constraints.get(v, ())

    def is_loop(self, v) -> bool:
        return v in self.loopvars

    def canonical(self) -> str:
        from .format import format_model

        return format_model(self, canonical=True)


# ------------------------------------------------------------------ arithmetic

def _div(a, b):
    if b == 0:
        raise DivisionByZero("division by zero")
    return Fraction(a) / Fraction(b)


def _intdiv(a, b):
    if b == 0:
        raise DivisionByZero("division by zero")
    return a // b


def _mod(a, b):
    if b == 0:
        raise DivisionByZero("division by zero")
    return a % b


BINARY = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
    "/": _div,
    "//": _intdiv,
    "mod": _mod,
    "min": min,
    "max": max,
}
UNARY = {"-": operator.neg, "abs": abs, "+": lambda x: x}

COMPARE = {
    "<": operator.lt,
    ">": operator.gt,
    ">=": operator.ge,
    "=<": operator.le,
    "=:=": operator.eq,
    "=\\=": operator.ne,
}


def eval_arith(t, store: BindingStore):
    t = store.deref(t)
    tt = type(t)
    if tt is Num:
        return t.value
    if tt is Var:
        raise NonGroundArithmetic(f"arithmetic operand {t.display()} is not bound to a number")
    if tt is Compound:
        if len(t.args) == 2 and t.functor in BINARY:
            v = BINARY[t.functor](eval_arith(t.args[0], store), eval_arith(t.args[1], store))
        elif len(t.args) == 1 and t.functor in UNARY:
            v = UNARY[t.functor](eval_arith(t.args[0], store))
        else:
            raise SaspError(f"unknown arithmetic function {t.functor}/{len(t.args)}")
        if isinstance(v, Fraction) and v.denominator == 1:
            v = v.numerator
        return v
    raise SaspError(f"type error: {term_str(t)} is not a number")


def compare_arith(op, a, b, store) -> bool:
    return COMPARE[op](eval_arith(a, store), eval_arith(b, store))


# ------------------------------------------------------------------ engine

_FAIL = object()


class Engine:
    def __init__(self, tp: TransformedProgram, cfg: SolverConfig | None = None):
        self.tp = tp
        self.cfg = cfg or SolverConfig()
        self.store = BindingStore()
        self.chs: dict = {}
        self.chs_order: list = []
        self.steps = 0
        # open coinductive hypotheses that a positive proof rests on
        self.frame_deps: dict = {}
        self.entry_deps: dict = {}

    # -------------------------------------------------------------- CHS

    def _chs_add(self, lit: Literal) -> None:
        lst = self.chs.get(lit.key)
        if lst is None:
            lst = self.chs[lit.key] = []
        self.store.push(lst, lit)
        self.store.push(self.chs_order, lit)

    def _opposites(self, g: Literal):
        """CHS entry lists whose members contradict instances of g."""
        out = []
        lst = self.chs.get((not g.naf, g.pred))
        if lst:
            out.append(lst)
        if not g.naf:
            name, arity = g.pred
            comp = (name[1:] if name.startswith("-") else "-" + name, arity)
            lst = self.chs.get((False, comp))
            if lst:
                out.append(lst)
        return out

    def check_chs(self, g: Literal):
        """Return 'fail', the matching entry, or the list of conflicting entries."""
        store = self.store
        args = g.args
        opp = self._opposites(g)
        for lst in opp:
            for e in lst:
                if store.args_exact(args, e.args):
                    return "fail"
        same = self.chs.get(g.key)
        if same:
            for e in same:
                if store.args_exact(args, e.args):
                    return e
        conflicts = []
        for lst in opp:
            for e in lst:
                if store.args_unifiable(args, e.args):
                    conflicts.append(e)
        return conflicts

    def _filter(self, g: Literal, conflicts: list, cont):
        """Alternatives constraining g so that no conflicting entry unifies with it.

        Alternative i excludes every conflicting entry through argument i.
        """
        for i, c in enumerate(g.args):
            yield ((EXCLUDE, c, tuple(e.args[i] for e in conflicts), 0), cont)

    def _exclude(self, c, entries, k, cont):
        nxt = ((EXCLUDE, c, entries, k + 1), cont)
        for _ in self._filter_disunify(c, entries[k]):
            yield nxt

    def filter_alternatives(self, g: Literal) -> list:
        """Argument bindings for each way the CHS filter lets g through, in order.

        The store is left as it was found.
        """
        store = self.store
        r = self.check_chs(g)
        if r == "fail":
            return []
        if type(r) is Literal or not r:
            return [tuple(store.resolve(a) for a in g.args)]
        mark = len(store.trail)
        cps = [(mark, self._filter(g, r, None))]
        out = []
        cont = _resume(store, cps)
        while cont is not _FAIL:
            while cont is not None and cont is not _FAIL:
                task, cont = cont
                res = self._step(task, cont)
                if res is _FAIL:
                    cont = _FAIL
                elif type(res) is tuple or res is None:
                    cont = res
                else:
                    cps.append((len(store.trail), res))
                    cont = _resume(store, cps)
                    if cont is _FAIL:
                        break
            if cont is None:
                out.append(tuple(store.resolve(a) for a in g.args))
            elif not cps:
                break
            cont = _resume(store, cps)
        store.undo(mark)
        return out

    def _filter_disunify(self, c, e):
        store = self.store
        c = store.deref(c)
        e = store.deref(e)
        if not store.unifiable(c, e):
            yield
            return
        tc, te = type(c), type(e)
        if te is Var:
            if tc is not Var and e in store.loopvars:
                store.constrain(e, c)
                yield
                return
            for banned in store.prohibited.get(e, ()):
                if store.unify(c, banned):
                    yield
            return
        if tc is Var:
            store.constrain(c, e)
            yield
            return
        if tc is Compound:
            for x, y in zip(c.args, e.args):
                yield from self._filter_disunify(x, y)

    # -------------------------------------------------------------- stack

    def check_call_stack(self, g: Literal, frame: Frame | None):
        """Return ('fail'|'succeed'|'expand', ancestor frame or alternative frames)."""
        store = self.store
        args = g.args
        pred = g.pred
        name, arity = pred
        comp = (name[1:] if name.startswith("-") else "-" + name, arity)
        seen_neg = False
        decided = None
        alts = []
        f = frame
        while f is not None:
            d = f.lit
            dpred = d.pred
            if dpred == pred:
                if d.naf != g.naf:
                    if store.args_exact(args, d.args):
                        return "fail", None
                elif decided is None:
                    if store.args_exact(args, d.args):
                        decided = ("succeed", f) if (g.naf or seen_neg) else ("fail", None)
                    elif (g.naf or seen_neg) and store.args_unifiable(args, d.args):
                        alts.append(f)
            elif dpred == comp and not g.naf and not d.naf:
                if store.args_exact(args, d.args):
                    return "fail", None
            if d.naf:
                seen_neg = True
            f = f.parent
        if decided is not None:
            return decided
        return "expand", alts

    def _mark_loop_vars(self, d: Literal) -> None:
        store = self.store
        out: list = []
        for a in d.args:
            store.term_vars(a, out)
        for v in out:
            store.mark_loop(v)

    def _depend(self, frame, extra) -> None:
        if frame is None or not extra:
            return
        cur = self.frame_deps.get(frame)
        if cur is not None:
            if extra <= cur:
                return
            extra = cur | extra
        self.store.set(self.frame_deps, frame, extra)

    def _hypothesis(self, g, frame, ancestor) -> None:
        self._mark_loop_vars(ancestor.lit)
        if not g.naf:
            self._depend(frame, frozenset((ancestor,)))

    def _coinductive_alts(self, g, frame, alts, cont):
        store = self.store
        for d in alts:
            if store.unify_args(g.args, d.lit.args):
                self._hypothesis(g, frame, d)
                yield cont
        yield from self.expand(g, frame, cont)

    def expand(self, g: Literal, frame, cont):
        store = self.store
        clauses = self.tp.clauses_for(g)
        helper = g.name.startswith("_")
        if helper:
            newframe = frame
            after = cont
            if self.cfg.show_internal:
                after = ((EXIT, g, frame, None), cont)
        else:
            depth = frame.depth + 1 if frame is not None else 1
            lim = self.cfg.depth_limit
            if lim is not None and depth > lim:
                raise DepthLimitExceeded(f"call depth exceeded {lim} at {format_goal(g)}")
            newframe = Frame(g, frame, depth)
            after = ((EXIT, g, frame, newframe), cont)
        gargs = g.args
        for c in clauses:
            head, body = rename_clause(c)
            if store.unify_args(head.args, gargs):
                k = after
                for b in reversed(body):
                    k = ((CALL, b, newframe), k)
                yield k

    # -------------------------------------------------------------- forall

    def _subst_goal(self, goal, v, value):
        store = self.store
        if type(goal) is Forall:
            inner = Var(goal.var.name)
            g2 = self._subst_goal(goal.goal, goal.var, inner)
            return Forall(inner, self._subst_goal(g2, v, value))

        def f(t):
            t = store.resolve(t)
            return _replace(t, v, value)

        if type(goal) is Literal:
            return Literal(goal.name, tuple(f(a) for a in goal.args), goal.naf, goal.classical)
        return Builtin(goal.op, f(goal.lhs), f(goal.rhs))

    def exec_forall_check(self, goal: Forall, frame, memo, cont):
        store = self.store
        v = store.deref(goal.var)
        if type(v) is not Var:
            return _FAIL
        if _occurs_elsewhere(store, v, goal.goal, goal.var):
            return _FAIL
        k = ((FORALL_DONE, goal, frame, memo), cont)
        for value in reversed(store.prohibited.get(v, ())):
            k = ((CALL, self._subst_goal(goal.goal, v, value), frame), k)
        return k

    def outcome_signature(self, goal, start: int):
        """Canonical key of what a finished goal left visible: its resolved
        arguments with constraints, plus the CHS entries added since start."""
        store = self.store
        names: dict = {}
        parts = []

        def canon(t):
            t = store.deref(t)
            tt = type(t)
            if tt is Var:
                n = names.get(t)
                if n is None:
                    n = names[t] = len(names)
                    cons = store.prohibited.get(t, ())
                    extra = tuple(sorted(repr(canon(x)) for x in cons))
                    parts.append((n, extra, t in store.loopvars))
                return ("$v", n)
            if tt is Compound:
                if t.ground:
                    return t
                return (t.functor,) + tuple(canon(a) for a in t.args)
            return t

        local = []
        while type(goal) is Forall:
            local.append(goal.var)
            goal = goal.goal
        head = ()
        if type(goal) is Literal:
            head = tuple(canon(a) for a in goal.args if not any(a is v for v in local))
        added = []
        for e in self.chs_order[start:]:
            if not e.name.startswith("_"):
                added.append((e.naf, e.pred, tuple(canon(a) for a in e.args)))
        return (head, tuple(added), tuple(parts))

    # -------------------------------------------------------------- builtins

    def _builtin(self, b: Builtin, cont):
        store = self.store
        op = b.op
        if op == "=":
            return cont if store.unify(b.lhs, b.rhs) else _FAIL
        if op == "\\=":
            return self._disunify_alts(b.lhs, b.rhs, cont)
        if op == "is":
            val = eval_arith(b.rhs, store)
            return cont if store.unify(b.lhs, Num(val)) else _FAIL
        if op == ISNOT:
            val = eval_arith(b.rhs, store)
            lhs = store.deref(b.lhs)
            if type(lhs) is Var:
                store.constrain(lhs, Num(val))
                return cont
            if type(lhs) is Num:
                return cont if lhs.value != val else _FAIL
            return cont
        return cont if compare_arith(op, b.lhs, b.rhs, store) else _FAIL

    def _disunify_alts(self, a, b, cont):
        for _ in self.store.disunify(a, b):
            yield cont

    # -------------------------------------------------------------- driver

    def _step(self, task, cont):
        """Run one task. Returns a continuation, _FAIL, or a generator of continuations."""
        op = task[0]
        if op == CALL:
            goal = task[1]
            tg = type(goal)
            if tg is Literal:
                if goal.name.startswith("_"):
                    return self.expand(goal, task[2], cont)
                r = self.check_chs(goal)
                if r == "fail":
                    return _FAIL
                if type(r) is Literal:
                    if not goal.naf:
                        self._depend(task[2], self.entry_deps.get(id(r)))
                    return cont
                nxt = ((STACK, goal, task[2]), cont)
                if not r:
                    return nxt
                return self._filter(goal, r, nxt)
            if tg is Builtin:
                return self._builtin(goal, cont)
            memo = (len(self.chs_order), set())
            return ((CALL, goal.goal, task[2]), ((FORALL_CHECK, goal, task[2], memo), cont))
        if op == STACK:
            g, frame = task[1], task[2]
            verdict, info = self.check_call_stack(g, frame)
            if verdict == "fail":
                return _FAIL
            if verdict == "succeed":
                self._hypothesis(g, frame, info)
                return cont
            if info:
                return self._coinductive_alts(g, frame, info, cont)
            return self.expand(g, frame, cont)
        if op == EXIT:
            return self._exit(task[1], task[2], task[3], cont)
        if op == FORALL_CHECK:
            return self.exec_forall_check(task[1], task[2], task[3], cont)
        if op == FORALL_DONE:
            goal = task[1]
            self.store.clear_loop(goal.var)
            start, seen = task[3]
            sig = self.outcome_signature(goal, start)
            if sig in seen:
                return _FAIL
            seen.add(sig)
            if self.cfg.show_internal and type(goal.goal) is Literal:
                inner = Var(goal.var.name)
                self._chs_add(self._subst_goal(goal.goal, self.store.deref(goal.var), inner))
            return cont
        if op == EXCLUDE:
            if task[3] == len(task[2]):
                return cont
            return self._exclude(task[1], task[2], task[3], cont)
        if op == ADD:
            self._chs_add(task[1])
            return cont
        if op == FINAL:
            return self._final(cont)
        raise SaspError(f"unknown task {op}")

    def _exit(self, g: Literal, parent, frame, cont):
        store = self.store
        if g.name.startswith("_"):
            self._chs_add(g)
            return cont
        if not g.naf:
            deps = self.frame_deps.get(frame)
            if deps:
                # a positive proof may not rest on its own hypothesis
                if frame in deps:
                    return _FAIL
                deps = frozenset(x for x in deps if x.depth < frame.depth)
                if deps:
                    self._depend(parent, deps)
                    self.store.set(self.entry_deps, id(g), deps)
        same = self.chs.get(g.key)
        if same:
            for e in same:
                if store.args_exact(g.args, e.args):
                    return cont
        r = self.check_chs(g)
        if r == "fail":
            return _FAIL
        if type(r) is Literal:
            return cont
        if not r:
            self._chs_add(g)
            return cont
        return self._filter(g, r, ((ADD, g), cont))

    def check_loop_variable_domains(self) -> bool:
        """Every loop variable still admits a value: the universe is infinite,
        so an unbound variable with a finite prohibited list always does."""
        for lst in self.chs.values():
            for e in lst:
                if self.check_chs_entry_conflict(e):
                    return False
        return True

    def check_chs_entry_conflict(self, e: Literal) -> bool:
        for lst in self._opposites(e):
            for x in lst:
                if self.store.args_exact(e.args, x.args):
                    return True
        return False

    def _final(self, cont):
        if not self.check_loop_variable_domains():
            return _FAIL
        self._pending = self.snapshot()
        return cont

    def snapshot(self) -> PartialModel:
        store = self.store
        lits = []
        for e in self.chs_order:
            if e.name.startswith("_") and not self.cfg.show_internal:
                continue
            lits.append(Literal(e.name, tuple(store.resolve(a) for a in e.args), e.naf, e.classical))
        bindings = [(v.name, store.resolve(v)) for v in self._qvars]
        vs: list = []
        for lit in lits:
            for a in lit.args:
                store.term_vars(a, vs)
        for _, t in bindings:
            store.term_vars(t, vs)
        constraints = {}
        seen = set()
        todo = list(vs)
        while todo:
            v = todo.pop()
            if v in seen:
                continue
            seen.add(v)
            lst = store.prohibited.get(v)
            if lst:
                res = tuple(store.resolve(x) for x in lst)
                constraints[v] = res
                for x in res:
                    todo.extend(store.term_vars(x))
        loops = {v for v in seen if v in store.loopvars}
        return PartialModel(lits, bindings, constraints, loops)

    def run(self, goals: list):
        """Generator of partial models for the query goals."""
        self._qvars = query_variables(goals)
        all_goals = list(goals)
        if self.cfg.nmr:
            all_goals += list(self.tp.nmr_check.body and rename_clause(self.tp.nmr_check)[1])
        cont = ((FINAL,), None)
        for g in reversed(all_goals):
            cont = ((CALL, g, None), cont)
        store = self.store
        cps: list = []
        self._pending = None
        seen_models = set()
        emitted = 0
        step = self._step
        while True:
            failed = False
            while cont is not None:
                task, cont = cont
                self.steps += 1
                r = step(task, cont)
                if r is _FAIL:
                    failed = True
                    break
                if type(r) is tuple or r is None:
                    cont = r
                    continue
                cps.append((len(store.trail), r))
                nxt = _resume(store, cps)
                if nxt is _FAIL:
                    return
                cont = nxt
            if not failed:
                pm = self._pending
                self._pending = None
                key = pm.canonical() if self.cfg.dedup else None
                if key is None or key not in seen_models:
                    if key is not None:
                        seen_models.add(key)
                    yield pm
                    emitted += 1
                    if self.cfg.max_models is not None and emitted >= self.cfg.max_models:
                        return
            cont = _resume(store, cps)
            if cont is _FAIL:
                return


def _resume(store, cps):
    while cps:
        m, gen = cps[-1]
        store.undo(m)
        nxt = next(gen, _FAIL)
        if nxt is _FAIL:
            cps.pop()
            continue
        return nxt
    return _FAIL


def _replace(t, v, value):
    if t is v:
        return value
    if type(t) is Compound and not t.ground:
        return Compound(t.functor, tuple(_replace(a, v, value) for a in t.args))
    return t


def _occurs_elsewhere(store, v, goal, var) -> bool:
    """Does v occur in goal other than at the positions holding var itself?"""
    if type(goal) is Forall:
        return _occurs_elsewhere(store, v, goal.goal, var)
    if type(goal) is not Literal:
        return False
    for a in goal.args:
        if a is var:
            continue
        if store.occurs(v, a):
            return True
    return False


def solve(tp: TransformedProgram, goals: list, cfg: SolverConfig | None = None):
    """Stream partial models for the query."""
    return Engine(tp, cfg).run(goals)


__all__ = ["Engine", "SolverConfig", "PartialModel", "solve", "eval_arith", "compare_arith", "Atom"]
