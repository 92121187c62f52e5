"""Binding store with constructive unification and disunification.

Every mutation is trailed so the solver can undo to an earlier mark.
An unbound variable may carry a list of prohibited values.
"""

from __future__ import annotations

from .errors import IllegalDisunification, SaspError
from .terms import Compound, Var

_MISSING = object()


class Checkpoint:
    __slots__ = ("depth", "serial")

    def __init__(self, depth, serial):
        self.depth = depth
        self.serial = serial


class BindingStore:
    __slots__ = ("bound", "prohibited", "loopvars", "trail", "_live", "_serial")

    def __init__(self):
        self.bound: dict = {}
        self.prohibited: dict = {}
        self.loopvars: dict = {}
        self.trail: list = []
        self._live: list = []
        self._serial = 0

    # ------------------------------------------------------------ trail

    def mark(self) -> int:
        return len(self.trail)

    def undo(self, mark: int) -> None:
        trail = self.trail
        while len(trail) > mark:
            obj, key, old = trail.pop()
            if type(obj) is list:
                obj.pop()
            elif old is _MISSING:
                del obj[key]
            else:
                obj[key] = old

    def set(self, table: dict, key, value) -> None:
        self.trail.append((table, key, table.get(key, _MISSING)))
        table[key] = value

    def push(self, lst: list, item) -> None:
        lst.append(item)
        self.trail.append((lst, None, None))

    def checkpoint(self) -> Checkpoint:
        self._serial += 1
        cp = Checkpoint(len(self.trail), self._serial)
        self._live.append(cp)
        return cp

    def restore(self, cp: Checkpoint) -> None:
        if not any(c is cp for c in self._live) or cp.depth > len(self.trail):
            raise SaspError("restore to an invalidated checkpoint")
        while self._live and self._live[-1] is not cp:
            self._live.pop()
        self.undo(cp.depth)

    # ------------------------------------------------------------ access

    def deref(self, t):
        bound = self.bound
        while type(t) is Var:
            b = bound.get(t)
            if b is None:
                return t
            t = b
        return t

    def resolve(self, t):
        """Fully dereference a term."""
        t = self.deref(t)
        if type(t) is Compound and not t.ground:
            return Compound(t.functor, tuple(self.resolve(a) for a in t.args))
        return t

    def get_prohibited(self, v) -> tuple:
        return self.prohibited.get(self.deref(v), ())

    def is_loop(self, v) -> bool:
        return self.deref(v) in self.loopvars

    def mark_loop(self, v) -> None:
        v = self.deref(v)
        if type(v) is Var and v not in self.loopvars:
            self.set(self.loopvars, v, True)

    def clear_loop(self, v) -> None:
        v = self.deref(v)
        if v in self.loopvars:
            self.trail.append((self.loopvars, v, True))
            del self.loopvars[v]

    def key(self, t):
        """A hashable structural key of the resolved term (variables by identity)."""
        t = self.deref(t)
        tt = type(t)
        if tt is Var:
            return ("$v", t.id)
        if tt is Compound:
            if t.ground:
                return t
            return (t.functor,) + tuple(self.key(a) for a in t.args)
        return t

    def term_vars(self, t, out=None) -> list:
        if out is None:
            out = []
        t = self.deref(t)
        if type(t) is Var:
            if not any(t is v for v in out):
                out.append(t)
        elif type(t) is Compound and not t.ground:
            for a in t.args:
                self.term_vars(a, out)
        return out

    def occurs(self, v, t) -> bool:
        t = self.deref(t)
        if t is v:
            return True
        if type(t) is Compound and not t.ground:
            return any(self.occurs(v, a) for a in t.args)
        return False

    # ------------------------------------------------------------ constraints

    def constrain(self, v, value) -> bool:
        """Add value to v's prohibited list. v must be an unbound variable."""
        lst = self.prohibited.get(v, ())
        k = self.key(value)
        for x in lst:
            if self.key(x) == k:
                return True
        self.set(self.prohibited, v, lst + (value,))
        return True

    def _value_allowed(self, value, banned) -> bool:
        """Check that value differs from banned, constraining if that is decidable."""
        pairs = []
        stack = [(value, banned)]
        deref = self.deref
        while stack:
            a, b = stack.pop()
            a = deref(a)
            b = deref(b)
            if a is b:
                continue
            ta, tb = type(a), type(b)
            if ta is Var or tb is Var:
                pairs.append((a, b))
                continue
            if ta is Compound and tb is Compound:
                if a.functor != b.functor or len(a.args) != len(b.args):
                    return True
                stack.extend(zip(a.args, b.args))
            elif a != b:
                return True
        if not pairs:
            return False
        if not self.unifiable(value, banned):
            return True
        if len(pairs) == 1:
            a, b = pairs[0]
            if type(a) is Var and type(b) is Var:
                raise IllegalDisunification(
                    f"cannot disunify constrained variables {a.display()} and {b.display()}"
                )
            var, val = (a, b) if type(a) is Var else (b, a)
            if self.occurs(var, val):
                return True
            return self.constrain(var, val)
        return False

    # ------------------------------------------------------------ unification

    def unify(self, a, b) -> bool:
        """Constructive unification with occurs check. On failure nothing changes."""
        m = len(self.trail)
        if self._unify(a, b):
            return True
        self.undo(m)
        return False

    def unifiable(self, a, b) -> bool:
        m = len(self.trail)
        ok = self._unify(a, b)
        self.undo(m)
        return ok

    def _unify(self, a, b) -> bool:
        stack = [(a, b)]
        bound = self.bound
        prohibited = self.prohibited
        while stack:
            a, b = stack.pop()
            while type(a) is Var:
                x = bound.get(a)
                if x is None:
                    break
                a = x
            while type(b) is Var:
                x = bound.get(b)
                if x is None:
                    break
                b = x
            if a is b:
                continue
            ta, tb = type(a), type(b)
            if ta is Var:
                if tb is Var:
                    la = prohibited.get(a, ())
                    if la:
                        lb = prohibited.get(b, ())
                        merged = lb
                        for x in la:
                            k = self.key(x)
                            if not any(self.key(y) == k for y in merged):
                                merged = merged + (x,)
                        if merged is not lb:
                            self.set(prohibited, b, merged)
                    if a in self.loopvars:
                        self.mark_loop(b)
                    self.set(bound, a, b)
                    continue
                if not self._bind_value(a, b):
                    return False
                continue
            if tb is Var:
                if not self._bind_value(b, a):
                    return False
                continue
            if ta is Compound:
                if tb is not Compound or a.functor != b.functor or len(a.args) != len(b.args):
                    return False
                if a.ground and b.ground:
                    if a != b:
                        return False
                    continue
                stack.extend(zip(a.args, b.args))
            elif a != b:
                return False
        return True

    def _bind_value(self, v, value) -> bool:
        if type(value) is Compound and not value.ground and self.occurs(v, value):
            return False
        for banned in self.prohibited.get(v, ()):
            if not self._value_allowed(value, banned):
                return False
        self.set(self.bound, v, value)
        return True

    # ------------------------------------------------------------ disunification

    def disunify(self, a, b):
        """Generator over the alternative ways of making a and b differ.

        Each yield leaves the store in a state satisfying a != b. The caller
        must undo to its own mark before resuming.
        """
        a = self.deref(a)
        b = self.deref(b)
        if a is b:
            return
        ta, tb = type(a), type(b)
        if ta is Var and tb is Var:
            raise IllegalDisunification(
                f"cannot disunify constrained variables {a.display()} and {b.display()}"
            )
        if ta is Var or tb is Var:
            var, val = (a, b) if ta is Var else (b, a)
            if not self.occurs(var, val):
                self.constrain(var, val)
            yield
            return
        if not self.unifiable(a, b):
            yield
            return
        if ta is Compound:
            for x, y in zip(a.args, b.args):
                yield from self.disunify(x, y)

    # ------------------------------------------------------------ exact match

    def is_exact_match(self, a, b) -> bool:
        """True when a and b unify without binding or narrowing any variable."""
        stack = [(a, b)]
        deref = self.deref
        while stack:
            a, b = stack.pop()
            a = deref(a)
            b = deref(b)
            if a is b:
                continue
            ta, tb = type(a), type(b)
            if ta is Var or tb is Var:
                if ta is not tb:
                    return False
                ka = {self.key(x) for x in self.prohibited.get(a, ())}
                kb = {self.key(x) for x in self.prohibited.get(b, ())}
                if ka != kb:
                    return False
                continue
            if ta is Compound:
                if tb is not Compound or a.functor != b.functor or len(a.args) != len(b.args):
                    return False
                stack.extend(zip(a.args, b.args))
            elif a != b:
                return False
        return True

    def args_exact(self, xs, ys) -> bool:
        if len(xs) != len(ys):
            return False
        return all(self.is_exact_match(x, y) for x, y in zip(xs, ys))

    def args_unifiable(self, xs, ys) -> bool:
        m = len(self.trail)
        ok = True
        for x, y in zip(xs, ys):
            if not self._unify(x, y):
                ok = False
                break
        self.undo(m)
        return ok

    def unify_args(self, xs, ys) -> bool:
        m = len(self.trail)
        for x, y in zip(xs, ys):
            if not self._unify(x, y):
                self.undo(m)
                return False
        return True
