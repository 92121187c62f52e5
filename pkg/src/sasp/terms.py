"""Term representation: variables, atoms, exact numbers and compounds."""

from __future__ import annotations

import itertools
from fractions import Fraction

_ids = itertools.count(1)


class Var:
    """A logic variable. Identity is the object itself."""

    __slots__ = ("name", "id", "index")

    def __init__(self, name: str | None = None, index: int = -1):
        self.name = name
        self.id = next(_ids)
        self.index = index

    def display(self) -> str:
        if self.name and self.name != "_":
            return self.name
        return f"Var{self.id}"

    def __repr__(self):
        return self.display()


class Atom:
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __eq__(self, other):
        return type(other) is Atom and other.name == self.name

    def __hash__(self):
        return hash(("a", self.name))

    def __repr__(self):
        return self.name


class Num:
    """An exact number: int or Fraction, normalized so integral values are int."""

    __slots__ = ("value",)

    def __init__(self, value):
        if isinstance(value, Fraction) and value.denominator == 1:
            value = value.numerator
        self.value = value

    def __eq__(self, other):
        return type(other) is Num and other.value == self.value

    def __hash__(self):
        return hash(("n", self.value))

    def __repr__(self):
        return format_number(self.value)


class Compound:
    __slots__ = ("functor", "args", "ground")

    def __init__(self, functor: str, args: tuple):
        self.functor = functor
        self.args = args
        g = True
        for a in args:
            t = type(a)
            if t is Var or (t is Compound and not a.ground):
                g = False
                break
        self.ground = g

    def __eq__(self, other):
        return (
            type(other) is Compound
            and other.functor == self.functor
            and other.args == self.args
        )

    def __hash__(self):
        return hash((self.functor, self.args))

    def __repr__(self):
        return term_str(self)


NIL = Atom("[]")
LIST_FUNCTOR = "."


def make_list(items, tail=NIL):
    out = tail
    for item in reversed(list(items)):
        out = Compound(LIST_FUNCTOR, (item, out))
    return out


def format_number(value) -> str:
    if isinstance(value, int):
        return str(value)
    num, den = value.numerator, value.denominator
    d = den
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{num}/{den}"
    places = max(twos, fives)
    scaled = abs(num) * (10**places) // den
    sign = "-" if num < 0 else ""
    digits = str(scaled).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def is_var(t) -> bool:
    return type(t) is Var


def term_vars(t, out=None) -> list:
    """Variables of t in first-occurrence order (no dereferencing)."""
    if out is None:
        out = []
    stack = [t]
    while stack:
        x = stack.pop()
        tx = type(x)
        if tx is Var:
            if not any(x is v for v in out):
                out.append(x)
        elif tx is Compound and not x.ground:
            stack.extend(reversed(x.args))
    return out


def substitute(t, mapping: dict):
    """Replace variables by mapping[var] (identity keyed)."""
    tt = type(t)
    if tt is Var:
        return mapping.get(t, t)
    if tt is Compound and not t.ground:
        return Compound(t.functor, tuple(substitute(a, mapping) for a in t.args))
    return t


INFIX = {"+": 500, "-": 500, "*": 400, "/": 400, "//": 400, "mod": 400}


def term_str(t, var_name=None, prec: int = 1200) -> str:
    """Render a term. var_name maps a Var to its printed name."""
    tt = type(t)
    if tt is Var:
        return var_name(t) if var_name else t.display()
    if tt is Num:
        return format_number(t.value)
    if tt is Atom:
        return t.name
    if t.functor == LIST_FUNCTOR and len(t.args) == 2:
        parts = []
        cur = t
        while type(cur) is Compound and cur.functor == LIST_FUNCTOR and len(cur.args) == 2:
            parts.append(term_str(cur.args[0], var_name, 999))
            cur = cur.args[1]
        if cur == NIL:
            return "[" + ",".join(parts) + "]"
        return "[" + ",".join(parts) + "|" + term_str(cur, var_name, 999) + "]"
    if len(t.args) == 2 and t.functor in INFIX:
        p = INFIX[t.functor]
        left = term_str(t.args[0], var_name, p)
        right = term_str(t.args[1], var_name, p - 1)
        s = f"{left} {t.functor} {right}"
        return f"({s})" if p > prec else s
    if len(t.args) == 1 and t.functor == "-":
        return "-" + term_str(t.args[0], var_name, 200)
    return t.functor + "(" + ",".join(term_str(a, var_name, 999) for a in t.args) + ")"
