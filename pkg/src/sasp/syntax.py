"""Literals, goals, clauses, and a parser/printer for the rule language."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError
from .terms import NIL, Atom, Compound, Num, Var, make_list, term_str

COMPARISONS = ("=", "\\=", "is", "<", ">", ">=", "=<", "=:=", "=\\=")
ISNOT = "_isnot"


class Literal:
    """A predicate call, possibly under default negation and/or classical negation."""

    __slots__ = ("naf", "classical", "name", "args", "pred")

    def __init__(self, name: str, args: tuple = (), naf: bool = False, classical: bool = False):
        self.naf = naf
        self.classical = classical
        self.name = name
        self.args = tuple(args)
        self.pred = (("-" + name) if classical else name, len(self.args))

    @property
    def key(self):
        return (self.naf, self.pred)

    @property
    def is_helper(self) -> bool:
        return self.name.startswith("_")

    def negated(self) -> "Literal":
        return Literal(self.name, self.args, not self.naf, self.classical)

    def with_args(self, args) -> "Literal":
        return Literal(self.name, tuple(args), self.naf, self.classical)

    def __eq__(self, other):
        return (
            type(other) is Literal
            and other.naf == self.naf
            and other.pred == self.pred
            and other.args == self.args
        )

    def __hash__(self):
        return hash((self.naf, self.pred, self.args))

    def __repr__(self):
        return format_goal(self)


class Builtin:
    __slots__ = ("op", "lhs", "rhs")

    def __init__(self, op: str, lhs, rhs):
        self.op = op
        self.lhs = lhs
        self.rhs = rhs

    def __eq__(self, other):
        return type(other) is Builtin and (other.op, other.lhs, other.rhs) == (self.op, self.lhs, self.rhs)

    def __hash__(self):
        return hash((self.op, self.lhs, self.rhs))

    def __repr__(self):
        return format_goal(self)


class Forall:
    __slots__ = ("var", "goal")

    def __init__(self, var: Var, goal):
        self.var = var
        self.goal = goal

    def __repr__(self):
        return format_goal(self)


@dataclass
class Clause:
    head: Literal | None
    body: tuple
    nvars: int = 0
    line: int = 0
    col: int = 0

    @property
    def location(self) -> str:
        return f"{self.line}:{self.col}"

    def __repr__(self):
        return format_clause(self)


@dataclass
class Program:
    clauses: list = field(default_factory=list)
    queries: list = field(default_factory=list)

    def __post_init__(self):
        self.by_pred: dict = {}
        for c in self.clauses:
            if c.head is not None:
                self.by_pred.setdefault(c.head.pred, []).append(c)

    @property
    def constraints(self) -> list:
        return [c for c in self.clauses if c.head is None]

    def preds(self) -> list:
        return list(self.by_pred)


# ---------------------------------------------------------------- renaming

def goal_vars(goal, out=None) -> list:
    from .terms import term_vars

    if out is None:
        out = []
    if type(goal) is Literal:
        for a in goal.args:
            term_vars(a, out)
    elif type(goal) is Builtin:
        term_vars(goal.lhs, out)
        term_vars(goal.rhs, out)
    else:
        term_vars(goal.var, out)
        goal_vars(goal.goal, out)
    return out


def clause_vars(head, body) -> list:
    out: list = []
    if head is not None:
        goal_vars(head, out)
    for g in body:
        goal_vars(g, out)
    return out


def map_goal(goal, f):
    """Apply a term function f to every term of a goal."""
    t = type(goal)
    if t is Literal:
        return Literal(goal.name, tuple(f(a) for a in goal.args), goal.naf, goal.classical)
    if t is Builtin:
        return Builtin(goal.op, f(goal.lhs), f(goal.rhs))
    return Forall(f(goal.var), map_goal(goal.goal, f))


def make_clause(head, body, line=0, col=0) -> Clause:
    """Build a clause whose variables are fresh and numbered 0..n-1."""
    vs = clause_vars(head, body)
    fresh = {v: Var(v.name, i) for i, v in enumerate(vs)}
    from .terms import substitute

    f = lambda t: substitute(t, fresh)  # noqa: E731
    h = map_goal(head, f) if head is not None else None
    return Clause(h, tuple(map_goal(g, f) for g in body), len(vs), line, col)


def _copy(t, fresh):
    tt = type(t)
    if tt is Var:
        return fresh[t.index]
    if tt is Compound and not t.ground:
        return Compound(t.functor, tuple([_copy(a, fresh) for a in t.args]))
    return t


def _copy_goal(g, fresh):
    t = type(g)
    if t is Literal:
        return Literal(g.name, tuple([_copy(a, fresh) for a in g.args]), g.naf, g.classical)
    if t is Builtin:
        return Builtin(g.op, _copy(g.lhs, fresh), _copy(g.rhs, fresh))
    return Forall(fresh[g.var.index], _copy_goal(g.goal, fresh))


def rename_clause(clause: Clause, keep_names: bool = False):
    """Return (head, body) with fresh variables."""
    if keep_names:
        fresh = [None] * clause.nvars
        for v in clause_vars(clause.head, clause.body):
            fresh[v.index] = Var(v.name)
    else:
        fresh = [Var() for _ in range(clause.nvars)]
    head = _copy_goal(clause.head, fresh) if clause.head is not None else None
    return head, [_copy_goal(g, fresh) for g in clause.body]


# ---------------------------------------------------------------- printing

def format_goal(g, var_name=None) -> str:
    t = type(g)
    if t is Literal:
        name = ("-" if g.classical else "") + g.name
        s = name
        if g.args:
            s += "(" + ",".join(term_str(a, var_name, 999) for a in g.args) + ")"
        return ("not " + s) if g.naf else s
    if t is Builtin:
        if g.op == ISNOT:
            return f"{ISNOT}({term_str(g.lhs, var_name, 999)},{term_str(g.rhs, var_name, 999)})"
        return f"{term_str(g.lhs, var_name, 699)} {g.op} {term_str(g.rhs, var_name, 699)}"
    return f"forall({term_str(g.var, var_name)},{format_goal(g.goal, var_name)})"


def format_clause(c: Clause, var_name=None) -> str:
    body = ", ".join(format_goal(g, var_name) for g in c.body)
    if c.head is None:
        return f":- {body}."
    head = format_goal(c.head, var_name)
    return f"{head} :- {body}." if body else f"{head}."


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<num>\d+(?:\.\d+)?(?![\w]))
  | (?P<var>[A-Z][A-Za-z0-9_]*|_[A-Za-z0-9_]*)
  | (?P<atom>[a-z][A-Za-z0-9_]*)
  | (?P<punct>:-|\?-|=\\=|=:=|\\=|=<|>=|//|[()\[\],|=<>+\-*/.])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    line, line_start = 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            if kind == "punct" and s == ".":
                nxt = text[m.end(): m.end() + 1]
                if nxt == "" or nxt.isspace() or nxt == "%":
                    kind = "end"
            toks.append(_Tok(kind, s, pos, line, pos - line_start + 1))
        nl = s.count("\n")
        if nl:
            line += nl
            line_start = pos + s.rfind("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", n, line, pos - line_start + 1))
    return toks


_ADD = ("+", "-")
_MUL = ("*", "/", "//", "mod")


class _Parser:
    def __init__(self, text: str, internal: bool = False):
        self.toks = _tokenize(text)
        self.i = 0
        self.internal = internal
        self.vars: dict = {}

    # token helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k=1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, text):
        if self.tok.text != text or self.tok.kind not in ("punct", "end"):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.next()

    def at(self, text) -> bool:
        return self.tok.kind == "punct" and self.tok.text == text

    # terms
    def var(self, name):
        if name == "_":
            return Var("_")
        v = self.vars.get(name)
        if v is None:
            v = self.vars[name] = Var(name)
        return v

    def expr(self):
        left = self.mul()
        while self.tok.kind == "punct" and self.tok.text in _ADD:
            op = self.next().text
            left = Compound(op, (left, self.mul()))
        return left

    def mul(self):
        left = self.unary()
        while (self.tok.kind == "punct" and self.tok.text in _MUL) or (
            self.tok.kind == "atom" and self.tok.text == "mod"
        ):
            op = self.next().text
            left = Compound(op, (left, self.unary()))
        return left

    def unary(self):
        if self.at("-"):
            minus = self.next()
            if self.tok.kind == "num" and self.tok.pos == minus.pos + 1:
                return Num(-self._number(self.next().text))
            return Compound("-", (self.unary(),))
        return self.primary()

    @staticmethod
    def _number(text):
        return Fraction(text) if "." in text else int(text)

    def primary(self):
        t = self.tok
        if t.kind == "num":
            self.next()
            return Num(self._number(t.text))
        if t.kind == "var":
            self.next()
            if self.internal and t.text.startswith("_") and len(t.text) > 1 and t.text[1].islower():
                return self.compound_rest(t.text)
            return self.var(t.text)
        if t.kind == "atom":
            self.next()
            return self.compound_rest(t.text)
        if self.at("("):
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        if self.at("["):
            self.next()
            if self.at("]"):
                self.next()
                return NIL
            items = [self.expr()]
            while self.at(","):
                self.next()
                items.append(self.expr())
            tail = NIL
            if self.at("|"):
                self.next()
                tail = self.expr()
            self.expect("]")
            return make_list(items, tail)
        self.error(f"unexpected token {t.text or 'end of input'!r}")

    def compound_rest(self, name):
        if self.at("(") and self.tok.pos == self.toks[self.i - 1].pos + len(name):
            self.next()
            args = [self.expr()]
            while self.at(","):
                self.next()
                args.append(self.expr())
            self.expect(")")
            return Compound(name, tuple(args))
        return Atom(name)

    # goals
    def literal_from_term(self, term, tok, naf=False) -> Literal:
        classical = False
        if type(term) is Compound and term.functor == "-" and len(term.args) == 1:
            classical = True
            term = term.args[0]
        if type(term) is Atom:
            name, args = term.name, ()
        elif type(term) is Compound and not (term.functor in ("+", "-", "*", "/", "//", "mod") and len(term.args) == 2):
            name, args = term.functor, term.args
        else:
            self.error("expected a literal", tok)
        if name.startswith("_") and not self.internal:
            self.error(f"reserved predicate name {name!r}", tok)
        if name in ("not", "forall") and not self.internal:
            self.error(f"{name!r} cannot be used as a predicate name", tok)
        return Literal(name, args, naf, classical)

    def goal(self):
        t = self.tok
        if t.kind == "atom" and t.text == "not" and self.peek().kind in ("atom", "var", "punct") and not (
            self.peek().kind == "punct" and self.peek().text == "(" and self.peek().pos == t.pos + 3
        ):
            self.next()
            lt = self.tok
            return self.literal_from_term(self.expr(), lt, naf=True)
        if t.kind == "atom" and t.text == "forall" and self.peek().text == "(":
            if not self.internal:
                self.error("forall is not allowed in source programs")
            self.next()
            self.expect("(")
            v = self.expr()
            if type(v) is not Var:
                self.error("forall expects a variable")
            self.expect(",")
            g = self.goal()
            self.expect(")")
            return Forall(v, g)
        left = self.expr()
        if self.tok.kind in ("punct", "atom") and self.tok.text in COMPARISONS:
            op = self.next().text
            return Builtin(op, left, self.expr())
        if type(left) is Compound and left.functor == ISNOT and self.internal:
            return Builtin(ISNOT, left.args[0], left.args[1])
        return self.literal_from_term(left, t)

    def body(self):
        goals = [self.goal()]
        while self.at(","):
            self.next()
            goals.append(self.goal())
        return goals

    def clause_or_query(self):
        self.vars = {}
        start = self.tok
        if self.at("?-"):
            self.next()
            body = self.body()
            self.expect_end()
            return "query", body, start
        if self.at(":-"):
            self.next()
            body = self.body()
            self.expect_end()
            return "clause", (None, body), start
        if not self.internal and self.tok.kind == "atom" and self.tok.text == "not":
            self.error("a rule head cannot be negated")
        head = self.goal()
        if type(head) is not Literal:
            self.error("rule head must be a literal", start)
        if head.naf and not self.internal:
            self.error("a rule head cannot be negated", start)
        body = []
        if self.at(":-"):
            self.next()
            body = self.body()
        self.expect_end()
        return "clause", (head, body), start

    def expect_end(self):
        if self.tok.kind != "end":
            self.error(f"expected '.', found {self.tok.text or 'end of input'!r}")
        self.next()


def parse_program(text: str, internal: bool = False) -> Program:
    """Parse program text. Queries (?- ...) are collected separately."""
    p = _Parser(text, internal)
    clauses, queries = [], []
    while p.tok.kind != "eof":
        kind, payload, start = p.clause_or_query()
        if kind == "query":
            queries.append(payload)
        else:
            head, body = payload
            clauses.append(make_clause(head, body, start.line, start.col))
    return Program(clauses, queries)


def parse_query(text: str, internal: bool = False) -> list:
    """Parse a query, with or without the leading '?-' and trailing '.'."""
    s = text.strip()
    if s.startswith("?-"):
        s = s[2:]
    if not s.rstrip().endswith("."):
        s = s.rstrip() + " ."
    p = _Parser(s, internal)
    body = p.body()
    p.expect_end()
    if p.tok.kind != "eof":
        p.error("trailing input after query")
    return body


def query_variables(goals) -> list:
    """Named (non-anonymous) variables of a query, in order."""
    out = []
    for g in goals:
        goal_vars(g, out)
    return [v for v in out if v.name and v.name != "_" and not v.name.startswith("_")]


def parse_term(text: str):
    """Parse a single term such as `f(a, [1, 2])`."""
    p = _Parser(text + " .")
    t = p.expr()
    p.expect_end()
    return t
