from fractions import Fraction

import pytest
from conftest import CORPUS

from sasp.errors import ParseError
from sasp.syntax import (
    Builtin,
    Literal,
    Program,
    format_clause,
    goal_vars,
    parse_program,
    parse_query,
    parse_term,
    rename_clause,
)
from sasp.terms import NIL, Atom, Compound, Num, Var, make_list, term_str


def test_rule_shape():
    (c,) = parse_program("bird(X) :- penguin(X).").clauses
    assert c.head.name == "bird" and c.head.args[0] is c.body[0].args[0]
    assert type(c.body[0]) is Literal and c.body[0].name == "penguin"


def test_headless_rule():
    (c,) = parse_program(":- q.").clauses
    assert c.head is None and [str(g) for g in c.body] == ["q"]


def test_body_order_and_negation():
    (c,) = parse_program("p :- q, not r.").clauses
    assert [(g.name, g.naf) for g in c.body] == [("q", False), ("r", True)]


def test_classical_negation():
    (g,) = parse_query("?- -flies(X).")
    assert g.classical and not g.naf and g.pred == ("-flies", 1)
    (c,) = parse_program("p :- not -q.").clauses
    assert c.body[0].naf and c.body[0].classical


def test_query_forms():
    (g,) = parse_query("?- nqueens(5,X).")
    assert g.args[0] == Num(5) and type(g.args[1]) is Var and g.args[1].name == "X"
    assert [str(x) for x in parse_query("p")] == ["p"]


def test_predicate_identity_includes_arity():
    p = parse_program("p(1). p(1, 2).")
    assert set(p.by_pred) == {("p", 1), ("p", 2)}


def test_numbers_are_exact():
    assert parse_term("3.14") == Num(Fraction(314, 100))
    assert parse_term("3.14") == parse_term("3.140")
    assert parse_term("-3") == Num(-3)
    assert term_str(parse_term("3.14")) == "3.14"


def test_lists_and_operators():
    t = parse_term("[q(1,2)|T]")
    assert t.functor == "." and t.args[0] == Compound("q", (Num(1), Num(2)))
    assert parse_term("[a,b]") == make_list([Atom("a"), Atom("b")])
    assert parse_term("[]") == NIL
    (c,) = parse_program("p(Y) :- Y is X * -1.").clauses
    b = c.body[0]
    assert type(b) is Builtin and b.op == "is" and term_str(b.rhs) == "X * -1"


def test_anonymous_variables_are_distinct():
    (c,) = parse_program("p(_, _).").clauses
    a, b = c.head.args
    assert a is not b


def test_comments_ignored():
    p = parse_program("% comment\np. % trailing\n")
    assert len(p.clauses) == 1


@pytest.mark.parametrize(
    "text",
    ["p :- q", "p(.", "not p :- q.", "p :- not (X = 1).", "_p :- q.", "p :- forall(X, q(X))."],
)
def test_rejects(text):
    with pytest.raises(ParseError):
        parse_program(text)


def test_error_location():
    with pytest.raises(ParseError) as ei:
        parse_program("p.\nq :- r(.\n")
    assert ei.value.line == 2


def test_empty_query_rejected():
    with pytest.raises(ParseError):
        parse_query("?- .")


def test_rename_clause_fresh_and_coreferent():
    (c,) = parse_program("p(X) :- q(X, Y).").clauses
    h1, b1 = rename_clause(c)
    h2, b2 = rename_clause(c)
    assert h1.args[0] is b1[0].args[0]
    assert h1.args[0] is not h2.args[0]
    assert b1[0].args[1] is not b2[0].args[1]


def test_rename_ground_clause_is_identity():
    (c,) = parse_program("p(a) :- q(b).").clauses
    h, b = rename_clause(c)
    assert h == c.head and list(b) == list(c.body)


def _shape(program):
    """Clauses printed with variables numbered per clause."""
    out = []
    for c in program.clauses:
        names = {}
        out.append(format_clause(c, lambda v: names.setdefault(v, f"V{len(names)}")))
    return out


@pytest.mark.parametrize("name", ["tweety.lp", "queens.lp", "hamiltonian.lp", "pi.lp"])
def test_corpus_round_trip(name):
    p = parse_program((CORPUS / name).read_text())
    text = "\n".join(format_clause(c) for c in p.clauses)
    assert _shape(parse_program(text)) == _shape(p)


def test_program_index_covers_each_clause_once():
    p = parse_program((CORPUS / "tweety.lp").read_text())
    indexed = [c for cs in p.by_pred.values() for c in cs]
    assert len(indexed) == len(p.clauses) and all(c in indexed for c in p.clauses)
    assert isinstance(p, Program)


def test_goal_vars_order():
    (g,) = parse_query("p(X, f(Y, X), Z)")
    assert [v.name for v in goal_vars(g)] == ["X", "Y", "Z"]
