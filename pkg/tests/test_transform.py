import itertools
import random

import pytest
from goldens import canonical, parse_listing, reachable

from sasp.oracle import enumerate_stable_models, prepare
from sasp.solver import SolverConfig, solve
from sasp.syntax import Forall, Literal, format_clause, parse_program, parse_query
from sasp.transform import abstract_head, transform


def one_clause(src):
    (c,) = parse_program(src).clauses
    return c


def same(clauses, listing):
    return canonical(clauses) == canonical(parse_listing(listing))


# ---------------------------------------------------------------- head abstraction

def test_abstract_repeated_variable():
    assert same([abstract_head(one_clause("t(A, A)."))], "t(A, B) :- A = B.")


def test_abstract_identity():
    c = one_clause("p(X) :- q(X).")
    assert format_clause(abstract_head(c)) == format_clause(c)


def test_abstract_list_head():
    assert same([abstract_head(one_clause("p([X|T]) :- q(X), p(T)."))], "p(Z) :- Z = [X|T], q(X), p(T).")


def test_abstract_constant():
    assert same([abstract_head(one_clause("d(1)."))], "d(X) :- X = 1.")


# ---------------------------------------------------------------- duals

def duals_of(src, *names):
    tp = transform(parse_program(src))
    roots = [(True, pred) for pred in tp.originals.by_pred if pred[0] in names]
    return reachable(tp.duals.clauses, roots)


def test_propositional_dual():
    assert same(duals_of("p :- a, not b.\np :- r.", "p"),
                "not p :- np1, np2.\nnp1 :- not a.\nnp1 :- b.\nnp2 :- not r.")


def test_body_variable_forall():
    assert same(duals_of("q(X) :- not p(X, Y).", "q"),
                "not q(X) :- forall(Y, nq1(X, Y)).\nnq1(X, Y) :- p(X, Y).")


def test_prefix_repetition():
    assert same(duals_of("p(X, Y) :- not q(X), t(Y, Y).", "p"),
                "not p(X, Y) :- q(X).\nnot p(X, Y) :- not q(X), not t(Y, Y).")


def test_nested_forall_for_two_body_variables():
    (c,) = [c for c in duals_of("p(X) :- q(X, Y, Z).", "p") if c.head.naf]
    (g,) = c.body
    assert type(g) is Forall and type(g.goal) is Forall


def test_comparison_complements():
    out = duals_of("p(X) :- X > 1, X =< 5, X is 2, X =:= 2.", "p")
    text = " ".join(format_clause(c) for c in out)
    for frag in ("=<", " > ", "_isnot", "=\\="):
        assert frag in text


def test_undefined_predicate_gets_unconditional_dual():
    tp = transform(parse_program("p :- not q."))
    (c,) = tp.clauses_for(Literal("q", naf=True))
    assert c.body == ()


def test_classical_predicates_get_duals():
    tp = transform(parse_program("-p(X) :- q(X)."))
    assert tp.clauses_for(Literal("p", (None,), naf=True, classical=True))


def test_helpers_cannot_collide_with_source():
    tp = transform(parse_program("np_1 :- not np.\nnp :- a, b.\nnp :- c."))
    source = {pred for pred in tp.originals.by_pred}
    for c in tp.duals.clauses + tp.checks.clauses:
        if not c.head.naf:
            assert c.head.name.startswith("_") and c.head.pred not in source


def test_each_helper_defined_in_one_place():
    tp = transform(parse_program("p :- a, not b.\np :- r.\nq(X) :- not p, s(X, Y).\nr :- not r."))
    sites = {}
    for i, c in enumerate(tp.duals.clauses + tp.checks.clauses):
        if c.head.name.startswith("_"):
            sites.setdefault(c.head.pred, set()).add(i)
    for pred, idx in sites.items():
        assert max(idx) - min(idx) + 1 == len(idx), pred


# ---------------------------------------------------------------- nmr check

def checks_of(src, with_nmr=True):
    tp = transform(parse_program(src))
    return list(tp.checks.clauses) + ([tp.nmr_check] if with_nmr else [])


def test_subchecks_propositional():
    assert same(checks_of("p :- b, not p.\np :- not q, not p.\np :- q, r, not p.", False),
                "chk_p1 :- not b.\nchk_p1 :- p.\nchk_p2 :- q.\nchk_p2 :- p.\n"
                "chk_p3 :- not q.\nchk_p3 :- not r.\nchk_p3 :- p.")


def test_subcheck_with_variable():
    assert same(checks_of("p(X) :- q(X), not p(X)."),
                "chk_p(X) :- not q(X).\nchk_p(X) :- q(X), p(X).\nnmr_check :- forall(X, chk_p(X)).")


def test_conditional_olon_subcheck():
    assert same(checks_of("p(X) :- q(X, Y), not p(Y)."),
                "nmr_check :- forall(X, chk_p(X)).\nchk_p(X) :- forall(Y, chk_p2(X,Y)).\n"
                "chk_p2(X,Y) :- not q(X,Y).\nchk_p2(X,Y) :- q(X,Y), p(Y).\n"
                "chk_p2(X,Y) :- q(X,Y), not p(Y), p(X).")


def test_headless_subcheck():
    assert same(checks_of(":- not c.", False), "chk :- c.")


def test_no_olon_means_empty_check():
    tp = transform(parse_program("p :- not q.\nq :- not p."))
    assert tp.nmr_check.body == () and tp.checks.clauses == []


def test_classical_pairs_are_checked():
    tp = transform(parse_program("p(a).\n-p(b)."))
    assert tp.nmr_check.body


def test_dump_round_trips():
    src = "p(X) :- q(X, Y), not p(Y).\nq(1, 2).\n:- not q(1, 2).\nr([H|T]) :- r(T)."
    tp = transform(parse_program(src))
    text = tp.dump()
    back = parse_program(text, internal=True).clauses
    generated = (list(tp.originals.clauses) + list(tp.duals.clauses)
                 + list(tp.checks.clauses) + [tp.nmr_check])
    assert canonical(back) == canonical(generated)


# ---------------------------------------------------------------- properties

CONSTS = ["a", "b", "c"]


def _random_layered_program(rng):
    """Negation-free, loop-free: p may call q and r, q may call r."""
    preds = ["p", "q", "r"]
    lines = []
    for level, pred in enumerate(preds):
        for _ in range(rng.randint(0, 3)):
            if rng.random() < 0.4:
                lines.append(f"{pred}({rng.choice(CONSTS)}).")
                continue
            body = [f"X \\= {rng.choice(CONSTS)}" for _ in range(rng.randint(0, 2))]
            below = preds[level + 1:]
            if below and rng.random() < 0.7:
                body.append(f"{rng.choice(below)}(X)")
            lines.append(f"{pred}(X) :- {', '.join(body)}." if body else f"{pred}(X).")
    return "\n".join(lines)


@pytest.mark.parametrize("seed", range(30))
def test_dual_completeness(seed):
    """Exactly one of g and not g succeeds for each ground instance."""
    rng = random.Random(seed)
    tp = transform(parse_program(_random_layered_program(rng)))
    cfg = SolverConfig(max_models=1)
    for pred in ("p", "q", "r"):
        for const in CONSTS + ["d"]:
            pos = bool(list(solve(tp, parse_query(f"{pred}({const})"), cfg)))
            neg = bool(list(solve(tp, parse_query(f"not {pred}({const})"), cfg)))
            assert pos != neg, (pred, const)


def test_conditional_subcheck_holds_when_arguments_differ():
    """With distinct arguments the sub-check succeeds whenever the program is consistent."""
    rule = "p(X) :- q(X, Y), not p(Y)."
    universe = [1, 2]
    pairs = [(x, y) for x in universe for y in universe]
    for qs in itertools.product([False, True], repeat=len(pairs)):
        for ps in itertools.product([False, True], repeat=len(universe)):
            facts = [f"q({x}, {y})." for (x, y), on in zip(pairs, qs) if on]
            facts += [f"p({x})." for x, on in zip(universe, ps) if on]
            prog = parse_program(rule + "\n" + "\n".join(facts))
            if not len(enumerate_stable_models(prepare(prog, extra=0)[0])):
                continue  # p(Y) undecidable, so no clause can apply
            tp = transform(prog)
            helper = next(c.head.name for c in tp.checks.clauses if len(c.head.args) == 2)
            for x, y in ((1, 2), (2, 1)):
                goal = parse_query(f"{helper}({x}, {y})", internal=True)
                assert list(solve(tp, goal, SolverConfig(max_models=1, nmr=False))), (facts, x, y)
