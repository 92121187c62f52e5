"""Command line front end: batch queries, an interactive loop, and the oracle."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from .analysis import check_legality
from .errors import ParseError, SaspError
from .format import format_model
from .solver import SolverConfig, solve
from .syntax import Program, parse_program, parse_query, parse_term
from .transform import transform


@dataclass
class SessionConfig:
    files: list = field(default_factory=list)
    query: str | None = None
    max_models: int = 1
    depth: int | None = None
    dump_transformed: bool = False
    show_internal: bool = False
    verify: bool = False


def load_program(paths) -> Program:
    clauses, queries = [], []
    for path in paths:
        with open(path) as fh:
            prog = parse_program(fh.read())
        clauses.extend(prog.clauses)
        queries.extend(prog.queries)
    return Program(clauses, queries)


def _main_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sasp", description="Goal-directed answer set solver.")
    ap.add_argument("files", nargs="*")
    ap.add_argument("--query", "-q")
    ap.add_argument("--max-models", "-n", type=int, default=1,
                    help="answers to print per query, 0 for all (default 1)")
    ap.add_argument("--depth", type=int, default=None, help="call depth limit")
    ap.add_argument("--dump-transformed", action="store_true")
    ap.add_argument("--show-internal", action="store_true")
    ap.add_argument("--verify", action="store_true",
                    help="check each printed model against the ground semantics")
    return ap


def _oracle_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sasp oracle", description="Stable models by grounding.")
    ap.add_argument("file")
    ap.add_argument("--universe", help="comma separated constants")
    ap.add_argument("--extra-constants", type=int, default=1)
    ap.add_argument("--bound", type=int, default=20, help="limit on atoms under negation")
    ap.add_argument("--query", "-q")
    return ap


def _verify_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sasp verify", description="Check solver answers against the oracle.")
    ap.add_argument("file")
    ap.add_argument("--query", "-q", required=True)
    ap.add_argument("--max-models", "-n", type=int, default=0)
    ap.add_argument("--extra-constants", type=int, default=1)
    ap.add_argument("--bound", type=int, default=20)
    return ap


def _warn(diags, err) -> None:
    for d in diags:
        print(str(d), file=err)


def _split_universe(text: str) -> list:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur)
    return [parse_term(p.strip()) for p in parts]


def run_oracle(argv, out, err) -> int:
    from .oracle import enumerate_stable_models, make_universe, oracle_query, prepare

    args = _oracle_parser().parse_args(argv)
    prog = load_program([args.file])
    given = _split_universe(args.universe) if args.universe else None
    universe = make_universe(prog, args.extra_constants, given)
    prep = prepare(prog, universe)
    if args.query:
        answers = oracle_query(prog, parse_query(args.query), prepared=prep, bound=args.bound)
        if not answers:
            print("false.", file=out)
            return 1
        for mapping, _m in answers:
            text = ", ".join(f"{v.display()} = {t}" for v, t in mapping.items())
            print(text or "true.", file=out)
        return 0
    models = enumerate_stable_models(prep[0], args.bound)
    for atoms in models.render():
        print("{ " + ", ".join(atoms) + " }", file=out)
    if not len(models):
        print("no stable models", file=out)
        return 1
    return 0


def run_verify(argv, out, err) -> int:
    from .oracle import prepare, verify_partial_model

    args = _verify_parser().parse_args(argv)
    prog = load_program([args.file])
    tp = transform(prog)
    prep = prepare(prog, extra=args.extra_constants)
    cfg = SolverConfig(max_models=args.max_models or None)
    bad = 0
    count = 0
    for pm in solve(tp, parse_query(args.query), cfg):
        count += 1
        verdict = verify_partial_model(prog, pm, prepared=prep, bound=args.bound)
        print(f"model {count}: {'conforms' if verdict else 'DOES NOT CONFORM'}", file=out)
        bad += not verdict
    if count == 0:
        print("false.", file=out)
        return 1
    return 1 if bad else 0


def _print_answer(pm, out, show_internal=False) -> None:
    print(format_model(pm), file=out)


def run_query(tp, query_text, cfg, out, verify_with=None) -> int:
    goals = parse_query(query_text)
    found = 0
    for pm in solve(tp, goals, cfg):
        if found:
            print(file=out)
        _print_answer(pm, out)
        if verify_with is not None:
            from .oracle import verify_partial_model

            prog, prep = verify_with
            ok = verify_partial_model(prog, pm, prepared=prep)
            print(f"% oracle: {'conforms' if ok else 'does not conform'}", file=out)
        found += 1
    if not found:
        print("false.", file=out)
        return 1
    return 0


def repl(tp, cfg, inp, out) -> None:
    interactive = inp.isatty()
    buf = ""
    while True:
        if interactive:
            out.write("?- " if not buf else "|  ")
            out.flush()
        line = inp.readline()
        if not line:
            return
        buf += line
        if not buf.strip():
            buf = ""
            continue
        if not buf.rstrip().endswith("."):
            continue
        text, buf = buf, ""
        try:
            goals = parse_query(text)
            answers = solve(tp, goals, SolverConfig(depth_limit=cfg.depth_limit,
                                                    show_internal=cfg.show_internal))
            got = False
            for pm in answers:
                got = True
                out.write(format_model(pm) + " ")
                out.flush()
                reply = inp.readline()
                if not reply or reply.strip() != ";":
                    out.write(".\n")
                    break
                out.write("\n")
            else:
                out.write("false.\n")
            del got
        except (ParseError, SaspError) as exc:
            out.write(f"error: {type(exc).__name__}: {exc}\n")
        out.flush()


def run(cfg: SessionConfig, inp=None, out=None, err=None) -> int:
    inp = inp or sys.stdin
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        prog = load_program(cfg.files)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=err)
        return 2
    _warn(check_legality(prog), err)
    tp = transform(prog)
    if cfg.dump_transformed:
        out.write(tp.dump())
        if cfg.query is None and not prog.queries:
            return 0
    scfg = SolverConfig(
        max_models=None if cfg.max_models == 0 else cfg.max_models,
        depth_limit=cfg.depth,
        show_internal=cfg.show_internal,
    )
    verify_with = None
    if cfg.verify:
        from .oracle import prepare

        verify_with = (prog, prepare(prog))
    queries = []
    if cfg.query is not None:
        queries = [cfg.query]
    elif prog.queries:
        from .syntax import format_goal

        queries = [", ".join(format_goal(g) for g in q) for q in prog.queries]
    try:
        if queries:
            status = 0
            for q in queries:
                if len(queries) > 1:
                    print(f"?- {q}.", file=out)
                status = max(status, run_query(tp, q, scfg, out, verify_with))
            return status
        repl(tp, scfg, inp, out)
        return 0
    except ParseError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except SaspError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return 2


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv and argv[0] == "oracle":
            return run_oracle(argv[1:], sys.stdout, sys.stderr)
        if argv and argv[0] == "verify":
            return run_verify(argv[1:], sys.stdout, sys.stderr)
    except (OSError, SaspError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    args = _main_parser().parse_args(argv)
    cfg = SessionConfig(
        files=args.files,
        query=args.query,
        max_models=args.max_models,
        depth=args.depth,
        dump_transformed=args.dump_transformed,
        show_internal=args.show_internal,
        verify=args.verify,
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
