import io
import subprocess
import sys

import pytest
from conftest import CORPUS

from sasp.cli import SessionConfig, main, run
from sasp.format import format_model
from sasp.solver import SolverConfig, solve
from sasp.syntax import format_goal, parse_program, parse_query
from sasp.transform import transform


def session(files, stdin="", **kw):
    out, err = io.StringIO(), io.StringIO()
    code = run(SessionConfig(files=[str(f) for f in files], **kw), io.StringIO(stdin), out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, text, name="prog.lp"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_batch_query_prints_model_and_bindings(tmp_path):
    code, out, _ = session([write(tmp_path, "d(1).")], query="d(X).")
    assert code == 0
    assert out == "{ d(1) }\nX = 1\n"


def test_no_model_exits_one(tmp_path):
    code, out, _ = session([write(tmp_path, "p :- not p.")], query="p.")
    assert code == 1
    assert out.strip() == "false."


def test_parse_error_exits_two(tmp_path):
    code, _, err = session([write(tmp_path, "p :- .")], query="p.")
    assert code == 2
    assert "error" in err


def test_missing_file_exits_two(tmp_path):
    code, _, _ = session([tmp_path / "nope.lp"], query="p.")
    assert code == 2


def test_runtime_error_exits_two(tmp_path):
    code, _, err = session([write(tmp_path, "r(1).")], query="Y is 1/0.")
    assert code == 2
    assert "DivisionByZero" in err


def test_dump_transformed(tmp_path):
    code, out, _ = session([write(tmp_path, "p :- not q.")], dump_transformed=True)
    assert code == 0
    assert "not p" in out
    assert "nmr_check" in out


def test_max_models_zero_prints_all(tmp_path):
    _, out, _ = session([write(tmp_path, "d(1). d(2).")], query="d(X).", max_models=1)
    assert out.count("{") == 1
    _, out, _ = session([write(tmp_path, "d(1). d(2).")], query="d(X).", max_models=0)
    assert out.count("{") == 2


def test_embedded_queries_run_in_order(tmp_path):
    f = write(tmp_path, "d(1).\ne(2).\n?- d(X).\n?- e(Y).\n")
    code, out, _ = session([f])
    assert code == 0
    assert out.index("X = 1") < out.index("Y = 2")


def test_verify_flag_annotates(tmp_path):
    f = write(tmp_path, "p :- not q. q :- not p.")
    _, out, _ = session([f], query="p.", verify=True)
    assert "% oracle: conforms" in out


def test_repl_transcript():
    stdin = "?- nqueens(4, X).\n;\n\n?- nqueens(2, X).\n"
    code, out, _ = session([CORPUS / "queens.lp"], stdin)
    assert code == 0
    lines = [l for l in out.splitlines() if l.startswith("X = ")]
    assert lines == [
        "X = [q(1,2),q(2,4),q(3,1),q(4,3)] ",
        "X = [q(1,3),q(2,1),q(3,4),q(4,2)] .",
    ]
    assert out.rstrip().endswith("false.")


def test_repl_reports_errors_and_continues(tmp_path):
    f = write(tmp_path, "d(1).")
    _, out, _ = session([f], "?- d(.\n?- d(X).\n\n")
    assert "error: ParseError" in out
    assert "X = 1" in out


def test_oracle_subcommand(tmp_path, capsys):
    f = write(tmp_path, "p :- not q. q :- not p.")
    assert main(["oracle", str(f)]) == 0
    assert capsys.readouterr().out == "{ p }\n{ q }\n"
    g = write(tmp_path, "p :- not p.", "olon.lp")
    assert main(["oracle", str(g)]) == 1


def test_verify_subcommand(capsys):
    code = main(["verify", str(CORPUS / "tweety.lp"), "--query=-flies(X)"])
    out = capsys.readouterr().out
    assert code == 0
    assert "DOES NOT CONFORM" not in out
    assert "model 1: conforms" in out


def test_empty_model_format(tmp_path):
    code, out, _ = session([write(tmp_path, "r(1).")], query="X is 2 + 2.")
    assert out == "{ }\nX = 4\n"


def test_printed_ground_literals_reparse():
    prog = parse_program((CORPUS / "tweety.lp").read_text())
    for pm in solve(transform(prog), parse_query("?- -flies(X)."), SolverConfig(max_models=2)):
        for lit in pm.literals:
            text = format_goal(lit)
            if "?" in text or "Var" in text:
                continue
            again = parse_query(text, internal=True)[0]
            assert format_goal(again) == text
        assert format_model(pm).startswith("{ ")


def test_module_entry_point(tmp_path):
    f = write(tmp_path, "d(1).")
    res = subprocess.run([sys.executable, "-m", "sasp", str(f), "-q", "d(X)."],
                         capture_output=True, text=True, timeout=60)
    assert res.returncode == 0
    assert "X = 1" in res.stdout
