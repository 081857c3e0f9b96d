import json
from fractions import Fraction as Q

import pytest

from limitlab.cli import EXIT_ERROR, EXIT_OK, EXIT_UNDECIDABLE, run


def test_classify_exit_and_text(capsys):
    code = run(["classify", "--fn", "piecewise { 1 on Q(R); else 0 }", "--at", "0"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "t1: no" in out and "t5: yes = 0" in out


def test_classify_structured(capsys):
    code = run(
        ["--format", "structured", "classify", "--fn", "piecewise { 1 on Q(R); else 0 }", "--at", "1/3"]
    )
    payload = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert payload["command"] == "classify"
    assert payload["types"]["t5"] == {"exists": "yes", "value": "0"}
    assert payload["types"]["t1"]["exists"] == "no"
    assert payload["chain_consistent"] is True
    assert payload["point"] == "1/3"


def test_limit_pass_fail_exit(capsys):
    code = run(
        ["limit", "--fn", "piecewise { 1 on cantor(0,1); else 0 }", "--at", "0", "--value", "0", "--type", "t6"]
    )
    assert code == EXIT_OK
    assert "pass" in capsys.readouterr().out
    code = run(
        ["limit", "--fn", "piecewise { 1 on cantor(0,1); else 0 }", "--at", "0", "--value", "0", "--type", "t5"]
    )
    assert code == EXIT_OK  # decided (fail) is still a decided result
    assert "fail" in capsys.readouterr().out


def test_measure_inline(capsys):
    code = run(["measure", "--set", "[0,1]|[2,3]"])
    assert code == EXIT_OK
    assert "measure: 2" in capsys.readouterr().out


def test_density_omega(capsys):
    code = run(["density", "--set", "family(1/n - (1/2)^n, 1/n)", "--at", "0"])
    assert code == EXIT_OK
    assert "zero" in capsys.readouterr().out


def test_cardinality(capsys):
    code = run(["cardinality", "--set", "cantor(0,1)", "--at", "0", "--radius", "1/2"])
    assert code == EXIT_OK
    assert "uncountable" in capsys.readouterr().out


def test_decompose(capsys):
    code = run(
        ["decompose", "--fn", "piecewise { 1 on Q(R); else 0 }", "--at", "0", "--value", "0", "--type", "t5"]
    )
    assert code == EXIT_OK
    assert "verified: True" in capsys.readouterr().out


def test_estimate_deterministic(capsys):
    args = ["estimate", "--set", "[0,1]", "--at", "1/2", "--radius", "1/2", "--seed", "5", "--samples", "2000"]
    assert run(args) == EXIT_OK
    first = capsys.readouterr().out
    assert run(args) == EXIT_OK
    assert capsys.readouterr().out == first


def test_verify_all_green(capsys):
    code = run(["verify"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "12/12" in out


def test_syntax_error_exit(capsys):
    code = run(["measure", "--set", "[0,"])
    err = capsys.readouterr().err
    assert code == EXIT_ERROR
    assert "column 4" in err or "line 1" in err


def test_unsupported_algebra_exit(capsys):
    code = run(["measure", "--set", "Q(R) & cantor(0,1)"])
    assert code == EXIT_ERROR


def test_file_inputs(tmp_path, capsys):
    fn_file = tmp_path / "dirichlet.fn"
    fn_file.write_text("# rational indicator\npiecewise { 1 on Q(R); else 0 }\n")
    code = run(["classify", "--fn", str(fn_file), "--at", "0"])
    assert code == EXIT_OK
    assert "t5: yes = 0" in capsys.readouterr().out


def test_structured_error(capsys):
    code = run(["--format", "structured", "measure", "--set", "[0,"])
    payload = json.loads(capsys.readouterr().out)
    assert code == EXIT_ERROR
    assert payload["error"] == "DslSyntaxError"
