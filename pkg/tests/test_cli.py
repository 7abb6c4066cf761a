import json
import subprocess
import sys

import pytest

from icetors import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tors_counts(capsys):
    code, out, _ = run(capsys, "tors", "--algebra", "lineA:3", "--count")
    assert code == 0 and out == "14\n"
    code, out, _ = run(capsys, "tors", "--algebra", "paperNakayama", "--count")
    assert out == "12\n"


def test_tors_listing_sorted(capsys):
    _, out, _ = run(capsys, "tors", "--algebra", "lineA:2")
    lines = out.splitlines()
    assert lines[0] == "5"
    # sorted as label lists, so the empty class comes first
    assert lines[1:] == ["{}", "{1}", "{1,2,21}", "{2}", "{2,21}"]


def test_alpha(capsys):
    _, out, _ = run(capsys, "alpha", "--subcat", "2,21,32,3,321")
    assert out == "21,3,321\n"
    code, _, err = run(capsys, "alpha", "--subcat", "1,21,321")
    assert code == 2 and "icetors:" in err


def test_counts_of_other_commands(capsys):
    assert run(capsys, "ice", "--count")[1] == "22\n"
    assert run(capsys, "wide", "--count", "--algebra", "paperNakayama")[1] == "12\n"
    assert run(capsys, "iceseq", "--length", "2", "--count")[1] == "55\n"
    assert run(capsys, "mmi", "--length", "2", "--count")[1] == "55\n"
    assert run(capsys, "ind", "--count")[1] == "6\n"
    assert run(capsys, "aisles", "--window", "-1..0", "--count")[1] == "14\n"


def test_json_and_dot(capsys):
    _, out, _ = run(capsys, "tors", "--format", "json")
    data = json.loads(out)
    assert len(data["elements"]) == 14 and len(data["covers"]) == 21
    _, out, _ = run(capsys, "hasse", "--algebra", "lineA:2")
    assert out.startswith("digraph") and out.count("->") == 5
    _, out, _ = run(capsys, "aisles", "--window=-1..0", "--format", "dot")
    assert out.count("digraph") == 14


def test_repeated_runs_identical(capsys):
    a = run(capsys, "mmi", "--length", "2", "--format", "json")[1]
    b = run(capsys, "mmi", "--length", "2", "--format", "json")[1]
    assert a == b and json.loads(a)["count"] == 55


def test_out_file(capsys, tmp_path):
    target = tmp_path / "tors.dot"
    code, out, _ = run(capsys, "hasse", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("digraph")


@pytest.mark.parametrize("suite", ["narrow-iff-ice", "preaisle", "interval-iso", "thick-wide", "coaisle-remark"])
def test_verify_suites(capsys, suite):
    code, out, _ = run(capsys, "verify", suite, "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["ok"] and rep["suite"] == suite


def test_verify_window_suites(capsys):
    code, out, _ = run(capsys, "verify", "t-structure", "--window", "-2..0")
    assert code == 0 and out.startswith("t-structure: ok")
    code, _, _ = run(capsys, "verify", "mmi-roundtrip", "--length", "2", "--algebra", "paperNakayama")
    assert code == 0


def test_usage_errors(capsys):
    assert run(capsys, "tors", "--algebra", "noSuchAlgebra")[0] == 2
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "verify", "nonsense")[0] == 2
    assert run(capsys, "mmi")[0] == 2
    assert run(capsys, "aisles", "--window", "-2..1")[0] == 2
    assert run(capsys, "verify", "t-structure", "--algebra", "paperNakayama")[0] == 2
    with pytest.raises(SystemExit):
        cli.main(["frobnicate"])


def test_cap_exit_code(capsys):
    code, _, err = run(capsys, "verify", "narrow-iff-ice", "--window", "-5..0")
    assert code == 3 and "cap" in err


def test_falsification_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "thick_correspondence", lambda cat: {"ok": False, "why": "forced"})
    code, out, _ = run(capsys, "verify", "thick-wide")
    assert code == 1 and out.startswith("thick-wide: FAILED")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "icetors", "tors", "--count"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "14\n"
