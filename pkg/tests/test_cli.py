import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from rackd.cli import emit_report, main

SCHEMA = json.loads((Path(__file__).parent.parent / "docs" / "report-schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_m11_text(capsys):
    code, out, err = run(capsys, "classify", "M11", "--format", "text")
    assert code == 0
    assert out == "M11 : 8A, 8B, 11A, 11B\n"
    assert "M11 11A size=720 NotTypeD exhaustive-scan" in err


def test_classify_json_is_canonical_and_reproducible(capsys):
    code, out, _ = run(capsys, "classify", "PSL(2,7)", "-q")
    assert code == 0
    again = run(capsys, "classify", "PSL(2,7)", "-q")[1]
    assert out == again
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    assert emit_report(report).decode() == out
    assert sum(c["size"] for c in report["classes"]) == 168
    assert len({c["label"] for c in report["classes"]}) == len(report["classes"])
    assert "wall_time" not in out


def test_timings_flag(capsys):
    _, out, _ = run(capsys, "classify", "Sym(4)", "-q", "--timings")
    assert all("wall_time" in c for c in json.loads(out)["classes"])


def test_outer_only(capsys, tmp_path):
    dest = tmp_path / "s5.json"
    code, out, _ = run(capsys, "classify", "Sym(5)", "--outer-only", "-q",
                       "--out", str(dest))
    assert code == 0 and out == ""
    report = json.loads(dest.read_text())
    jsonschema.validate(report, SCHEMA)
    assert report["scope"] == "outer"
    assert all(c["outer"] for c in report["classes"])
    assert sorted(c["size"] for c in report["classes"]) == [10, 20, 30]


def test_outer_only_needs_index_two(capsys):
    code, _, err = run(capsys, "classify", "Alt(5)", "--outer-only")
    assert code == 1 and "index 2" in err


def test_text_outer_only(capsys):
    code, out, _ = run(capsys, "classify", "Sym(6)", "--outer-only", "--format", "text", "-q")
    assert code == 0
    assert out == "Sym(6) : 2B, 2C\n"


def test_emit_text_none():
    report = {"kind": "classification", "group": "X", "not_type_d": [], "unknown": []}
    assert emit_report(report, "text") == b"X : none\n"


def test_unknown_group_exit_1(capsys):
    code, _, err = run(capsys, "classify", "NoSuchGroup")
    assert code == 1 and "available" in err


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as e:
        main(["classify"])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        main(["classify", "M11", "--strategy", "magic"])
    assert e.value.code == 1
    assert run(capsys, "classify", "M11", "--workers", "0")[0] == 1


def test_unknown_verdict_exit_2(capsys):
    code, out, _ = run(capsys, "classify", "M11", "--strategy", "random",
                       "--budget-pairs", "5", "--format", "text", "-q")
    assert code == 2
    assert "# undecided:" in out


def test_twisted_a5(capsys):
    code, out, _ = run(capsys, "twisted", "A5", "--conjugator", "(1,2)", "--rep", "()", "-q")
    assert code == 0
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    assert report["orbit_size"] == 10
    assert report["correspondence"]["holds"] is True
    assert report["outer"] is True
    assert report["verdict"] in ("TypeD", "NotTypeD")


def test_twisted_identity_matches_classify(capsys):
    _, out, _ = run(capsys, "twisted", "A5", "--conjugator", "()", "--rep", "(1,2,3)", "-q")
    twisted = json.loads(out)
    _, out, _ = run(capsys, "classify", "A5", "-q")
    plain = next(c for c in json.loads(out)["classes"] if c["element_order"] == 3)
    assert twisted["orbit_size"] == plain["size"]
    assert twisted["verdict"] == plain["verdict"]


def test_twisted_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["twisted", "A5", "--conjugator", "(3,4)"])
    assert e.value.code == 1
    code, _, err = run(capsys, "twisted", "Dih(5)", "--conjugator", "(1,2)", "--rep", "()")
    assert code == 1 and "normalize" in err
    code, _, err = run(capsys, "twisted", "A5", "--conjugator", "(1,2", "--rep", "()")
    assert code == 1
    code, _, err = run(capsys, "twisted", "A5", "--conjugator", "(1,2)", "--rep", "(1,2)")
    assert code == 1 and "not in" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "rackd", "classify", "Sym(3)",
                          "--format", "text", "-q"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout == "Sym(3) : 2A, 3A\n"
