import json
import subprocess
import sys

import pytest

from tacs.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_and_print(tmp_path, capsys):
    src = tmp_path / "t.tacs"
    src.write_text("s.a.0 + b.0")
    code, out, _ = run(capsys, "parse", str(src))
    assert code == 0 and json.loads(out) == {"sum": {"left": {"clock": {"body": {"act": {"action": "a", "body": {"nil": {}}}}}}, "right": {"act": {"action": "b", "body": {"nil": {}}}}}}
    doc = tmp_path / "t.json"
    doc.write_text(out)
    assert run(capsys, "print", str(doc))[:2] == (0, "s.a.0 + b.0\n")


def test_parse_errors_exit_2(tmp_path, capsys):
    src = tmp_path / "bad.tacs"
    src.write_text("rec x. s.x")
    code, _, err = run(capsys, "parse", str(src))
    assert code == 2 and "UnguardedRecursion" in err
    assert run(capsys, "print", str(tmp_path / "missing.json"))[0] == 2
    (tmp_path / "e.json").write_text("{}")
    assert run(capsys, "print", str(tmp_path / "e.json"))[0] == 2


def test_urgent_and_steps(capsys):
    assert run(capsys, "urgent", "a.0 | 'a.0")[1] == "'a a tau\n"
    code, out, _ = run(capsys, "steps", "--semantics", "2", "s.s.s.a.0")
    assert code == 0 and out.splitlines() == ["--a--> 0", "--sigma--> a.0", "--sigma--> s.a.0", "--sigma--> s.s.a.0"]
    assert run(capsys, "urgent", "a.x")[0] == 2


def test_lts(capsys):
    code, out, _ = run(capsys, "lts", "--semantics", "1", "s.a.0")
    doc = json.loads(out)
    assert code == 0 and doc["states"][doc["root"]] == "s.a.0" and len(doc["states"]) == 3
    assert {"source": doc["states"].index("s.a.0"), "label": "sigma", "target": doc["states"].index("a.0")} in doc["transitions"]
    code, out, _ = run(capsys, "lts", "--format", "dot", "a.0")
    assert code == 0 and out.startswith("digraph")
    assert run(capsys, "lts", "--limit", "50", "rec x. (a.x | b.x)")[0] == 2


def test_faster_set(capsys):
    assert run(capsys, "faster-set", "s.s.a.0")[1].splitlines() == ["s.a.0", "s.s.a.0"]
    assert run(capsys, "faster-set", "--plus", "s.s.a.0")[1].splitlines() == ["a.0", "s.a.0", "s.s.a.0"]


def test_check(capsys):
    code, out, _ = run(capsys, "check", "--relation", "naive", "--semantics", "2", "s.a.0", "a.0")
    doc = json.loads(out)
    assert code == 0 and doc["holds"] and doc["witness"]["pairs"]
    code, out, _ = run(capsys, "check", "--relation", "strong", "s.a.0", "a.0")
    doc = json.loads(out)
    assert code == 1 and not doc["holds"] and doc["refutation"][-1]["move"]["clause"] == "3-urgent"
    assert run(capsys, "check", "--relation", "strong", "--expect", "fails", "s.a.0", "a.0")[0] == 0
    assert run(capsys, "check", "--relation", "naive", "--expect", "fails", "s.a.0", "a.0")[0] == 1
    code, out, _ = run(capsys, "check", "--relation", "indexed", "--semantics", "2", "--cap", "3", "tau.0 | s.s.tau.0", "s.tau.0 | s.s.tau.0")
    assert code == 1 and json.loads(out)["kind"]["cap"] == 3
    assert run(capsys, "check", "--relation", "combined", "s.a.0", "s.a.0")[0] == 0
    assert run(capsys, "check", "--relation", "naive", "--limit", "5", "rec x. (a.x | b.x)", "0")[0] == 2


def test_verify_and_reproduce(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "coherence", "--seed", "7", "--cases", "20")
    assert code == 0 and out.startswith("PASS coherence: 20 cases")
    code, out, _ = run(capsys, "reproduce", "--example", "sec7-sizes?n=2")
    assert code == 0 and "PASS" in out
    assert run(capsys, "reproduce", "--example", "nope")[0] == 2


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as e:
        main(["check", "--relation", "fastest", "0", "0"])
    assert e.value.code == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "tacs", "urgent", "tau.0"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "tau\n"
