import csv
import io
import json
import os
import subprocess
import sys

import pytest

from pigp import automorphisms
from pigp.cli import EXIT_CAPACITY, EXIT_INPUT, EXIT_OK, EXIT_VERIFY, histogram, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(autouse=True)
def _restore_budget():
    saved = automorphisms.DEFAULT_BUDGET
    yield
    automorphisms.DEFAULT_BUDGET = saved


def test_count_json(capsys):
    code, out, _ = run(capsys, "count", "-p", "3", "--group", "C9")
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["count"] == 12 and d["method"] == "abelian" and d["group"] == "C9"


def test_count_recipe_and_forced_method(capsys):
    code, out, _ = run(capsys, "count", "-p", "3", "--group", "elementary(3,3)", "--method", "lifting")
    assert code == EXIT_OK and json.loads(out)["count"] == 0


def test_count_csv_and_json_file(capsys, tmp_path):
    path = tmp_path / "out.csv"
    code, out, _ = run(capsys, "count", "-p", "5", "--group", "D6", "--format", "csv", "--json", str(path))
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["count"] == "1" and rows[0]["method"] == "tame"
    assert path.read_text() == out


def test_debug_dual_lift(capsys):
    code, out, _ = run(capsys, "count", "-p", "3", "--group", "D6", "--debug-dual-lift")
    d = json.loads(out)
    assert code == EXIT_OK and "dual_count" in d


def test_potential(capsys):
    code, out, _ = run(capsys, "potential", "-p", "5", "--group", "Q8")
    d = json.loads(out)
    assert code == EXIT_OK and d["potential"] is False and d["witness"] is None
    code, out, _ = run(capsys, "potential", "-p", "3", "--group", "Q8")
    d = json.loads(out)
    assert d["potential"] is True and set(d["witness"]) == {"G0", "G1", "sigma", "tau"}
    code, out, _ = run(capsys, "potential", "-p", "3", "--tame-order", "20")
    assert code == EXIT_OK and len(json.loads(out)) >= 1


def test_survey_lines_and_histogram(capsys):
    code, out, err = run(capsys, "survey", "-p", "3", "--max-order", "8")
    assert code == EXIT_OK
    lines = [json.loads(x) for x in out.splitlines()]
    summary = lines[-1]
    assert summary["summary"] and summary["groups"] == len(lines) - 1
    counts = [r["count"] for r in lines[:-1]]
    assert summary["histogram"] == {str(k): v for k, v in histogram(counts).items()}
    assert "survey:" in err


def test_histogram():
    assert histogram([0, 1, 3, 3]) == {1: 3, 2: 2, 3: 2}
    assert histogram([]) == {}


def test_verify_ok(capsys):
    code, out, _ = run(capsys, "verify", "shafarevich", "-p", "5", "--max-order", "25")
    d = json.loads(out)
    assert code == EXIT_OK and d["ok"] and d["checked"] == 3


def test_verify_failure_exit_code(capsys, tmp_path, monkeypatch):
    import pigp.verify as V

    def broken(*a, **k):
        r = V.SuiteResult("broken")
        r.fail(group="X")
        return r

    monkeypatch.setattr(V, "run_suite", broken)
    code, out, _ = run(capsys, "verify", "props", "-p", "3")
    assert code == EXIT_VERIFY and json.loads(out)["ok"] is False


def test_catalog_check(capsys, tmp_path):
    code, out, _ = run(capsys, "catalog", "check")
    d = json.loads(out)
    assert code == EXIT_OK and d["groups"] > 300
    bad = tmp_path / "bad.txt"
    bad.write_text("group A perm 3\ngen 1 2\nend\n")
    code, _, err = run(capsys, "catalog", "check", "--catalog", str(bad))
    assert code == EXIT_INPUT and "line 2" in err


def test_duplicate_names_across_catalogs(capsys, tmp_path):
    a = tmp_path / "a.txt"
    a.write_text("group A construct cyclic(3)\nend\n")
    code, _, err = run(capsys, "catalog", "check", "--catalog", str(a), "--catalog", str(a))
    assert code == EXIT_INPUT


@pytest.mark.parametrize("argv", [
    ["count", "-p", "4", "--group", "C3"],
    ["count", "-p", "3"],
    ["count", "-p", "3", "--group", "nonsense(1)"],
    ["count", "-p", "3", "--group", "C3", "--max-order", "0"],
    ["count", "-p", "3", "--group", "C3", "--catalog", "/no/such/file"],
    ["frobnicate"],
    ["count", "--group", "C3"],
])
def test_input_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_INPUT


def test_capacity_exit_code(capsys):
    code, _, err = run(capsys, "count", "-p", "3", "--group", "direct(Heis3,C2)", "--aut-budget", "5")
    assert code == EXIT_CAPACITY and "capacity" in err


def test_console_script_entry_point():
    env = dict(os.environ, PIGP_THREADS="2")
    out = subprocess.run([sys.executable, "-m", "pigp.cli", "count", "-p", "7", "--group", "C7"],
                         env=env, capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["count"] == 8


def test_survey_parallel_is_deterministic(capsys, monkeypatch):
    code, serial, _ = run(capsys, "survey", "-p", "5", "--max-order", "12")
    monkeypatch.setenv("PIGP_THREADS", "3")
    code2, parallel, _ = run(capsys, "survey", "-p", "5", "--max-order", "12")

    def strip(text):
        recs = [json.loads(x) for x in text.splitlines()]
        for r in recs:
            r.pop("millis", None)
        return recs

    assert code == code2 == EXIT_OK
    assert strip(serial) == strip(parallel)
