import csv
import json
import subprocess
import sys

import pytest

from etnckit.cli import SpecError, parse_spec, report_names, run
from etnckit.suites import CHECKS, CheckResult


def write_spec(tmp_path, doc):
    path = tmp_path / "spec.json"
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return path


DH_JOB = {"check": "dh_generalized", "params": {"p": 3, "r": 2, "n": 2}, "seed": 1}


@pytest.mark.parametrize("text", ["", "   \n\t"])
def test_empty_spec_is_success(tmp_path, text, capsys):
    out = tmp_path / "out"
    assert run(["--spec", str(write_spec(tmp_path, text)), "--out", str(out)]) == 0
    assert list(out.iterdir()) == []
    assert "0 passed" in capsys.readouterr().out


def test_single_job_report(tmp_path):
    out = tmp_path / "out"
    assert run(["--spec", str(write_spec(tmp_path, {"jobs": [DH_JOB]})), "--out", str(out)]) == 0
    report = json.loads((out / "dh_generalized-1.json").read_text())
    assert report["status"] == "pass"
    assert report["check"] == "dh_generalized" and report["seed"] == 1


def test_bare_list_spec(tmp_path):
    out = tmp_path / "out"
    assert run(["--spec", str(write_spec(tmp_path, [DH_JOB])), "--out", str(out)]) == 0
    assert (out / "dh_generalized-1.json").exists()


def test_malformed_json_reports_position(tmp_path, capsys):
    path = write_spec(tmp_path, '{"jobs": [\n  {"check": }\n]}')
    assert run(["--spec", str(path), "--out", str(tmp_path / "out")]) == 2
    err = capsys.readouterr().err
    assert "line 2" in err and "column" in err


def test_unknown_check_is_parse_error(tmp_path):
    path = write_spec(tmp_path, {"jobs": [{"check": "nope"}]})
    assert run(["--spec", str(path), "--out", str(tmp_path / "out")]) == 2


def test_missing_spec_file(tmp_path):
    assert run(["--spec", str(tmp_path / "absent.json")]) == 2


def test_reports_are_byte_identical(tmp_path):
    spec = write_spec(tmp_path, {"jobs": [DH_JOB, {"check": "gauss", "seed": 4}]})
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(["--spec", str(spec), "--out", str(a)]) == 0
    assert run(["--spec", str(spec), "--out", str(b), "--jobs", "2"]) == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir()) == ["dh_generalized-1.json", "gauss-4.json"]
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_duplicate_jobs_get_suffix(tmp_path):
    out = tmp_path / "out"
    spec = write_spec(tmp_path, {"jobs": [DH_JOB, DH_JOB]})
    assert run(["--spec", str(spec), "--out", str(out)]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["dh_generalized-1-1.json", "dh_generalized-1.json"]


def test_report_names():
    results = [CheckResult("a", 1, "pass", {}), CheckResult("a", 1, "pass", {}), CheckResult("a", 2, "pass", {})]
    assert report_names(results) == ["a-1", "a-1-1", "a-2"]


def test_csv_format(tmp_path):
    out = tmp_path / "out"
    spec = write_spec(tmp_path, {"jobs": [DH_JOB]})
    assert run(["--spec", str(spec), "--out", str(out), "--format", "csv"]) == 0
    with (out / "dh_generalized-1.csv").open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["field", "value"]
    assert ["status", "pass"] in rows


def test_list_checks(capsys):
    assert run(["--list-checks"]) == 0
    assert capsys.readouterr().out.split() == list(CHECKS)


def test_term_budget_skip_and_strict(tmp_path):
    job = dict(DH_JOB, seed=0, budget={"terms": 1})
    spec = write_spec(tmp_path, {"jobs": [job]})
    out = tmp_path / "out"
    assert run(["--spec", str(spec), "--out", str(out)]) == 0
    report = json.loads((out / "dh_generalized-0.json").read_text())
    assert report["status"] == "skipped: budget"
    assert run(["--spec", str(spec), "--out", str(out), "--strict"]) == 1


def test_environment_budget(tmp_path, monkeypatch):
    monkeypatch.setenv("ETNCKIT_BUDGET_TERMS", "1")
    jobs = parse_spec(json.dumps({"jobs": [{"check": "gauss"}]}))
    assert jobs[0].budget_terms == 1
    monkeypatch.setenv("ETNCKIT_BUDGET_TERMS", "many")
    with pytest.raises(SpecError):
        parse_spec(json.dumps({"jobs": [{"check": "gauss"}]}))


def test_seed_override(tmp_path):
    out = tmp_path / "out"
    spec = write_spec(tmp_path, {"jobs": [DH_JOB]})
    assert run(["--spec", str(spec), "--out", str(out), "--seed-override", "9"]) == 0
    assert (out / "dh_generalized-9.json").exists()


def test_invalid_job_shapes():
    for doc in ('{"jobs": 3}', '"text"', '[{"params": {}}]',
                '[{"check": "gauss", "params": []}]', '[{"check": "gauss", "seed": "x"}]'):
        with pytest.raises(SpecError):
            parse_spec(doc)


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "etnckit", "--list-checks"],
                          capture_output=True, text=True, check=True)
    assert "gauss" in proc.stdout.split()
