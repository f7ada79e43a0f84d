import json
import subprocess
import sys
from pathlib import Path

from finbundles.cli import load_fixtures, main, run_theorem_suite, run_verify
from finbundles.suites import Bounds

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_fixture_tree_loads():
    groups, groupoids, bundles, failures = load_fixtures(FIXTURES)
    assert not failures
    assert len(groups) == 14
    assert {g.order for g in groups.values()} == {1, 2, 3, 4, 5, 6, 7, 8}
    assert len(groupoids) == 5
    assert len(bundles) == 5


def test_verify_command_passes(capsys):
    code = main(["verify", "--fixtures", str(FIXTURES)])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["all_passed"]
    assert report["command"] == "verify"


def test_enumerate_command_counts(capsys):
    code = main(["enumerate", "--fixtures", str(FIXTURES), "--bound-group", "3"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    counts = {c["group"]: c for c in report["checks"] if c["check"] == "torsor_count"}
    assert counts["z2"]["structures"] == 1
    assert counts["z3"]["structures"] == 2
    assert counts["z3"]["iso_classes"] == 1
    assert counts["z1"]["structures"] == 1


def test_enumerate_rejects_silly_bounds(capsys):
    code = main(["enumerate", "--fixtures", str(FIXTURES), "--bound-group", "0"])
    assert code == 2


def test_glue_command(tmp_path):
    out = tmp_path / "report.json"
    code = main(["glue", "--fixtures", str(FIXTURES), "--bound-base", "1",
                 "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["all_passed"]


def test_theorem_command_small_bounds(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["theorem", "--fixtures", str(FIXTURES), "--bound-group", "2",
                 "--bound-base", "1", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["all_passed"]
    negatives = [c for c in report["checks"]
                 if c["check"] == "corollary_agreement" and c["negative_control"]]
    assert len(negatives) == 5
    assert all(not c["criterion_passed"] and not c["stable_passed"]
               for c in negatives)


def test_parse_error_reported_with_location(tmp_path):
    bad = tmp_path / "fixtures"
    (bad / "groups").mkdir(parents=True)
    (bad / "groups" / "broken.json").write_text("{not json")
    (bad / "groupoids").mkdir()
    (bad / "bundles").mkdir()
    groups, groupoids, bundles, failures = load_fixtures(bad)
    assert not groups
    assert failures[0]["error"] == "ParseError"
    assert "broken.json" in failures[0]["fixture"]
    report = run_verify(bad, Bounds())
    assert not report["all_passed"]


def test_validation_failure_becomes_failed_check(tmp_path):
    bad = tmp_path / "fixtures"
    (bad / "groups").mkdir(parents=True)
    (bad / "groupoids").mkdir()
    (bad / "bundles").mkdir()
    # mul(0,0)=1 cannot have unit 0
    (bad / "groups" / "notgroup.json").write_text(json.dumps(
        {"order": 2, "mul": [[1, 0], [0, 1]], "unit": 0, "inv": [0, 1]}))
    groups, groupoids, bundles, failures = load_fixtures(bad)
    assert not groups
    assert failures and failures[0]["error"] == "NoUnit"
    report = run_verify(bad, Bounds())
    assert not report["all_passed"]


def test_failing_fixture_exits_nonzero(tmp_path, capsys):
    bad = tmp_path / "fixtures"
    (bad / "groups").mkdir(parents=True)
    (bad / "groupoids").mkdir()
    (bad / "bundles").mkdir()
    (bad / "groups" / "notgroup.json").write_text(json.dumps(
        {"order": 2, "mul": [[1, 0], [0, 1]], "unit": 0, "inv": [0, 1]}))
    code = main(["verify", "--fixtures", str(bad)])
    capsys.readouterr()
    assert code == 1


def test_empty_fixture_dir_is_success(tmp_path):
    empty = tmp_path / "fixtures"
    (empty / "groups").mkdir(parents=True)
    (empty / "groupoids").mkdir()
    (empty / "bundles").mkdir()
    code = main(["enumerate", "--fixtures", str(empty)])
    assert code == 0


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "finbundles.cli", "enumerate",
         "--fixtures", str(FIXTURES), "--bound-group", "2", "--json"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["all_passed"]


def test_reports_are_deterministic():
    b = Bounds(group_order=2, base=1)
    r1 = run_theorem_suite(FIXTURES, b)
    r2 = run_theorem_suite(FIXTURES, b)
    r1.pop("elapsed_s")
    r2.pop("elapsed_s")
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)
