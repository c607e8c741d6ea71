import json

import pytest

from photonam.cli import main
from photonam.errors import InvalidConfig, UnknownFormat, UnknownSuite
from photonam.report import (
    KIND_VIOLATION,
    CheckRecord,
    VerificationReport,
    render_report,
)
from photonam.suites import SUITES, SuiteConfig, run_suite


def small_report():
    rep = VerificationReport("demo", {"seed": 0, "tol": 1e-10})
    rep.add("b-check", "MCR1", 1e-14, 1e-10)
    rep.add("a-check", "Table-II", 0.5, 0.1, kind=KIND_VIOLATION)
    rep.note("informational only")
    return rep


def test_records_sorted_and_counts():
    rep = small_report().finalize()
    assert [r.check_id for r in rep.checks] == ["a-check", "b-check"]
    assert rep.counts == (2, 2, 0)
    assert rep.all_passed


def test_violation_semantics():
    rec = CheckRecord("v", "Table-III", 0.05, 0.1, kind=KIND_VIOLATION)
    assert not rec.passed
    rec = CheckRecord("v", "Table-III", 0.5, 0.1, kind=KIND_VIOLATION)
    assert rec.passed


def test_empty_report_renders():
    rep = VerificationReport("empty", {})
    for fmt in ("text", "json", "csv"):
        payload = render_report(rep, fmt)
        assert payload.endswith(b"\n")
    parsed = json.loads(render_report(rep, "json"))
    assert parsed["summary"] == {"total": 0, "passed": 0, "failed": 0}
    assert parsed["checks"] == []


def test_json_schema_round_trip():
    payload = render_report(small_report(), "json")
    parsed = json.loads(payload)
    assert parsed["suite"] == "demo"
    assert {c["id"] for c in parsed["checks"]} == {"a-check", "b-check"}
    for check in parsed["checks"]:
        assert set(check) == {"id", "anchor", "kind", "residual", "tolerance", "pass"}
    assert parsed["notes"] == ["informational only"]


def test_csv_header_and_rows():
    lines = render_report(small_report(), "csv").decode().splitlines()
    assert lines[0] == "check_id,anchor,residual,tolerance,pass"
    assert lines[1].startswith("a-check,Table-II,5.000000e-01,1.000000e-01,true")
    assert len(lines) == 3


def test_unknown_format():
    with pytest.raises(UnknownFormat):
        render_report(small_report(), "yaml")


def test_wall_time_excluded_from_bytes():
    rep1 = small_report()
    rep2 = VerificationReport("demo", {"seed": 0, "tol": 1e-10})
    rep2.add("b-check", "MCR1", 1e-14, 1e-10, wall_time_s=123.0)
    rep2.add("a-check", "Table-II", 0.5, 0.1, kind=KIND_VIOLATION, wall_time_s=9.0)
    rep2.note("informational only")
    for fmt in ("text", "json", "csv"):
        assert render_report(rep1, fmt) == render_report(rep2, fmt)


@pytest.mark.parametrize("fmt", ["text", "json", "csv"])
def test_reports_byte_stable_across_runs(fmt):
    cfg = SuiteConfig(suite="counter-rotating", seed=3)
    first = render_report(run_suite(cfg), fmt)
    second = render_report(run_suite(SuiteConfig(suite="counter-rotating", seed=3)), fmt)
    assert first == second


def test_unknown_suite_and_bad_config():
    with pytest.raises(UnknownSuite):
        run_suite(SuiteConfig(suite="nonexistent"))
    with pytest.raises(InvalidConfig):
        run_suite(SuiteConfig(suite="dirac", tol=-1.0))
    with pytest.raises(InvalidConfig):
        run_suite(SuiteConfig(suite="dirac", n_max=0))


def test_cli_success_and_output_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(
        ["--suite", "dirac", "--format", "json", "--out", str(out), "--seed", "1"]
    )
    assert code == 0
    parsed = json.loads(out.read_bytes())
    assert parsed["suite"] == "dirac"
    assert parsed["summary"]["failed"] == 0


def test_cli_unknown_suite_exit_2(capsys):
    assert main(["--suite", "nonexistent"]) == 2
    assert "error:" in capsys.readouterr().err


def test_cli_missing_suite_exit_2(capsys):
    assert main([]) == 2


def test_cli_bad_tolerance_exit_2(capsys):
    assert main(["--suite", "dirac", "--tol", "-2"]) == 2


def test_cli_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("suite = dirac\nseed = 7\nformat = csv\n")
    out = tmp_path / "a.csv"
    code = main(["--config", str(cfg), "--out", str(out)])
    assert code == 0
    assert out.read_bytes().startswith(b"check_id,anchor,")
    out2 = tmp_path / "b.json"
    code = main(["--config", str(cfg), "--format", "json", "--out", str(out2)])
    assert code == 0
    json.loads(out2.read_bytes())


def test_cli_bad_config_key_exit_2(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("sweet = dirac\n")
    assert main(["--config", str(cfg)]) == 2


def test_cli_inline_grid():
    code = main(
        [
            "--suite",
            "counter-rotating",
            "--grid",
            "0.5,0.25,-0.7;-0.5,-0.25,0.7",
            "--format",
            "csv",
            "--out",
            "/dev/null",
        ]
    )
    assert code == 0


def test_all_suite_names_registered():
    assert set(SUITES) == {
        "canonical-commutators",
        "observable-commutators",
        "decomposition-compare",
        "gauge-hiding",
        "counter-rotating",
        "field-consistency",
        "dirac",
    }
