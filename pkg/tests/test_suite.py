import csv
import io
import json

import pytest

from suite.config import SuiteConfig
from suite.main import main
from suite.report import budget_line, emit_report, metrics_line, render, to_csv, to_json, to_text
from suite.runner import (
    FAIL,
    NOT_DETERMINED,
    PASS,
    Case,
    CaseOutcome,
    ReportDocument,
    build_cases,
    run_case,
    run_suite,
)
from utilities.errors import BudgetExceededError


@pytest.fixture(scope="module")
def relations_n2():
    return run_suite(SuiteConfig(n_min=2, n_max=2, suites=("relations",)))


def test_relations_suite_passes_at_n2(relations_n2):
    summary = relations_n2.summary
    assert summary["fail"] == 0
    assert summary["pass"] == summary["total"] > 0
    assert not relations_n2.failed


def test_report_is_deterministic(relations_n2):
    again = run_suite(SuiteConfig(n_min=2, n_max=2, suites=("relations",)))
    assert to_json(again) == to_json(relations_n2)


def test_json_document_layout(relations_n2):
    doc = json.loads(to_json(relations_n2))
    assert set(doc) == {"version", "config", "cases", "summary"}
    assert set(doc["version"]) == {"tool", "schema"}
    ids = [case["id"] for case in doc["cases"]]
    assert ids == sorted(ids)
    assert all("wall_time" not in case for case in doc["cases"])


def test_timings_only_when_requested():
    config = SuiteConfig(n_min=2, n_max=2, suites=("relations",), r_values=(0,), timings=True)
    doc = json.loads(to_json(run_suite(config)))
    assert all("wall_time" in case for case in doc["cases"])


def test_csv_parses_back(relations_n2):
    rows = list(csv.DictReader(io.StringIO(to_csv(relations_n2))))
    assert len(rows) == len(relations_n2.cases)
    row = next(r for r in rows if r["id"] == "relations/plucker-psi/n2/r0")
    assert row["status"] == PASS
    assert json.loads(row["metrics.relations"]) == 1


def test_text_report(relations_n2):
    text = to_text(relations_n2)
    assert "relations/poset/n2" in text
    assert text.rstrip().endswith("0 not determined")
    assert render(relations_n2, "text") == text
    with pytest.raises(ValueError):
        render(relations_n2, "xml")


def test_metrics_line():
    assert metrics_line({"dim": 6, "e": 15, "reg": 4, "a": -2, "h_degree": 4}) == "dim=6 e=15 reg=4 a=-2"
    assert metrics_line({"b": 1, "a": 2}) == "a=2 b=1"


def test_emit_report_writes_file(tmp_path, relations_n2):
    out = tmp_path / "nested" / "report.json"
    payload = emit_report(relations_n2, "json", str(out))
    assert out.read_text(encoding="utf-8") == payload


def test_budget_overrun_is_not_determined():
    config = SuiteConfig(n_min=2, n_max=2, suites=("kernel",), max_pairs=1)
    doc = run_suite(config)
    assert [c.status for c in doc.cases] == [NOT_DETERMINED, NOT_DETERMINED]
    assert all("budget" in c.metrics for c in doc.cases)
    assert doc.failed


def test_errors_become_failures():
    def broken(budget):
        raise ValueError("boom")

    config = SuiteConfig(n_min=2, n_max=2)
    result = run_case(Case("custom/broken", "relations", broken), config)
    assert result.status == FAIL
    assert result.error == "boom"
    ok = run_case(Case("custom/ok", "relations", lambda budget: CaseOutcome(True, {"x": 1})), config)
    assert ok.status == PASS


def test_optional_not_determined_does_not_fail():
    doc = ReportDocument("0", "0", {}, [])
    assert not doc.failed
    config = SuiteConfig(n_min=2, n_max=2)

    def starved(budget):
        raise BudgetExceededError("out of pairs", {"pairs": 1})

    doc.cases.append(run_case(Case("custom/starved", "fiber", starved), config))
    assert doc.summary[NOT_DETERMINED] == 1
    assert not doc.failed


def test_slow_cases_are_opt_in():
    fast = build_cases(SuiteConfig(n_min=4, n_max=4, suites=("fiber",)))
    slow = build_cases(SuiteConfig(n_min=4, n_max=4, suites=("fiber",), include_slow=True))
    assert "fiber/report/n4/r1" not in {c.case_id for c in fast}
    assert "fiber/report/n4/r1" in {c.case_id for c in slow}


def test_r_filter_limits_cases():
    cases = build_cases(SuiteConfig(n_min=3, n_max=3, suites=("relations",), r_values=(0,)))
    ids = {c.case_id for c in cases}
    assert "relations/plucker-psi/n3/r0" in ids
    assert "relations/plucker-psi/n3/r1" not in ids
    assert "relations/lap-psi/n3" not in ids


def test_cli_rejects_small_n(capsys):
    assert main(["suite", "--n", "1"]) == 2


def test_cli_rejects_unknown_relation_family():
    assert main(["fiber", "report", "--n", "4", "--r", "2"]) == 2


def test_cli_prints_minor_table_as_json(capsys):
    assert main(["hankel", "minors", "--n", "2", "--r", "1"]) == 0
    table = json.loads(capsys.readouterr().out)
    assert len(table) == 6
    assert table["[3,4]"] == "-x4^2"


def test_cli_prints_minor_lines(capsys):
    assert main(["hankel", "minors", "--n", "2", "--r", "1", "--text"]) == 0
    out = capsys.readouterr().out
    assert "[3,4] = -x4^2" in out
    assert len(out.strip().splitlines()) == 6


def test_cli_fiber_report_json(capsys):
    assert main(["fiber", "report", "--n", "2", "--r", "0", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["hilbert"]["dim"] == 5
    assert doc["hilbert"]["e"] == 2


def test_cli_suite_writes_report(tmp_path, capsys):
    out = tmp_path / "report.csv"
    code = main(["suite", "--n", "2", "--r", "0", "--suites", "relations", "--format", "csv", "--out", str(out)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert out.read_text(encoding="utf-8").startswith("id,suite,status")


def test_cli_fiber_kernel_emits_basis(capsys):
    assert main(["fiber", "kernel", "--n", "2", "--r", "0", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["equal"]
    assert len(doc["kernel"]) == doc["kernel_generators"] == 1
    assert main(["fiber", "kernel", "--n", "2", "--r", "0"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == doc["kernel"][0]
    assert lines[-1].startswith("# ")


def test_cli_flap_json_metadata(capsys):
    assert main(["laplace", "flap", "--n", "2", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert (doc["n"], doc["a"], doc["term_count"], doc["degree"]) == (2, None, 3, 2)
    assert doc["normalization"]["anchor"] == "T[2,4]^2"
    assert doc["normalization"]["coefficient"] == "-1"


def test_cli_lap_json_metadata(capsys):
    assert main(["laplace", "lap", "--n", "4", "--a", "5,6", "--json"]) == 0
    (relation,) = json.loads(capsys.readouterr().out)["relations"]
    assert relation["a"] == [5, 6]
    assert (relation["n"], relation["term_count"], relation["degree"]) == (4, 3, 2)


def test_unexpected_exception_fails_only_its_case():
    def broken(budget):
        raise TypeError("unsupported operand")

    config = SuiteConfig(n_min=2, n_max=2)
    result = run_case(Case("custom/type-error", "relations", broken), config)
    assert result.status == FAIL
    assert result.error == repr(TypeError("unsupported operand"))


def test_budget_overrun_names_the_groebner_run():
    config = SuiteConfig(n_min=2, n_max=2, suites=("kernel",), r_values=(0,), max_pairs=1)
    doc = run_suite(config)
    (case,) = doc.cases
    assert case.metrics["budget"]["stage"] == "graph of I_2(H[0])"
    assert "graph of I_2(H[0])" in case.error
    assert budget_line(case.metrics["budget"]) in to_text(doc)
