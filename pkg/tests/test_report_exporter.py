import json
import math

import pytest

from dunklkit.errors import ReportIOError
from dunklkit.experiments import FATOU_COLUMNS
from dunklkit.harness import CheckResult, SuiteReport
from dunklkit.report_exporter import (
    ReportExporter,
    csv_columns,
    dumps_csv,
    dumps_json,
    emit_report,
    load_report,
    verify_payload,
)

EXPERIMENT_PAYLOAD = {
    "schema_version": "1.0",
    "experiment": "fatou",
    "name": "tiny",
    "seed": 3,
    "passed": True,
    "columns": FATOU_COLUMNS,
    "summary": {"decided": 2, "agreement_rate": 1.0},
    "rows": [
        {"x": [0.5], "a": 1.0, "h": 1.0, "bounded": True, "limit_exists": True, "limit_value": 0.25,
         "S_value": 0.5, "S_verdict": "finite", "seed": 3},
        {"x": [0.0], "a": 1.0, "h": 1.0, "bounded": False, "limit_exists": False, "limit_value": None,
         "S_value": math.inf, "S_verdict": "infinite", "seed": 3},
    ],
    "metadata": {"convention": "S^2 = ..."},
}


def _reports():
    ok = CheckResult(task_id="a", name="n", anchor="x", passed=True, details={"v": 1.0})
    bad = CheckResult(task_id="b", name="n", anchor="y", passed=False, error="too large")
    return [SuiteReport(suite="symbolic", seed=0, results=[ok]), SuiteReport(suite="means", seed=0, results=[bad])]


def test_json_is_deterministic():
    first = dumps_json(EXPERIMENT_PAYLOAD)
    assert first == dumps_json(json.loads(first))
    data = json.loads(first)
    assert data["rows"][1]["S_value"] == "inf"
    assert list(data) == sorted(data)
    assert first.endswith("}\n")


def test_csv_cells():
    text = dumps_csv(EXPERIMENT_PAYLOAD["rows"], FATOU_COLUMNS)
    lines = text.split("\n")
    assert lines[0] == ",".join(FATOU_COLUMNS)
    assert lines[1] == "0.5,1.0,1.0,true,true,0.25,0.5,finite,3"
    assert lines[2] == "0.0,1.0,1.0,false,false,,inf,infinite,3"
    assert "\r" not in text


def test_documented_columns():
    tables = csv_columns()
    assert tables["fatou"] == FATOU_COLUMNS
    assert tables["verify"][:2] == ["suite", "id"]


def test_verify_payload_merges_suites():
    single = verify_payload(_reports()[:1], 0)
    assert single["suite"] == "symbolic"
    merged = verify_payload(_reports(), 0)
    assert merged["suite"] == "all"
    assert not merged["passed"]
    assert [c["id"] for c in merged["checks"]] == ["symbolic/a", "means/b"]


def test_emit_and_convert(out_dir):
    exporter = ReportExporter(out_dir)
    written = exporter.export_experiment(EXPERIMENT_PAYLOAD, "tiny", ["json", "csv", "md"])
    assert set(written) == {"json", "csv", "md"}
    assert load_report(written["json"])["name"] == "tiny"
    md = (out_dir / "tiny.md").read_text(encoding="utf-8")
    assert md.startswith("# fatou: tiny")
    assert "| x | a | h |" in md
    assert "constant convention" in md

    target = exporter.convert(written["json"], out_dir / "again.csv")
    assert target.read_text(encoding="utf-8") == (out_dir / "tiny.csv").read_text(encoding="utf-8")


def test_verify_export_bytes_are_stable(out_dir):
    exporter = ReportExporter(out_dir)
    path = exporter.export_verify(_reports(), "all", 0)
    first = path.read_bytes()
    exporter.export_verify(_reports(), "all", 0)
    assert path.name == "verify_all.json"
    assert path.read_bytes() == first
    csv_path = exporter.convert(path, out_dir / "verify_all.csv")
    rows = csv_path.read_text(encoding="utf-8").splitlines()
    assert rows[1].startswith("symbolic,a,n,x,true")
    assert rows[2] == "means,b,n,y,false,too large"


def test_io_errors(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("not a directory")
    with pytest.raises(ReportIOError):
        ReportExporter(blocker).emit(EXPERIMENT_PAYLOAD, "tiny.json")
    with pytest.raises(ReportIOError):
        ReportExporter(tmp_path).convert(tmp_path / "absent.json", tmp_path / "x.csv")
    with pytest.raises(ReportIOError):
        ReportExporter(tmp_path).emit(EXPERIMENT_PAYLOAD, "tiny.xlsx")
    with pytest.raises(ReportIOError):
        ReportExporter(tmp_path).render({"experiment": "unknown"}, "csv")


def test_emit_report_json_round_trip(tmp_path):
    path = emit_report(EXPERIMENT_PAYLOAD, tmp_path / "nested" / "tiny.json")
    loaded = load_report(path)
    assert loaded["rows"][0] == EXPERIMENT_PAYLOAD["rows"][0]
    assert loaded["summary"] == EXPERIMENT_PAYLOAD["summary"]
