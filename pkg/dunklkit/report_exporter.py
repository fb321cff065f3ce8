"""
Report exporter: JSON, CSV and Markdown artifacts for verification and experiment reports

Output is a pure function of the report: sorted JSON keys, fixed float formatting and
"\\n" line endings, so two emissions of the same results are byte-identical.
"""

import csv
import io
import json
import logging
import math
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

from jinja2 import Environment, FileSystemLoader

from .errors import ReportIOError
from .harness.suite_sdk import REPORT_SCHEMA_VERSION, SuiteReport

logger = logging.getLogger(__name__)

PACKAGE_DIR = Path(__file__).parent
SCHEMA_DIR = PACKAGE_DIR / "schemas"
TEMPLATE_DIR = PACKAGE_DIR / "templates"

FORMATS = ("json", "csv", "md")


@lru_cache(maxsize=1)
def csv_columns() -> Dict[str, List[str]]:
    """Documented CSV headers by table name"""
    with open(SCHEMA_DIR / "csv_columns.json", encoding="utf-8") as fh:
        return json.load(fh)["tables"]


def _clean(value: Any) -> Any:
    # JSON has no infinities; they are written as strings
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if hasattr(value, "item") and callable(value.item):
        return _clean(value.item())
    return value


def dumps_json(payload: Dict[str, Any]) -> str:
    return json.dumps(_clean(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _cell(value: Any) -> str:
    value = _clean(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return " ".join(_cell(v) for v in value)
    return str(value)


def dumps_csv(rows: Iterable[Dict[str, Any]], columns: Sequence[str]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buffer.getvalue()


def verify_payload(reports: Sequence[SuiteReport], seed: int) -> Dict[str, Any]:
    """One report as is; several merged under suite 'all' with suite-prefixed check ids"""
    if len(reports) == 1:
        return reports[0].to_dict()
    checks = []
    for report in reports:
        for check in report.to_dict()["checks"]:
            checks.append({**check, "id": f"{report.suite}/{check['id']}"})
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "suite": "all",
        "seed": seed,
        "passed": all(r.passed for r in reports),
        "checks": checks,
    }


def _table(payload: Dict[str, Any]) -> Dict[str, Any]:
    """Columns and rows of a verification or experiment payload"""
    if "checks" in payload:
        columns = csv_columns()["verify"]
        suite = payload.get("suite")
        rows = []
        for check in payload["checks"]:
            owner, _, local = check["id"].rpartition("/")
            rows.append({**check, "suite": owner or suite, "id": local if owner else check["id"]})
        return {"columns": columns, "rows": rows, "heading": "Checks"}
    experiment = payload.get("experiment")
    columns = payload.get("columns") or csv_columns().get(experiment)
    if not columns:
        raise ReportIOError(f"report has neither checks nor a known experiment table ({experiment!r})")
    return {"columns": columns, "rows": payload.get("rows", []), "heading": "Rows"}


class ReportExporter:
    """Writes reports below one output directory"""

    def __init__(self, output_dir: Union[str, Path] = "dunklkit_reports"):
        self.output_dir = Path(output_dir)
        self.environment = Environment(
            loader=FileSystemLoader(str(TEMPLATE_DIR)),
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
            autoescape=False,
        )

    def _write(self, path: Path, text: str) -> Path:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as e:
            logger.error(f"Failed to write report {path}: {e}")
            raise ReportIOError(f"cannot write {path}: {e}") from e
        logger.info(f"Wrote {path}")
        return path

    def render_markdown(self, payload: Dict[str, Any]) -> str:
        table = _table(payload)
        title = payload.get("name") or f"verify {payload.get('suite')}"
        if "experiment" in payload:
            title = f"{payload['experiment']}: {title}"
        template = self.environment.get_template("report.md.j2")
        return template.render(
            title=title,
            schema_version=payload.get("schema_version", REPORT_SCHEMA_VERSION),
            seed=payload.get("seed"),
            passed=payload.get("passed"),
            convention=(payload.get("metadata") or {}).get("convention"),
            summary=sorted((k, _cell(v)) for k, v in (payload.get("summary") or {}).items()),
            heading=table["heading"],
            columns=table["columns"],
            rows=[[_cell(row.get(c)).replace("|", "\\|") for c in table["columns"]] for row in table["rows"]],
        )

    def render(self, payload: Dict[str, Any], fmt: str) -> str:
        if fmt == "json":
            return dumps_json(payload)
        if fmt == "csv":
            table = _table(payload)
            return dumps_csv(table["rows"], table["columns"])
        if fmt == "md":
            return self.render_markdown(payload)
        raise ReportIOError(f"unknown report format {fmt!r}; expected one of {FORMATS}")

    def emit(self, payload: Dict[str, Any], path: Union[str, Path], fmt: Optional[str] = None) -> Path:
        """Write one payload; the format defaults to the file suffix"""
        path = Path(path)
        if not path.is_absolute():
            path = self.output_dir / path
        fmt = fmt or path.suffix.lstrip(".")
        return self._write(path, self.render(payload, fmt))

    def export_verify(self, reports: Sequence[SuiteReport], name: str, seed: int) -> Path:
        return self.emit(verify_payload(reports, seed), f"verify_{name}.json")

    def export_experiment(self, payload: Dict[str, Any], stem: str, formats: Sequence[str]) -> Dict[str, str]:
        written = {}
        try:
            for fmt in formats:
                written[fmt] = str(self.emit(payload, f"{stem}.{fmt}", fmt))
        except Exception as e:
            logger.error(f"Failed to export experiment {stem}: {e}")
            raise
        return written

    def convert(self, source: Union[str, Path], target: Union[str, Path]) -> Path:
        """Re-emit a JSON report as JSON, CSV or Markdown by the target suffix"""
        source, target = Path(source), Path(target)
        try:
            payload = json.loads(source.read_text(encoding="utf-8"))
        except OSError as e:
            raise ReportIOError(f"cannot read {source}: {e}") from e
        except json.JSONDecodeError as e:
            raise ReportIOError(f"{source} is not a JSON report: {e}") from e
        return self._write(target, self.render(payload, target.suffix.lstrip(".")))


def emit_report(payload: Dict[str, Any], path: Union[str, Path], fmt: Optional[str] = None) -> Path:
    """Write one payload to path (json, csv or md, by suffix unless fmt is given)"""
    path = Path(path)
    return ReportExporter(path.parent).emit(payload, path.name, fmt)


def load_report(path: Union[str, Path]) -> Dict[str, Any]:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


__all__ = [
    "FORMATS",
    "ReportExporter",
    "csv_columns",
    "dumps_csv",
    "dumps_json",
    "emit_report",
    "load_report",
    "verify_payload",
]
