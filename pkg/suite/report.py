import csv
import io
import json
import logging
from pathlib import Path
from typing import Optional

from suite.runner import NOT_DETERMINED, ReportDocument

logger = logging.getLogger(__name__)

TEXT_METRICS = ("dim", "e", "reg", "a")


def to_json(doc: ReportDocument) -> str:
    return json.dumps(doc.to_dict(), indent=2, sort_keys=True, default=str) + "\n"


def _flatten(prefix: str, value, out: dict):
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], out)
    else:
        out[prefix] = json.dumps(value, sort_keys=True, default=str)


def to_csv(doc: ReportDocument) -> str:
    """One row per case; metric values are JSON-encoded so they parse back losslessly."""
    rows = []
    for case in doc.to_dict()["cases"]:
        row = {"id": case["id"], "suite": case["suite"], "status": case["status"]}
        flat: dict = {}
        _flatten("", case["metrics"], flat)
        row.update({f"metrics.{k}": v for k, v in flat.items()})
        if "wall_time" in case:
            row["wall_time"] = case["wall_time"]
        rows.append(row)
    columns = ["id", "suite", "status"]
    extra = sorted({k for row in rows for k in row} - set(columns))
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns + extra, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def metrics_line(metrics: dict) -> str:
    """'dim=6 e=15 reg=4 a=-2' for fiber-style metrics, key=value otherwise."""
    if all(key in metrics for key in TEXT_METRICS):
        return " ".join(f"{key}={metrics[key]}" for key in TEXT_METRICS)
    return " ".join(f"{key}={metrics[key]}" for key in sorted(metrics))


def budget_line(stats: dict) -> str:
    """Where a case ran out of budget and how far it got."""
    stage = stats.get("stage", stats.get("label", "?"))
    return f"budget spent in {stage} after {stats.get('pairs', 0)} pairs"


def to_text(doc: ReportDocument) -> str:
    width = 44
    lines = [
        "-" * (width + 40),
        f"{'Case':<{width}}{'Status':<16}Metrics",
        "-" * (width + 40),
    ]
    for case in doc.cases:
        if case.status == NOT_DETERMINED and "budget" in case.metrics:
            detail = budget_line(case.metrics["budget"])
        else:
            detail = metrics_line(case.metrics)
        lines.append(f"{case.case_id:<{width}}{case.status:<16}{detail}")
    summary = doc.summary
    lines.append("-" * (width + 40))
    lines.append(
        f"{summary['total']} cases: {summary['pass']} pass, {summary['fail']} fail, "
        f"{summary['not-determined']} not determined"
    )
    return "\n".join(lines) + "\n"


def render(doc: ReportDocument, fmt: str = "json") -> str:
    if fmt == "json":
        return to_json(doc)
    if fmt == "csv":
        return to_csv(doc)
    if fmt == "text":
        return to_text(doc)
    raise ValueError(f"unknown report format {fmt!r}")


def emit_report(doc: ReportDocument, fmt: str = "json", out: Optional[str] = None) -> str:
    """Serialize `doc`; write to `out` when given, otherwise return the text only."""
    payload = render(doc, fmt)
    if out is not None:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(payload, encoding="utf-8")
        logger.info("[suite] report written to %s", path)
    return payload
