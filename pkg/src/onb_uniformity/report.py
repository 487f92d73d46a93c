import csv
import io
import json
from pathlib import Path
from typing import Literal

from onb_uniformity.core.logger import get_logger
from onb_uniformity.routes.dto import RunManifest

logger = get_logger(__name__)

ReportFormat = Literal["json", "csv"]
CSV_FIELDS = ["kind", "name", "value", "exact", "stderr", "bound", "pass"]


def manifest_payload(manifest: RunManifest) -> dict:
    return manifest.model_dump(mode="json", by_alias=True)


def csv_rows(manifest: RunManifest) -> list[dict]:
    """One row per result value and one per check."""
    results = manifest.results
    rows = []
    for name, value in results.float_values.items():
        rows.append({
            "kind": "exact" if name in results.exact_values else "float",
            "name": name,
            "value": repr(value),
            "exact": results.exact_values.get(name, ""),
            "stderr": repr(results.stderr_values[name]) if name in results.stderr_values else "",
        })
    for name, exact in results.exact_values.items():
        if name not in results.float_values:
            rows.append({"kind": "exact", "name": name, "exact": exact})
    for check in manifest.checks:
        rows.append({
            "kind": "check",
            "name": f"{check.name} [{check.bound_name}]",
            "value": repr(check.observed),
            "bound": repr(check.bound),
            "pass": str(check.passed).lower(),
        })
    return rows


def render_report(manifest: RunManifest, fmt: ReportFormat = "json") -> str:
    if fmt == "json":
        return json.dumps(manifest_payload(manifest), indent=2) + "\n"
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in csv_rows(manifest):
        writer.writerow({key: row.get(key, "") for key in CSV_FIELDS})
    return buffer.getvalue()


def emit_report(manifest: RunManifest, fmt: ReportFormat, path: str | Path) -> Path:
    """Write the report atomically; an unwritable path raises OSError."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(render_report(manifest, fmt), encoding="utf-8")
    tmp.replace(path)
    logger.info("report written to %s", path)
    return path


def load_manifest(path: str | Path) -> RunManifest:
    return RunManifest.model_validate_json(Path(path).read_text(encoding="utf-8"))
