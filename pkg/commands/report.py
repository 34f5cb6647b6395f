"""
Report model and serialization.

JSON schema (version 1):

    {
      "schema_version": 1,
      "version": "<tool version>",
      "config": {<RunConfig.echo()>},
      "summary": {"total": n, "pass": n, "fail": n, "skipped-boundary": n},
      "records": [
        {"id": str, "anchor": str, "status": "pass" | "fail" | "skipped-boundary",
         "message": str, "data": {...}, "error_type": str | null,
         "seconds": float (only with --timings)}
      ]
    }

Keys are sorted, integers and rationals inside data are written as strings
where they are dictionary keys or Fractions. The CSV form has one row per
record with the columns of CSV_COLUMNS; data is the compact JSON of the
record's data.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List
import csv
import io
import json

from rich.console import Console
from rich.table import Table

SCHEMA_VERSION = 1
CSV_COLUMNS = ['id', 'anchor', 'status', 'message', 'error_type', 'data']
STATUS_STYLES = {'pass': 'green', 'fail': 'red', 'skipped-boundary': 'yellow'}


def jsonable(value: Any) -> Any:
    """Plain JSON types only: str keys, Fractions as strings, tuples and sets as lists."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted((jsonable(v) for v in value), key=repr)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Enum):
        return value.value
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    return repr(value)


@dataclass
class Report:
    """
    Attributes:
        version: tool version
        config: configuration echo
        records: check results (anything with as_dict(timings) and status)
        timings: emit per-record runtimes
    """
    version: str
    config: Dict[str, Any] = field(default_factory=dict)
    records: List[Any] = field(default_factory=list)
    timings: bool = False

    @property
    def ok(self) -> bool:
        return all(r.status != 'fail' for r in self.records)

    def summary(self) -> Dict[str, int]:
        out = {'total': len(self.records), 'pass': 0, 'fail': 0, 'skipped-boundary': 0}
        for r in self.records:
            out[r.status] = out.get(r.status, 0) + 1
        return out

    def as_dict(self) -> Dict[str, Any]:
        return {
            'schema_version': SCHEMA_VERSION,
            'version': self.version,
            'config': jsonable(self.config),
            'summary': self.summary(),
            'records': [jsonable(r.as_dict(self.timings)) for r in self.records],
        }


def _json(report: Report) -> str:
    return json.dumps(report.as_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _csv(report: Report) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for record in report.as_dict()['records']:
        row = {k: record.get(k) for k in CSV_COLUMNS if k != 'data'}
        row['error_type'] = row['error_type'] or ""
        row['data'] = json.dumps(record['data'], sort_keys=True, separators=(',', ':'), ensure_ascii=False)
        writer.writerow(row)
    return buffer.getvalue()


def _text(report: Report) -> str:
    data = report.as_dict()
    table = Table(title=f"Report (schema {SCHEMA_VERSION}, version {report.version})")
    table.add_column("Check", style="cyan", no_wrap=True)
    table.add_column("Status")
    table.add_column("Anchor", style="dim")
    table.add_column("Message")
    if report.timings:
        table.add_column("Seconds", justify="right")
    for record in data['records']:
        style = STATUS_STYLES.get(record['status'], "white")
        row = [record['id'], f"[{style}]{record['status']}[/{style}]", record['anchor'], record['message']]
        if report.timings:
            row.append(str(record.get('seconds', "")))
        table.add_row(*row)
    console = Console(file=io.StringIO(), width=140, color_system=None, record=True)
    console.print(table)
    summary = data['summary']
    console.print(f"total {summary['total']}, pass {summary['pass']}, fail {summary['fail']}, "
                  f"skipped {summary['skipped-boundary']}")
    return console.export_text()


def emit_report(report: Report, fmt: str = 'json') -> bytes:
    """
    Serialize a report: UTF-8, LF line endings, identical bytes for identical input.

    Raises:
        ValueError: unknown format
    """
    writers = {'json': _json, 'csv': _csv, 'text': _text}
    if fmt not in writers:
        raise ValueError(f"unknown report format {fmt!r}")
    return writers[fmt](report).replace("\r\n", "\n").encode('utf-8')


def read_csv_report(data: bytes) -> List[Dict[str, Any]]:
    """Parse the CSV form back into records with their data tables."""
    rows = []
    for row in csv.DictReader(io.StringIO(data.decode('utf-8'))):
        row['data'] = json.loads(row['data'])
        row['error_type'] = row['error_type'] or None
        rows.append(row)
    return rows
