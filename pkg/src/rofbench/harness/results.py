"""Result persistence with scenario provenance.

Every row carries the scenario hash as its last column.  Files are
append-only: appending rows of another scenario, or with other columns, is
refused.  Numbers are written with ``repr`` so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from ..errors import ConfigError

HASH_COLUMN = "scenario_hash"


def run_directory(root, scenario_hash: str, now: datetime | None = None) -> Path:
    """``<root>/<UTC timestamp>-<hash prefix>``, created if missing."""
    now = now or datetime.now(timezone.utc)
    path = Path(root) / f"{now.strftime('%Y%m%dT%H%M%SZ')}-{scenario_hash[:12]}"
    path.mkdir(parents=True, exist_ok=True)
    return path


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path, columns: Sequence[str], rows: Iterable[Mapping], scenario_hash: str) -> Path:
    path = Path(path)
    header = list(columns) + [HASH_COLUMN]
    if path.exists() and path.stat().st_size:
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            existing = next(reader)
            if existing != header:
                raise ConfigError(f"{path}: columns {existing} differ from {header}")
            hashes = {row[-1] for row in reader if row}
        if hashes - {scenario_hash}:
            raise ConfigError(f"{path}: holds rows of another scenario; refusing to mix hashes")
        fresh = False
    else:
        fresh = True
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if fresh:
        writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in columns] + [scenario_hash])
    with path.open("a", newline="") as fh:
        fh.write(buf.getvalue())
    return path


def read_csv(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))


def write_json(path, columns: Sequence[str], rows: Iterable[Mapping], scenario_hash: str) -> Path:
    path = Path(path)
    rows = [{c: row[c] for c in columns} for row in rows]
    if path.exists():
        old = json.loads(path.read_text())
        if old.get(HASH_COLUMN) != scenario_hash or old.get("columns") != list(columns):
            raise ConfigError(f"{path}: holds rows of another scenario or layout; refusing to mix")
        rows = old["rows"] + rows
    doc = {HASH_COLUMN: scenario_hash, "columns": list(columns), "rows": rows}
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    return path


def write_table(directory, name: str, columns, rows, scenario_hash: str, fmt: str = "csv") -> Path:
    if fmt == "csv":
        return write_csv(Path(directory) / f"{name}.csv", columns, rows, scenario_hash)
    if fmt == "json":
        return write_json(Path(directory) / f"{name}.json", columns, rows, scenario_hash)
    raise ConfigError(f"unknown output format {fmt!r}")
