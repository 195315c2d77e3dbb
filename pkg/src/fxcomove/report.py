"""JSON and CSV emission, content hashing and the run manifest.

Floats are written with Python's shortest round-trip representation, in
JSON and CSV alike, so both formats reproduce the in-memory doubles exactly.
NaN and infinities become JSON ``null`` (CSV: empty cell).
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable

import numpy as np

SCHEMA_VERSION = "1.0"
COMOVEMENT_COLUMNS = ("date", "zeta", "delta_zeta")
BAND_COLUMNS = ("band_lo", "band_hi")


def to_jsonable(obj: Any) -> Any:
    """Recursively convert numpy containers and scalars; non-finite floats become ``None``."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps_json(payload: dict) -> str:
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    return repr(x) if math.isfinite(x) else ""


def comovement_rows(path, bands=None) -> tuple[tuple[str, ...], list[list]]:
    """Rows aligned on the fit dates; ``delta_zeta`` at date ``t`` is ``zeta[t+1] - zeta[t]``."""
    cols = COMOVEMENT_COLUMNS + (BAND_COLUMNS if bands is not None else ())
    rows = []
    n = len(path.zeta)
    for t in range(n):
        row = [path.dates[t], path.zeta[t], path.delta_zeta[t] if t < n - 1 else None]
        if bands is not None:
            row += [bands.lower[t], bands.upper[t]]
        rows.append(row)
    return cols, rows


def dumps_csv(columns: Iterable[str], rows: Iterable[Iterable]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(columns))
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def comovement_payload(path, bands=None, extra: dict | None = None) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "stage": "comovement", **path.to_dict()}
    if bands is not None:
        out["bands"] = bands.to_dict()
    if extra:
        out.update(extra)
    return out


def stage_payload(stage: str, body: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "stage": stage, **body}


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


class ArtifactWriter:
    """Writes artifacts under one directory and records them for the manifest."""

    def __init__(self, out_dir: Path):
        self.out_dir = Path(out_dir)
        self.artifacts: list[dict] = []

    def write_text(self, name: str, text: str, stage: str) -> Path:
        path = self.out_dir / name
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        self.artifacts.append({"path": name, "stage": stage, "sha256": sha256_file(path)})
        return path

    def write_json(self, name: str, payload: dict, stage: str) -> Path:
        return self.write_text(name, dumps_json(payload), stage)

    def write_csv(self, name: str, columns, rows, stage: str) -> Path:
        return self.write_text(name, dumps_csv(columns, rows), stage)

    def manifest(self, status: str, stages: list[str], config: dict, failed_stage=None, error=None) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "status": status,
            "stages_completed": list(stages),
            "failed_stage": failed_stage,
            "error": error,
            "config": config,
            "artifacts": sorted(self.artifacts, key=lambda a: a["path"]),
        }

    def write_manifest(self, manifest: dict, name: str = "manifest.json") -> Path:
        path = self.out_dir / name
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(dumps_json(manifest))
        return path


def read_csv_numeric(path) -> tuple[list[str], list[list[float | None]]]:
    """Parse a CSV written by :func:`dumps_csv` back into floats (``None`` for empty cells)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[_parse_cell(v) for v in row] for row in reader]
    return header, rows


def _parse_cell(v: str):
    if v == "":
        return None
    try:
        return float(v)
    except ValueError:
        return v
