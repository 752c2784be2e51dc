"""Reading harness output files (records.csv, manifest.json)."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

REQUIRED_COLUMNS = ("method", "n", "a", "rep", "c_hat", "stat", "status")


@dataclass(frozen=True)
class RecordRow:
    method: str
    n: int
    a: float | None
    c_hat: float


@dataclass(frozen=True)
class RunInfo:
    """Model facts relevant to annotation, from manifest.json when present."""

    beta1: float | None = None
    c0: float | None = None
    preset: str | None = None


def read_records(input_dir: Path | str) -> list[RecordRow]:
    """Load usable cutpoint records; raises with a clear message on schema drift."""
    path = Path(input_dir) / "records.csv"
    if not path.exists():
        raise FileNotFoundError(f"{path}: records.csv not found in input directory")
    rows: list[RecordRow] = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise ValueError(f"{path}: records.csv missing column(s): {', '.join(missing)}")
        for rec in reader:
            if rec["status"] != "ok":
                continue
            c_hat = float(rec["c_hat"])
            if math.isnan(c_hat):
                continue
            rows.append(RecordRow(
                method=rec["method"],
                n=int(rec["n"]),
                a=float(rec["a"]) if rec["a"] else None,
                c_hat=c_hat,
            ))
    if not rows:
        raise ValueError(f"{path}: no usable records (every row flagged or file empty)")
    return rows


def read_run_info(input_dir: Path | str) -> RunInfo:
    path = Path(input_dir) / "manifest.json"
    if not path.exists():
        return RunInfo()
    payload = json.loads(path.read_text())
    config = payload.get("config", {})
    return RunInfo(
        beta1=config.get("beta1"),
        c0=config.get("c0"),
        preset=payload.get("preset"),
    )
