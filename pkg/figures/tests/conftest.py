"""Fixtures synthesizing harness-schema output directories."""

from __future__ import annotations

import json

import numpy as np
import pytest

RECORDS_HEADER = "method,n,a,rep,c_hat,stat,status,runtime_us"


def write_records(path, rows):
    lines = [RECORDS_HEADER]
    for method, n, a, rep, c_hat in rows:
        a_cell = "" if a is None else repr(float(a))
        lines.append(f"{method},{n},{a_cell},{rep},{c_hat!r},1.0,ok,0")
    path.write_text("\n".join(lines) + "\n")


def synth_rows(n_values=(50, 100), reps=40, a_values=(50.0, 100.0), seed=3):
    rng = np.random.default_rng(seed)
    rows = []
    for n in n_values:
        for rep in range(reps):
            rows.append(("GS", n, None, rep, float(rng.uniform(0.01, 0.99))))
            for a in a_values:
                rows.append(("SSS", n, a, rep, float(np.clip(rng.normal(0.5, 0.15), 0.01, 0.99))))
    return rows


@pytest.fixture
def harness_dir(tmp_path):
    """A synthetic output directory with records.csv and a null manifest."""
    write_records(tmp_path / "records.csv", synth_rows())
    (tmp_path / "manifest.json").write_text(json.dumps({
        "preset": "paper-null",
        "config": {"beta1": 0.0, "c0": 0.5},
    }))
    return tmp_path


@pytest.fixture
def weak_harness_dir(tmp_path):
    """Synthetic output with a weak-signal manifest (beta1 != 0)."""
    write_records(tmp_path / "records.csv", synth_rows(seed=5))
    (tmp_path / "manifest.json").write_text(json.dumps({
        "preset": "paper-weak",
        "config": {"beta1": -0.1, "c0": 0.5},
    }))
    return tmp_path
