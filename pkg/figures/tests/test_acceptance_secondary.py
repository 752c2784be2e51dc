"""A10: render reduced paper-null and paper-weak harness runs end to end.

The engine is driven purely through its command-line interface and file
formats; nothing from its package is imported here.
"""

from __future__ import annotations

import os
import subprocess
import sys
from pathlib import Path

import pytest

from survsplit_figures import FigureSpec, build_figure, read_records, read_run_info, render

ENGINE_SRC = Path(__file__).resolve().parents[2] / "src"
A_COUNT = 7  # sqrt(n) + fixed 50,60,...,100


def run_engine(preset: str, out_dir: Path) -> None:
    env = dict(os.environ, PYTHONPATH=str(ENGINE_SRC))
    cmd = [sys.executable, "-m", "survsplit.cli", "simulate",
           "--preset", preset, "--reps", "20", "--seed", "20250808",
           "--grid-points", "512", "--threads", "0",
           "--out-dir", str(out_dir)]
    subprocess.run(cmd, check=True, env=env, capture_output=True, text=True)


@pytest.fixture(scope="module")
def harness_runs(tmp_path_factory):
    base = tmp_path_factory.mktemp("runs")
    dirs = {}
    for preset in ("paper-null", "paper-weak"):
        out = base / preset
        run_engine(preset, out)
        dirs[preset] = out
    return dirs


def test_a10_figure_pipeline(harness_runs, tmp_path):
    results = {}
    for preset, run_dir in harness_runs.items():
        out = tmp_path / preset
        written = render(FigureSpec(input_dir=str(run_dir), output_dir=str(out),
                                    basename=preset))
        assert sorted(p.suffix for p in written) == [".png", ".svg"]
        rows = read_records(run_dir)
        info = read_run_info(run_dir)
        fig, _ = build_figure(rows, info)
        visible = [ax for ax in fig.axes if ax.get_visible()]
        results[preset] = (visible, info)

    null_axes, null_info = results["paper-null"]
    weak_axes, weak_info = results["paper-weak"]
    ok = True
    for axes, info, want_line in ((null_axes, null_info, False), (weak_axes, weak_info, True)):
        ok &= len(axes) == 4                                  # one panel per n
        for ax in axes:
            ok &= len(ax.patches) == 50                       # GS histogram
            densities = [ln for ln in ax.lines if ln.get_linestyle() == "-"]
            ok &= len(densities) == A_COUNT                   # one curve per a
            vlines = [ln for ln in ax.lines if ln.get_linestyle() == ":"]
            ok &= (len(vlines) == 1 and vlines[0].get_xdata()[0] == 0.5) if want_line \
                else len(vlines) == 0
    print(f"\n[{'PASS' if ok else 'FAIL'}] A10: 4-panel figures for both presets, "
          f"{A_COUNT} densities per panel, reference line on weak preset only")
    assert ok
