"""Rendering from synthetic harness outputs."""

from __future__ import annotations

import numpy as np
import pytest
from conftest import synth_rows, write_records

from survsplit_figures import (
    FigureSpec,
    build_figure,
    gaussian_kde,
    read_records,
    read_run_info,
    render,
    silverman_bandwidth,
)
from survsplit_figures.cli import main


def test_read_records_filters_flagged(tmp_path):
    write_records(tmp_path / "records.csv", synth_rows(reps=5))
    text = (tmp_path / "records.csv").read_text()
    text += "GS,50,,99,,,no_cut,0\n"
    (tmp_path / "records.csv").write_text(text)
    rows = read_records(tmp_path)
    assert all(r.c_hat == r.c_hat for r in rows)  # no NaN survived
    assert not any(r.n == 50 and r.method == "GS" and r.c_hat != r.c_hat for r in rows)


def test_read_records_missing_column(tmp_path):
    (tmp_path / "records.csv").write_text("method,n,a,rep\nGS,50,,0\n")
    with pytest.raises(ValueError, match="missing column"):
        read_records(tmp_path)


def test_read_records_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_records(tmp_path)


def test_run_info_without_manifest(tmp_path):
    info = read_run_info(tmp_path)
    assert info.beta1 is None and info.c0 is None


def test_kde_integrates_to_one():
    rng = np.random.default_rng(0)
    values = rng.normal(0.5, 0.1, 200)
    grid = np.linspace(-0.5, 1.5, 2001)
    dens = gaussian_kde(values, grid, 0.05)
    assert float(np.sum(dens) * (grid[1] - grid[0])) == pytest.approx(1.0, abs=1e-3)
    assert silverman_bandwidth(values) > 0


def test_render_writes_png_and_svg(harness_dir, tmp_path):
    out = tmp_path / "figs"
    written = render(FigureSpec(input_dir=str(harness_dir), output_dir=str(out)))
    names = sorted(p.name for p in written)
    assert names == ["cutpoints.png", "cutpoints.svg"]
    for p in written:
        assert p.stat().st_size > 1000


def test_render_deterministic_bytes(harness_dir, tmp_path):
    spec1 = FigureSpec(input_dir=str(harness_dir), output_dir=str(tmp_path / "a"),
                       bandwidth=0.03)
    spec2 = FigureSpec(input_dir=str(harness_dir), output_dir=str(tmp_path / "b"),
                       bandwidth=0.03)
    w1 = render(spec1)
    w2 = render(spec2)
    for p1, p2 in zip(w1, w2):
        assert p1.read_bytes() == p2.read_bytes()


def test_panels_structure(harness_dir):
    rows = read_records(harness_dir)
    info = read_run_info(harness_dir)
    fig, footer = build_figure(rows, info)
    visible = [ax for ax in fig.axes if ax.get_visible()]
    assert len(visible) == 2  # n = 50 and 100
    for ax in visible:
        assert len(ax.patches) == 50            # GS histogram bins
        assert len(ax.lines) == 2               # one KDE per a value
    assert "Silverman" in footer


def test_weak_manifest_draws_reference_line(weak_harness_dir):
    rows = read_records(weak_harness_dir)
    info = read_run_info(weak_harness_dir)
    fig, _ = build_figure(rows, info)
    ax = fig.axes[0]
    vlines = [ln for ln in ax.lines if ln.get_linestyle() == ":"]
    assert len(vlines) == 1
    assert vlines[0].get_xdata()[0] == 0.5


def test_null_manifest_no_reference_line(harness_dir):
    rows = read_records(harness_dir)
    info = read_run_info(harness_dir)
    fig, _ = build_figure(rows, info)
    assert all(ln.get_linestyle() != ":" for ln in fig.axes[0].lines)


def test_kde_skipped_below_ten_points(tmp_path):
    rows = [("GS", 50, None, 0, 0.4)]
    rows += [("SSS", 50, 50.0, r, 0.5) for r in range(3)]
    write_records(tmp_path / "records.csv", rows)
    spec = FigureSpec(input_dir=str(tmp_path), output_dir=str(tmp_path / "o"))
    written = render(spec)
    assert written
    rows_read = read_records(tmp_path)
    fig, footer = build_figure(rows_read, read_run_info(tmp_path))
    assert len(fig.axes[0].lines) == 0
    assert "none" in footer


def test_requested_panel_must_exist(harness_dir):
    rows = read_records(harness_dir)
    with pytest.raises(ValueError, match="absent"):
        build_figure(rows, read_run_info(harness_dir), panels=(777,))


def test_cli_end_to_end(harness_dir, tmp_path, capsys):
    out = tmp_path / "figs"
    code = main(["--in", str(harness_dir), "--out", str(out), "--bandwidth", "0.05"])
    assert code == 0
    assert (out / "cutpoints.png").exists()
    code = main(["--in", str(tmp_path / "nowhere"), "--out", str(out)])
    assert code == 1
    code = main(["--in", str(harness_dir), "--out", str(out), "--bandwidth", "wide"])
    assert code == 1
