"""Multi-panel cutpoint figures: GS histograms with SSS density overlays.

One panel per sample size; the greedy-search cutpoint distribution is drawn
as a 50-bin histogram on [0,1] and each smooth-surrogate variant as a
Gaussian kernel density curve.  Rendering is read-only over harness output
and byte-deterministic for fixed inputs and bandwidth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import RecordRow, RunInfo, read_records, read_run_info

HIST_BINS = 50
KDE_MIN_POINTS = 10
_GRID = np.linspace(0.0, 1.0, 513)

matplotlib.rcParams["svg.hashsalt"] = "survsplit-figures"


@dataclass(frozen=True)
class FigureSpec:
    """What to render and where."""

    input_dir: str
    output_dir: str
    panels: tuple[int, ...] | None = None      # None = all sample sizes present
    bandwidth: float | str = "auto"            # kernel std in c units, or "auto"
    basename: str = "cutpoints"
    formats: tuple[str, ...] = ("png", "svg")


def silverman_bandwidth(values: np.ndarray) -> float:
    """Silverman's rule of thumb for a Gaussian kernel."""
    m = values.size
    sd = float(np.std(values, ddof=1)) if m > 1 else 0.0
    iqr = float(np.percentile(values, 75) - np.percentile(values, 25))
    spread = min(sd, iqr / 1.34) if iqr > 0 else sd
    if spread <= 0:
        spread = max(sd, 1e-3)
    return 0.9 * spread * m ** (-0.2)


def gaussian_kde(values: np.ndarray, grid: np.ndarray, bandwidth: float) -> np.ndarray:
    u = (grid[:, None] - values[None, :]) / bandwidth
    return np.exp(-0.5 * u * u).sum(axis=1) / (values.size * bandwidth * math.sqrt(2 * math.pi))


def _panel_groups(rows: list[RecordRow], n: int):
    gs = np.array([r.c_hat for r in rows if r.n == n and r.method == "GS"])
    a_values = sorted({r.a for r in rows if r.n == n and r.method == "SSS" and r.a is not None})
    sss = {a: np.array([r.c_hat for r in rows if r.n == n and r.method == "SSS" and r.a == a])
           for a in a_values}
    return gs, sss


def build_figure(rows: list[RecordRow], info: RunInfo,
                 panels: tuple[int, ...] | None = None,
                 bandwidth: float | str = "auto"):
    """Assemble the panel figure; returns (figure, bandwidth report)."""
    available = sorted({r.n for r in rows})
    wanted = tuple(panels) if panels else tuple(available)
    missing = [n for n in wanted if n not in available]
    if missing:
        raise ValueError(
            f"requested sample size(s) {missing} absent from records; available: {available}"
        )

    ncols = 2 if len(wanted) > 1 else 1
    nrows = math.ceil(len(wanted) / ncols)
    fig, axes = plt.subplots(nrows, ncols, figsize=(6.0 * ncols, 4.0 * nrows),
                             squeeze=False)
    bw_report: list[str] = []
    legend_handles = None
    for idx, n in enumerate(wanted):
        ax = axes[idx // ncols][idx % ncols]
        gs, sss = _panel_groups(rows, n)
        if gs.size:
            ax.hist(gs, bins=HIST_BINS, range=(0.0, 1.0), density=True,
                    color="0.75", edgecolor="0.55", linewidth=0.3, label="GS")
        panel_bw: list[float] = []
        for a, values in sss.items():
            if values.size < KDE_MIN_POINTS:
                continue
            h = bandwidth if isinstance(bandwidth, float) else silverman_bandwidth(values)
            panel_bw.append(h)
            label = f"SSS a={a:g}"
            ax.plot(_GRID, gaussian_kde(values, _GRID, h), linewidth=1.2, label=label)
        if info.beta1 not in (None, 0, 0.0) and info.c0 is not None:
            ax.axvline(info.c0, color="black", linestyle=":", linewidth=1.0,
                       label=f"true cutoff c0={info.c0:g}")
        ax.set_xlim(0.0, 1.0)
        ax.set_title(f"n = {n}")
        ax.set_xlabel("estimated cutpoint")
        ax.set_ylabel("density")
        if legend_handles is None:
            legend_handles = ax.get_legend_handles_labels()
        if panel_bw:
            bw_report.append(f"n={n}: {min(panel_bw):.4f}-{max(panel_bw):.4f}")
    for idx in range(len(wanted), nrows * ncols):
        axes[idx // ncols][idx % ncols].set_visible(False)

    if legend_handles and legend_handles[0]:
        fig.legend(*legend_handles, loc="upper center", ncol=4, fontsize=8,
                   bbox_to_anchor=(0.5, 1.0))
    mode = "fixed" if isinstance(bandwidth, float) else "Silverman"
    footer = f"KDE bandwidth ({mode}): " + ("; ".join(bw_report) if bw_report else "none (too few points)")
    fig.text(0.01, 0.005, footer, fontsize=7, color="0.3")
    fig.tight_layout(rect=(0.0, 0.02, 1.0, 0.95))
    return fig, footer


def render(spec: FigureSpec) -> list[Path]:
    """Render the figure(s) described by ``spec``; returns written paths."""
    rows = read_records(spec.input_dir)
    info = read_run_info(spec.input_dir)
    bandwidth = spec.bandwidth
    if isinstance(bandwidth, str):
        if bandwidth != "auto":
            raise ValueError(f"bandwidth must be a positive number or 'auto', got {bandwidth!r}")
    elif not bandwidth > 0:
        raise ValueError("bandwidth must be positive")
    fig, _ = build_figure(rows, info, panels=spec.panels, bandwidth=bandwidth)
    out_dir = Path(spec.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in spec.formats:
        path = out_dir / f"{spec.basename}.{fmt}"
        # Date metadata suppressed so identical inputs give identical bytes.
        fig.savefig(path, dpi=150, metadata={"Date": None} if fmt == "svg" else None)
        written.append(path)
    plt.close(fig)
    return written
