"""Monte Carlo harness: the simulation grid and the variance probe.

``run_experiment`` walks a grid of sample sizes, generating one dataset per
replicate and running greedy search plus every smooth-surrogate variant on
that same dataset.  ``variance_probe`` estimates Var(q(c)) and Var(q_a(c))
at fixed cutpoints over independent null datasets.  Writers emit the
records/summary/histogram/variance files in their fixed column layouts.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
import time as _time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .datagen import HazardModel, SeedSpec, generate_dataset
from .errors import EmptyGroup, NoAdmissibleCut, ZeroScale
from .logrank_hard import Method, greedy_search, hard_stat
from .risk_model import build_risk_table, z_time_sorted
from .sss_smooth import search_soft_sorted, soft_stat

DEFAULT_MASTER_SEED = 1729
HIST_BINS = 50
PRESET_NULL = "paper-null"
PRESET_WEAK = "paper-weak"

STATUS_OK = "ok"
STATUS_NO_CUT = "no_cut"

RECORDS_HEADER = ("method", "n", "a", "rep", "c_hat", "stat", "status", "runtime_us")
SUMMARY_HEADER = ("method", "n", "a", "edge_eps", "edge_fraction", "median_c", "iqr_c")
HISTOGRAM_HEADER = ("method", "n", "a", "bin_lo", "bin_hi", "count")
VARIANCE_HEADER = ("n", "c", "method", "a", "var_q", "se_var", "reps")


@dataclass(frozen=True)
class ExperimentConfig:
    """Full simulation grid for one experiment run."""

    n_list: tuple[int, ...] = (50, 100, 500, 1000)
    reps: int = 500
    beta0: float = 1.0
    beta1: float = 0.0
    c0: float = 0.5
    a_fixed: tuple[float, ...] = (50.0, 60.0, 70.0, 80.0, 90.0, 100.0)
    a_adaptive: bool = True
    edge_eps: float = 0.05
    min_child: int = 0
    master_seed: int = DEFAULT_MASTER_SEED
    grid_points: int = 1024

    def __post_init__(self):
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if not 0.0 < self.edge_eps < 0.5:
            raise ValueError("edge_eps must lie in (0, 0.5)")
        if any(a < 1.0 for a in self.a_fixed):
            raise ValueError("fixed shape parameters must satisfy a >= 1")
        if not self.n_list or any(n < 2 for n in self.n_list):
            raise ValueError("n_list must contain sample sizes >= 2")
        if self.grid_points < 2:
            raise ValueError("grid_points must be >= 2")

    def a_values(self, n: int) -> tuple[float, ...]:
        """Resolved shape parameters for sample size n, adaptive one first."""
        values: list[float] = []
        if self.a_adaptive:
            values.append(math.sqrt(n))
        values.extend(float(a) for a in self.a_fixed)
        return tuple(dict.fromkeys(values))


@dataclass(frozen=True)
class ReplicateRecord:
    """One (method, n, a, replicate) -> c_hat row of the harness output."""

    method: Method
    n: int
    a: float | None
    rep: int
    c_hat: float
    stat: float
    runtime_us: int
    status: str = STATUS_OK
    dataset_checksum: str | None = None


@dataclass(frozen=True)
class EcpSummary:
    """Edge-fraction and location summary for one (method, n, a) group."""

    method: Method
    n: int
    a: float | None
    edge_eps: float
    edge_fraction: float
    median_c: float
    iqr_c: float
    histogram: tuple[int, ...]


@dataclass(frozen=True)
class VarianceRow:
    """Monte Carlo variance of the standardized statistic at a fixed cutpoint."""

    n: int
    c: float
    method: Method
    a: float | None
    var_q: float
    se_var: float
    reps: int


def preset_config(name: str, **overrides) -> ExperimentConfig:
    """Named experiment grids; ``paper-weak`` flips beta1 to -0.1."""
    if name == PRESET_NULL:
        cfg = ExperimentConfig()
    elif name == PRESET_WEAK:
        cfg = ExperimentConfig(beta1=-0.1)
    else:
        raise ValueError(f"unknown preset {name!r}")
    return replace(cfg, **overrides) if overrides else cfg


def _a_sort_key(a: float | None) -> float:
    return -1.0 if a is None else float(a)


def _record_sort_key(rec: ReplicateRecord):
    return (rec.method.value, rec.n, _a_sort_key(rec.a), rec.rep)


def _replicate_batch(payload) -> list[tuple]:
    """Run one batch of replicates for a single sample size (worker entry)."""
    (beta0, beta1, c0, master_seed, reps, min_child, grid_points,
     a_values, n, n_idx, rep_list, debug) = payload
    model = HazardModel(beta0=beta0, beta1=beta1, c0=c0)
    out: list[tuple] = []
    for rep in rep_list:
        stream = n_idx * reps + rep
        data = generate_dataset(model, n, SeedSpec(master_seed, stream))
        rt = build_risk_table(data)
        zs = z_time_sorted(rt, data)
        checksum = None
        if debug:
            raw = np.concatenate([rt.event_times, zs]).tobytes()
            checksum = hashlib.sha256(raw).hexdigest()[:16]

        t0 = _time.perf_counter_ns()
        try:
            gs = greedy_search(rt, data, min_child=min_child)
            row = (Method.GS.value, n, None, rep, gs.c_hat, gs.stat, STATUS_OK)
        except NoAdmissibleCut:
            row = (Method.GS.value, n, None, rep, math.nan, math.nan, STATUS_NO_CUT)
        out.append(row + ((_time.perf_counter_ns() - t0) // 1000, checksum))

        for a in a_values:
            t0 = _time.perf_counter_ns()
            try:
                res = search_soft_sorted(rt, zs, a, grid_points=grid_points)
                row = (Method.SSS.value, n, a, rep, res.c_hat, res.stat, STATUS_OK)
            except ZeroScale:
                row = (Method.SSS.value, n, a, rep, math.nan, math.nan, STATUS_NO_CUT)
            out.append(row + ((_time.perf_counter_ns() - t0) // 1000, checksum))
    return out


def run_experiment(
    cfg: ExperimentConfig,
    max_workers: int | None = 1,
    debug: bool = False,
) -> tuple[list[ReplicateRecord], list[EcpSummary]]:
    """Run the full grid; deterministic given the config.

    Every replicate generates one dataset and runs GS once and SSS once per
    resolved shape parameter on it.  Inadmissible searches are kept as
    flagged records and excluded from summaries.  ``max_workers`` of 0 or
    None uses all CPUs; 1 runs inline.
    """
    if max_workers in (None, 0):
        max_workers = os.cpu_count() or 1

    payloads = []
    for n_idx, n in enumerate(cfg.n_list):
        a_values = cfg.a_values(n)
        chunk = max(1, -(-cfg.reps // (max_workers * 4)))
        for lo in range(0, cfg.reps, chunk):
            rep_list = list(range(lo, min(lo + chunk, cfg.reps)))
            payloads.append((cfg.beta0, cfg.beta1, cfg.c0, cfg.master_seed,
                             cfg.reps, cfg.min_child, cfg.grid_points,
                             a_values, n, n_idx, rep_list, debug))

    rows: list[tuple] = []
    if max_workers == 1:
        for payload in payloads:
            rows.extend(_replicate_batch(payload))
    else:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            for batch in pool.map(_replicate_batch, payloads):
                rows.extend(batch)

    records = [
        ReplicateRecord(method=Method(m), n=n, a=a, rep=rep, c_hat=c_hat,
                        stat=stat, runtime_us=int(rt_us), status=status,
                        dataset_checksum=checksum)
        for (m, n, a, rep, c_hat, stat, status, rt_us, checksum) in rows
    ]
    records.sort(key=_record_sort_key)
    try:
        summaries = summarize(records, cfg.edge_eps)
    except EmptyGroup:
        summaries = []
    return records, summaries


def summarize(records: Sequence[ReplicateRecord], edge_eps: float) -> list[EcpSummary]:
    """Edge fraction, median, IQR and 50-bin histogram per (method, n, a) group.

    Flagged records are ignored; raises EmptyGroup when nothing usable
    remains.
    """
    groups: dict[tuple, list[float]] = {}
    for rec in records:
        if rec.status != STATUS_OK:
            continue
        groups.setdefault((rec.method, rec.n, rec.a), []).append(rec.c_hat)
    if not groups:
        raise EmptyGroup("no usable records to summarize")
    out = []
    for (method, n, a) in sorted(groups, key=lambda k: (k[0].value, k[1], _a_sort_key(k[2]))):
        c = np.asarray(groups[(method, n, a)])
        edge = float(np.mean(np.minimum(c, 1.0 - c) < edge_eps))
        hist, _ = np.histogram(c, bins=HIST_BINS, range=(0.0, 1.0))
        out.append(EcpSummary(
            method=method, n=n, a=a, edge_eps=float(edge_eps),
            edge_fraction=edge,
            median_c=float(np.median(c)),
            iqr_c=float(np.percentile(c, 75) - np.percentile(c, 25)),
            histogram=tuple(int(x) for x in hist),
        ))
    return out


def _var_of_sample_variance(values: np.ndarray) -> float:
    """Standard error of the sample variance; inf below 3 observations."""
    v = values.size
    if v < 3:
        return math.inf
    d = values - values.mean()
    s2 = float(np.sum(d * d) / (v - 1))
    m4 = float(np.mean(d ** 4))
    var_s2 = (m4 - s2 * s2 * (v - 3) / (v - 1)) / v
    return math.sqrt(max(var_s2, 0.0))


def variance_probe(
    n: int,
    a_list: Sequence[float],
    c_grid: Sequence[float],
    reps: int,
    seed: int,
    beta0: float = 1.0,
) -> list[VarianceRow]:
    """Var(q(c)) and Var(q_a(c)) at fixed cutpoints over null replicates.

    The probe enforces beta1 = 0 (no covariate signal).  Replicates where
    the hard statistic is incomputable at a given c are skipped for that
    cell, and the per-cell replicate count is reported.
    """
    c_grid = [float(c) for c in c_grid]
    if any(not 0.0 < c < 1.0 for c in c_grid):
        raise ValueError("probe cutpoints must lie in (0,1)")
    model = HazardModel(beta0=beta0, beta1=0.0, c0=0.5)
    hard_vals: dict[float, list[float]] = {c: [] for c in c_grid}
    soft_vals: dict[tuple[float, float], list[float]] = {
        (c, float(a)): [] for c in c_grid for a in a_list
    }
    for rep in range(reps):
        data = generate_dataset(model, n, SeedSpec(seed, rep))
        rt = build_risk_table(data)
        for c in c_grid:
            try:
                hard_vals[c].append(hard_stat(rt, data, c).q)
            except ZeroScale:
                pass
            for a in a_list:
                try:
                    soft_vals[(c, float(a))].append(soft_stat(rt, data, c, a).q)
                except ZeroScale:
                    pass

    rows: list[VarianceRow] = []
    for c in c_grid:
        vals = np.asarray(hard_vals[c])
        var = float(np.var(vals, ddof=1)) if vals.size >= 2 else math.nan
        rows.append(VarianceRow(n=n, c=c, method=Method.GS, a=None, var_q=var,
                                se_var=_var_of_sample_variance(vals), reps=vals.size))
    for c in c_grid:
        for a in a_list:
            vals = np.asarray(soft_vals[(c, float(a))])
            var = float(np.var(vals, ddof=1)) if vals.size >= 2 else math.nan
            rows.append(VarianceRow(n=n, c=c, method=Method.SSS, a=float(a), var_q=var,
                                    se_var=_var_of_sample_variance(vals), reps=vals.size))
    return rows


# ---------------------------------------------------------------------------
# file output


def _fmt(value) -> str:
    """CSV cell formatting: None/NaN -> empty, floats via repr (round-trip)."""
    if value is None:
        return ""
    if isinstance(value, Method):
        return value.value
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    f = float(value)
    if math.isnan(f):
        return ""
    return repr(f)


def atomic_write_text(path: Path | str, text: str) -> None:
    """Write via a temp file in the target directory plus atomic rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_records_csv(records: Sequence[ReplicateRecord], path) -> None:
    """records.csv; the runtime_us column is pinned to 0 so that repeated
    runs with one seed stay byte-identical (measured timings live on the
    in-memory records only)."""
    rows = [(r.method, r.n, r.a, r.rep, r.c_hat, r.stat, r.status, 0) for r in records]
    atomic_write_text(path, _csv_text(RECORDS_HEADER, rows))


def write_summary_csv(summaries: Sequence[EcpSummary], path) -> None:
    rows = [(s.method, s.n, s.a, s.edge_eps, s.edge_fraction, s.median_c, s.iqr_c)
            for s in summaries]
    atomic_write_text(path, _csv_text(SUMMARY_HEADER, rows))


def write_histogram_csv(summaries: Sequence[EcpSummary], path) -> None:
    rows = []
    for s in summaries:
        for i, count in enumerate(s.histogram):
            rows.append((s.method, s.n, s.a, i / HIST_BINS, (i + 1) / HIST_BINS, count))
    atomic_write_text(path, _csv_text(HISTOGRAM_HEADER, rows))


def write_variance_csv(rows: Sequence[VarianceRow], path) -> None:
    data = [(r.n, r.c, r.method, r.a, r.var_q,
             "inf" if math.isinf(r.se_var) else r.se_var, r.reps) for r in rows]
    atomic_write_text(path, _csv_text(VARIANCE_HEADER, data))


def _json_cell(value):
    if value is None or isinstance(value, (str, int)):
        return value
    if isinstance(value, Method):
        return value.value
    if isinstance(value, np.integer):
        return int(value)
    f = float(value)
    if math.isnan(f):
        return None
    if math.isinf(f):
        return "inf"
    return f

def _json_rows(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    out = [dict(zip(header, (_json_cell(c) for c in row))) for row in rows]
    return json.dumps(out, indent=1) + "\n"


def write_records_json(records: Sequence[ReplicateRecord], path) -> None:
    rows = [(r.method, r.n, r.a, r.rep, r.c_hat, r.stat, r.status, 0) for r in records]
    atomic_write_text(path, _json_rows(RECORDS_HEADER, rows))


def write_summary_json(summaries: Sequence[EcpSummary], path) -> None:
    rows = [(s.method, s.n, s.a, s.edge_eps, s.edge_fraction, s.median_c, s.iqr_c)
            for s in summaries]
    atomic_write_text(path, _json_rows(SUMMARY_HEADER, rows))


def write_histogram_json(summaries: Sequence[EcpSummary], path) -> None:
    rows = []
    for s in summaries:
        for i, count in enumerate(s.histogram):
            rows.append((s.method, s.n, s.a, i / HIST_BINS, (i + 1) / HIST_BINS, count))
    atomic_write_text(path, _json_rows(HISTOGRAM_HEADER, rows))


def write_variance_json(rows: Sequence[VarianceRow], path) -> None:
    data = [(r.n, r.c, r.method, r.a, r.var_q, r.se_var, r.reps) for r in rows]
    atomic_write_text(path, _json_rows(VARIANCE_HEADER, data))
