"""Dataset representation and risk-table construction.

A dataset is a sequence of :class:`Subject` records (follow-up time, event
indicator, covariate in [0,1]).  :func:`build_risk_table` extracts the sorted
distinct failure times together with at-risk counts, failure counts and the
time-ordering machinery that both the hard and the smoothed split statistics
are computed from.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateCovariate, NoEvents, NonFinite

CSV_HEADER = ("time", "event", "z")


@dataclass(frozen=True)
class Subject:
    """One observation: follow-up time, event indicator, covariate value.

    ``event`` is True when the failure was observed and False when the
    follow-up was right-censored.  ``z`` is expected to lie in [0,1]; raw
    covariates on any other scale should go through :func:`subjects_from_csv`
    or :func:`rank_rescale` first.
    """

    time: float
    event: bool
    z: float


@dataclass(frozen=True)
class RiskTable:
    """Event times with at-risk / failure counts and sorted-order indexing.

    ``order`` holds subject indices sorted by time (failures before
    censorings on ties); ``risk_start[k]`` is the first position in that
    ordering belonging to the risk set at ``event_times[k]``, so the risk
    set R_k is the suffix ``order[risk_start[k]:]``.  ``fail_pos`` lists the
    time-sorted positions of failing subjects grouped by event time, with
    group k starting at ``fail_offsets[k]``.
    """

    event_times: np.ndarray
    at_risk: np.ndarray
    failures: np.ndarray
    weights: np.ndarray
    failing_index: np.ndarray
    n_subjects: int
    order: np.ndarray
    risk_start: np.ndarray
    fail_pos: np.ndarray
    fail_offsets: np.ndarray

    @property
    def n_event_times(self) -> int:
        return int(self.event_times.size)

    def risk_members(self, k: int) -> np.ndarray:
        """Subject indices of the risk set R_k (subjects with time >= t_k)."""
        return self.order[int(self.risk_start[k]):]

    def failing_members(self, k: int) -> np.ndarray:
        """Subject indices failing exactly at event time t_k."""
        lo = int(self.fail_offsets[k])
        hi = int(self.fail_offsets[k + 1]) if k + 1 < self.n_event_times else self.fail_pos.size
        return self.order[self.fail_pos[lo:hi]]


def as_arrays(data: Sequence[Subject]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Unpack a subject sequence into (time, event, z) arrays."""
    n = len(data)
    time = np.empty(n, dtype=np.float64)
    event = np.empty(n, dtype=bool)
    z = np.empty(n, dtype=np.float64)
    for i, s in enumerate(data):
        time[i] = s.time
        event[i] = s.event
        z[i] = s.z
    return time, event, z


def _freeze(*arrays: np.ndarray) -> None:
    for arr in arrays:
        arr.setflags(write=False)


def build_risk_table(
    data: Sequence[Subject], weights: Sequence[float] | None = None
) -> RiskTable:
    """Build the risk table for a dataset.

    Event times are the sorted distinct times of subjects with
    ``event=True``; ``at_risk[k]`` counts subjects with time >= t_k and
    ``failures[k]`` the failures at exactly t_k.  Subjects censored at an
    event time are still at risk there (failures precede censorings on
    ties).  ``weights`` are per-event-time logrank weights w_k, default 1.

    Raises NoEvents when every subject is censored and NonFinite when a
    time is NaN or infinite.
    """
    if len(data) == 0:
        raise NoEvents("empty dataset")
    time, event, z = as_arrays(data)
    if not np.all(np.isfinite(time)):
        raise NonFinite("follow-up times must be finite")
    if np.any(time < 0):
        raise ValueError("follow-up times must be nonnegative")
    if np.any(z < 0.0) or np.any(z > 1.0):
        raise ValueError("covariate values must lie in [0,1]; rescale on ingestion")
    if not event.any():
        raise NoEvents("every subject is censored; no event times exist")

    n = time.size
    # Failures sort before censorings at the same time; the secondary key only
    # fixes a deterministic order within ties and does not affect the counts.
    order = np.lexsort((~event, time))
    ts = time[order]
    es = event[order]

    uniq, counts = np.unique(time[event], return_counts=True)
    risk_start = np.searchsorted(ts, uniq, side="left")
    at_risk = n - risk_start

    fail_pos = np.flatnonzero(es)
    fail_offsets = np.searchsorted(ts[fail_pos], uniq, side="left")

    failing_index = np.where(counts == 1, order[fail_pos[fail_offsets]], -1)

    if weights is None:
        w = np.ones(uniq.size, dtype=np.float64)
    else:
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != uniq.shape:
            raise ValueError(
                f"weights must have one entry per event time ({uniq.size}), got {w.size}"
            )
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")

    table = RiskTable(
        event_times=uniq,
        at_risk=at_risk.astype(np.int64),
        failures=counts.astype(np.int64),
        weights=w,
        failing_index=failing_index.astype(np.int64),
        n_subjects=int(n),
        order=order.astype(np.int64),
        risk_start=risk_start.astype(np.int64),
        fail_pos=fail_pos.astype(np.int64),
        fail_offsets=fail_offsets.astype(np.int64),
    )
    _freeze(table.event_times, table.at_risk, table.failures, table.weights,
            table.failing_index, table.order, table.risk_start,
            table.fail_pos, table.fail_offsets)
    return table


def z_time_sorted(rt: RiskTable, data: Sequence[Subject]) -> np.ndarray:
    """Covariate values aligned with the risk table's time ordering."""
    if len(data) != rt.n_subjects:
        raise ValueError("risk table was built from a different dataset")
    _, _, z = as_arrays(data)
    return z[rt.order]


def left_counts_sorted(
    rt: RiskTable, zs: np.ndarray, c: float
) -> tuple[np.ndarray, np.ndarray]:
    """Left-node counts from time-sorted covariates (engine fast path)."""
    left = (zs <= c).astype(np.int64)
    suffix = np.cumsum(left[::-1])[::-1]
    y_left = suffix[rt.risk_start]
    d_left = np.add.reduceat(left[rt.fail_pos], rt.fail_offsets)
    return y_left, d_left


def left_counts(
    rt: RiskTable, data: Sequence[Subject], c: float
) -> tuple[np.ndarray, np.ndarray]:
    """At-risk and failure counts of the left node {z <= c} per event time.

    Returns ``(Y_kL, d_kL)`` with ``Y_kL = #{i in R_k : z_i <= c}`` and
    ``d_kL`` the failures at t_k with z <= c.
    """
    if not math.isfinite(c):
        raise ValueError("cutpoint must be finite")
    return left_counts_sorted(rt, z_time_sorted(rt, data), c)


def candidate_cutpoints(data: Sequence[Subject]) -> np.ndarray:
    """Sorted midpoints between consecutive distinct covariate values."""
    _, _, z = as_arrays(data)
    uniq = np.unique(z)
    if uniq.size < 2:
        raise DegenerateCovariate("all covariate values are equal")
    mids = 0.5 * (uniq[:-1] + uniq[1:])
    # Guard against float collapse onto a data value for near-adjacent doubles.
    keep = (mids > uniq[:-1]) & (mids < uniq[1:])
    mids = np.unique(mids[keep])
    if mids.size == 0:
        raise DegenerateCovariate("no representable midpoints between covariate values")
    return mids


def rank_rescale(values: Iterable[float]) -> np.ndarray:
    """Map raw covariates to (rank - 0.5)/n using average ranks for ties.

    Monotone, tie-preserving; the result lies strictly inside (0,1).
    """
    x = np.asarray(list(values), dtype=np.float64)
    n = x.size
    uniq, inverse, counts = np.unique(x, return_inverse=True, return_counts=True)
    stops = np.cumsum(counts)
    starts = stops - counts
    avg_rank = 0.5 * (starts + 1 + stops)  # 1-based average rank per distinct value
    return (avg_rank[inverse] - 0.5) / n


def subjects_from_csv(path) -> list[Subject]:
    """Read a ``time,event,z`` CSV into subjects.

    ``event`` must be 0 or 1.  When any raw z falls outside [0,1] the whole
    column is rank-rescaled to (rank - 0.5)/n.  Malformed content raises
    ValueError with the offending line number.
    """
    times: list[float] = []
    events: list[bool] = []
    zs: list[float] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError("line 1: empty file, expected header 'time,event,z'") from None
        if tuple(h.strip() for h in header) != CSV_HEADER:
            raise ValueError(f"line 1: expected header 'time,event,z', got {','.join(header)!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 3:
                raise ValueError(f"line {lineno}: expected 3 fields, got {len(row)}")
            try:
                t = float(row[0])
            except ValueError:
                raise ValueError(f"line {lineno}: bad time value {row[0]!r}") from None
            if not math.isfinite(t) or t < 0:
                raise ValueError(f"line {lineno}: time must be finite and >= 0, got {row[0]!r}")
            ev = row[1].strip()
            if ev not in ("0", "1"):
                raise ValueError(f"line {lineno}: event must be 0 or 1, got {row[1]!r}")
            try:
                zv = float(row[2])
            except ValueError:
                raise ValueError(f"line {lineno}: bad covariate value {row[2]!r}") from None
            if not math.isfinite(zv):
                raise ValueError(f"line {lineno}: covariate must be finite, got {row[2]!r}")
            times.append(t)
            events.append(ev == "1")
            zs.append(zv)
    if not times:
        raise ValueError("line 2: no data rows")
    z_arr = np.asarray(zs)
    if np.any(z_arr < 0.0) or np.any(z_arr > 1.0):
        z_arr = rank_rescale(z_arr)
    return [Subject(times[i], events[i], float(z_arr[i])) for i in range(len(times))]
