"""Hard-threshold logrank split statistic and greedy cutpoint search.

For a cutpoint c the statistic aggregates observed-minus-expected left-node
failures over event times,

    N(c)  = sum_k w_k * (d_kL(c) - d_k * b_k(c)),      b_k = Y_kL / Y_k,
    S2(c) = sum_k w_k^2 * b_k(c) * (1 - b_k(c)),
    Q(c)  = (N(c) / S(c))^2,

and the greedy search returns the candidate midpoint maximizing Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import DegenerateCovariate, NoAdmissibleCut, ZeroScale
from .risk_model import (
    RiskTable,
    Subject,
    as_arrays,
    candidate_cutpoints,
    left_counts_sorted,
    z_time_sorted,
)

TIE_BREAK_RULE = "nearest-0.5"


class Method(str, Enum):
    GS = "GS"
    SSS = "SSS"


@dataclass(frozen=True)
class HardSplitStat:
    """Logrank statistic pieces at one cutpoint."""

    c: float
    numerator: float
    scale_sq: float
    q: float
    Q: float


@dataclass(frozen=True)
class SplitResult:
    """Outcome of a cutpoint search.

    ``a`` is the sigmoid shape parameter (None for greedy search) and
    ``tie_break`` records the rule used to resolve exactly tied maxima.
    """

    method: Method
    c_hat: float
    stat: float
    a: float | None
    n_evaluations: int
    tie_break: str = TIE_BREAK_RULE


def hard_stat(rt: RiskTable, data: Sequence[Subject], c: float) -> HardSplitStat:
    """Evaluate N(c), S2(c) and Q(c) at a single cutpoint.

    Raises ZeroScale when S2(c) = 0, i.e. every event time has its risk set
    entirely on one side of c; such cutpoints are inadmissible.
    """
    zs = z_time_sorted(rt, data)
    y_left, d_left = left_counts_sorted(rt, zs, c)
    b = y_left / rt.at_risk
    w = rt.weights
    numerator = float(np.sum(w * (d_left - rt.failures * b)))
    scale_sq = float(np.sum(w * w * b * (1.0 - b)))
    if scale_sq <= 0.0:
        raise ZeroScale(f"S^2({c}) = 0: every risk set lies on one side of the cutpoint")
    q = numerator / np.sqrt(scale_sq)
    return HardSplitStat(c=float(c), numerator=numerator, scale_sq=scale_sq,
                         q=float(q), Q=float(q * q))


def _pick_tied(stat: np.ndarray, cands: np.ndarray) -> int:
    """Index of the maximal entry; exact ties go to the c nearest 0.5, then smaller c."""
    best = np.max(stat)
    tied = np.flatnonzero(stat == best)
    if tied.size == 1:
        return int(tied[0])
    dist = np.abs(cands[tied] - 0.5)
    nearest = tied[dist == dist.min()]
    return int(nearest.min())


def _grid_hard_stats(
    rt: RiskTable,
    z: np.ndarray,
    cands: np.ndarray,
    block_rows: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """N and S2 for every candidate cutpoint, vectorized over event times.

    Subjects are ranked by z; the left node of candidate j is the first
    ``n_left[j]`` subjects in z order, so per-event-time left counts are
    cumulative sums over that ordering, gathered at the candidate columns.
    Event times are processed in row blocks to bound memory.
    """
    n = z.size
    d_n = rt.n_event_times
    tpos = np.empty(n, dtype=np.int64)
    tpos[rt.order] = np.arange(n)
    zr = np.argsort(z, kind="mergesort")
    tp_z = tpos[zr]                       # time-position of j-th smallest-z subject
    zrank = np.empty(n, dtype=np.int64)
    zrank[zr] = np.arange(n)
    fail_rank = zrank[rt.order[rt.fail_pos]]

    n_left = np.searchsorted(np.sort(z), cands, side="left")
    w = rt.weights
    num = np.zeros(cands.size)
    scale = np.zeros(cands.size)

    if block_rows <= 0:
        block_rows = max(1, int(4_000_000 // max(n, 1)))
    for lo in range(0, d_n, block_rows):
        hi = min(lo + block_rows, d_n)
        at_risk_blk = (tp_z[None, :] >= rt.risk_start[lo:hi, None])
        y_left = np.cumsum(at_risk_blk, axis=1)[:, n_left - 1].astype(np.float64)
        f_lo = rt.fail_offsets[lo]
        f_hi = rt.fail_offsets[hi] if hi < d_n else rt.fail_pos.size
        fl = (fail_rank[f_lo:f_hi, None] < n_left[None, :]).astype(np.float64)
        offs = (rt.fail_offsets[lo:hi] - f_lo).astype(np.int64)
        d_left = np.add.reduceat(fl, offs, axis=0) if fl.shape[0] else np.zeros_like(y_left)
        b = y_left / rt.at_risk[lo:hi, None]
        wb = w[lo:hi, None]
        num += np.sum(wb * (d_left - rt.failures[lo:hi, None] * b), axis=0)
        scale += np.sum(wb * wb * b * (1.0 - b), axis=0)
    return num, scale


def greedy_search(
    rt: RiskTable, data: Sequence[Subject], min_child: int = 0
) -> SplitResult:
    """Maximize Q(c) over candidate midpoints (greedy search, GS).

    Candidates with S2 = 0 or with fewer than ``min_child`` subjects in
    either child are skipped.  Exactly tied maxima resolve to the candidate
    nearest 0.5 (then the smaller c).  Raises NoAdmissibleCut when no
    candidate survives.
    """
    _, _, z = as_arrays(data)
    try:
        cands = candidate_cutpoints(data)
    except DegenerateCovariate as exc:
        raise NoAdmissibleCut("covariate has a single distinct value") from exc

    num, scale = _grid_hard_stats(rt, z, cands)

    n = z.size
    n_left = np.searchsorted(np.sort(z), cands, side="left")
    admissible = (scale > 0.0) & (n_left >= min_child) & (n - n_left >= min_child)
    if not admissible.any():
        raise NoAdmissibleCut(
            "every candidate has zero variance scale or violates min_child"
        )
    q_sq = np.full(cands.size, -np.inf)
    q_sq[admissible] = num[admissible] ** 2 / scale[admissible]
    best = _pick_tied(q_sq, cands)
    return SplitResult(
        method=Method.GS,
        c_hat=float(cands[best]),
        stat=float(q_sq[best]),
        a=None,
        n_evaluations=int(np.count_nonzero(admissible)),
    )
