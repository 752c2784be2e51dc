"""Smooth sigmoid surrogate (SSS) for the logrank split statistic.

The hard indicator I(z <= c) is replaced by the sigmoid weight

    s_a(z; c) = 1 / (1 + exp(a * (z - c))),

turning the discrete cutpoint search into a smooth optimization in c.  The
module provides the soft risk/failure aggregates, the smoothed statistic
q_a(c) = N_a / S_a, its maximizer, and the closed-form mean/variance of the
sigmoid weight under a Uniform(0,1) covariate together with the quantities
used by the moment identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ZeroScale
from .logrank_hard import Method, SplitResult, _pick_tied
from .risk_model import RiskTable, Subject, z_time_sorted

DEFAULT_GRID_POINTS = 1024
DEFAULT_TOL_C = 1e-8
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _sigmoid(x):
    """Numerically stable logistic function, scalar or array."""
    if np.isscalar(x) or np.ndim(x) == 0:
        xf = float(x)
        if xf >= 0.0:
            return 1.0 / (1.0 + math.exp(-xf))
        e = math.exp(xf)
        return e / (1.0 + e)
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0.0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def _softplus_rem(x):
    """r(x) = log(1 + e^x) - max(x, 0); symmetric in x, bounded by log 2."""
    return np.log1p(np.exp(-np.abs(x)))


@dataclass(frozen=True)
class SigmoidParams:
    """Shape parameter for the sigmoid weight.

    ``adaptive=True`` resolves to a = sqrt(n) for the dataset at hand,
    otherwise ``a`` is used as given.
    """

    a: float | None = None
    adaptive: bool = False

    def resolve(self, n_subjects: int) -> float:
        if self.adaptive:
            return math.sqrt(n_subjects)
        if self.a is None or not self.a > 0.0:
            raise ValueError("shape parameter a must be positive")
        return float(self.a)


@dataclass(frozen=True)
class SoftSplitStat:
    """Smoothed logrank statistic pieces at one cutpoint."""

    c: float
    a: float
    numerator: float
    scale_sq: float
    q: float


@dataclass(frozen=True)
class SigmoidMoments:
    """Mean and variance of s_a(Z; c) under Z ~ Uniform(0,1)."""

    c: float
    a: float
    b_a: float
    psi_a: float


def sigmoid_weight(z, c, a):
    """Sigmoid weight s_a(z; c) = 1/(1 + exp(a(z - c))), in (0,1).

    Strictly decreasing in z and increasing in c; a -> infinity recovers the
    hard indicator I(z <= c).  Accepts scalars or arrays.
    """
    if not a > 0.0:
        raise ValueError("shape parameter a must be positive")
    if np.isscalar(z) and np.isscalar(c):
        return _sigmoid(a * (c - z))
    return _sigmoid(np.multiply(a, np.subtract(c, z)))


def soft_counts(
    rt: RiskTable, data: Sequence[Subject], c: float, a: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Soft left-node aggregates per event time.

    Returns ``(Y_aL, d_aL, b_a_k)`` where ``Y_aL[k]`` sums s_a(z_i;c) over
    the risk set R_k, ``d_aL[k]`` sums it over the failures at t_k, and
    ``b_a_k = Y_aL / Y_k``.
    """
    zs = z_time_sorted(rt, data)
    s = sigmoid_weight(zs, c, a)
    suffix = np.cumsum(s[::-1])[::-1]
    y_left = suffix[rt.risk_start]
    d_left = np.add.reduceat(s[rt.fail_pos], rt.fail_offsets)
    return y_left, d_left, y_left / rt.at_risk


def soft_stat(rt: RiskTable, data: Sequence[Subject], c: float, a: float) -> SoftSplitStat:
    """Evaluate the smoothed statistic q_a(c) = N_a / S_a at one cutpoint.

    S_a^2 is strictly positive except in exact degenerate limits (all
    sigmoid weights rounded to 0 or 1); those raise ZeroScale rather than
    returning NaN.
    """
    y_left, d_left, b = soft_counts(rt, data, c, a)
    w = rt.weights
    numerator = float(np.sum(w * (d_left - rt.failures * b)))
    scale_sq = float(np.sum(w * w * b * (1.0 - b)))
    if scale_sq <= 0.0:
        raise ZeroScale(f"S_a^2({c}) = 0 in the degenerate sigmoid limit")
    return SoftSplitStat(c=float(c), a=float(a), numerator=numerator,
                         scale_sq=scale_sq, q=float(numerator / math.sqrt(scale_sq)))


def delta_ka(rt: RiskTable, data: Sequence[Subject], k: int, c: float, a: float) -> float:
    """Within-risk-set average of s(1-s) at event time t_k, in [0, 1/4].

    This is the exact amount by which smoothing lowers the conditional
    variance of the soft failure term relative to b(1-b).
    """
    zs = z_time_sorted(rt, data)
    s = sigmoid_weight(zs[rt.risk_start[k]:], c, a)
    return float(np.mean(s * (1.0 - s)))


def b_a_closed(c, a):
    """Closed-form mean of s_a(Z; c) for Z ~ Uniform(0,1).

    Equals (L(ac) - L(a(c-1)))/a with L the softplus, evaluated through the
    split L(x) = max(x,0) + log1p(exp(-|x|)) so the identity b_a(1/2) = 1/2
    holds exactly and no overflow can occur.
    """
    c = np.asarray(c, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    if np.any(a <= 0.0):
        raise ValueError("shape parameter a must be positive")
    x1 = a * c
    x2 = a * (c - 1.0)
    linear = (np.maximum(x1, 0.0) - np.maximum(x2, 0.0)) / a
    rem = (_softplus_rem(x1) - _softplus_rem(x2)) / a
    out = linear + rem
    return float(out) if out.ndim == 0 else out


def psi_a_closed(c, a):
    """Closed-form variance of s_a(Z; c) for Z ~ Uniform(0,1).

    psi_a(c) = b_a(1 - b_a) - (sigma(ac) - sigma(a(c-1)))/a, clamped at 0;
    the raw value can round slightly negative near c in {0,1} for huge a.
    """
    c = np.asarray(c, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    b = b_a_closed(c, a)
    raw = b * (1.0 - b) - (_sigmoid(a * c) - _sigmoid(a * (c - 1.0))) / a
    assert np.all(raw >= -1e-12), "psi_a rounded below -1e-12; formula broken"
    out = np.maximum(raw, 0.0)
    return float(out) if np.ndim(out) == 0 else out


def sigmoid_moments(c: float, a: float) -> SigmoidMoments:
    """Bundle b_a(c) and psi_a(c) for one (c, a) pair."""
    return SigmoidMoments(c=float(c), a=float(a),
                          b_a=b_a_closed(c, a), psi_a=psi_a_closed(c, a))


def soft_grid_stats(
    rt: RiskTable, zs: np.ndarray, c_grid: np.ndarray, a: float
) -> tuple[np.ndarray, np.ndarray]:
    """N_a and S_a^2 on a grid of cutpoints (engine fast path).

    Builds the n-by-G sigmoid weight matrix once and reduces it over risk
    sets by suffix sums along the time ordering.
    """
    s = _sigmoid(a * (c_grid[None, :] - zs[:, None]))
    suffix = np.cumsum(s[::-1, :], axis=0)[::-1, :]
    y_left = suffix[rt.risk_start, :]
    d_left = np.add.reduceat(s[rt.fail_pos, :], rt.fail_offsets, axis=0)
    b = y_left / rt.at_risk[:, None]
    w = rt.weights[:, None]
    num = np.sum(w * (d_left - rt.failures[:, None] * b), axis=0)
    scale = np.sum(w * w * b * (1.0 - b), axis=0)
    return num, scale


def _soft_qsq_scalar(rt: RiskTable, zs: np.ndarray, c: float, a: float) -> float:
    """q_a(c)^2 from time-sorted covariates; -inf when the scale degenerates."""
    s = _sigmoid(a * (c - zs))
    suffix = np.cumsum(s[::-1])[::-1]
    y_left = suffix[rt.risk_start]
    d_left = np.add.reduceat(s[rt.fail_pos], rt.fail_offsets)
    b = y_left / rt.at_risk
    w = rt.weights
    num = np.sum(w * (d_left - rt.failures * b))
    scale = np.sum(w * w * b * (1.0 - b))
    if scale <= 0.0:
        return -np.inf
    return float(num * num / scale)


def _golden_refine(f, lo: float, hi: float, tol: float) -> tuple[float, float, int]:
    """Golden-section maximization of f on [lo, hi]; returns (x, f(x), evals)."""
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    evals = 2
    best_x, best_f = (x1, f1) if f1 >= f2 else (x2, f2)
    while hi - lo > tol:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = f(x1)
            if f1 > best_f:
                best_x, best_f = x1, f1
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = f(x2)
            if f2 > best_f:
                best_x, best_f = x2, f2
        evals += 1
    return best_x, best_f, evals


def search_soft_sorted(
    rt: RiskTable,
    zs: np.ndarray,
    a: float,
    domain: tuple[float, float] = (0.0, 1.0),
    grid_points: int = DEFAULT_GRID_POINTS,
    tol_c: float = DEFAULT_TOL_C,
) -> SplitResult:
    """Maximize q_a(c)^2 over the domain (engine fast path).

    Dense scan over ``grid_points`` equally spaced interior points, then
    golden-section refinement within one grid cell of the best point.  Grid
    points with a degenerate scale are skipped; exactly tied grid maxima
    resolve to the point nearest 0.5.  The refined point is only adopted
    when it strictly improves on the grid maximum, so plateaus keep the
    tie-broken grid point.
    """
    lo, hi = float(domain[0]), float(domain[1])
    if not lo < hi:
        raise ValueError("domain must be a nonempty open interval")
    h = (hi - lo) / (grid_points + 1)
    c_grid = lo + h * np.arange(1, grid_points + 1)
    num, scale = soft_grid_stats(rt, zs, c_grid, a)
    q_sq = np.full(grid_points, -np.inf)
    ok = scale > 0.0
    q_sq[ok] = num[ok] ** 2 / scale[ok]
    if not ok.any():
        raise ZeroScale("q_a(c)^2 degenerate on the whole search grid")
    best = _pick_tied(q_sq, c_grid)
    c_best, f_best = float(c_grid[best]), float(q_sq[best])
    evals = grid_points

    ref_lo = max(lo, c_best - h)
    ref_hi = min(hi, c_best + h)
    c_ref, f_ref, used = _golden_refine(
        lambda c: _soft_qsq_scalar(rt, zs, c, a), ref_lo, ref_hi, tol_c
    )
    evals += used
    if f_ref > f_best:
        c_best, f_best = c_ref, f_ref
    return SplitResult(method=Method.SSS, c_hat=c_best, stat=f_best,
                       a=float(a), n_evaluations=evals)


def sss_search(
    rt: RiskTable,
    data: Sequence[Subject],
    params: SigmoidParams,
    domain: tuple[float, float] = (0.0, 1.0),
    grid_points: int = DEFAULT_GRID_POINTS,
    tol_c: float = DEFAULT_TOL_C,
) -> SplitResult:
    """Maximize the smoothed statistic q_a(c)^2 over the (open) domain."""
    a = params.resolve(rt.n_subjects)
    zs = z_time_sorted(rt, data)
    return search_soft_sorted(rt, zs, a, domain=domain,
                              grid_points=grid_points, tol_c=tol_c)
