"""Shared fixtures and independent brute-force oracles.

The oracle functions recompute every statistic with plain Python loops and
``math`` so they share no code path with the vectorized engine.
"""

from __future__ import annotations

import math

import pytest

from survsplit import Subject


def brute_risk_structure(data):
    """(event_times, Y, d, risk_sets, fail_sets) by direct enumeration."""
    event_times = sorted({s.time for s in data if s.event})
    y, d, risk_sets, fail_sets = [], [], [], []
    for t in event_times:
        members = [i for i, s in enumerate(data) if s.time >= t]
        fails = [i for i, s in enumerate(data) if s.event and s.time == t]
        risk_sets.append(members)
        fail_sets.append(fails)
        y.append(len(members))
        d.append(len(fails))
    return event_times, y, d, risk_sets, fail_sets


def brute_left_counts(data, c):
    """Per-event-time left counts by direct enumeration."""
    _, _, _, risk_sets, fail_sets = brute_risk_structure(data)
    y_left = [sum(1 for i in members if data[i].z <= c) for members in risk_sets]
    d_left = [sum(1 for i in fails if data[i].z <= c) for fails in fail_sets]
    return y_left, d_left


def brute_hard_stat(data, c, weights=None):
    """(N, S2) of the hard logrank statistic by direct summation."""
    _, y, d, risk_sets, fail_sets = brute_risk_structure(data)
    y_left, d_left = brute_left_counts(data, c)
    w = weights if weights is not None else [1.0] * len(y)
    num, scale = 0.0, 0.0
    for k in range(len(y)):
        b = y_left[k] / y[k]
        num += w[k] * (d_left[k] - d[k] * b)
        scale += w[k] * w[k] * b * (1.0 - b)
    return num, scale


def brute_sigmoid(z, c, a):
    x = a * (c - z)
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def brute_soft_stat(data, c, a):
    """(N_a, S_a^2) of the smoothed statistic by direct summation."""
    _, y, d, risk_sets, fail_sets = brute_risk_structure(data)
    num, scale = 0.0, 0.0
    for k in range(len(y)):
        y_left = sum(brute_sigmoid(data[i].z, c, a) for i in risk_sets[k])
        d_left = sum(brute_sigmoid(data[i].z, c, a) for i in fail_sets[k])
        b = y_left / y[k]
        num += d_left - d[k] * b
        scale += b * (1.0 - b)
    return num, scale


def spaced_null_datasets(master_seed: int, n: int, count: int, min_gap: float = 4e-5):
    """First ``count`` null datasets whose distinct-z spacing is >= min_gap.

    Used by the hard-limit comparisons at a = 1e6: a candidate midpoint
    closer than ~2e-5 to a data point leaves the sigmoid visibly short of
    the indicator there, which probes float pathology rather than
    convergence.  The selection is deterministic given the master seed.
    """
    import numpy as np

    from survsplit.datagen import HazardModel, SeedSpec, generate_dataset

    model = HazardModel(1.0, 0.0, 0.5)
    out = []
    rep = 0
    while len(out) < count:
        data = generate_dataset(model, n, SeedSpec(master_seed, rep))
        gaps = np.diff(np.unique([s.z for s in data]))
        if gaps.min() >= min_gap:
            out.append(data)
        rep += 1
    return out


@pytest.fixture
def two_subject_data():
    """The worked two-subject example used across the suite."""
    return [Subject(1.0, True, 0.25), Subject(2.0, True, 0.75)]


@pytest.fixture
def two_subject_csv(tmp_path):
    path = tmp_path / "two.csv"
    path.write_text("time,event,z\n1.0,1,0.25\n2.0,1,0.75\n")
    return path
