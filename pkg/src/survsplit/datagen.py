"""Censored survival data from the threshold hazard model.

Subjects carry a Uniform(0,1) covariate z; the hazard is constant in time,

    lambda(z) = exp(beta0 + beta1 * I(z <= c0)),

so latent failure times are exponential.  Censoring times are independent
draws from the same conditional distribution given z, which censors about
half of all subjects.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidN
from .risk_model import Subject


@dataclass(frozen=True)
class HazardModel:
    """Constant hazard with a single covariate threshold at c0."""

    beta0: float
    beta1: float
    c0: float

    def __post_init__(self):
        if not 0.0 < self.c0 < 1.0:
            raise ValueError("true cutoff c0 must lie in (0,1)")

    def rate(self, z: np.ndarray) -> np.ndarray:
        """Hazard rate exp(beta0 + beta1 * I(z <= c0)) per subject."""
        return np.exp(self.beta0 + self.beta1 * (np.asarray(z) <= self.c0))


@dataclass(frozen=True)
class SeedSpec:
    """Master seed plus replicate index; distinct pairs give independent streams."""

    master_seed: int
    replicate_index: int = 0

    def rng(self) -> np.random.Generator:
        ss = np.random.SeedSequence(
            entropy=self.master_seed, spawn_key=(self.replicate_index,)
        )
        return np.random.default_rng(ss)


def _draw_latent(rng: np.random.Generator, rate: np.ndarray) -> np.ndarray:
    """Exponential(rate) draws by inverse CDF, -log(1-U)/rate."""
    return -np.log1p(-rng.random(rate.size)) / rate


def _observe(rng: np.random.Generator, rate: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Observed (time, event) from independent latent failure and censoring draws."""
    t_lat = _draw_latent(rng, rate)
    c_lat = _draw_latent(rng, rate)
    return np.minimum(t_lat, c_lat), t_lat <= c_lat


def _resolve_time_ties(time: np.ndarray, event: np.ndarray, redraw):
    """Redraw observed pairs until all times are distinct.

    ``redraw(indices)`` returns fresh (time, event) arrays for the colliding
    subjects.  Collisions have measure zero under the continuous model;
    redrawing rather than jittering preserves the marginals exactly.
    """
    while True:
        _, inverse, counts = np.unique(time, return_inverse=True, return_counts=True)
        dup = np.flatnonzero(counts[inverse] > 1)
        if dup.size == 0:
            return time, event
        time[dup], event[dup] = redraw(dup)


def generate_dataset(model: HazardModel, n: int, seed: SeedSpec) -> list[Subject]:
    """Draw n subjects from the threshold hazard model, deterministically.

    z ~ Uniform(0,1); latent failure and censoring times are independent
    exponentials with the subject's rate; the observed time is their
    minimum and ``event`` flags whether the failure came first.  Observed
    times are guaranteed distinct.
    """
    if n < 2:
        raise InvalidN(f"need at least 2 subjects, got {n}")
    rng = seed.rng()
    z = rng.random(n)
    rate = model.rate(z)
    time, event = _observe(rng, rate)
    time, event = _resolve_time_ties(time, event, lambda dup: _observe(rng, rate[dup]))
    return [Subject(float(time[i]), bool(event[i]), float(z[i])) for i in range(n)]
