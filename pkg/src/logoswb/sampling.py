"""Seeded projective-measurement sampling and empirical PSAs.

Draws use numpy's PCG64 bit generator seeded with the run's 64-bit seed and
inverse-CDF lookup over the outcome probabilities in id order, so the same
(state, context, shots, seed) always gives the same counts on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .linalg import DensityMatrix
from .psa import PSA, RankOneContext, born_value, resolution_vectors

DEFAULT_MIN_SHOTS = 100


@dataclass(frozen=True)
class SampleRun:
    ids: tuple[str, ...]
    shots: int
    seed: int
    counts: Mapping[str, int]


def outcome_probabilities(rho: DensityMatrix, context: RankOneContext, tol: Tolerances = DEFAULT_TOL):
    resolution_vectors(context, tol)
    items = sorted(context, key=lambda item: item[0])
    return tuple(i for i, _ in items), np.array([born_value(rho, p, tol, i) for i, p in items])


def sample_context(
    rho: DensityMatrix, context: RankOneContext, shots: int, seed: int, tol: Tolerances = DEFAULT_TOL
) -> SampleRun:
    if shots < 1:
        raise ValueError("shots must be positive")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    ids, probs = outcome_probabilities(rho, context, tol)
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    rng = np.random.Generator(np.random.PCG64(seed))
    idx = np.searchsorted(cdf, rng.random(shots), side="right")
    counts = np.bincount(idx, minlength=len(ids))
    return SampleRun(ids, int(shots), int(seed), MappingProxyType({i: int(c) for i, c in zip(ids, counts)}))


def estimate_psa(run: SampleRun, min_shots: int = DEFAULT_MIN_SHOTS) -> PSA:
    """Relative frequencies; ``low_statistics`` flags runs below ``min_shots``."""
    table = {i: run.counts[i] / run.shots for i in run.ids}
    return PSA(MappingProxyType(table), None, run.shots, run.shots < min_shots)
