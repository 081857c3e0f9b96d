"""Approximation-based cross-checks for the exact engine.

Sampling is counter-based: sample i of a run is a pure function of
(seed, i), so estimates are identical regardless of evaluation order or
parallel splitting.  Samples live on a dyadic grid and membership is exact,
which means thin sets (rationals, Cantor images, sequences) are outside the
estimator's reach: a dyadic grid systematically over- or under-counts them.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction

from .analyzers import measure
from .errors import UnsupportedIntersection
from .sets import Intersection, SetExpr, contains, open_interval

Q = Fraction

_GRID_BITS = 40


@dataclass(frozen=True)
class SampleConfig:
    seed: int
    samples: int
    center: Q
    radius: Q


@dataclass(frozen=True)
class MCEstimate:
    value: float
    three_sigma: float
    hits: int
    samples: int


def _unit_sample(seed: int, index: int) -> Q:
    digest = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    j = int.from_bytes(digest[:8], "big") % (1 << _GRID_BITS)
    return Q(j, 1 << _GRID_BITS)


def mc_measure(expr: SetExpr, cfg: SampleConfig) -> MCEstimate:
    """Monte-Carlo estimate of |expr ∩ (center - radius, center + radius)|."""
    if cfg.radius <= 0 or cfg.samples <= 0:
        raise ValueError("window radius and sample count must be positive")
    lo = cfg.center - cfg.radius
    width = 2 * cfg.radius
    hits = 0
    for i in range(cfg.samples):
        x = lo + width * _unit_sample(cfg.seed, i)
        if contains(expr, x):
            hits += 1
    p = hits / cfg.samples
    sigma = math.sqrt(max(p * (1 - p), 1e-12) / cfg.samples) * float(width)
    return MCEstimate(p * float(width), 3 * sigma, hits, cfg.samples)


@dataclass(frozen=True)
class ProfilePoint:
    delta: Q
    ratio: float
    exact: bool
    uncertainty: float


def density_profile(expr: SetExpr, a, depths: int, seed: int = 0, samples: int = 20000) -> list[ProfilePoint]:
    """Window ratios |expr ∩ (a - d, a + d)| / 2d for d = 2^-k, k < depths.

    Ratios come from the exact measure when the window set normalizes;
    otherwise from the Monte-Carlo estimator.
    """
    if depths > 40:
        raise ValueError("profile depth is limited to 40")
    a = Q(a)
    out = []
    for k in range(depths):
        delta = Q(1, 2**k)
        window = open_interval(a - delta, a + delta)
        try:
            m = measure(Intersection((expr, window)))
            ratio = float(m.value / (2 * delta))
            out.append(ProfilePoint(delta, ratio, m.bound_gap == 0, float(m.bound_gap / (2 * delta))))
        except UnsupportedIntersection:
            est = mc_measure(expr, SampleConfig(seed, samples, a, delta))
            out.append(ProfilePoint(delta, est.value / float(2 * delta), False, est.three_sigma / float(2 * delta)))
    return out
