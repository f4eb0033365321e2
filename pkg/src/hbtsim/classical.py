"""Classical two-source baseline: fields, intensities, and intensity
correlations under random relative phase.

Two scalar sources of real amplitudes alpha and beta sit at +-x0
(source_separation / 2) and illuminate a screen at distance L.  At detector
position x the field is alpha e^{i k rA} + beta e^{i k rB - i phi} with exact
path lengths rA/rB = sqrt(L^2 + (x -+ x0)^2).  A uniformly random phi washes
out the single-detector fringe, <I> = alpha^2 + beta^2, but the two-detector
correlation keeps one:

    <I(x1) I(x2)> = (alpha^2+beta^2)^2
                    + 2 (alpha beta)^2 cos(k (rA1 - rB1 - rA2 + rB2)),

with fringe visibility 2 (alpha beta)^2 / (alpha^2+beta^2)^2 <= 1/2.

`correlation_mc` estimates the same average by Monte Carlo over phi using
per-chunk counter-based streams, so results are reproducible for a given seed
regardless of how the chunks are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_CHUNK = 1 << 16


@dataclass(frozen=True)
class ClassicalParams:
    """Two-source interference geometry.

    alpha, beta       : real non-negative source amplitudes
    k                 : wave-vector, > 0
    source_separation : distance between the sources (2 x0), >= 0
    screen_distance   : source-to-screen distance L, > 0
    phi               : fixed relative source phase; None means uniformly
                        random on [0, 2 pi) wherever averaging applies
    """

    alpha: float
    beta: float
    k: float
    source_separation: float
    screen_distance: float
    phi: float | None = None

    def __post_init__(self):
        if self.alpha < 0.0 or self.beta < 0.0:
            raise ValueError("amplitudes must be non-negative")
        if not self.k > 0.0:
            raise ValueError(f"wave-vector must be positive, got {self.k}")
        if self.source_separation < 0.0:
            raise ValueError("source separation must be non-negative")
        if not self.screen_distance > 0.0:
            raise ValueError("screen distance must be positive")


@dataclass(frozen=True)
class CorrelationEstimate:
    mean: float
    std_error: float
    n: int


def path_lengths(c: ClassicalParams, x):
    """(rA, rB) from the sources at +-source_separation/2 to screen point x."""
    x = np.asarray(x, dtype=float)
    half = c.source_separation / 2.0
    r_a = np.hypot(c.screen_distance, x - half)
    r_b = np.hypot(c.screen_distance, x + half)
    return r_a, r_b


def intensity(c: ClassicalParams, x, phi: float):
    """Single-detector intensity alpha^2 + beta^2 + 2 alpha beta cos(k dr + phi)."""
    r_a, r_b = path_lengths(c, x)
    return (
        c.alpha**2
        + c.beta**2
        + 2.0 * c.alpha * c.beta * np.cos(c.k * (r_a - r_b) + phi)
    )


def correlation_phase(c: ClassicalParams, x1, x2):
    """Cosine argument k (rA1 - rB1 - rA2 + rB2) of the intensity correlation."""
    r_a1, r_b1 = path_lengths(c, x1)
    r_a2, r_b2 = path_lengths(c, x2)
    return c.k * (r_a1 - r_b1 - r_a2 + r_b2)


def correlation_analytic(c: ClassicalParams, x1, x2):
    """Phase-averaged <I(x1) I(x2)> in closed form (exact for uniform phi)."""
    s = c.alpha**2 + c.beta**2
    return s * s + 2.0 * (c.alpha * c.beta) ** 2 * np.cos(correlation_phase(c, x1, x2))


def classical_visibility(c: ClassicalParams) -> float:
    """Fringe contrast 2 (alpha beta)^2 / (alpha^2 + beta^2)^2 of the correlation."""
    s = c.alpha**2 + c.beta**2
    if s == 0.0:
        raise ValueError("visibility undefined for zero total amplitude")
    return 2.0 * (c.alpha * c.beta) ** 2 / (s * s)


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    """Independent counter-based stream for one chunk of a Monte Carlo run."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(chunk,)))
    )


def correlation_mc(
    c: ClassicalParams, x1: float, x2: float, n: int, seed: int
) -> CorrelationEstimate:
    """Monte Carlo mean and standard error of I(x1, phi) I(x2, phi).

    phi is drawn i.i.d. uniform on [0, 2 pi) unless the parameters pin a fixed
    phase.  Deterministic for a given seed; the stream is generated in fixed
    chunks with independent substreams, so a parallel evaluation merging the
    same chunks reproduces the serial result bit for bit.
    """
    if n < 100:
        raise ValueError(f"need at least 100 samples, got {n}")
    total = 0.0
    total_sq = 0.0
    done = 0
    chunk = 0
    while done < n:
        m = min(_CHUNK, n - done)
        if c.phi is not None:
            phi = np.full(m, c.phi)
        else:
            phi = _chunk_rng(seed, chunk).uniform(0.0, 2.0 * math.pi, m)
        prod = intensity(c, x1, phi) * intensity(c, x2, phi)
        total += float(prod.sum())
        total_sq += float((prod * prod).sum())
        done += m
        chunk += 1
    mean = total / n
    var = max(total_sq - n * mean * mean, 0.0) / (n - 1)
    return CorrelationEstimate(mean=mean, std_error=math.sqrt(var / n), n=n)
