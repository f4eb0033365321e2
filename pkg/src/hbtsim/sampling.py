"""Monte Carlo coincidence counting: draw detector pairs (x1, x2) from a joint
density, histogram the separations, and fit the fringe pattern.

Sampling is exact rejection sampling.  Both quantum densities in this package
factor as (sum of two Gaussian product terms) * (1 + eta cos/cosh) with
|cos/cosh| <= 1, so the equal-weight mixture of the two Gaussian terms is a
rigorous envelope with constant 2 and acceptance near 50%.  The proposal is
parameterized in the separation/center-of-mass coordinates u = x1 - x2,
v = x1 + x2, where both densities separate.

Streams are generated in fixed-size chunks, each from its own counter-based
substream of the seed, and merged in chunk order; the output is therefore
bit-identical for a given seed no matter how the chunks would be scheduled
across workers.

The fitted fringe model is the shared closed-form shape of the separation
marginal,

    A exp(-g u^2) (cosh(b u) + m cos(c u)),

with signed modulation m standing in for eta * visibility: m < 0 is a
coincidence dip at u = 0 (anti-bunching), m > 0 a peak (bunching).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit

from .errors import EnvelopeFailureError, FitFailureError

_CHUNK = 1 << 16
_COSH_CAP = 700.0


@dataclass(frozen=True)
class SamplerConfig:
    """Rejection-sampler settings.

    `max_rejection_factor` is the envelope constant; 2 is rigorous for the
    quantum densities here and values below 2 are rejected at sampling time.
    `validate_envelope` re-checks the bound on every proposed point (slow,
    meant for debug runs and tests).
    """

    n_samples: int
    seed: int = 0
    proposal: str = "gaussian-mixture"
    max_rejection_factor: float = 2.0
    validate_envelope: bool = False

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")
        if self.proposal != "gaussian-mixture":
            raise ValueError(f"unknown proposal kind: {self.proposal!r}")


@dataclass(frozen=True)
class GaussianMixtureProposal:
    """Equal-weight mixture of the two no-interference Gaussian terms.

    In (u, v) coordinates: u ~ N(+-u_center, u_sigma^2) (mixture), independent
    of v ~ N(0, v_sigma^2); mapped to x1 = (v+u)/2, x2 = (v-u)/2.
    """

    u_center: float
    u_sigma: float
    v_sigma: float

    def sample(self, rng: np.random.Generator, n: int):
        signs = np.where(rng.random(n) < 0.5, 1.0, -1.0)
        u = rng.normal(0.0, self.u_sigma, n) + signs * self.u_center
        v = rng.normal(0.0, self.v_sigma, n)
        return (v + u) / 2.0, (v - u) / 2.0

    def density(self, x1, x2):
        """Mixture density in (x1, x2) coordinates (Jacobian 2 included)."""
        u = np.asarray(x1) - np.asarray(x2)
        v = np.asarray(x1) + np.asarray(x2)
        gu = np.exp(-((u - self.u_center) ** 2) / (2 * self.u_sigma**2)) + np.exp(
            -((u + self.u_center) ** 2) / (2 * self.u_sigma**2)
        )
        gv = np.exp(-(v * v) / (2 * self.v_sigma**2))
        norm = 2.0 * math.pi * self.u_sigma * self.v_sigma
        return gu * gv / norm


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(chunk,)))
    )


def sample_pairs(pdf, proposal: GaussianMixtureProposal, cfg: SamplerConfig):
    """Draw cfg.n_samples i.i.d. pairs from the (unnormalized) density `pdf`.

    Returns (samples, acceptance_rate) with samples of shape (n, 2).  The
    envelope bound pdf <= max_rejection_factor * proposal.density must hold;
    a sustained acceptance rate below 1/(10 * max_rejection_factor) aborts
    with EnvelopeFailureError, as does any directly detected bound violation
    when validation is on.
    """
    if cfg.max_rejection_factor < 2.0:
        raise ValueError(
            "max_rejection_factor below 2 cannot bound the interference term"
        )
    out = []
    accepted = 0
    proposed = 0
    chunk = 0
    while accepted < cfg.n_samples:
        rng = _chunk_rng(cfg.seed, chunk)
        x1, x2 = proposal.sample(rng, _CHUNK)
        bound = cfg.max_rejection_factor * proposal.density(x1, x2)
        target = pdf(x1, x2)
        if cfg.validate_envelope:
            bad = target > bound * (1.0 + 1e-9)
            if np.any(bad):
                i = int(np.argmax(bad))
                raise EnvelopeFailureError(
                    f"envelope violated at ({x1[i]:g}, {x2[i]:g}): "
                    f"pdf={target[i]:g} > bound={bound[i]:g}"
                )
        keep = rng.random(_CHUNK) * bound < target
        out.append(np.column_stack((x1[keep], x2[keep])))
        accepted += int(keep.sum())
        proposed += _CHUNK
        chunk += 1
        if proposed >= 4 * _CHUNK and accepted < proposed / (10.0 * cfg.max_rejection_factor):
            raise EnvelopeFailureError(
                f"acceptance rate {accepted / proposed:.4f} after {proposed} proposals; "
                "proposal does not match the target density"
            )
    samples = np.concatenate(out)[: cfg.n_samples]
    return samples, accepted / proposed


@dataclass(frozen=True)
class CoincidenceHistogram:
    """Binned counts of detector separations dx = x1 - x2."""

    bin_edges: np.ndarray
    counts: np.ndarray
    n_total: int
    acceptance_rate: float = 1.0
    n_underflow: int = 0
    n_overflow: int = 0

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    @property
    def bin_width(self) -> float:
        return float(self.bin_edges[1] - self.bin_edges[0])


def histogram_dx(samples, bins: int, dx_range, acceptance_rate: float = 1.0) -> CoincidenceHistogram:
    """Histogram of x1 - x2; out-of-range samples are dropped but counted."""
    samples = np.asarray(samples)
    if samples.size == 0:
        raise ValueError("empty sample stream")
    if bins < 8:
        raise ValueError(f"need at least 8 bins, got {bins}")
    lo, hi = float(dx_range[0]), float(dx_range[1])
    if not hi > lo:
        raise ValueError("histogram range must be increasing")
    dx = samples[:, 0] - samples[:, 1]
    counts, edges = np.histogram(dx, bins=bins, range=(lo, hi))
    return CoincidenceHistogram(
        bin_edges=edges,
        counts=counts,
        n_total=int(counts.sum()),
        acceptance_rate=acceptance_rate,
        n_underflow=int((dx < lo).sum()),
        n_overflow=int((dx > hi).sum()),
    )


class FringeModel(enum.Enum):
    """Warm-start interpretation for the fit; the curve family is shared."""

    INDEPENDENT = "independent"
    ENTANGLED = "entangled"


@dataclass(frozen=True)
class FringeFit:
    """Estimated fringe parameters of a coincidence histogram.

    visibility is |modulation|; the sign of `modulation` distinguishes a
    central peak (+) from a central dip (-).  `shape_params` holds the raw
    fitted (amp, gauss, env, freq, mod) for re-evaluating the curve.
    """

    period: float
    visibility: float
    modulation: float
    envelope_scale: float
    residual_rms: float
    shape_params: tuple = ()


def fringe_shape(u, amp, gauss, env, freq, mod):
    """A exp(-g u^2) (cosh(b u) + m cos(c u)) evaluated at separations u."""
    u = np.asarray(u, dtype=float)
    return amp * np.exp(-gauss * u * u) * (
        np.cosh(np.clip(env * u, -_COSH_CAP, _COSH_CAP)) + mod * np.cos(freq * u)
    )


def _fft_frequency_guess(h: CoincidenceHistogram) -> float:
    y = h.counts.astype(float) - h.counts.mean()
    spectrum = np.abs(np.fft.rfft(y))
    spectrum[0] = 0.0
    k = int(np.argmax(spectrum))
    span = h.bin_edges[-1] - h.bin_edges[0]
    return 2.0 * math.pi * max(k, 1) / span


def _initial_guess(h: CoincidenceHistogram, params, model: FringeModel):
    centers = h.centers
    counts = h.counts.astype(float)
    if params is not None:
        if model is FringeModel.INDEPENDENT:
            d2 = params.epsilon**4 + params.delta**2
            gauss = params.epsilon**2 / d2
            env = 4.0 * params.epsilon**2 * params.x0 / d2
            freq = 4.0 * params.delta * params.x0 / d2
        else:
            d = 1.0 / params.sigma**4 + params.delta_e**2
            gauss = 2.0 / (params.sigma**2 * d)
            env = 8.0 * params.x0 / (params.sigma**2 * d)
            freq = 8.0 * params.delta_e * params.x0 / d
        mod = 0.9 * params.eta
    else:
        var = max(np.average(centers**2, weights=np.maximum(counts, 1e-12)), 1e-12)
        gauss = 1.0 / (2.0 * var)
        env = 1e-6 / math.sqrt(var)
        freq = _fft_frequency_guess(h)
        mid = len(counts) // 2
        wings = counts[: mid // 2].mean() + counts[-(mid // 2):].mean()
        mod = 0.5 if counts[mid] > wings else -0.5
    shape = fringe_shape(centers, 1.0, gauss, env, freq, mod)
    denom = float(np.dot(shape, shape))
    amp = float(np.dot(counts, shape)) / denom if denom > 0 else counts.max()
    return [max(amp, 1e-12), gauss, env, freq, mod]


def fit_fringes(h: CoincidenceHistogram, model: FringeModel, params=None) -> FringeFit:
    """Weighted least-squares fit of the fringe shape to a histogram.

    Poisson weights sqrt(max(count, 1)); warm-started from the analytic
    parameters when `params` (PacketParams or EprParams) is supplied,
    otherwise from the FFT peak of the counts.  Restarts with jittered
    starting points before giving up.
    """
    counts = h.counts.astype(float)
    if counts.sum() < 1e4:
        raise ValueError(f"need >= 1e4 total counts for a fit, got {int(counts.sum())}")
    p0 = _initial_guess(h, params, model)
    span = float(h.bin_edges[-1] - h.bin_edges[0])
    if span * p0[3] < 6.0 * math.pi:  # fewer than 3 periods across the range
        raise ValueError("histogram must span at least 3 fringe periods")
    centers = h.centers
    sigma = np.sqrt(np.maximum(counts, 1.0))
    lower = [0.0, 0.0, 0.0, 0.0, -1.05]
    upper = [np.inf, np.inf, np.inf, np.inf, 1.05]
    rng = np.random.default_rng(12345)
    last_error = None
    for attempt in range(6):
        start = list(p0)
        if attempt > 0:
            jitter = rng.uniform(0.8, 1.25, 4)
            start = [p0[0] * jitter[0], p0[1] * jitter[1], p0[2] * jitter[2],
                     p0[3] * jitter[3], p0[4]]
        start = [min(max(s, lo), up) for s, lo, up in zip(start, lower, upper)]
        try:
            popt, _ = curve_fit(
                fringe_shape, centers, counts, p0=start, sigma=sigma,
                absolute_sigma=True, bounds=(lower, upper), maxfev=20000,
            )
            break
        except RuntimeError as err:
            last_error = err
    else:
        raise FitFailureError(
            f"fringe fit failed after 6 attempts (start {p0}): {last_error}"
        )
    amp, gauss, env, freq, mod = popt
    residuals = (counts - fringe_shape(centers, *popt)) / sigma
    return FringeFit(
        period=float(2.0 * math.pi / freq),
        visibility=float(abs(mod)),
        modulation=float(mod),
        envelope_scale=float(1.0 / env) if env > 1e-300 else math.inf,
        residual_rms=float(np.sqrt(np.mean(residuals**2))),
        shape_params=tuple(float(v) for v in popt),
    )
