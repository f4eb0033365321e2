"""Free spreading of two independent Gaussian packets and their joint-detection
fringes.

Two identical particles are released from sources at +x0 and -x0 as Gaussian
packets of width eps (natural units hbar = m = 1).  After free flight the
spread is carried by a single parameter

    delta = 2 t          (massive particles, hbar = m = 1)
          = lambda L / pi (wavelength lambda, flight distance L)

and the pair amplitude of detecting one particle at x1 and one at x2 is

    psi(x1, x2) = a * ( exp(-(x1-x0)^2/z) exp(-(x2+x0)^2/z)
                  + eta exp(-(x1+x0)^2/z) exp(-(x2-x0)^2/z) ),
    z = eps^2 + i delta,   a = 1 / (sqrt(pi) (eps + i delta / eps)).

Its squared modulus carries fringes in x1 - x2:

    |psi|^2 = (2 / (pi s^2)) exp(-2 eps^2 (x1^2 + x2^2 + 2 x0^2)/(eps^4+delta^2))
              * cosh(b (x1-x2)) * (1 + eta cos(c (x1-x2)) / cosh(b (x1-x2)))

with s^2 = eps^2 + delta^2/eps^2, b = 4 eps^2 x0/(eps^4+delta^2) and
c = 4 delta x0/(eps^4+delta^2): bosons (eta=+1) bunch at x1 = x2, fermions
(eta=-1) never coincide.  The fringe contrast envelope is 1/cosh(b (x1-x2)).

The module keeps the closed forms exact and cheap; `spectral_oracle_evolve`
provides an independent FFT-based propagation of the initial state on a grid
for validation.  Amplitudes follow the bare source convention above (the
pair-overlap correction to the norm is not folded into the prefactor), so
densities integrate to 1 + eta exp(-4 x0^2/eps^2); pass ``normalized=True``
where a true PDF is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import GridResolutionError, NoFringeError

_SQRT_PI = math.sqrt(math.pi)
_COSH_CAP = 700.0  # cosh overflows just above this; beyond it the fringe term is 0
_MIN_WIDTH = 1e-9


@dataclass(frozen=True)
class PacketParams:
    """Source geometry and packet shape for the independent-particle scenario.

    epsilon : packet width, > 0
    x0      : source half-separation, >= 0
    eta     : +1 bosons, -1 fermions
    delta   : spread parameter (2t, or lambda L / pi), >= 0
    """

    epsilon: float
    x0: float
    eta: int
    delta: float = 0.0

    def __post_init__(self):
        if not self.epsilon >= _MIN_WIDTH:
            raise ValueError(f"epsilon must be >= {_MIN_WIDTH}, got {self.epsilon}")
        if self.x0 < 0.0:
            raise ValueError(f"x0 must be non-negative, got {self.x0}")
        if self.delta < 0.0:
            raise ValueError(f"delta must be non-negative, got {self.delta}")
        if self.eta not in (1, -1):
            raise ValueError(f"eta must be +1 or -1, got {self.eta}")
        if self.eta == -1 and self.x0 == 0.0:
            raise ValueError("eta=-1 with x0=0 is identically zero (degenerate state)")


def spread_from_time(t: float) -> float:
    """delta = 2 t for massive particles in natural units."""
    if t < 0.0:
        raise ValueError(f"time must be non-negative, got {t}")
    return 2.0 * t

def spread_from_wavelength(lam: float, distance: float) -> float:
    """delta = lambda L / pi for photons or de Broglie wavelength lambda."""
    if not lam > 0.0:
        raise ValueError(f"wavelength must be positive, got {lam}")
    if distance < 0.0:
        raise ValueError(f"distance must be non-negative, got {distance}")
    return lam * distance / math.pi


def _spread_scales(p: PacketParams):
    """(denominator eps^4 + delta^2, cosh rate b, fringe frequency c)."""
    d2 = p.epsilon**4 + p.delta**2
    return d2, 4.0 * p.epsilon**2 * p.x0 / d2, 4.0 * p.delta * p.x0 / d2


def total_norm(p: PacketParams) -> float:
    """Exact space integral of the unnormalized joint density."""
    return 1.0 + p.eta * math.exp(-4.0 * p.x0**2 / p.epsilon**2)


def evolved_amplitude(p: PacketParams, x1, x2):
    """Pair amplitude at detector positions (x1, x2) after spreading."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    z = p.epsilon**2 + 1j * p.delta
    pref = 1.0 / (_SQRT_PI * (p.epsilon + 1j * p.delta / p.epsilon))
    direct = np.exp(-((x1 - p.x0) ** 2 + (x2 + p.x0) ** 2) / z)
    swapped = np.exp(-((x1 + p.x0) ** 2 + (x2 - p.x0) ** 2) / z)
    return pref * (direct + p.eta * swapped)


def interference_free_pdf(p: PacketParams, x1, x2):
    """Sum of the two no-exchange product densities (no fringe term).

    This is what distinguishable particles would give; it integrates to 1.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    d2, _, _ = _spread_scales(p)
    a = p.epsilon**2 / d2
    u = x1 - x2
    v = x1 + x2
    base = np.exp(-a * ((u - 2 * p.x0) ** 2 + v * v)) + np.exp(-a * ((u + 2 * p.x0) ** 2 + v * v))
    sigma_sq = d2 / p.epsilon**2
    return base / (math.pi * sigma_sq)


def joint_pdf(p: PacketParams, x1, x2, normalized: bool = False):
    """Joint detection density |evolved_amplitude|^2 in closed form.

    Unnormalized by default (integral is 1 + eta exp(-4 x0^2/eps^2));
    ``normalized=True`` divides by that exact norm.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    _, b, c = _spread_scales(p)
    u = x1 - x2
    fringe = 1.0 + p.eta * np.cos(c * u) / np.cosh(np.clip(b * u, -_COSH_CAP, _COSH_CAP))
    out = interference_free_pdf(p, x1, x2) * fringe
    if normalized:
        out = out / total_norm(p)
    return out


def dx_marginal(p: PacketParams, dx, normalized: bool = True):
    """Coincidence density of the detector separation dx = x1 - x2.

    Closed-form marginal of `joint_pdf` over x1 + x2; this is the analytic
    curve a coincidence histogram estimates.
    """
    dx = np.asarray(dx, dtype=float)
    d2, b, c = _spread_scales(p)
    a = p.epsilon**2 / d2
    sigma_sq = d2 / p.epsilon**2
    gauss = np.exp(-a * (dx - 2 * p.x0) ** 2) + np.exp(-a * (dx + 2 * p.x0) ** 2)
    fringe = 1.0 + p.eta * np.cos(c * dx) / np.cosh(np.clip(b * dx, -_COSH_CAP, _COSH_CAP))
    out = 0.5 * math.sqrt(math.pi / a) * gauss * fringe / (math.pi * sigma_sq)
    if normalized:
        out = out / total_norm(p)
    return out


def marginal_scale(p: PacketParams) -> float:
    """Gaussian scale (std) of the dx marginal envelope."""
    d2, _, _ = _spread_scales(p)
    return math.sqrt(d2 / (2.0 * p.epsilon**2))


def coincidence_proposal(p: PacketParams):
    """Rejection-sampling envelope mixture built from the two product terms."""
    from .sampling import GaussianMixtureProposal

    scale = marginal_scale(p)
    return GaussianMixtureProposal(u_center=2.0 * p.x0, u_sigma=scale, v_sigma=scale)


def fringe_period(p: PacketParams) -> float:
    """Period in x1 - x2 of the interference cosine."""
    if p.x0 == 0.0 or p.delta == 0.0:
        raise NoFringeError("fringes require x0 > 0 and delta > 0")
    return math.pi * (p.epsilon**4 + p.delta**2) / (2.0 * p.delta * p.x0)


def visibility_envelope(p: PacketParams, dx) -> float:
    """Upper bound 1/cosh(b dx) on the fringe contrast at separation dx."""
    _, b, _ = _spread_scales(p)
    return 1.0 / np.cosh(np.clip(b * np.asarray(dx, dtype=float), -_COSH_CAP, _COSH_CAP))


@dataclass(frozen=True)
class GridSpec:
    """Uniform square grid on [-extent, extent)^2 with `points` samples per axis."""

    extent: float
    points: int

    def __post_init__(self):
        if not self.extent > 0.0:
            raise ValueError(f"extent must be positive, got {self.extent}")
        if self.points < 16:
            raise ValueError(f"points must be >= 16, got {self.points}")

    @property
    def step(self) -> float:
        return 2.0 * self.extent / self.points

    def axis(self) -> np.ndarray:
        return -self.extent + self.step * np.arange(self.points)

    def mesh(self):
        x = self.axis()
        return np.meshgrid(x, x, indexing="ij")


def required_extent(p: PacketParams) -> float:
    """Half-width covering the sources plus six spread widths."""
    return p.x0 + 6.0 * max(p.epsilon, p.delta / p.epsilon)


def check_resolution(p: PacketParams, grid: GridSpec) -> None:
    """Coverage and Nyquist checks; raises GridResolutionError when violated."""
    problems = []
    if grid.extent < required_extent(p):
        problems.append(
            f"extent {grid.extent:g} < required {required_extent(p):g}"
        )
    if grid.step > p.epsilon / 4.0:
        problems.append(
            f"step {grid.step:g} does not resolve packet width {p.epsilon:g}"
        )
    if p.x0 > 0.0 and p.delta > 0.0:
        period = fringe_period(p)
        if grid.step > period / 6.0:
            problems.append(
                f"step {grid.step:g} does not resolve fringe period {period:g}"
            )
    if problems:
        raise GridResolutionError("; ".join(problems))


def default_grid(p: PacketParams, points: int = 1024, max_points: int = 4096) -> GridSpec:
    """Smallest power-of-two grid from `points` that passes `check_resolution`."""
    extent = required_extent(p)
    n = points
    while True:
        grid = GridSpec(extent=extent, points=n)
        try:
            check_resolution(p, grid)
            return grid
        except GridResolutionError:
            if n >= max_points:
                raise
            n *= 2


def spectral_oracle_evolve(p: PacketParams, grid: GridSpec) -> np.ndarray:
    """Evolve the t=0 pair amplitude on the grid by exact momentum-space phases.

    The initial field is multiplied by exp(-i (k1^2 + k2^2) t / 2) in the
    two-particle momentum representation (t = delta/2), which is unitary and
    independent of the closed-form propagation.
    """
    check_resolution(p, grid)
    x1, x2 = grid.mesh()
    psi0 = evolved_amplitude(replace(p, delta=0.0), x1, x2)
    k = 2.0 * math.pi * np.fft.fftfreq(grid.points, d=grid.step)
    k1, k2 = np.meshgrid(k, k, indexing="ij")
    phase = np.exp(-0.25j * p.delta * (k1 * k1 + k2 * k2))
    return np.fft.ifft2(np.fft.fft2(psi0) * phase)


def normalization_integral(p: PacketParams, grid: GridSpec) -> float:
    """2-D quadrature of the (unnormalized) joint density over the grid."""
    check_resolution(p, grid)
    x1, x2 = grid.mesh()
    return float(np.sum(joint_pdf(p, x1, x2)) * grid.step**2)
