"""Momentum-entangled Gaussian pairs and their coincidence fringes.

The pair is prepared in a normalizable two-parameter entangled state whose
position amplitude is

    Psi(x1, x2) = sqrt(sigma / (pi Omega)) * exp(-(x1+x2)^2 / 4 Omega^2)
                  * ( exp(-(x1-x2-2x0)^2 sigma^2)
                    + eta exp(-(x1-x2+2x0)^2 sigma^2) ),

i.e. two shifted Gaussians in the relative coordinate entangled with a broad
center-of-mass profile.  sigma sets the relative-momentum spread, Omega the
center-of-mass localization.  At 2 Omega sigma = 1 the state factorizes into
the independent two-packet state of :mod:`hbtsim.wavepacket` with
eps = sqrt(2) Omega; for sigma, Omega -> infinity it approaches the ideal
(unnormalizable) momentum-anticorrelated pair.

Free flight enters through delta_e = 4 t = 2 lambda L / pi (twice the
independent-particle spread parameter).  The evolved amplitude is

    Psi_t = C_t * exp(-(x1+x2)^2 / (4 Omega^2 + i delta_e))
            * ( exp(-(x1-x2-2x0)^2 / (1/sigma^2 + i delta_e))
              + eta exp(-(x1-x2+2x0)^2 / (1/sigma^2 + i delta_e)) ),

    C_t = pi^(-1/2) [ (Omega^2 + delta_e^2/(16 Omega^2))
                      * (1/sigma^2 + sigma^2 delta_e^2) ]^(-1/4),

and `epr_evolved_pdf` is its exact squared modulus, carrying the same
cosh-enveloped cosine fringe structure as the independent-particle density.
Only eta=+1 is the physically symmetric preparation; eta=-1 is accepted for
symmetry experiments without claiming a physical fermionic source.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import NoFringeError
from .wavepacket import _COSH_CAP, PacketParams

_PRODUCT_TOL = 1e-9
_STRONG_FACTOR = 1e-4


@dataclass(frozen=True)
class EprParams:
    """Entangled-pair parameters.

    sigma   : relative-momentum spread, > 0
    omega   : center-of-mass localization length, > 0
    x0      : source half-separation, >= 0
    eta     : +1 symmetric (bosonic), -1 accepted for testing only
    delta_e : spread parameter 4t = 2 lambda L / pi, >= 0
    """

    sigma: float
    omega: float
    x0: float
    eta: int
    delta_e: float = 0.0

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not self.omega > 0.0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.x0 < 0.0:
            raise ValueError(f"x0 must be non-negative, got {self.x0}")
        if self.delta_e < 0.0:
            raise ValueError(f"delta_e must be non-negative, got {self.delta_e}")
        if self.eta not in (1, -1):
            raise ValueError(f"eta must be +1 or -1, got {self.eta}")
        if self.eta == -1 and self.x0 == 0.0:
            raise ValueError("eta=-1 with x0=0 is identically zero (degenerate state)")


class Regime(enum.Enum):
    PRODUCT = "product"
    ENTANGLED = "entangled"
    STRONG_ENTANGLED = "strong-entangled"


@dataclass(frozen=True)
class EntanglementDiagnostic:
    ratio: float  # 2 omega sigma; 1 at the unentangled point
    regime: Regime


def entanglement_diagnostic(e: EprParams) -> EntanglementDiagnostic:
    """Classify the parameter point: product, entangled, or strong-entangled.

    The product point is 2 omega sigma = 1 (tolerance 1e-9); strong
    entanglement means 1/sigma^4 <= 1e-4 delta_e^2.
    """
    ratio = 2.0 * e.omega * e.sigma
    if abs(ratio - 1.0) < _PRODUCT_TOL:
        regime = Regime.PRODUCT
    elif 1.0 / e.sigma**4 <= _STRONG_FACTOR * e.delta_e**2:
        regime = Regime.STRONG_ENTANGLED
    else:
        regime = Regime.ENTANGLED
    return EntanglementDiagnostic(ratio=ratio, regime=regime)


def product_equivalent(p: PacketParams) -> EprParams:
    """Entangled-state parameters that reduce exactly to the given packet pair."""
    return EprParams(
        sigma=1.0 / (math.sqrt(2.0) * p.epsilon),
        omega=p.epsilon / math.sqrt(2.0),
        x0=p.x0,
        eta=p.eta,
        delta_e=2.0 * p.delta,
    )


def _relative_denominator(e: EprParams) -> float:
    return 1.0 / e.sigma**4 + e.delta_e**2


def total_norm(e: EprParams) -> float:
    """Exact space integral of the unnormalized joint density."""
    return 1.0 + e.eta * math.exp(-8.0 * e.sigma**2 * e.x0**2)


def epr_position_amplitude(e: EprParams, x1, x2):
    """Initial pair amplitude at detector positions (x1, x2)."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    u = x1 - x2
    v = x1 + x2
    pref = math.sqrt(e.sigma / (math.pi * e.omega))
    cm = np.exp(-(v * v) / (4.0 * e.omega**2))
    rel = (
        np.exp(-((u - 2 * e.x0) ** 2) * e.sigma**2)
        + e.eta * np.exp(-((u + 2 * e.x0) ** 2) * e.sigma**2)
    )
    return pref * cm * rel


def _evolved_prefactor(e: EprParams) -> float:
    cm_term = e.omega**2 + e.delta_e**2 / (16.0 * e.omega**2)
    rel_term = 1.0 / e.sigma**2 + e.sigma**2 * e.delta_e**2
    return (cm_term * rel_term) ** -0.25 / math.sqrt(math.pi)


def epr_evolved_amplitude(e: EprParams, x1, x2):
    """Pair amplitude after free flight parameterized by delta_e."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    u = x1 - x2
    v = x1 + x2
    zc = 4.0 * e.omega**2 + 1j * e.delta_e
    zr = 1.0 / e.sigma**2 + 1j * e.delta_e
    cm = np.exp(-(v * v) / zc)
    rel = np.exp(-((u - 2 * e.x0) ** 2) / zr) + e.eta * np.exp(-((u + 2 * e.x0) ** 2) / zr)
    return _evolved_prefactor(e) * cm * rel


def epr_evolved_pdf(e: EprParams, x1, x2, normalized: bool = False):
    """Joint detection density |epr_evolved_amplitude|^2 in closed form."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    u = x1 - x2
    v = x1 + x2
    d = _relative_denominator(e)
    rel_rate = 2.0 / (e.sigma**2 * d)
    cm = np.exp(-8.0 * e.omega**2 * v * v / (16.0 * e.omega**4 + e.delta_e**2))
    gauss = np.exp(-rel_rate * (u - 2 * e.x0) ** 2) + np.exp(-rel_rate * (u + 2 * e.x0) ** 2)
    cosh_arg = np.clip(8.0 * e.x0 * u / (e.sigma**2 * d), -_COSH_CAP, _COSH_CAP)
    fringe = 1.0 + e.eta * np.cos(8.0 * e.delta_e * e.x0 * u / d) / np.cosh(cosh_arg)
    out = _evolved_prefactor(e) ** 2 * cm * gauss * fringe
    if normalized:
        out = out / total_norm(e)
    return out


def epr_dx_marginal(e: EprParams, dx, normalized: bool = True):
    """Coincidence density of the detector separation dx = x1 - x2."""
    dx = np.asarray(dx, dtype=float)
    d = _relative_denominator(e)
    rel_rate = 2.0 / (e.sigma**2 * d)
    cm_integral = math.sqrt(math.pi * (16.0 * e.omega**4 + e.delta_e**2) / (8.0 * e.omega**2))
    gauss = np.exp(-rel_rate * (dx - 2 * e.x0) ** 2) + np.exp(-rel_rate * (dx + 2 * e.x0) ** 2)
    cosh_arg = np.clip(8.0 * e.x0 * dx / (e.sigma**2 * d), -_COSH_CAP, _COSH_CAP)
    fringe = 1.0 + e.eta * np.cos(8.0 * e.delta_e * e.x0 * dx / d) / np.cosh(cosh_arg)
    out = 0.5 * _evolved_prefactor(e) ** 2 * cm_integral * gauss * fringe
    if normalized:
        out = out / total_norm(e)
    return out


def visibility_envelope(e: EprParams, dx) -> float:
    """Upper bound on the fringe contrast at separation dx."""
    d = _relative_denominator(e)
    arg = 8.0 * e.x0 * np.asarray(dx, dtype=float) / (e.sigma**2 * d)
    return 1.0 / np.cosh(np.clip(arg, -_COSH_CAP, _COSH_CAP))


def marginal_scale(e: EprParams) -> float:
    """Gaussian scale (std) of the dx marginal envelope."""
    d = _relative_denominator(e)
    return math.sqrt(e.sigma**2 * d) / 2.0


def cm_scale(e: EprParams) -> float:
    """Gaussian scale (std) of the center-of-mass coordinate x1 + x2."""
    return math.sqrt((16.0 * e.omega**4 + e.delta_e**2) / (16.0 * e.omega**2))


def coincidence_proposal(e: EprParams):
    """Rejection-sampling envelope mixture built from the two relative terms."""
    from .sampling import GaussianMixtureProposal

    return GaussianMixtureProposal(
        u_center=2.0 * e.x0, u_sigma=marginal_scale(e), v_sigma=cm_scale(e)
    )


def epr_fringe_period(e: EprParams) -> float:
    """Period in x1 - x2 of the interference cosine."""
    if e.x0 == 0.0 or e.delta_e == 0.0:
        raise NoFringeError("fringes require x0 > 0 and delta_e > 0")
    return math.pi * _relative_denominator(e) / (4.0 * e.delta_e * e.x0)
