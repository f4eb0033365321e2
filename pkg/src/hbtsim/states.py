"""Label-free algebra of two identical particles in one dimension.

A pair of identical particles occupying single-particle states phi and psi is
treated as a single holistic object |phi,psi> together with an exchange sign
eta (+1 bosons, -1 fermions).  No particle labels exist; brackets between two
such pairs expand into single-particle overlaps,

    <a,b|phi,psi> = <a|phi><b|psi> + eta <a|psi><b|phi>,

and the joint position amplitude

    phi(x1) psi(x2) + eta psi(x1) phi(x2)

is the familiar (anti)symmetric two-particle wavefunction, with 1 and 2
labelling the two detector positions rather than the particles.

Single-particle states are Gaussians in the bare form
exp(-(x - center)^2 / width^2) * exp(i k x), or plane waves exp(i k x).
Gaussians are deliberately stored unnormalized; `norm_constant` returns the
L2-normalizing factor.  All overlaps and operator matrix elements here are
closed-form Gaussian integrals (natural units hbar = m = 1); numerical
quadrature appears only in the test suite as an independent oracle.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DegenerateStateError

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class Gaussian:
    """Unnormalized packet exp(-(x - center)^2 / width^2) * exp(i momentum x)."""

    center: float
    width: float
    momentum: float = 0.0

    def __post_init__(self):
        if not self.width > 0.0:
            raise ValueError(f"Gaussian width must be positive, got {self.width}")


@dataclass(frozen=True)
class PlaneWave:
    """Momentum eigenstate exp(i momentum x); not square-integrable."""

    momentum: float


SingleParticleState = Union[Gaussian, PlaneWave]


class Operator(enum.Enum):
    POSITION = "position"
    MOMENTUM = "momentum"
    KINETIC_ENERGY = "kinetic-energy"


@dataclass(frozen=True)
class TwoParticleState:
    """Holistic pair |left,right> with exchange sign eta (+1 or -1).

    `left`/`right` name the two occupied single-particle states, never the
    particles; every operation below is symmetric under their role up to eta.
    """

    left: SingleParticleState
    right: SingleParticleState
    eta: int

    def __post_init__(self):
        if self.eta not in (1, -1):
            raise ValueError(f"eta must be +1 or -1, got {self.eta}")


def evaluate(state: SingleParticleState, x):
    """Position-space value of the stored (unnormalized) state at x."""
    if isinstance(state, Gaussian):
        dx = np.asarray(x, dtype=float) - state.center
        return np.exp(-(dx * dx) / state.width**2 + 1j * state.momentum * np.asarray(x))
    return np.exp(1j * state.momentum * np.asarray(x))


def norm_constant(state: SingleParticleState) -> float:
    """Factor that makes the stored state L2-normalized."""
    if isinstance(state, PlaneWave):
        raise ValueError("plane waves are not square-integrable")
    # integral of exp(-2 x^2 / w^2) is w sqrt(pi/2)
    return (2.0 / math.pi) ** 0.25 / math.sqrt(state.width)


def _gauss_moments(bra: Gaussian, ket: Gaussian):
    """Moments M_n = int conj(bra)(x) x^n ket(x) dx for n = 0, 1, 2."""
    a = 1.0 / bra.width**2 + 1.0 / ket.width**2
    b = (
        2.0 * bra.center / bra.width**2
        + 2.0 * ket.center / ket.width**2
        + 1j * (ket.momentum - bra.momentum)
    )
    c = -(bra.center**2) / bra.width**2 - ket.center**2 / ket.width**2
    m0 = math.sqrt(math.pi / a) * cmath.exp(b * b / (4.0 * a) + c)
    m1 = m0 * b / (2.0 * a)
    m2 = m0 * (b * b / (4.0 * a * a) + 1.0 / (2.0 * a))
    return m0, m1, m2


def overlap(bra: SingleParticleState, ket: SingleParticleState, normalized: bool = False) -> complex:
    """Closed-form <bra|ket>.

    Distinct plane waves are treated as orthogonal (delta-normalized reading);
    the diverging self-overlap of a plane wave is rejected.  With
    ``normalized=True`` both factors are scaled to unit L2 norm first.
    """
    if isinstance(bra, PlaneWave) and isinstance(ket, PlaneWave):
        if bra.momentum == ket.momentum:
            raise ValueError("plane-wave self-overlap is not finite")
        return 0.0j
    if isinstance(bra, PlaneWave):
        q = ket.momentum - bra.momentum
        val = _SQRT_PI * ket.width * cmath.exp(1j * q * ket.center - q * q * ket.width**2 / 4.0)
        scale = norm_constant(ket) if normalized else 1.0
        return val * scale
    if isinstance(ket, PlaneWave):
        return overlap(ket, bra, normalized=normalized).conjugate()
    m0, _, _ = _gauss_moments(bra, ket)
    if normalized:
        m0 *= norm_constant(bra) * norm_constant(ket)
    return m0


def inner_product(bra: TwoParticleState, ket: TwoParticleState, normalized: bool = False) -> complex:
    """<bra_left,bra_right|ket_left,ket_right> expanded into single overlaps."""
    if bra.eta != ket.eta:
        raise ValueError(f"exchange signs differ: bra eta={bra.eta}, ket eta={ket.eta}")
    direct = overlap(bra.left, ket.left, normalized) * overlap(bra.right, ket.right, normalized)
    crossed = overlap(bra.left, ket.right, normalized) * overlap(bra.right, ket.left, normalized)
    return direct + bra.eta * crossed


def normalization_constant(state: TwoParticleState) -> float:
    """1 / sqrt(1 + eta |<left|right>|^2) for unit-norm constituents.

    Multiplying the pair amplitude by this factor makes the self
    inner product equal to one.
    """
    s = overlap(state.left, state.right, normalized=True)
    overlap_sq = abs(s) ** 2
    if state.eta == -1 and overlap_sq >= 1.0 - 1e-12:
        raise DegenerateStateError(
            "antisymmetric pair of identical states has zero norm"
        )
    return 1.0 / math.sqrt(1.0 + state.eta * overlap_sq)


def position_amplitude(state: TwoParticleState, x1, x2):
    """Joint detection amplitude left(x1) right(x2) + eta right(x1) left(x2)."""
    return (
        evaluate(state.left, x1) * evaluate(state.right, x2)
        + state.eta * evaluate(state.right, x1) * evaluate(state.left, x2)
    )


def labeled_oracle_amplitude(state: TwoParticleState, x1, x2):
    """Conventional labeled construction A(x1)B(x2) + eta B(x1)A(x2).

    Deliberately re-evaluates the single-particle wavefunctions inline instead
    of going through :func:`position_amplitude`; kept as an independent code
    path for the test suite.
    """

    def _eval(s, x):
        x = np.asarray(x, dtype=float)
        if isinstance(s, Gaussian):
            return np.exp(-((x - s.center) ** 2) / s.width**2) * np.exp(1j * s.momentum * x)
        return np.cos(s.momentum * x) + 1j * np.sin(s.momentum * x)

    a, b = state.left, state.right
    return _eval(a, x1) * _eval(b, x2) + state.eta * _eval(b, x1) * _eval(a, x2)


def _matrix_element(bra: Gaussian, ket: Gaussian, op: Operator) -> complex:
    """<bra|A ket> for L2-normalized Gaussians."""
    scale = norm_constant(bra) * norm_constant(ket)
    m0, m1, m2 = _gauss_moments(bra, ket)
    if op is Operator.POSITION:
        return scale * m1
    w2 = ket.width**2
    k = ket.momentum
    if op is Operator.MOMENTUM:
        # p ket = -i d/dx ket, with ket' = (-2(x-c)/w^2 + ik) ket
        return scale * ((2j / w2) * (m1 - ket.center * m0) + k * m0)
    # kinetic energy: -(1/2) <bra|ket''>
    quad = m2 - 2.0 * ket.center * m1 + ket.center**2 * m0
    lin = m1 - ket.center * m0
    val = (4.0 / w2**2) * quad - (4j * k / w2) * lin - (k * k) * m0 - (2.0 / w2) * m0
    return scale * (-0.5) * val


def one_particle_expectation(state: TwoParticleState, op: Operator) -> float:
    """Expectation of a one-body operator summed over both particles.

    Expands to <l|A l> + <r|A r> + eta (<l|r><r|A l> + <r|l><l|A r>), divided
    by the squared norm 1 + eta |<l|r>|^2, all with unit-norm constituents.
    """
    if not (isinstance(state.left, Gaussian) and isinstance(state.right, Gaussian)):
        raise ValueError("expectation values require normalizable (Gaussian) states")
    l, r, eta = state.left, state.right, state.eta
    s = overlap(l, r, normalized=True)
    norm_sq = 1.0 + eta * abs(s) ** 2
    if norm_sq < 1e-12:
        raise DegenerateStateError("antisymmetric pair of identical states has zero norm")
    total = (
        _matrix_element(l, l, op)
        + _matrix_element(r, r, op)
        + eta * (s * _matrix_element(r, l, op) + s.conjugate() * _matrix_element(l, r, op))
    )
    value = total / norm_sq
    if abs(value.imag) > 1e-10 * max(1.0, abs(value.real)):
        raise ArithmeticError(f"expectation value came out complex: {value}")
    return value.real
