"""Exception types shared across the simulation modules."""


class SimulationError(Exception):
    """Base class for physics and numerics failures (CLI exit code 1)."""


class DegenerateStateError(SimulationError):
    """Antisymmetric combination of (nearly) identical states: the pair state
    vanishes and cannot be normalized."""


class NoFringeError(SimulationError):
    """Fringe period requested where the cosine factor is constant
    (zero source separation or zero propagation)."""


class GridResolutionError(SimulationError):
    """Grid fails the Nyquist/coverage checks for the requested parameters."""


class EnvelopeFailureError(SimulationError):
    """Rejection sampler detected a broken proposal envelope, either by a
    direct bound violation or by an implausibly low acceptance rate."""


class FitFailureError(SimulationError):
    """Nonlinear fringe fit did not converge after bounded restarts."""
