"""Two-particle Hanbury Brown-Twiss interference toolkit.

Closed-form joint-detection densities for classical waves, independent
bosonic/fermionic Gaussian packets, and momentum-entangled pairs, with
independent numerical oracles and Monte Carlo coincidence counting.
"""

from .classical import (
    ClassicalParams,
    CorrelationEstimate,
    classical_visibility,
    correlation_analytic,
    correlation_mc,
    correlation_phase,
    intensity,
    path_lengths,
)
from .epr import (
    EntanglementDiagnostic,
    EprParams,
    Regime,
    entanglement_diagnostic,
    epr_dx_marginal,
    epr_evolved_amplitude,
    epr_evolved_pdf,
    epr_fringe_period,
    epr_position_amplitude,
    product_equivalent,
)
from .errors import (
    DegenerateStateError,
    EnvelopeFailureError,
    FitFailureError,
    GridResolutionError,
    NoFringeError,
    SimulationError,
)
from .sampling import (
    CoincidenceHistogram,
    FringeFit,
    FringeModel,
    GaussianMixtureProposal,
    SamplerConfig,
    fit_fringes,
    fringe_shape,
    histogram_dx,
    sample_pairs,
)
from .states import (
    Gaussian,
    Operator,
    PlaneWave,
    TwoParticleState,
    inner_product,
    labeled_oracle_amplitude,
    norm_constant,
    normalization_constant,
    one_particle_expectation,
    overlap,
    position_amplitude,
)
from .wavepacket import (
    GridSpec,
    PacketParams,
    default_grid,
    dx_marginal,
    evolved_amplitude,
    fringe_period,
    interference_free_pdf,
    joint_pdf,
    normalization_integral,
    spectral_oracle_evolve,
    spread_from_time,
    spread_from_wavelength,
    visibility_envelope,
)

__version__ = "0.1.0"
