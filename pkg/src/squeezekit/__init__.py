"""Gaussian squeezed states of harmonic oscillators and of the electromagnetic field."""

from .errors import (
    ConditioningError,
    LightConeError,
    NotPositiveDefiniteError,
    QuadratureError,
    SqueezeKitError,
    StepSizeError,
    TransversalityError,
    UnsupportedRepresentationError,
)
from .evolution import (
    EvolutionFactors,
    evolve_center,
    evolve_factors,
    evolve_inverse_kernel_numeric,
    evolve_kernel_closed,
    evolve_kernel_numeric,
    evolve_state,
    factors_from_kernel,
    first_order_kernel,
    real_part_evolution,
)
from .oscillator import (
    FrequencyMatrix,
    GaussianState,
    MomentumKernel,
    OscillatorSystem,
    amplitude,
    correlations,
    energy,
    energy_momentum_form,
    ground_energy,
    ground_state,
    hellmann_feynman_shift,
    kernel_from_correlations,
    momentum_amplitude,
    momentum_kernel,
    normalize_system,
    solve_frequency,
    stationarity_audit,
)
from .uncertainty import (
    CorrelationMatrix,
    SymplecticForm,
    entropic_bound,
    entropic_excess,
    entropic_excess_closed_form,
    entropies,
    symplectic_residual,
)
from .wigner import PhasePoint, wigner_by_integral, wigner_evolved, wigner_value

__version__ = "0.1.0"
