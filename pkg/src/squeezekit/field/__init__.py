"""Lattice-regularized electromagnetic layer."""

from .lattice import FirstOrderWarning, LatticeConfig, PerturbationProfile, TransverseField, dyad, transverse_projector
from .propagator import DeltaKernel, delta_kernel, g_scalar, gamma_momentum, gamma_position, gamma_static_scalar
from .vacuum import (
    ModeState,
    continuum_energy_shift,
    evolve_coherent,
    field_energy,
    field_state_to_modes,
    ground_functional_log,
    ground_functional_log_D,
    modes_to_field,
    photon_number,
    vacuum_energy_shift,
    vacuum_kernel_momentum,
    wigner_field,
    wigner_vacuum,
)
