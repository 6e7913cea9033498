"""Free relativistic spin-0 wavepackets: spectral evolution in the coupled
and particle/anti-particle-separated representations, their densities,
currents and guidance velocity fields, and Bohmian trajectory integration."""

from ._kernels import backend_name
from .bohm import (
    IntegratorConfig,
    SuperluminalReport,
    Trajectory,
    UncoupledFlow,
    check_non_crossing,
    integrate_trajectories,
    integrate_trajectory,
    sample_initial_positions,
    superluminal_scan,
)
from .canonical import (
    CanonicalSpectralState,
    FWMatrix,
    SpinorField,
    build_fw,
    canonical_velocity,
    charge,
    charge_current,
    charge_density,
    evolve_canonical,
    lift_initial,
)
from .errors import (
    BoundaryContaminationError,
    ConfigError,
    DomainExitError,
    EdgeAnchorError,
    MaskedRegionError,
    NumericalGuardError,
)
from .fields import FieldSlice
from .uncoupled import (
    ScalarField,
    UncoupledState,
    average_current,
    current_u_direct,
    current_u_direct_with_residue,
    current_u_fast,
    density_u,
    evolve_uncoupled,
    uncoupled_slice,
    uncoupled_velocity,
)
from .wavepacket import (
    ConjugateGrids,
    DispersionTable,
    SimulationParams,
    SpectralAmplitudes,
    conjugate_grids_from_axes,
    gaussian_spectral,
    grid_derivative,
    make_conjugate_grids,
    position_norm,
    spectral_norm,
    synthesize,
    to_momentum,
    to_position,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend_name",
    # wavepacket
    "SimulationParams",
    "ConjugateGrids",
    "DispersionTable",
    "SpectralAmplitudes",
    "conjugate_grids_from_axes",
    "make_conjugate_grids",
    "gaussian_spectral",
    "synthesize",
    "to_position",
    "to_momentum",
    "grid_derivative",
    "spectral_norm",
    "position_norm",
    # canonical representation
    "FWMatrix",
    "CanonicalSpectralState",
    "SpinorField",
    "build_fw",
    "lift_initial",
    "charge",
    "evolve_canonical",
    "charge_density",
    "charge_current",
    "canonical_velocity",
    # uncoupled representation
    "UncoupledState",
    "ScalarField",
    "evolve_uncoupled",
    "density_u",
    "current_u_direct",
    "current_u_direct_with_residue",
    "current_u_fast",
    "average_current",
    "uncoupled_velocity",
    "uncoupled_slice",
    # fields and trajectories
    "FieldSlice",
    "IntegratorConfig",
    "Trajectory",
    "SuperluminalReport",
    "UncoupledFlow",
    "sample_initial_positions",
    "integrate_trajectory",
    "integrate_trajectories",
    "check_non_crossing",
    "superluminal_scan",
    # errors
    "NumericalGuardError",
    "BoundaryContaminationError",
    "EdgeAnchorError",
    "MaskedRegionError",
    "DomainExitError",
    "ConfigError",
]
