"""Collective entropy of pointer-based simultaneous position/momentum
measurements, the family of entropic lower bounds that constrain it, and a
numerical search for the minimal-entropy system states."""

from .apparatus import (MeasurementSetup, NoiseTerms, is_minimal_product,
                        noise_product, noise_terms)
from .bounds import (BOUND_TOLERANCE, BoundParams, BoundReport, gaussian_weight,
                     hirschman_deficit, lieb_convolution_check, lieb_correction,
                     lieb_lower_bound, maximize_single_param_bound, minimal_variance,
                     optimal_bound, report, single_param_bound, wehrl_constant)
from .distributions import (JointDensity, WignerGrid, convolve_densities,
                            convolve_gaussian, inferred_momentum_density,
                            inferred_position_density, joint_inferred_density,
                            marginalize, wigner_grid)
from .entropy import (EntropyResult, collective_entropy, differential_entropy,
                      gaussian_entropy, marginal_entropies,
                      squeezed_collective_entropy_closed_form)
from .exceptions import (CapabilityError, DomainError, NonConvergenceError,
                         NumericalConsistencyError, PointerEntropyError,
                         SearchError, TruncationError)
from .minimizer import (CollectiveEntropyObjective, OptimizationResult,
                        OptimizerConfig, fidelity_with_squeezed,
                        find_minimal_entropy_state, nelder_mead,
                        squeezed_fock_coefficients)
from .states import (FOCK_N_MAX, FockSuperposition, Grid, GridWavefunction,
                     ProbabilityDensity, SqueezedVacuum, SystemState,
                     auto_momentum_grid, auto_position_grid, hermite_wavefunction,
                     momentum_density, momentum_representation, position_density,
                     position_representation, state_variance)

__version__ = "0.1.0"

__all__ = [
    "BOUND_TOLERANCE", "BoundParams", "BoundReport", "CapabilityError",
    "CollectiveEntropyObjective", "DomainError", "EntropyResult", "FOCK_N_MAX",
    "FockSuperposition", "Grid", "GridWavefunction", "JointDensity",
    "MeasurementSetup", "NoiseTerms", "NonConvergenceError",
    "NumericalConsistencyError", "OptimizationResult", "OptimizerConfig",
    "PointerEntropyError", "ProbabilityDensity", "SearchError", "SqueezedVacuum",
    "SystemState", "TruncationError", "WignerGrid", "auto_momentum_grid",
    "auto_position_grid", "collective_entropy", "convolve_densities",
    "convolve_gaussian", "differential_entropy", "fidelity_with_squeezed",
    "find_minimal_entropy_state", "gaussian_entropy", "gaussian_weight",
    "hermite_wavefunction", "hirschman_deficit", "inferred_momentum_density",
    "inferred_position_density", "is_minimal_product", "joint_inferred_density",
    "lieb_convolution_check", "lieb_correction", "lieb_lower_bound",
    "marginal_entropies", "marginalize", "maximize_single_param_bound",
    "minimal_variance", "momentum_density", "momentum_representation",
    "nelder_mead", "noise_product", "noise_terms", "optimal_bound",
    "position_density", "position_representation", "report",
    "single_param_bound", "squeezed_collective_entropy_closed_form",
    "squeezed_fock_coefficients", "state_variance", "wehrl_constant",
    "wigner_grid",
]
