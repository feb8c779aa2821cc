"""Caputo fractional-order tritrophic food chain: simulation, equilibria, stability, sweeps."""

from .equilibria import (
    EquilibriumSet,
    ExistenceThresholds,
    boundary_equilibria,
    equilibria,
    interior_equilibrium,
    interior_existence_thresholds,
    residual,
)
from .fode import SolverError, SolverOptions, Trajectory, gamma, reference_rk4, solve_caputo_pece
from .model import (
    Frame,
    FrameError,
    InvarianceReport,
    OriginalParams,
    RescaledParams,
    StateVector,
    invariance_check,
    original_field,
    rescale_params,
    rescale_state,
    rescaled_field,
    rhs_original,
    rhs_rescaled,
    unscale_state,
)
from .stability import (
    CharPoly,
    Clause,
    GlobalReport,
    StabilityReport,
    charpoly_coeffs,
    classify_local,
    cubic_roots,
    eigen_arg_check,
    global_stability_check,
    jacobian_at,
    local_stability,
    lyapunov_value,
)
from .sweep import SweepResult, SweepSpec, detect_first_doubling, run_sweep

__version__ = "0.1.0"
