"""alfvenlab: a desk-scale pseudo-spectral laboratory for strong-field MHD.

The package evolves the rescaled Elsasser-form incompressible MHD system on a
periodic box and verifies, by direct simulation and parameter sweeps, the
scaling behavior expected in the small Alfven number regime: uniform energy
bounds, vanishing of the nonlinear interactions, characteristic-aligned decay,
and the non-dissipative limit.
"""

from .errors import BlowUpError, ConfigurationError, DomainError, UsageError
from .spectral import (
    GridSpec,
    SpectralVectorField,
    advect,
    dealias,
    divergence_max,
    inverse_modulus_gradient,
    leray_project,
    partial_derivative,
    transform_to_physical,
    transform_to_spectral,
)
from .state import (
    ElsasserState,
    InitialDataConfig,
    PhysicalConfig,
    from_elsasser,
    initial_energy,
    make_initial_data,
    original_time,
    rescale_time,
    to_elsasser,
)
from .dynamics import (
    TendencyReport,
    TimeStepperConfig,
    error_field,
    evolve,
    linear_evolve,
    load_checkpoint,
    nonlinear_rhs,
    nu_difference,
    pressure_solve,
    save_checkpoint,
    step_rk4,
)
from .functionals import (
    FunctionalReport,
    WeightSpec,
    ball_sup,
    compute_report,
    decay_diagnostic,
    dissipation_Dk,
    energy_Ek,
    error_functionals,
    ghost_q,
    moving_weight,
    weighted_Wk,
)
from .experiments import (
    FORMAT_VERSION,
    RunConfig,
    ScalingFit,
    SweepRecord,
    default_config,
    fit_power_law,
    load_config,
    run_single,
    sweep_ball_decay,
    sweep_interaction_vanishing,
    sweep_nu_limit,
    sweep_uniformity,
)

__version__ = "0.1.0"
