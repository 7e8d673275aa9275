"""Design and verification toolkit for observer-based PI boundary regulation
of 1-D reaction-diffusion equations."""

from ._core import (  # noqa: F401
    CoefficientFunction,
    DecayMetrics,
    DesignCertificate,
    EquilibriumState,
    GainSet,
    PlantSpec,
    ReducedModel,
    ReferenceSignal,
    Scenario,
    SimConfig,
    SpectralBasis,
    StepMode,
    ToolkitError,
    Trajectory,
    __version__,
    build_reduced_matrices,
    certify_at,
    check_cauchy_condition,
    default_gains,
    find_minimal_N,
    fit_decay_metrics,
    observer_error_check,
    run_command,
    select_N0,
    simulate,
    solve_equilibrium,
    solve_plant_basis,
)
