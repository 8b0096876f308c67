"""Blind super-resolution of point sources via a lifted block-Hankel
nuclear-norm program, with MUSIC-style frequency retrieval and Monte Carlo
experiment harnesses."""

from .lift import (
    LiftShape,
    apply_weights,
    hankel_basis_matrix,
    hankel_weights,
    iso_lift,
    iso_lift_adjoint,
    lifted_block,
    stack_permutation,
    stacked_hankel,
    two_level_lift,
    vec_hankel,
    vec_hankel_adjoint,
)
from .model import (
    IncoherenceReport,
    PointSourceModel,
    SubspaceMatrix,
    VandermondeFactors,
    add_noise,
    apply_measurement,
    apply_measurement_adjoint,
    build_vandermonde_factors,
    incoherence_diagnostic,
    load_problem,
    noise_sigma,
    sample_model,
    sample_subspace,
    save_problem,
    steering_matrix,
    steering_vector,
    synthesize_data_matrix,
    wraparound_gap,
)
from .solver import (
    SolveReport,
    SolverConfig,
    nuclear_norm,
    save_report,
    solve_vhl,
    svt,
)
from .estimate import (
    NoiseSubspace,
    PeakSelection,
    PseudospectrumCurve,
    RecoveredSources,
    default_grid,
    noise_subspace_mmv,
    noise_subspace_single,
    noise_subspace_vhm,
    pick_peaks,
    pseudospectrum,
    recover_amplitudes,
    save_pseudospectrum_csv,
    save_sources,
)
from .bench import (
    PhaseTransitionConfig,
    SweepConfig,
    SweepResult,
    TrialGrid,
    estimate_frequencies,
    grid_to_csv,
    grid_to_svg,
    hausdorff_distance,
    relative_error,
    run_phase_transition,
    run_snr_sweep,
    sweep_to_csv,
    sweep_to_svg,
)

__version__ = "0.1.0"
