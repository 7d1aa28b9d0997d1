"""Sequential quantum measurement, EPR-Bohm correlations and joint-measure feasibility."""

from ._core import (
    AngleSetting,
    ConvergenceError,
    Convention,
    DimensionError,
    EventRecord,
    Leg,
    LegMismatchError,
    MalformedProblemError,
    NotHermitianError,
    SimConfig,
    SpectralDecomposition,
    ZeroProbabilityError,
    bell_inequality_report,
    born_probability,
    chsh,
    commutator_norm,
    conditional_decomposition,
    conditional_probability,
    correlation,
    empirical_correlation,
    evaluate_chsh_facets,
    leg_observable,
    luders_collapse,
    match_coincidences,
    normalize,
    order_symmetry_gap,
    pauli_x,
    pauli_y,
    pauli_z,
    reconstruct,
    run_experiment,
    sequential_joint,
    singlet_state,
    solve_feasibility,
    spectral_decompose,
    tensor_product,
)

__all__ = [name for name in dir() if not name.startswith("_")]
