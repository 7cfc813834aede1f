"""Two detuned qutrits in a common non-Markovian bath.

Hierarchical-equations-of-motion propagation with measures of relative-phase
synchronization (Husimi-based), negativity, and mutual information, plus
steady-state detection and parameter sweeps. The heavy lifting happens in the
compiled extension; matrices cross the boundary as numpy arrays.
"""

from qsync._core import (
    BathSpec,
    CellRecord,
    ConvergenceRow,
    DegenerateBath,
    HierarchySpace,
    InitialPreset,
    InvalidDensityMatrix,
    InvalidInitialState,
    MaxSync,
    MeasureReport,
    NegativityResult,
    NonFiniteState,
    SpinCoherentState,
    SpinMatrices,
    SteadyOptions,
    SteadyResult,
    SweepGrid,
    SweepSettings,
    SyncCoherences,
    SystemModel,
    TrajectorySample,
    ZeroReference,
    __version__,
    arnold_tongue,
    build_coupling,
    build_hamiltonian,
    build_model,
    build_spin1,
    convergence_study,
    correlation_function,
    enumerate_indices,
    evolve,
    fixed_lambda_row,
    gauss_legendre,
    husimi_q,
    kron,
    make_bath,
    make_initial,
    matsubara_coefficients,
    matsubara_frequencies,
    max_stable_step,
    max_sync,
    measure_report,
    mutual_information,
    negativity_measures,
    parse_preset,
    partial_trace_first,
    partial_trace_second,
    partial_transpose,
    preset_name,
    run_cell,
    spectral_density,
    spin_coherent_state,
    steady_state,
    sync_coherences,
    sync_from_coherences,
    sync_measure,
    sync_measure_quadrature,
    temperature_scan,
    terminator_coefficient,
    tongue_width,
    validate_initial,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
