"""Emission spectra of a qubit strongly coupled to a cavity and an Ohmic
reservoir: numerically exact variational propagation (multiple coherent-state
components) plus the transformed-RWA and RWA closed forms."""

from vrsim._core import (  # noqa: F401
    DiscretizedBath,
    EomSolveReport,
    ModelParams,
    MultiD1Derivative,
    MultiD1State,
    NumericalError,
    ObservableSet,
    Peak,
    PolaritonPoles,
    PropagateOptions,
    SpectrumMethod,
    SpectrumResult,
    TrajectoryRecord,
    TrwaQuantities,
    ValidationError,
    assemble_eom,
    coherent_overlap,
    deviation,
    discretize_bath,
    energy,
    find_peaks,
    h_squared,
    initial_state,
    load_snapshot,
    make_trwa,
    norm,
    parity_expectation,
    photon_number,
    photon_numbers,
    polariton_poles,
    propagate,
    qubit_observables,
    rwa_rate,
    rwa_shift,
    rwa_spectrum,
    rwa_spectrum_via_trwa_reduction,
    save_snapshot,
    solve_eta,
    spectral_density,
    step_rk4,
    trwa_rate,
    trwa_shift,
    trwa_spectrum,
    uniform_grid,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
