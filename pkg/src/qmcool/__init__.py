"""Two-qubit, two-stroke measurement-cooling engine simulator.

A non-selective quantum measurement injects energy into a pair of Gibbs
qubits; depending on the measurement basis and the parameters, the cycle
refrigerates the cold bath, extracts energy, accelerates the natural heat
flow, or just heats everything.  The package provides the abstract
channel-level simulation, Haar-random measurement statistics, two detector
noise models, a path-polarization optics implementation layer that is
cross-validated against the abstract channels, and process/measurement
tomography with an optional shot-noise layer.
"""

__version__ = "0.1.0"

from .engine import (
    EngineConfig,
    EngineReport,
    FrequencyEstimate,
    HaarAverageReport,
    RegimeLabel,
    classify,
    critical_visibility,
    depolarizing_prediction,
    energy_changes,
    frequency_sweep,
    haar_average_report,
    initial_state,
    regime,
    run_cycle,
)
from .errors import ConfigError, SecondLawViolation, ValidationError
from .measure import (
    HaarSampler,
    MeasurementBasis,
    PovmSet,
    apply_povm,
    canonical_basis,
    haar_unitaries,
    haar_unitary,
    hom_noisy_channel,
    measurement_channel,
    rotate_basis,
    white_noise_mixture_weights,
    white_noise_povm,
)
from .optics import (
    BiasSetting,
    Hologram,
    PathPolState,
    bias_from_coefficients,
    d_of_omega,
    omega_of_d,
    project_optically,
    schmidt_projector,
    solve_hologram,
    thermal_channel_optical,
    thermalize_optically,
)
from .qcore import (
    partial_trace,
    single_qubit_state,
    state_fidelity,
    tensor,
    trace_distance,
    two_qubit_state,
    validate_density,
    von_neumann_entropy,
)
from .thermo import (
    BathSpec,
    KrausChannel,
    QubitSpec,
    apply_channel,
    energy,
    gibbs_population,
    gibbs_state,
    hamiltonian,
    thermalizing_channel,
)
from .tomo import (
    chi_from_kraus,
    default_probes,
    measurement_tomography,
    process_fidelity,
    process_tomography,
    sample_counts,
)

__all__ = [
    "__version__",
    "BathSpec",
    "BiasSetting",
    "ConfigError",
    "EngineConfig",
    "EngineReport",
    "FrequencyEstimate",
    "HaarAverageReport",
    "HaarSampler",
    "Hologram",
    "KrausChannel",
    "MeasurementBasis",
    "PathPolState",
    "PovmSet",
    "QubitSpec",
    "RegimeLabel",
    "SecondLawViolation",
    "ValidationError",
    "apply_channel",
    "apply_povm",
    "bias_from_coefficients",
    "canonical_basis",
    "chi_from_kraus",
    "classify",
    "critical_visibility",
    "d_of_omega",
    "default_probes",
    "depolarizing_prediction",
    "energy",
    "energy_changes",
    "frequency_sweep",
    "gibbs_population",
    "gibbs_state",
    "haar_average_report",
    "hamiltonian",
    "haar_unitaries",
    "haar_unitary",
    "hom_noisy_channel",
    "initial_state",
    "measurement_channel",
    "measurement_tomography",
    "omega_of_d",
    "partial_trace",
    "process_fidelity",
    "process_tomography",
    "project_optically",
    "regime",
    "rotate_basis",
    "run_cycle",
    "sample_counts",
    "schmidt_projector",
    "single_qubit_state",
    "solve_hologram",
    "state_fidelity",
    "tensor",
    "two_qubit_state",
    "validate_density",
    "thermal_channel_optical",
    "thermalize_optically",
    "thermalizing_channel",
    "trace_distance",
    "von_neumann_entropy",
    "white_noise_mixture_weights",
    "white_noise_povm",
]
