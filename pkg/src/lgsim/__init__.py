"""Strong-vs-weak measurement simulator and ensemble-budget calculator
for Leggett-Garg style two-time measurement runs.
"""

__version__ = "0.1.0"

from .budget import (
    BudgetInput,
    BudgetReport,
    strong_error,
    strong_subensemble,
    target_error,
    total_strong_ensemble,
    wastage_report,
    weak_error_both,
)
from .errors import (
    DimensionMismatchError,
    PerturbationAccuracyWarning,
    PureStateRequiredError,
    ValidationError,
    WeakRegimeWarning,
)
from .invasiveness import (
    InvasivenessReport,
    measure_invasiveness,
    predicted_strong,
    predicted_weak,
    wasted_resource,
)
from .measurement import (
    MeasurementOutcome,
    PointerModel,
    PointerStatistics,
    pointer_statistics,
    sample_strong_readings,
    sample_weak_readings,
    strong_channel,
    strong_sample,
    weak_channel,
    weak_channel_exact,
    weak_channel_perturbative,
    weak_sample,
)
from .protocol import (
    CorrelatorEstimate,
    DynamicsSpec,
    SeriesPlan,
    build_series,
    estimate_correlator,
    k3_statistic,
    lg_satisfied,
    precession_qubit,
    quantum_k3_oracle,
    run_series,
)
from .quantum import (
    DensityMatrix,
    Observable,
    SpectrumWeights,
    basis_state,
    born_weights,
    evolve,
    expectation,
    maximally_mixed,
    overlap_fidelity,
    pauli,
    plus_state,
    propagator,
    pure_state,
    purity,
    spectral_decompose,
    variance,
)
from .streams import substream
