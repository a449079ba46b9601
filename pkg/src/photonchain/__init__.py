"""Single-photon detection chains: efficiency budgets, counting statistics,
and seeded Monte-Carlo verification of the closed-form expressions."""

__version__ = "0.1.0"

from .analytic import (
    ConfidenceInputs,
    SourceSpec,
    confidence,
    excess_noise_factor,
    noise_budget,
    snr_classical,
    snr_correlated,
    snr_fano,
    squeezing_bound,
)
from .catalog import (
    DetectorSpec,
    MaterialSpec,
    ValidationFinding,
    builtin_detectors,
    builtin_materials,
    dump_specs,
    load_specs,
    validate_material,
)
from .efficiency import (
    RateBudget,
    StageEfficiencies,
    dark_adjusted_qe,
    photon_flux,
    rate_bracket,
    total_qe,
    trap_absorption,
    trap_absorption_series,
)
from .montecarlo import (
    CountStatistics,
    GainModel,
    SimulationConfig,
    apply_dark_and_deadtime,
    apply_gain,
    count_statistics,
    exact_thinned_train_moments,
    generate_counts,
    predicted_count_moments,
    run,
    thin,
)
from .tradespace import (
    ChecklistReport,
    SweepContext,
    SweepSpec,
    TrapGeometry,
    checklist,
    delay_lines,
    min_trap_detectors,
    sweep,
)
