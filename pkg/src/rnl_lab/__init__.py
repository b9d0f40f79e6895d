"""Timing-dependent correlations of two-photon experiments with moving beam-splitters."""

from .model import (
    MINUS,
    PLUS,
    TAU_P,
    ConditionalTable,
    JointDistribution,
    Marginal,
    Outcome,
    correlation,
    marginal,
    total_value_probability,
    validate_distribution,
)
from .montecarlo import CountRecord, EstimateReport, discrimination_power, estimate, merge_records, sample_pairs
from .quantum import AnalyzerSettings, TwoPhotonState, bell_state, entangled_joint, mixture_joint, two_class_state
from .rnl import (
    PredictionReport,
    conditional_table,
    conditional_table_maxent,
    no_signaling_check,
    predict,
    rnl_correlation_closed_form,
    rnl_joints,
    theorem2_check,
    two_nonbefore_joint,
)
from .timing import (
    C,
    ExperimentLabel,
    ImpactClass,
    ImpactEvent,
    MarkingMode,
    SetupGeometry,
    classify_experiment,
    classify_impact,
    feasibility_sweep,
    max_delay,
    simultaneity_gap,
)

__version__ = "0.1.0"
