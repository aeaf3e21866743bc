"""
Models package for the joint radiograph pipeline.

This package contains all the data models, enums, events and configuration used throughout the application.
"""

# Enums
from models.enums import (
    EventType,
    Side,
    Sex,
    Label,
    BackboneKind,
    CurveKind,
    Alternative,
    PValueMethod,
)

# Exceptions
from models.exceptions import (
    JointNetError,
    InvalidInputError,
    NumericError,
)

# Events
from models.events import (
    Event,
    FoldStartedEvent,
    EpochCompletedEvent,
    FoldCompletedEvent,
    ErrorEvent,
)

# Records
from models.records import (
    Radiograph,
    RoiPatch,
    MatchLog,
    AuxFeatures,
    ManifestRow,
    Manifest,
    FoldPlan,
    EpochRecord,
    CaseResult,
    FoldResult,
)

# Results
from models.results import (
    ConfusionTable,
    DiagnosticMetrics,
    CurvePoint,
    CurveSeries,
    ConfidenceInterval,
    HistogramBin,
    EvalReport,
    CVReport,
    PairedSample,
    WilcoxonResult,
    KappaResult,
    ChiSquareResult,
    PairwiseComparison,
)

# Configuration models
from models.config import (
    TOOL_NAME,
    TOOL_VERSION,
    LogLevel,
    PhantomSpec,
    AugmentPolicy,
    ClaheParams,
    BackboneSpec,
    Threshold,
    TrainConfig,
    RunConfig,
    load_run_config,
)

__all__ = [
    # Enums
    "EventType",
    "Side",
    "Sex",
    "Label",
    "BackboneKind",
    "CurveKind",
    "Alternative",
    "PValueMethod",
    # Exceptions
    "JointNetError",
    "InvalidInputError",
    "NumericError",
    # Events
    "Event",
    "FoldStartedEvent",
    "EpochCompletedEvent",
    "FoldCompletedEvent",
    "ErrorEvent",
    # Records
    "Radiograph",
    "RoiPatch",
    "MatchLog",
    "AuxFeatures",
    "ManifestRow",
    "Manifest",
    "FoldPlan",
    "EpochRecord",
    "CaseResult",
    "FoldResult",
    # Results
    "ConfusionTable",
    "DiagnosticMetrics",
    "CurvePoint",
    "CurveSeries",
    "ConfidenceInterval",
    "HistogramBin",
    "EvalReport",
    "CVReport",
    "PairedSample",
    "WilcoxonResult",
    "KappaResult",
    "ChiSquareResult",
    "PairwiseComparison",
    # Configuration
    "TOOL_NAME",
    "TOOL_VERSION",
    "LogLevel",
    "PhantomSpec",
    "AugmentPolicy",
    "ClaheParams",
    "BackboneSpec",
    "Threshold",
    "TrainConfig",
    "RunConfig",
    "load_run_config",
]
