"""Evaluation of stream labelers by edit-distance alignment of labeled time segments."""

from .alignment import (
    AlignmentConfig,
    EditEvent,
    EditScript,
    EventKind,
    InconsistentMatrix,
    align,
    backtrace,
    compute_cost_matrix,
    distance,
    match_cost,
)
from .evaluation import (
    ConfusionMatrix,
    EmptyMatrix,
    MacroMetrics,
    MatchStats,
    UnknownLabel,
    accumulate_confusion,
    latency,
    macro_metrics,
    match_duration,
    summarize,
)
from .io import InputError, MissingColumn, NonNumericTimestamp, ParseError, parse_sequence_file
from .model import (
    NL,
    InvalidInterval,
    InvalidSequence,
    OrderViolation,
    Segment,
    SegmentSequence,
    SpanTooSmall,
    fill_no_label,
    overlap_length,
    union_length,
    validate_sequence,
)
from .report import (
    EvaluationConfig,
    EvaluationReport,
    build_report,
    emit_report,
    evaluate,
    parse_report,
    run_evaluation,
)

__version__ = "0.1.0"
