"""End-to-end evaluation of a prediction against ground truth, and report rendering."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, replace
from typing import List, Optional, Sequence, Tuple

from .alignment import AlignmentConfig, EditScript, EventKind, align
from .evaluation import (
    ConfusionMatrix,
    LabelMetrics,
    MacroMetrics,
    MatchStats,
    UnknownLabel,
    accumulate_confusion,
    macro_metrics,
    ordered_labels,
    summarize,
)
from .io import InputError, PathLike, parse_sequence_file
from .model import (
    InvalidSequence,
    Segment,
    SegmentSequence,
    Span,
    SpanTooSmall,
    covering_span,
    fill_no_label,
    is_nl,
    validate_sequence,
)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class EvaluationConfig:
    c0: float = 2.0
    eps: float = 1.0
    span: Optional[Span] = None
    nl: str = "NL"
    fill: str = "auto"
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        AlignmentConfig(self.c0)
        if self.eps < 0:
            raise ValueError(f"eps must be >= 0, got {self.eps}")
        if self.fill not in ("auto", "off"):
            raise ValueError(f"fill must be 'auto' or 'off', got {self.fill!r}")
        if self.span is not None:
            object.__setattr__(self, "span", (float(self.span[0]), float(self.span[1])))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))


@dataclass
class Evaluation:
    """In-memory result of :func:`evaluate`, with the prepared sequences it refers to."""

    config: EvaluationConfig
    span: Span
    gt: SegmentSequence
    pred: SegmentSequence
    script: EditScript
    confusion: ConfusionMatrix
    stats: MatchStats
    metrics: Optional[MacroMetrics]


def prepare(gt_raw: Sequence[Segment], pred_raw: Sequence[Segment], config: EvaluationConfig):
    """Validate both sequences and, unless ``fill`` is off, NL-fill them over a common span."""
    span = config.span or covering_span(gt_raw, pred_raw)
    if span is None:
        # both inputs empty and no span given: nothing to cover
        return validate_sequence([]), validate_sequence([]), (0.0, 0.0)
    gt = validate_sequence(gt_raw, span)
    pred = validate_sequence(pred_raw, span)
    if config.fill == "auto":
        gt = fill_no_label(gt, span, config.eps)
        pred = fill_no_label(pred, span, config.eps)
    return gt, pred, span


def evaluate_sequences(gt: SegmentSequence, pred: SegmentSequence, config: EvaluationConfig,
                       span: Optional[Span] = None) -> Evaluation:
    """Align prepared sequences and derive every statistic."""
    script = align(gt, pred, AlignmentConfig(config.c0))
    labels = config.labels if config.labels is not None else ordered_labels(gt, pred)
    confusion = accumulate_confusion(script, gt, pred, labels)
    stats = summarize(script, gt, pred)
    metrics = macro_metrics(confusion) if confusion.total else None
    if span is None:
        span = covering_span(gt, pred) or (0.0, 0.0)
    return Evaluation(config, span, gt, pred, script, confusion, stats, metrics)


def evaluate(gt_raw: Sequence[Segment], pred_raw: Sequence[Segment],
             config: EvaluationConfig = EvaluationConfig()) -> Evaluation:
    gt, pred, span = prepare(gt_raw, pred_raw, config)
    return evaluate_sequences(gt, pred, config, span)


# ---------------------------------------------------------------------------
# serializable report


@dataclass(frozen=True)
class SegmentRecord:
    label: str
    t_begin: float
    t_end: float


@dataclass(frozen=True)
class EventRecord:
    kind: str
    gt_index: Optional[int]
    pred_index: Optional[int]
    cost: float
    gt: Optional[SegmentRecord]
    pred: Optional[SegmentRecord]


@dataclass(frozen=True)
class ErrorCounts:
    false_negatives: int
    false_positives: int
    substitutions: int


@dataclass(frozen=True)
class EvaluationReport:
    config: dict
    distance: float
    labels: Tuple[str, ...]
    confusion: Tuple[Tuple[int, ...], ...]
    errors: ErrorCounts
    stats: MatchStats
    metrics: Optional[MacroMetrics]
    events: Tuple[EventRecord, ...]
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "config": dict(self.config),
            "distance": self.distance,
            "labels": list(self.labels),
            "confusion": [list(row) for row in self.confusion],
            "errors": asdict(self.errors),
            "stats": asdict(self.stats),
            "metrics": None if self.metrics is None else _metrics_dict(self.metrics),
            "events": [asdict(e) for e in self.events],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvaluationReport":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema_version {d.get('schema_version')!r}")
        metrics = d["metrics"]
        if metrics is not None:
            metrics = MacroMetrics(**{
                **metrics,
                "per_label": tuple(LabelMetrics(**m) for m in metrics["per_label"]),
            })

        def seg(s):
            return None if s is None else SegmentRecord(**s)

        return cls(
            config=dict(d["config"]),
            distance=d["distance"],
            labels=tuple(d["labels"]),
            confusion=tuple(tuple(row) for row in d["confusion"]),
            errors=ErrorCounts(**d["errors"]),
            stats=MatchStats(**d["stats"]),
            metrics=metrics,
            events=tuple(
                EventRecord(**{**e, "gt": seg(e["gt"]), "pred": seg(e["pred"])})
                for e in d["events"]
            ),
            schema_version=d["schema_version"],
        )


def _metrics_dict(m: MacroMetrics) -> dict:
    d = asdict(m)
    d["per_label"] = [asdict(x) for x in m.per_label]
    return d


def _label_str(label, nl: str) -> str:
    return nl if is_nl(label) else str(label)


def _segment_record(s: Segment, nl: str) -> SegmentRecord:
    return SegmentRecord(_label_str(s.label, nl), float(s.t_begin), float(s.t_end))


def build_report(ev: Evaluation) -> EvaluationReport:
    cfg = ev.config
    nl = cfg.nl
    events = tuple(
        EventRecord(
            kind=e.kind.value,
            gt_index=e.gt_index,
            pred_index=e.pred_index,
            cost=float(e.cost),
            gt=None if e.gt_index is None else _segment_record(ev.gt[e.gt_index], nl),
            pred=None if e.pred_index is None else _segment_record(ev.pred[e.pred_index], nl),
        )
        for e in ev.script
    )
    metrics = ev.metrics
    if metrics is not None:
        metrics = replace(metrics, per_label=tuple(
            replace(m, label=_label_str(m.label, nl)) for m in metrics.per_label
        ))
    return EvaluationReport(
        config={
            "c0": float(cfg.c0),
            "eps": float(cfg.eps),
            "span": [float(ev.span[0]), float(ev.span[1])],
            "span_mode": "auto" if cfg.span is None else "fixed",
            "nl": nl,
            "fill": cfg.fill,
        },
        distance=float(ev.script.distance),
        labels=(nl,) + tuple(_label_str(l, nl) for l in ev.confusion.labels),
        confusion=tuple(tuple(int(x) for x in row) for row in ev.confusion.counts),
        errors=ErrorCounts(
            ev.confusion.false_negatives,
            ev.confusion.false_positives,
            ev.confusion.substitutions,
        ),
        stats=ev.stats,
        metrics=metrics,
        events=events,
    )


def _load(path: PathLike, fmt: Optional[str], nl: str) -> List[Segment]:
    return parse_sequence_file(path, fmt, nl)


def run_evaluation(
    gt_path: PathLike,
    pred_path: PathLike,
    config: EvaluationConfig = EvaluationConfig(),
    fmt: Optional[str] = None,
) -> EvaluationReport:
    """Parse, validate, fill, align and score one ground-truth/prediction file pair."""
    gt_raw = _load(gt_path, fmt, config.nl)
    pred_raw = _load(pred_path, fmt, config.nl)
    try:
        gt, pred, span = prepare(gt_raw, pred_raw, config)
    except (InvalidSequence, SpanTooSmall) as exc:
        # name the offending file
        for path, raw in ((gt_path, gt_raw), (pred_path, pred_raw)):
            try:
                validate_sequence(raw, config.span or covering_span(gt_raw, pred_raw))
            except (InvalidSequence, SpanTooSmall) as inner:
                raise InputError(f"{path}: {inner}") from inner
        raise InputError(str(exc)) from exc
    try:
        ev = evaluate_sequences(gt, pred, config, span)
    except UnknownLabel as exc:
        raise InputError(f"label {exc.args[0]!r} not in the configured label set") from exc
    return build_report(ev)


# ---------------------------------------------------------------------------
# emitters


def _fmt(x) -> str:
    if x is None:
        return "n/a"
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _seg_text(index: Optional[int], s: Optional[SegmentRecord]) -> str:
    if s is None:
        return "-"
    return f"{index} ({s.label}|{_fmt(s.t_begin)}-{_fmt(s.t_end)})"


_KIND_TEXT = {k.value: k.description for k in EventKind}


def _backtrace_rows(report: EvaluationReport):
    """Events from last to first, each with the segment under the cursor on the idle side."""
    gt_segs, pred_segs = {}, {}
    for e in report.events:
        if e.gt is not None:
            gt_segs[e.gt_index] = e.gt
        if e.pred is not None:
            pred_segs[e.pred_index] = e.pred
    i, j = len(gt_segs), len(pred_segs)
    rows = []
    for e in reversed(report.events):
        gi = e.gt_index if e.gt_index is not None else (i - 1 if i > 0 else None)
        pj = e.pred_index if e.pred_index is not None else (j - 1 if j > 0 else None)
        rows.append((
            _seg_text(gi, gt_segs.get(gi)),
            _seg_text(pj, pred_segs.get(pj)),
            _KIND_TEXT[e.kind],
        ))
        if e.gt_index is not None:
            i -= 1
        if e.pred_index is not None:
            j -= 1
    return rows


def _table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> List[str]:
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    line = "+" + "+".join("-" * (w + 2) for w in widths) + "+"
    def fmt_row(r):
        return "| " + " | ".join(str(x).ljust(w) for x, w in zip(r, widths)) + " |"
    out = [line, fmt_row(header), line]
    out += [fmt_row(r) for r in rows]
    out.append(line)
    return out


def format_text(report: EvaluationReport) -> str:
    cfg = report.config
    st = report.stats
    lines = [
        f"distance: {_fmt(report.distance)}",
        f"config: c0={_fmt(cfg['c0'])} eps={_fmt(cfg['eps'])} "
        f"span=[{_fmt(cfg['span'][0])}, {_fmt(cfg['span'][1])}] ({cfg['span_mode']}) "
        f"fill={cfg['fill']} nl={cfg['nl']}",
        "",
        f"matches: {st.match_count}",
        f"LAT (mean latency): {_fmt(st.mean_latency)}",
        f"DUR (mean overlap duration): {_fmt(st.mean_overlap_duration)}",
        f"mean predicted duration: {_fmt(st.mean_predicted_duration)}",
        f"repetitions: pred={st.repetition_count_pred} gt={st.repetition_count_gt}",
        f"errors: FN={report.errors.false_negatives} FP={report.errors.false_positives} "
        f"substitutions={report.errors.substitutions}",
        "",
        "Back-trace (last event first):",
    ]
    lines += _table(("GROUND TRUTH", "PREDICTION", "EVENTS"), _backtrace_rows(report))
    lines += ["", "Confusion matrix (rows: ground truth, columns: prediction):"]
    lines += _table(
        ("GT/PR",) + report.labels,
        [(lab,) + tuple(str(x) for x in row) for lab, row in zip(report.labels, report.confusion)],
    )
    lines.append("")
    m = report.metrics
    if m is None:
        lines.append("metrics: n/a (empty confusion matrix)")
    else:
        lines.append(f"MAA={_fmt(m.maa)} MAP={_fmt(m.map)} MAR={_fmt(m.mar)} MAF1={_fmt(m.maf1)}")
        lines.append(f"undefined: precision={m.undefined_precision} recall={m.undefined_recall}")
        lines += _table(
            ("label", "TP", "FP", "FN", "TN", "precision", "recall", "accuracy"),
            [(x.label, x.tp, x.fp, x.fn, x.tn, _fmt(x.precision), _fmt(x.recall), _fmt(x.accuracy))
             for x in m.per_label],
        )
    return "\n".join(lines) + "\n"


def format_json(report: EvaluationReport) -> str:
    return json.dumps(report.to_dict(), indent=2, allow_nan=False) + "\n"


def emit_report(report: EvaluationReport, fmt: str = "json") -> bytes:
    if fmt == "json":
        return format_json(report).encode("utf-8")
    if fmt == "text":
        return format_text(report).encode("utf-8")
    raise ValueError(f"unknown output format {fmt!r}")


def parse_report(data: bytes) -> EvaluationReport:
    return EvaluationReport.from_dict(json.loads(data.decode("utf-8")))
