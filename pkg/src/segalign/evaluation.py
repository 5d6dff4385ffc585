"""Confusion matrix, latency/duration statistics and macro-averaged metrics from an edit script."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np

from .alignment import EditScript, EventKind
from .model import NL, Label, Segment, SegmentSequence, is_nl, overlap_length, overlaps


class UnknownLabel(KeyError):
    pass


class EmptyMatrix(ValueError):
    pass


def _label_sort_key(label):
    # numeric-looking labels in numeric order, then everything else by text
    try:
        return (0, float(label), "")
    except (TypeError, ValueError):
        return (1, 0.0, str(label))


def ordered_labels(*sequences: SegmentSequence) -> Tuple[Label, ...]:
    found = set()
    for seq in sequences:
        found |= seq.labels()
    return tuple(sorted(found, key=_label_sort_key))


@dataclass
class ConfusionMatrix:
    """Counts with rows = ground truth, columns = prediction; index 0 is NL."""

    labels: Tuple[Label, ...]
    counts: np.ndarray

    @classmethod
    def zeros(cls, labels: Iterable[Label]) -> "ConfusionMatrix":
        labels = tuple(labels)
        if any(is_nl(l) for l in labels):
            raise ValueError("NL cannot be a member of the label set")
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate labels")
        return cls(labels, np.zeros((len(labels) + 1, len(labels) + 1), dtype=np.int64))

    def index(self, label: Label) -> int:
        if is_nl(label):
            return 0
        try:
            return self.labels.index(label) + 1
        except ValueError:
            raise UnknownLabel(label) from None

    def __getitem__(self, key):
        gt, pred = key
        return int(self.counts[self.index(gt), self.index(pred)])

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def false_negatives(self) -> int:
        """Ground-truth segments deleted outright (column NL, labeled rows)."""
        return int(self.counts[1:, 0].sum())

    @property
    def false_positives(self) -> int:
        """Predicted segments inserted outright (row NL, labeled columns)."""
        return int(self.counts[0, 1:].sum())

    @property
    def substitutions(self) -> int:
        block = self.counts[1:, 1:]
        return int(block.sum() - np.trace(block))

    def populated(self) -> dict:
        """``{(gt_label, pred_label): count}`` for every nonzero cell."""
        names = (NL,) + self.labels
        rows, cols = np.nonzero(self.counts)
        return {(names[r], names[c]): int(self.counts[r, c]) for r, c in zip(rows, cols)}

    def __eq__(self, other):
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.counts, other.counts)


def accumulate_confusion(
    script: EditScript,
    gt: SegmentSequence,
    pred: SegmentSequence,
    labels: Optional[Iterable[Label]] = None,
) -> ConfusionMatrix:
    if labels is None:
        labels = ordered_labels(gt, pred)
    cf = ConfusionMatrix.zeros(labels)
    counts = cf.counts
    for e in script:
        k = e.kind
        if k.is_diagonal:
            counts[cf.index(gt[e.gt_index].label), cf.index(pred[e.pred_index].label)] += 1
        elif k is EventKind.GT_DELETION:
            counts[cf.index(gt[e.gt_index].label), 0] += 1
        elif k is EventKind.PRED_DELETION:
            counts[0, cf.index(pred[e.pred_index].label)] += 1
        # NL deletions are not recorded
    return cf


def latency(gt: Segment, pred: Segment) -> float:
    """Signed mid-point delay of the prediction; positive when it lags the truth."""
    return pred.mid - gt.mid


def match_duration(gt: Segment, pred: Segment) -> float:
    return overlap_length(gt, pred)


@dataclass(frozen=True)
class MatchStats:
    match_count: int
    mean_latency: Optional[float]
    mean_overlap_duration: Optional[float]
    mean_predicted_duration: Optional[float]
    repetition_count_pred: int
    repetition_count_gt: int


def _repetitions(deleted, matched_partner, this_seq, other_seq) -> int:
    """Deleted segments that overlap a same-label segment already matched elsewhere."""
    count = 0
    for idx in deleted:
        s = this_seq[idx]
        for other_idx, partner in matched_partner.items():
            o = other_seq[other_idx]
            if o.label == s.label and partner != idx and overlaps(s, o):
                count += 1
                break
    return count


def summarize(script: EditScript, gt: SegmentSequence, pred: SegmentSequence) -> MatchStats:
    """Latency/duration means over labeled correct matches, plus repetition counts.

    NL-to-NL matches are left out of the means. A repetition is a deleted
    labeled segment overlapping a same-label segment on the other side that
    was correctly matched to something else.
    """
    lat, dur, pdur = [], [], []
    gt_partner, pred_partner = {}, {}
    pred_deleted, gt_deleted = [], []
    for e in script:
        if e.kind is EventKind.CORRECT_MATCH:
            g, p = gt[e.gt_index], pred[e.pred_index]
            lat.append(latency(g, p))
            dur.append(match_duration(g, p))
            pdur.append(p.length)
            gt_partner[e.gt_index] = e.pred_index
            pred_partner[e.pred_index] = e.gt_index
        elif e.kind is EventKind.PRED_DELETION:
            pred_deleted.append(e.pred_index)
        elif e.kind is EventKind.GT_DELETION:
            gt_deleted.append(e.gt_index)

    n = len(lat)
    def mean(xs):
        return sum(xs) / n if n else None

    return MatchStats(
        match_count=n,
        mean_latency=mean(lat),
        mean_overlap_duration=mean(dur),
        mean_predicted_duration=mean(pdur),
        repetition_count_pred=_repetitions(pred_deleted, gt_partner, pred, gt),
        repetition_count_gt=_repetitions(gt_deleted, pred_partner, gt, pred),
    )


@dataclass(frozen=True)
class LabelMetrics:
    label: Label
    tp: int
    fp: int
    fn: int
    tn: int
    precision: Optional[float]
    recall: Optional[float]
    accuracy: float


@dataclass(frozen=True)
class MacroMetrics:
    maa: Optional[float]
    map: Optional[float]
    mar: Optional[float]
    maf1: Optional[float]
    per_label: Tuple[LabelMetrics, ...]
    undefined_precision: int
    undefined_recall: int


def _ratio(num: int, den: int) -> Optional[float]:
    return num / den if den else None


def _mean_defined(values) -> Optional[float]:
    defined = [v for v in values if v is not None]
    return sum(defined) / len(defined) if defined else None


def macro_metrics(cf: ConfusionMatrix) -> MacroMetrics:
    """Per-label TP/FP/FN/TN and their uniform averages over the user labels.

    Labels whose precision (or recall) denominator is zero are reported as
    undefined and left out of that average.
    """
    counts = cf.counts
    total = int(counts.sum())
    if total == 0:
        raise EmptyMatrix("confusion matrix has no counts")
    rows, cols = counts.sum(axis=1), counts.sum(axis=0)
    per_label = []
    for k, label in enumerate(cf.labels, start=1):
        tp = int(counts[k, k])
        fn = int(rows[k]) - tp
        fp = int(cols[k]) - tp
        tn = total - tp - fp - fn
        per_label.append(LabelMetrics(
            label, tp, fp, fn, tn,
            precision=_ratio(tp, tp + fp),
            recall=_ratio(tp, tp + fn),
            accuracy=(tp + tn) / total,
        ))
    maa = _mean_defined(m.accuracy for m in per_label)
    map_ = _mean_defined(m.precision for m in per_label)
    mar = _mean_defined(m.recall for m in per_label)
    if map_ is None or mar is None:
        maf1 = None
    elif map_ + mar > 0:
        maf1 = 2 * map_ * mar / (map_ + mar)
    else:
        maf1 = 0.0
    return MacroMetrics(
        maa=maa,
        map=map_,
        mar=mar,
        maf1=maf1,
        per_label=tuple(per_label),
        undefined_precision=sum(m.precision is None for m in per_label),
        undefined_recall=sum(m.recall is None for m in per_label),
    )
