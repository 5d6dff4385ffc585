"""Edit-distance alignment of two segment sequences and optimal-path back-trace.

The distance between the first ``i`` ground-truth segments and the first ``j``
predicted segments is::

    D[i][0] = i * c0,  D[0][j] = j * c0
    D[i][j] = min(D[i-1][j] + c0, D[i][j-1] + c0, D[i-1][j-1] + match_cost(gt[i-1], pred[j-1]))

``match_cost`` is infinite for disjoint intervals and for NL against a labeled
segment, ``c0`` for an overlapping substitution between two labeled segments,
and one minus the overlap/union ratio for same-label overlapping segments.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import as_strided

from .model import NL, Segment, SegmentSequence, is_nl, overlap_length, union_length

INF = math.inf


@dataclass(frozen=True)
class AlignmentConfig:
    c0: float = 2.0

    def __post_init__(self):
        if not self.c0 > 0 or math.isinf(self.c0):
            raise ValueError(f"c0 must be a positive finite cost, got {self.c0}")


class EventKind(str, enum.Enum):
    CORRECT_MATCH = "correct_match"
    NL_MATCH = "nl_match"
    SUBSTITUTION = "substitution"
    GT_DELETION = "gt_deletion"
    PRED_DELETION = "pred_deletion"
    NL_DELETION_GT = "nl_deletion_gt"
    NL_DELETION_PRED = "nl_deletion_pred"

    @property
    def is_diagonal(self) -> bool:
        return self in (EventKind.CORRECT_MATCH, EventKind.NL_MATCH, EventKind.SUBSTITUTION)

    @property
    def description(self) -> str:
        return _DESCRIPTIONS[self]


_DESCRIPTIONS = {
    EventKind.CORRECT_MATCH: "correct match",
    EventKind.NL_MATCH: "match NL",
    EventKind.SUBSTITUTION: "mismatch (1 FP and 1 FN)",
    EventKind.GT_DELETION: "delete in GT (FN)",
    EventKind.PRED_DELETION: "delete in PRED (FP)",
    EventKind.NL_DELETION_GT: "delete NL in GT",
    EventKind.NL_DELETION_PRED: "delete NL in PRED",
}


@dataclass(frozen=True)
class EditEvent:
    kind: EventKind
    gt_index: Optional[int]
    pred_index: Optional[int]
    cost: float


@dataclass(frozen=True)
class EditScript:
    """Alignment events in forward time order."""

    events: Tuple[EditEvent, ...]
    distance: float

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def path_cost(self) -> float:
        # plain left fold, in path order, so the result matches the DP cell bit for bit
        total = 0.0
        for e in self.events:
            total = total + e.cost
        return total


class InconsistentMatrix(RuntimeError):
    pass


def match_cost(s1: Segment, s2: Segment, cfg: AlignmentConfig = AlignmentConfig()) -> float:
    """Local cost of aligning ``s1`` with ``s2`` on a diagonal move."""
    overlap = overlap_length(s1, s2)
    if overlap < 0:
        return INF
    if s1.label != s2.label:
        if is_nl(s1.label) or is_nl(s2.label):
            return INF
        return cfg.c0
    union = union_length(s1, s2)
    if union == 0:
        return 0.0
    return 1.0 - overlap / union


def _encode_labels(gt: SegmentSequence, pred: SegmentSequence):
    codes = {}
    def code(label):
        if is_nl(label):
            return -1
        return codes.setdefault(label, len(codes))
    l1 = np.array([code(s.label) for s in gt], dtype=np.int64)
    l2 = np.array([code(s.label) for s in pred], dtype=np.int64)
    return l1, l2


def local_cost_matrix(
    gt: SegmentSequence, pred: SegmentSequence, cfg: AlignmentConfig = AlignmentConfig()
) -> np.ndarray:
    """``|gt| x |pred|`` array of :func:`match_cost` values, computed with array ops."""
    n, m = len(gt), len(pred)
    if n == 0 or m == 0:
        return np.zeros((n, m))
    b1 = np.array([s.t_begin for s in gt], dtype=float)[:, None]
    e1 = np.array([s.t_end for s in gt], dtype=float)[:, None]
    b2 = np.array([s.t_begin for s in pred], dtype=float)[None, :]
    e2 = np.array([s.t_end for s in pred], dtype=float)[None, :]
    l1, l2 = _encode_labels(gt, pred)
    l1, l2 = l1[:, None], l2[None, :]

    overlap = np.minimum(e1, e2) - np.maximum(b1, b2)
    union = np.maximum(e1, e2) - np.minimum(b1, b2)
    same = l1 == l2
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio_cost = 1.0 - overlap / union
    ratio_cost = np.where(union == 0, 0.0, ratio_cost)

    cost = np.where(same, ratio_cost, cfg.c0)
    cost = np.where(~same & ((l1 == -1) | (l2 == -1)), INF, cost)
    cost = np.where(overlap < 0, INF, cost)
    return cost


def compute_cost_matrix(
    gt: SegmentSequence,
    pred: SegmentSequence,
    cfg: AlignmentConfig = AlignmentConfig(),
    local: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Fill the ``(|gt|+1) x (|pred|+1)`` cumulative cost matrix.

    Cells on one anti-diagonal depend only on the two previous anti-diagonals,
    so each diagonal is filled in a single vectorized step. Every cell is still
    the result of the same three additions and a min, so the values are
    identical to a scalar row-by-row fill.
    """
    n, m = len(gt), len(pred)
    if local is None:
        local = local_cost_matrix(gt, pred, cfg)
    c0 = cfg.c0
    D = np.empty((n + 1, m + 1))
    D[0, 0] = 0.0
    # borders by repeated addition, matching the accumulation order of any path
    for i in range(1, n + 1):
        D[i, 0] = D[i - 1, 0] + c0
    for j in range(1, m + 1):
        D[0, j] = D[0, j - 1] + c0
    if n == 0 or m == 0:
        return D
    # skewed views: row d, column i addresses cell (i, d - i), so one anti-diagonal
    # is a strided slice; entries with d - i outside [0, m] alias other cells and
    # are never touched
    padded = np.zeros((n + 1, m + 1))
    padded[1:, 1:] = local
    skew = (D.itemsize, D.itemsize * m)
    VD = as_strided(D, shape=(n + m + 1, n + 1), strides=skew)
    VL = as_strided(padded, shape=(n + m + 1, n + 1), strides=skew)
    buf = np.empty(min(n, m))
    for d in range(2, n + m + 1):
        lo, hi = max(1, d - m), min(n, d - 1) + 1
        prev = VD[d - 1]
        # min(up + c0, left + c0) == min(up, left) + c0 exactly: rounding is monotone
        step = np.minimum(prev[lo - 1:hi - 1], prev[lo:hi], out=buf[:hi - lo])
        step += c0
        out = VD[d, lo:hi]
        np.add(VD[d - 2, lo - 1:hi - 1], VL[d, lo:hi], out=out)
        np.minimum(out, step, out=out)
    return D


def _classify_diagonal(a: Segment, b: Segment) -> EventKind:
    if a.label == b.label:
        return EventKind.NL_MATCH if is_nl(a.label) else EventKind.CORRECT_MATCH
    return EventKind.SUBSTITUTION


def _gt_deletion(s: Segment) -> EventKind:
    return EventKind.NL_DELETION_GT if is_nl(s.label) else EventKind.GT_DELETION


def _pred_deletion(s: Segment) -> EventKind:
    return EventKind.NL_DELETION_PRED if is_nl(s.label) else EventKind.PRED_DELETION


def backtrace(
    D: np.ndarray,
    gt: SegmentSequence,
    pred: SegmentSequence,
    cfg: AlignmentConfig = AlignmentConfig(),
    local: Optional[np.ndarray] = None,
) -> EditScript:
    """Recover one optimal path from ``D[|gt|][|pred|]`` back to ``D[0][0]``.

    A move is taken only if it reproduces the current cell exactly. Ties are
    broken diagonal first, then ground-truth deletion, then predicted deletion.
    """
    n, m = len(gt), len(pred)
    if D.shape != (n + 1, m + 1):
        raise InconsistentMatrix(f"matrix shape {D.shape} does not fit sequences ({n}, {m})")
    if local is None:
        local = local_cost_matrix(gt, pred, cfg)
    c0 = cfg.c0
    events = []
    i, j = n, m
    while i > 0 or j > 0:
        here = D[i, j]
        if i > 0 and j > 0:
            cm = local[i - 1, j - 1]
            if cm != INF and D[i - 1, j - 1] + cm == here:
                events.append(EditEvent(
                    _classify_diagonal(gt[i - 1], pred[j - 1]), i - 1, j - 1, float(cm)))
                i, j = i - 1, j - 1
                continue
        if i > 0 and D[i - 1, j] + c0 == here:
            events.append(EditEvent(_gt_deletion(gt[i - 1]), i - 1, None, c0))
            i -= 1
            continue
        if j > 0 and D[i, j - 1] + c0 == here:
            events.append(EditEvent(_pred_deletion(pred[j - 1]), None, j - 1, c0))
            j -= 1
            continue
        raise InconsistentMatrix(f"no move reproduces D[{i}][{j}] = {here}")
    events.reverse()
    return EditScript(tuple(events), float(D[n, m]))


def align(
    gt: SegmentSequence, pred: SegmentSequence, cfg: AlignmentConfig = AlignmentConfig()
) -> EditScript:
    local = local_cost_matrix(gt, pred, cfg)
    D = compute_cost_matrix(gt, pred, cfg, local)
    return backtrace(D, gt, pred, cfg, local)


def distance(
    gt: SegmentSequence, pred: SegmentSequence, cfg: AlignmentConfig = AlignmentConfig()
) -> float:
    return float(compute_cost_matrix(gt, pred, cfg)[-1, -1])
