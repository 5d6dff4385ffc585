"""Labeled time-stamped segments and the "no label" gap-filling convention."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Optional, Sequence, Tuple, Union


class _NoLabel(enum.Enum):
    NL = "NL"

    def __repr__(self) -> str:
        return "NL"

    def __str__(self) -> str:
        return "NL"


#: Distinguished label covering unlabeled stream regions. Never equal to a user label.
NL = _NoLabel.NL

Label = Union[Hashable, _NoLabel]
Span = Tuple[float, float]


def is_nl(label: Label) -> bool:
    return label is NL


@dataclass(frozen=True)
class Segment:
    label: Label
    t_begin: float
    t_end: float

    @property
    def length(self) -> float:
        return self.t_end - self.t_begin

    @property
    def mid(self) -> float:
        return (self.t_begin + self.t_end) / 2

    def shifted(self, delta: float) -> "Segment":
        return Segment(self.label, self.t_begin + delta, self.t_end + delta)

    def scaled(self, alpha: float) -> "Segment":
        return Segment(self.label, self.t_begin * alpha, self.t_end * alpha)


class InvalidSequence(ValueError):
    """Raised by :func:`validate_sequence`; ``violations`` lists every problem found."""

    def __init__(self, violations: Sequence["Violation"]):
        self.violations = list(violations)
        super().__init__("; ".join(v.message for v in self.violations))


class InvalidInterval(InvalidSequence):
    pass


class OrderViolation(InvalidSequence):
    pass


class OutsideSpan(InvalidSequence):
    pass


class SpanTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: type
    indices: Tuple[int, ...]
    message: str


@dataclass(frozen=True)
class SegmentSequence:
    """An ordered, validated run of segments over ``span``.

    Build instances through :func:`validate_sequence`; the constructor does not check.
    """

    segments: Tuple[Segment, ...] = ()
    span: Span = (0.0, 0.0)

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self) -> Iterator[Segment]:
        return iter(self.segments)

    def __getitem__(self, i: int) -> Segment:
        return self.segments[i]

    def labels(self) -> set:
        return {s.label for s in self.segments if not is_nl(s.label)}

    def shifted(self, delta: float) -> "SegmentSequence":
        return SegmentSequence(
            tuple(s.shifted(delta) for s in self.segments),
            (self.span[0] + delta, self.span[1] + delta),
        )

    def scaled(self, alpha: float) -> "SegmentSequence":
        return SegmentSequence(
            tuple(s.scaled(alpha) for s in self.segments),
            (self.span[0] * alpha, self.span[1] * alpha),
        )


def covering_span(*sequences: Iterable[Segment]) -> Optional[Span]:
    """Smallest span enclosing every segment of every argument, or None if all are empty."""
    begins, ends = [], []
    for seq in sequences:
        for s in seq:
            begins.append(s.t_begin)
            ends.append(s.t_end)
    if not begins:
        return None
    return (min(begins), max(ends))


def validate_sequence(raw: Iterable[Segment], span: Optional[Span] = None) -> SegmentSequence:
    """Check interval bounds, the begin/end ordering constraint and span containment.

    All violations are collected before raising; the exception type is that of
    the first violation found.
    """
    segments = tuple(raw)
    violations = []
    for i, s in enumerate(segments):
        if s.t_begin > s.t_end:
            violations.append(Violation(
                InvalidInterval, (i,),
                f"segment {i}: t_begin {s.t_begin} > t_end {s.t_end}",
            ))
    for i in range(len(segments) - 1):
        a, b = segments[i], segments[i + 1]
        if a.t_begin > b.t_begin:
            violations.append(Violation(
                OrderViolation, (i, i + 1),
                f"segments ({i}, {i + 1}): t_begin decreases ({a.t_begin} > {b.t_begin})",
            ))
        if a.t_end > b.t_end:
            violations.append(Violation(
                OrderViolation, (i, i + 1),
                f"segments ({i}, {i + 1}): t_end decreases ({a.t_end} > {b.t_end})",
            ))
    if span is None:
        span = covering_span(segments) or (0.0, 0.0)
    else:
        span = (span[0], span[1])
        if span[0] > span[1]:
            raise ValueError(f"span begin {span[0]} > span end {span[1]}")
        for i, s in enumerate(segments):
            if s.t_begin < span[0] or s.t_end > span[1]:
                violations.append(Violation(
                    OutsideSpan, (i,),
                    f"segment {i} ({s.t_begin}, {s.t_end}) lies outside span {span}",
                ))
    if violations:
        raise violations[0].kind(violations)
    return SegmentSequence(segments, span)


def overlap_length(a: Segment, b: Segment) -> float:
    """Signed length of the common part; negative when the intervals are disjoint."""
    return min(a.t_end, b.t_end) - max(a.t_begin, b.t_begin)


def union_length(a: Segment, b: Segment) -> float:
    return max(a.t_end, b.t_end) - min(a.t_begin, b.t_begin)


def overlaps(a: Segment, b: Segment) -> bool:
    # single-point contact counts as overlap
    return overlap_length(a, b) >= 0


def _gap_filler(prev_end: float, next_begin: float, eps: float) -> Segment:
    begin, end = prev_end + eps, next_begin - eps
    if begin > end:
        # eps < gap < 2*eps: collapse onto the gap midpoint
        begin = end = (prev_end + next_begin) / 2
    return Segment(NL, begin, end)


def fill_no_label(
    seq: SegmentSequence,
    span: Optional[Span] = None,
    eps: float = 1.0,
) -> SegmentSequence:
    """Insert NL segments into every uncovered stretch of ``span``.

    A gap between a covered frontier ``prev_end`` and the next segment start is
    filled only when ``next_begin - prev_end > eps``; the filler runs from
    ``prev_end + eps`` to ``next_begin - eps``. The span head and tail are
    filled flush with the span bounds. With ``eps=0`` this is the continuous
    convention ``[prev_end, next_begin]``.
    """
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    if span is None:
        span = seq.span
    start, stop = span
    if start > stop:
        raise SpanTooSmall(f"span begin {start} > span end {stop}")
    if seq.segments:
        first = min(s.t_begin for s in seq)
        last = max(s.t_end for s in seq)
        if first < start or last > stop:
            raise SpanTooSmall(
                f"span ({start}, {stop}) does not enclose segments ({first}, {last})"
            )
    else:
        return SegmentSequence((Segment(NL, start, stop),), (start, stop))

    out = []
    first = seq.segments[0]
    if first.t_begin > start:
        out.append(Segment(NL, start, max(start, first.t_begin - eps)))
    frontier = first.t_end
    out.append(first)
    for s in seq.segments[1:]:
        if s.t_begin - frontier > eps:
            out.append(_gap_filler(frontier, s.t_begin, eps))
        out.append(s)
        frontier = max(frontier, s.t_end)
    if stop > frontier:
        out.append(Segment(NL, min(stop, frontier + eps), stop))
    return validate_sequence(out, (start, stop))
