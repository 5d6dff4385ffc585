"""Test support: exhaustive alignment oracle and planted-error prediction generator."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .alignment import AlignmentConfig, match_cost
from .model import Segment, SegmentSequence, Span, is_nl, validate_sequence

ORACLE_LIMIT = 14


class TooLarge(ValueError):
    pass


class InfeasibleSpec(ValueError):
    pass


def brute_force_align(
    gt: Sequence[Segment],
    pred: Sequence[Segment],
    cfg: AlignmentConfig = AlignmentConfig(),
    limit: int = ORACLE_LIMIT,
) -> float:
    """Minimum cost over every monotone edit script, by explicit enumeration.

    Each script consumes the heads of the two sequences one move at a time:
    drop the ground-truth head, drop the predicted head, or pair the two heads.
    Costs are accumulated front to back so that the total for a given script
    is the same float the DP produces along that path.
    """
    n, m = len(gt), len(pred)
    if n + m > limit:
        raise TooLarge(f"{n} + {m} segments exceeds the enumeration bound {limit}")
    c0 = cfg.c0
    local = [[match_cost(a, b, cfg) for b in pred] for a in gt]
    best = math.inf

    def walk(i: int, j: int, acc: float) -> None:
        nonlocal best
        if acc >= best:
            return
        if i == n and j == m:
            best = acc
            return
        if i < n and j < m and local[i][j] != math.inf:
            walk(i + 1, j + 1, acc + local[i][j])
        if i < n:
            walk(i + 1, j, acc + c0)
        if j < m:
            walk(i, j + 1, acc + c0)

    walk(0, 0, 0.0)
    return best


@dataclass(frozen=True)
class PerturbationSpec:
    seed: int = 0
    boundary_jitter: float = 0.0
    n_label_swaps: int = 0
    n_drops: int = 0
    n_spurious: int = 0
    n_repetitions: int = 0

    def __post_init__(self):
        if self.boundary_jitter < 0:
            raise ValueError("boundary_jitter must be >= 0")
        for name in ("n_label_swaps", "n_drops", "n_spurious", "n_repetitions"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class Perturbation:
    """A fabricated prediction and the errors planted in it.

    Index lists refer to positions among the labeled (non-NL) ground-truth segments.
    """

    sequence: SegmentSequence
    dropped: Tuple[int, ...] = ()
    swapped: Tuple[int, ...] = ()
    repeated: Tuple[int, ...] = ()
    spurious: Tuple[Segment, ...] = ()

    @property
    def expected_false_negatives(self) -> int:
        return len(self.dropped)

    @property
    def expected_false_positives(self) -> int:
        # each repetition adds one extra same-label occurrence
        return len(self.spurious) + len(self.repeated)

    @property
    def expected_substitutions(self) -> int:
        return len(self.swapped)

    @property
    def expected_repetitions(self) -> int:
        return len(self.repeated)


def _jitter_bounds(segs: List[Segment], span: Span, jitter: float):
    bounds = []
    for k, s in enumerate(segs):
        half_len = 0.49 * s.length
        db = [jitter, half_len, 0.49 * (s.t_begin - span[0])]
        de = [jitter, half_len, 0.49 * (span[1] - s.t_end)]
        if k > 0:
            db.append(0.49 * (s.t_begin - segs[k - 1].t_begin))
            de.append(0.49 * (s.t_end - segs[k - 1].t_end))
        if k + 1 < len(segs):
            db.append(0.49 * (segs[k + 1].t_begin - s.t_begin))
            de.append(0.49 * (segs[k + 1].t_end - s.t_end))
        bounds.append((max(0.0, min(db)), max(0.0, min(de))))
    return bounds


def _isolated(segs: List[Segment], k: int) -> bool:
    s = segs[k]
    if k > 0 and segs[k - 1].t_end >= s.t_begin:
        return False
    if k + 1 < len(segs) and segs[k + 1].t_begin <= s.t_end:
        return False
    return s.length > 0


def _free_gaps(covered: List[Segment], span: Span) -> List[Tuple[float, float]]:
    """Open stretches of ``span`` touched by no segment in ``covered``."""
    gaps = []
    frontier = span[0]
    for s in sorted(covered, key=lambda s: (s.t_begin, s.t_end)):
        if s.t_begin > frontier:
            gaps.append((frontier, s.t_begin))
        frontier = max(frontier, s.t_end)
    if span[1] > frontier:
        gaps.append((frontier, span[1]))
    return gaps


def perturb(gt: SegmentSequence, spec: PerturbationSpec) -> Perturbation:
    """Fabricate a prediction from ``gt`` with a known error composition.

    NL segments of ``gt`` are ignored; the result is unfilled, over ``gt.span``.
    Drops, label swaps and repetitions hit distinct labeled segments;
    repetitions split one segment into two same-label pieces around a hole.
    Spurious segments go into the middle third of stretches not covered by
    any ground-truth or predicted segment. Jitter moves each boundary by at
    most ``boundary_jitter``, clipped so that ordering and overlap with the
    source segment are preserved.
    """
    rng = random.Random(spec.seed)
    span = gt.span
    labeled = [s for s in gt if not is_nl(s.label)]
    label_pool = sorted({s.label for s in labeled}, key=str)

    n_targets = spec.n_drops + spec.n_label_swaps + spec.n_repetitions
    if n_targets > len(labeled):
        raise InfeasibleSpec(
            f"{n_targets} drops/swaps/repetitions requested but only {len(labeled)} labeled segments"
        )
    if spec.n_spurious and not label_pool:
        raise InfeasibleSpec("spurious segments need at least one label to draw from")
    if spec.n_label_swaps and len(label_pool) < 2:
        raise InfeasibleSpec("label swaps need at least two distinct labels")
    isolated = [k for k in range(len(labeled)) if _isolated(labeled, k)]
    if spec.n_repetitions > len(isolated):
        raise InfeasibleSpec(
            f"{spec.n_repetitions} repetitions requested but only {len(isolated)} isolated segments"
        )

    repeated = sorted(rng.sample(isolated, spec.n_repetitions))
    rest = [k for k in range(len(labeled)) if k not in repeated]
    picked = rng.sample(rest, spec.n_drops + spec.n_label_swaps)
    dropped = sorted(picked[:spec.n_drops])
    swapped = sorted(picked[spec.n_drops:])

    if spec.boundary_jitter > 0:
        bounds = _jitter_bounds(labeled, span, spec.boundary_jitter)
        moved = []
        for s, (db, de) in zip(labeled, bounds):
            moved.append(Segment(
                s.label,
                s.t_begin + rng.uniform(-db, db),
                s.t_end + rng.uniform(-de, de),
            ))
    else:
        moved = list(labeled)

    out: List[Segment] = []
    for k, s in enumerate(moved):
        if k in dropped:
            continue
        if k in swapped:
            label = rng.choice([l for l in label_pool if l != s.label])
            out.append(Segment(label, s.t_begin, s.t_end))
        elif k in repeated:
            L = s.length
            out.append(Segment(s.label, s.t_begin, s.t_begin + 0.4 * L))
            out.append(Segment(s.label, s.t_begin + 0.6 * L, s.t_end))
        else:
            out.append(s)

    gaps = [g for g in _free_gaps(labeled + out, span) if g[1] > g[0]]
    if spec.n_spurious > len(gaps):
        raise InfeasibleSpec(
            f"{spec.n_spurious} spurious segments requested but only {len(gaps)} free gaps"
        )
    spurious = []
    for g0, g1 in sorted(rng.sample(gaps, spec.n_spurious)):
        w = g1 - g0
        spurious.append(Segment(rng.choice(label_pool), g0 + w / 3, g0 + 2 * w / 3))
    out.extend(spurious)
    out.sort(key=lambda s: (s.t_begin, s.t_end))

    return Perturbation(
        sequence=validate_sequence(out, span),
        dropped=tuple(dropped),
        swapped=tuple(swapped),
        repeated=tuple(repeated),
        spurious=tuple(spurious),
    )


def random_sequence(
    rng: random.Random,
    n: int,
    labels: Sequence = ("A", "B", "C", "D"),
    horizon: int = 40,
    max_length: int = 12,
) -> List[Segment]:
    """``n`` integer-stamped segments obeying the begin/end ordering; overlaps allowed."""
    begins = sorted(rng.randint(0, horizon) for _ in range(n))
    out = []
    prev_end = -math.inf
    for b in begins:
        e = max(b + rng.randint(0, max_length), prev_end)
        out.append(Segment(rng.choice(labels), float(b), float(e)))
        prev_end = e
    return out


def random_disjoint_sequence(
    rng: random.Random,
    n: int,
    labels: Sequence = ("A", "B", "C", "D"),
    min_length: int = 20,
    max_length: int = 60,
    min_gap: int = 6,
    max_gap: int = 30,
) -> SegmentSequence:
    """``n`` labeled segments separated by gaps wide enough to hold NL fillers, starting at 0."""
    t = rng.randint(min_gap, max_gap)
    out = []
    for _ in range(n):
        length = rng.randint(min_length, max_length)
        out.append(Segment(rng.choice(labels), float(t), float(t + length)))
        t += length + rng.randint(min_gap, max_gap)
    return validate_sequence(out, (0.0, float(t)))
