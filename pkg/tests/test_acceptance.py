"""Acceptance criteria; each test carries its criterion number for the summary table."""

import itertools
import random
import statistics
import time

import pytest

from segalign.alignment import AlignmentConfig, EventKind, align
from segalign.evaluation import accumulate_confusion, summarize
from segalign.io import parse_sequence_file
from segalign.model import NL, fill_no_label, validate_sequence
from segalign.report import EvaluationConfig, build_report, emit_report, evaluate, parse_report, run_evaluation
from segalign.synth import PerturbationSpec, brute_force_align, perturb, random_disjoint_sequence, random_sequence

from conftest import EXAMPLE_GT, EXAMPLE_PRED, segs

acceptance = pytest.mark.acceptance
K = EventKind
OFF = EvaluationConfig(c0=2.0, eps=1.0, fill="off")

EXAMPLE_SCRIPT = [
    (5, 10, K.CORRECT_MATCH),
    (None, 9, K.NL_DELETION_PRED),
    (4, 8, K.SUBSTITUTION),
    (None, 7, K.NL_DELETION_PRED),
    (3, 6, K.CORRECT_MATCH),
    (2, 5, K.CORRECT_MATCH),
    (None, 4, K.NL_DELETION_PRED),
    (None, 3, K.PRED_DELETION),
    (None, 2, K.NL_DELETION_PRED),
    (1, 1, K.NL_MATCH),
    (0, None, K.GT_DELETION),
    (None, 0, K.NL_DELETION_PRED),
]


@pytest.fixture(scope="module")
def golden():
    return evaluate(segs(EXAMPLE_GT), segs(EXAMPLE_PRED), OFF)


@acceptance(1, "worked example back-trace, < 10 ms")
def test_ac1_backtrace_events_and_runtime(golden):
    got = [(e.gt_index, e.pred_index, e.kind) for e in reversed(golden.script.events)]
    assert got == EXAMPLE_SCRIPT
    gt, pred = segs(EXAMPLE_GT), segs(EXAMPLE_PRED)
    evaluate(gt, pred, OFF)
    times = []
    for _ in range(21):
        t0 = time.perf_counter()
        evaluate(gt, pred, OFF)
        times.append(time.perf_counter() - t0)
    assert statistics.median(times) < 0.010


@acceptance(2, "worked example mean latency 9.1667 +/- 0.01")
def test_ac2_latency(golden):
    assert golden.stats.mean_latency == pytest.approx(9.1667, abs=0.01)


@acceptance(3, "worked example durations 35.0 and 33.33 +/- 0.01")
def test_ac3_durations(golden):
    assert golden.stats.mean_predicted_duration == pytest.approx(35.0, abs=0.01)
    assert golden.stats.mean_overlap_duration == pytest.approx(33.33, abs=0.01)
    stats = parse_report(emit_report(build_report(golden))).stats
    assert stats.mean_predicted_duration == pytest.approx(35.0, abs=0.01)
    assert stats.mean_overlap_duration == pytest.approx(33.33, abs=0.01)


@acceptance(4, "worked example confusion matrix cells")
def test_ac4_confusion_cells(golden):
    assert golden.confusion.populated() == {
        (NL, NL): 1, ("1", "1"): 1, ("2", "2"): 1, ("5", "5"): 1,
        ("4", "2"): 1, ("3", NL): 1, (NL, "5"): 1,
    }


def _filled_pair(rng, labels, max_len=6, horizon=30):
    span = (0.0, float(horizon + 12))
    while True:
        a = validate_sequence(random_sequence(rng, rng.randint(0, 4), labels, horizon), span)
        b = validate_sequence(random_sequence(rng, rng.randint(0, 4), labels, horizon), span)
        a, b = fill_no_label(a, span), fill_no_label(b, span)
        if len(a) <= max_len and len(b) <= max_len:
            return a, b


@acceptance(5, "DP equals brute force on >= 1000 random pairs, < 60 s")
def test_ac5_oracle_equivalence():
    rng = random.Random(2024)
    t0 = time.perf_counter()
    for k in range(1200):
        labels = ("A", "B", "C", "D")[: rng.randint(1, 4)]
        gt, pred = _filled_pair(rng, labels)
        cfg = AlignmentConfig()
        assert align(gt, pred, cfg).distance == brute_force_align(gt, pred, cfg), k
    assert time.perf_counter() - t0 < 60


@acceptance(6, "invariant suite on >= 1000 random pairs")
def test_ac6_invariants():
    rng = random.Random(77)
    c0 = 2.0
    for _ in range(1000):
        gt, pred = _filled_pair(rng, ("A", "B", "C"), max_len=8)
        script = align(gt, pred)
        d = script.distance

        assert align(gt, gt).distance == 0.0
        assert align(pred, pred).distance == 0.0
        assert align(pred, gt).distance == d
        assert 0.0 <= d <= c0 * (len(gt) + len(pred))
        assert script.path_cost() == d
        assert sorted(e.gt_index for e in script if e.gt_index is not None) == list(range(len(gt)))
        assert sorted(e.pred_index for e in script if e.pred_index is not None) == list(range(len(pred)))

        stats = summarize(script, gt, pred)
        labels = ("A", "B", "C")
        cf = accumulate_confusion(script, gt, pred, labels)

        delta = rng.randint(-50, 50)
        shifted = align(gt.shifted(delta), pred.shifted(delta))
        assert shifted.events == script.events and shifted.distance == d

        for alpha in (0.5, 2.0, 4.0):
            sg, sp = gt.scaled(alpha), pred.scaled(alpha)
            scaled = align(sg, sp)
            assert scaled.events == script.events and scaled.distance == d
            s_stats = summarize(scaled, sg, sp)
            for name in ("mean_latency", "mean_overlap_duration", "mean_predicted_duration"):
                before, after = getattr(stats, name), getattr(s_stats, name)
                assert (before is None and after is None) or after == pytest.approx(alpha * before)
            assert accumulate_confusion(scaled, sg, sp, labels) == cf


@acceptance(7, "planted errors recovered for all 81 compositions")
@pytest.mark.parametrize("drops,spurious,swaps,reps", list(itertools.product(range(3), repeat=4)))
def test_ac7_planted_error_recovery(drops, spurious, swaps, reps):
    seed = drops * 27 + spurious * 9 + swaps * 3 + reps
    rng = random.Random(seed)
    gt = random_disjoint_sequence(rng, rng.randint(8, 10))
    spec = PerturbationSpec(seed=seed, n_drops=drops, n_spurious=spurious,
                            n_label_swaps=swaps, n_repetitions=reps)
    planted = perturb(gt, spec)
    report = build_report(evaluate(list(gt), list(planted.sequence), EvaluationConfig(span=gt.span)))
    assert report.errors.false_negatives == planted.expected_false_negatives == drops
    assert report.errors.false_positives == planted.expected_false_positives == spurious + reps
    assert report.errors.substitutions == planted.expected_substitutions == swaps
    assert report.stats.repetition_count_pred == planted.expected_repetitions == reps


@acceptance(8, "runtime fits c*N^2 within a factor of 2")
@pytest.mark.slow
def test_ac8_quadratic_runtime():
    sizes = (500, 1000, 2000)
    medians = []
    for n in sizes:
        rng = random.Random(n)
        gt = random_disjoint_sequence(rng, n)
        pred = perturb(gt, PerturbationSpec(seed=n, boundary_jitter=5)).sequence
        assert len(pred) == len(gt) == n
        align(gt, pred)
        runs = []
        for _ in range(5):
            t0 = time.perf_counter()
            align(gt, pred)
            runs.append(time.perf_counter() - t0)
        medians.append(statistics.median(runs))
    c = sum(t * n ** 2 for t, n in zip(medians, sizes)) / sum(n ** 4 for n in sizes)
    ratios = [t / (c * n ** 2) for t, n in zip(medians, sizes)]
    assert all(0.5 <= r <= 2.0 for r in ratios), ratios


@acceptance(9, "JSON report and CSV/JSONL input round trips")
def test_ac9_round_trips(data_dir):
    data = emit_report(run_evaluation(data_dir / "example_gt.csv", data_dir / "example_pred.csv"))
    assert emit_report(parse_report(data)) == data
    for name in ("gt", "pred"):
        assert parse_sequence_file(data_dir / f"example_{name}.csv") == \
            parse_sequence_file(data_dir / f"example_{name}.jsonl")
