import random

import pytest

from segalign.model import NL, Segment, validate_sequence
from segalign.report import evaluate
from segalign.synth import (
    InfeasibleSpec,
    PerturbationSpec,
    TooLarge,
    brute_force_align,
    perturb,
    random_disjoint_sequence,
)


def _gt(seed=0, n=8):
    return random_disjoint_sequence(random.Random(seed), n)


def test_oracle_refuses_large_inputs():
    seq = _gt(n=8)
    with pytest.raises(TooLarge):
        brute_force_align(seq, seq)


def test_zero_spec_is_identity():
    gt = _gt()
    assert perturb(gt, PerturbationSpec(seed=4)).sequence == gt


def test_nl_segments_are_ignored():
    gt = validate_sequence([Segment("A", 0, 10), Segment(NL, 11, 19), Segment("B", 20, 30)])
    out = perturb(gt, PerturbationSpec()).sequence
    assert [s.label for s in out] == ["A", "B"]


def test_seed_determinism():
    spec = PerturbationSpec(seed=9, boundary_jitter=3, n_drops=1, n_spurious=2, n_label_swaps=1)
    assert perturb(_gt(), spec) == perturb(_gt(), spec)
    other = PerturbationSpec(seed=10, boundary_jitter=3, n_drops=1, n_spurious=2, n_label_swaps=1)
    assert perturb(_gt(), spec).sequence != perturb(_gt(), other).sequence


def test_jittered_output_always_validates():
    for seed in range(200):
        gt = _gt(seed, n=6)
        spec = PerturbationSpec(seed=seed, boundary_jitter=15, n_drops=seed % 2,
                                n_spurious=seed % 3, n_repetitions=seed % 2)
        p = perturb(gt, spec)
        validate_sequence(list(p.sequence), gt.span)
        assert len(p.sequence) == 6 - p.expected_false_negatives + p.expected_false_positives


@pytest.mark.parametrize("spec", [
    PerturbationSpec(n_drops=5, n_label_swaps=4),
    PerturbationSpec(n_repetitions=9),
])
def test_infeasible_counts(spec):
    with pytest.raises(InfeasibleSpec):
        perturb(_gt(), spec)


def test_infeasible_label_pools():
    single = validate_sequence([Segment("A", 0, 10), Segment("A", 20, 30)])
    with pytest.raises(InfeasibleSpec):
        perturb(single, PerturbationSpec(n_label_swaps=1))
    nothing = validate_sequence([Segment(NL, 0, 10)])
    with pytest.raises(InfeasibleSpec):
        perturb(nothing, PerturbationSpec(n_spurious=1))


def test_negative_counts_rejected():
    with pytest.raises(ValueError):
        PerturbationSpec(n_drops=-1)
    with pytest.raises(ValueError):
        PerturbationSpec(boundary_jitter=-0.5)


def test_single_drop_is_one_false_negative():
    gt = _gt(2)
    ev = evaluate(list(gt), list(perturb(gt, PerturbationSpec(seed=1, n_drops=1)).sequence))
    assert ev.confusion.false_negatives == 1
    assert ev.confusion.false_positives == 0


def test_single_repetition_is_counted():
    gt = _gt(3)
    ev = evaluate(list(gt), list(perturb(gt, PerturbationSpec(seed=1, n_repetitions=1)).sequence))
    assert ev.stats.repetition_count_pred == 1
    assert ev.confusion.false_positives == 1
    assert ev.confusion.false_negatives == 0
