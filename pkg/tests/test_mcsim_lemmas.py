from __future__ import annotations

import numpy as np
import pytest

from bcfb.errors import ArgumentError
from bcfb.info.measures import binary_entropy
from bcfb.info.pmf import Alphabet, JointPmf, uniform
from bcfb.mcsim.lemmas import (
    LEMMA_KINDS,
    SUITE_EPS,
    SUITE_N,
    SUITE_OFFSET,
    SUITE_TRIALS,
    box_probability,
    conditional_hit_probability,
    lemma_experiment,
    lemma_threshold,
    threshold_suite,
    triple_hit_probability,
)


def _make_dsbs() -> JointPmf:
    return JointPmf((Alphabet("X", 2), Alphabet("Y", 2)), [[0.45, 0.05], [0.05, 0.45]])


def _make_independent_pair() -> JointPmf:
    return uniform(Alphabet("X", 2), Alphabet("Y", 2))


def _make_independent_triple() -> JointPmf:
    return uniform(Alphabet("U1", 2), Alphabet("U2", 2), Alphabet("U3", 2))


class TestBoxProbability:
    def test_whole_range(self) -> None:
        assert box_probability(4, (0.5, 0.5), (0, 0), (4, 4)) == pytest.approx(1.0)

    def test_single_type(self) -> None:
        assert box_probability(4, (0.5, 0.5), (2, 2), (2, 2)) == pytest.approx(0.375)

    def test_three_cells(self) -> None:
        assert box_probability(3, (0.2, 0.3, 0.5), (1, 1, 1), (1, 1, 1)) == pytest.approx(0.18)

    def test_infeasible_box(self) -> None:
        assert box_probability(3, (0.5, 0.5), (2, 2), (3, 3)) == 0.0
        assert box_probability(5, (0.5, 0.5), (0, 0), (2, 2)) == 0.0


def test_conditional_hit_probability_copy_law() -> None:
    law = JointPmf((Alphabet("X", 2), Alphabet("Y", 2)), [[0.5, 0.0], [0.0, 0.5]])
    anchor = np.array([0, 1, 0, 1])
    # Y^n must equal the anchor
    assert conditional_hit_probability(anchor, law, 0.5) == pytest.approx(2.0**-4)


def test_conditional_hit_probability_atypical_anchor() -> None:
    law = JointPmf((Alphabet("X", 2), Alphabet("Y", 2)), [[0.5, 0.0], [0.0, 0.5]])
    assert conditional_hit_probability(np.zeros(4, dtype=int), law, 0.5) == 0.0


def test_triple_hit_probability_is_probability() -> None:
    q = triple_hit_probability(_make_independent_triple(), 16, 0.5)
    assert 0.0 < q <= 1.0


class TestThreshold:
    def test_pair(self) -> None:
        expected = 1.0 - binary_entropy(0.1)
        assert lemma_threshold("covering", _make_dsbs()) == pytest.approx(expected)
        assert lemma_threshold("packing", _make_dsbs()) == pytest.approx(expected)

    def test_triple(self) -> None:
        assert lemma_threshold("mv_packing", _make_independent_triple()) == pytest.approx(0.0, abs=1e-12)

    def test_unknown(self) -> None:
        with pytest.raises(ArgumentError, match="unknown lemma kind"):
            lemma_threshold("soft_covering", _make_dsbs())


class TestExperiment:
    def test_covering_above_threshold_rarely_fails(self) -> None:
        rng = np.random.default_rng(0)
        [point] = lemma_experiment("covering", _make_independent_pair(), [0.5], [20], 30, rng, 0.5)
        assert point.method == "scan"
        assert point.frequency <= 0.3

    def test_exact_method_beyond_cap(self) -> None:
        rng = np.random.default_rng(0)
        [point] = lemma_experiment("covering", _make_independent_pair(), [0.5], [20], 30, rng, 0.5, cap=10)
        assert point.method == "exact"
        assert point.frequency <= 0.3

    def test_packing_below_threshold_rarely_hits(self) -> None:
        rng = np.random.default_rng(1)
        [point] = lemma_experiment("packing", _make_dsbs(), [0.0], [20], 20, rng, 0.3)
        assert point.frequency <= 0.1

    def test_mv_packing_methods(self) -> None:
        law = _make_independent_triple()
        scan = lemma_experiment("mv_packing", law, [0.1, 0.1, 0.1], [20], 3, np.random.default_rng(2), 0.5)
        poisson = lemma_experiment("mv_packing", law, [0.1, 0.1, 0.1], [20], 3, np.random.default_rng(2), 0.5, cap=1)
        assert scan[0].method == "scan"
        assert poisson[0].method == "poisson"
        assert 0 <= poisson[0].events <= 3

    def test_one_point_per_blocklength(self) -> None:
        points = lemma_experiment("packing", _make_dsbs(), [0.1], [8, 12, 16], 2, np.random.default_rng(0), 0.3)
        assert [p.n for p in points] == [8, 12, 16]
        assert all(p.trials == 2 for p in points)

    def test_shape_checks(self) -> None:
        rng = np.random.default_rng(0)
        with pytest.raises(ArgumentError, match="unknown lemma kind"):
            lemma_experiment("soft", _make_dsbs(), [0.1], [8], 1, rng, 0.3)
        with pytest.raises(ArgumentError, match="3-axis law"):
            lemma_experiment("mv_packing", _make_dsbs(), [0.1, 0.1, 0.1], [8], 1, rng, 0.3)
        with pytest.raises(ArgumentError, match="1 rate"):
            lemma_experiment("covering", _make_dsbs(), [0.1, 0.2], [8], 1, rng, 0.3)
        with pytest.raises(ArgumentError, match="trials"):
            lemma_experiment("covering", _make_dsbs(), [0.1], [8], 0, rng, 0.3)


# ── threshold suite ─────────────────────────────────────────────────────


def test_threshold_suite_straddles_thresholds() -> None:
    suite = threshold_suite()
    assert [(e["kind"], e["side"]) for e in suite] == [
        (kind, side) for kind in LEMMA_KINDS for side in ("good", "bad")
    ]
    for entry in suite:
        total = sum(entry["rates"])
        t = lemma_threshold(entry["kind"], entry["law"])
        assert abs(total - t) == pytest.approx(SUITE_OFFSET)
        # covering succeeds above its threshold, packing below
        above = total > t
        assert above == ((entry["side"] == "good") == (entry["kind"] == "covering"))


@pytest.mark.slow
@pytest.mark.parametrize("kind", LEMMA_KINDS)
def test_threshold_suite_frequencies(kind: str) -> None:
    frequency = {}
    for entry in threshold_suite():
        if entry["kind"] != kind:
            continue
        points = lemma_experiment(
            kind, entry["law"], entry["rates"], SUITE_N, SUITE_TRIALS, np.random.default_rng(2024), SUITE_EPS
        )
        assert [p.n for p in points] == list(SUITE_N)
        frequency[entry["side"]] = points[-1].frequency
    assert frequency["good"] < 0.05
    assert frequency["bad"] > 0.5
