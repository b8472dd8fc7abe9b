from __future__ import annotations

import copy

import numpy as np
import pytest

from bcfb.config import defaults
from bcfb.config.defaults import DEFAULT_CONFIG
from bcfb.errors import ArgumentError, ResourceError
from bcfb.info.pmf import Alphabet, JointPmf, uniform
from bcfb.mcsim.typicality import (
    TypicalityParams,
    check_scan,
    count_bounds,
    draw_conditional,
    draw_iid,
    is_jointly_typical,
    joint_counts,
    typical_mask,
)


def _make_dsbs() -> JointPmf:
    return JointPmf((Alphabet("A", 2), Alphabet("B", 2)), [[0.4, 0.1], [0.1, 0.4]])


class TestParams:
    def test_derived_eps(self) -> None:
        p = TypicalityParams(0.32, 100)
        assert p.eps_marton_enc == pytest.approx(0.01)
        assert p.eps_lgw_enc == pytest.approx(0.16)
        assert p.eps_decoder == pytest.approx(0.32)

    @pytest.mark.parametrize("eps", [0.0, 1.0, -0.1])
    def test_eps_range(self, eps: float) -> None:
        with pytest.raises(ArgumentError, match="eps"):
            TypicalityParams(eps, 10)

    def test_blocklength(self) -> None:
        with pytest.raises(ArgumentError, match="blocklength"):
            TypicalityParams(0.1, 0)


def test_count_bounds() -> None:
    lo, hi = count_bounds(np.array([0.4, 0.1, 0.0]), 10, 0.5)
    assert lo.tolist() == [2, 1, 0]
    assert hi.tolist() == [6, 1, 0]


def test_joint_counts_batch() -> None:
    a = np.array([0, 0, 1, 1])
    b = np.array([[0, 1, 1, 1], [0, 0, 1, 1]])
    counts = joint_counts((a, b), (2, 2))
    assert counts.tolist() == [[1, 1, 0, 2], [2, 0, 0, 2]]


class TestTypicalMask:
    def test_exact_type_is_typical(self) -> None:
        a = np.array([0] * 5 + [1] * 5)
        b = np.array([0, 0, 0, 0, 1, 1, 1, 1, 1, 0])
        assert is_jointly_typical((a, b), _make_dsbs(), 0.01)

    def test_forbidden_symbol_is_atypical(self) -> None:
        law = JointPmf((Alphabet("A", 2), Alphabet("B", 2)), [[0.5, 0.0], [0.0, 0.5]])
        a = np.array([0, 1, 0, 1])
        assert is_jointly_typical((a, a), law, 0.5)
        assert not is_jointly_typical((a, 1 - a), law, 0.99)

    def test_batch_rows(self) -> None:
        law = JointPmf((Alphabet("A", 2), Alphabet("B", 2)), [[0.5, 0.0], [0.0, 0.5]])
        a = np.array([0, 1, 0, 1])
        batch = np.array([a, 1 - a, a])
        assert typical_mask((a, batch), law, 0.5).tolist() == [True, False, True]

    def test_raw_mass_accepted(self) -> None:
        a = np.array([0, 1])
        assert typical_mask((a,), np.array([0.5, 0.5]), 0.1).tolist() == [True]

    def test_wrong_sequence_count(self) -> None:
        with pytest.raises(ArgumentError, match="sequences for a law"):
            typical_mask((np.zeros(4, dtype=int),), _make_dsbs(), 0.1)

    def test_length_mismatch(self) -> None:
        with pytest.raises(ArgumentError, match="length mismatch"):
            typical_mask((np.zeros(4, dtype=int), np.zeros(5, dtype=int)), _make_dsbs(), 0.1)

    def test_symbol_out_of_alphabet(self) -> None:
        with pytest.raises(ArgumentError, match="outside its alphabet"):
            typical_mask((np.array([0, 2]), np.array([0, 1])), _make_dsbs(), 0.1)

    def test_is_jointly_typical_needs_1d(self) -> None:
        with pytest.raises(ArgumentError, match="1-D"):
            is_jointly_typical((np.zeros((2, 4), dtype=int), np.zeros(4, dtype=int)), _make_dsbs(), 0.1)


def test_check_scan() -> None:
    check_scan("scan", 10, cap=10)
    with pytest.raises(ResourceError, match="BCFB_RESOURCE_CAP") as info:
        check_scan("scan", 2048, cap=1024)
    assert info.value.required == 2048
    assert "1.000 bits" in str(info.value)


def test_check_scan_default_cap_from_env(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("BCFB_RESOURCE_CAP", "16")
    with pytest.raises(ResourceError):
        check_scan("scan", 17)


def test_check_scan_default_cap_from_settings(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("BCFB_RESOURCE_CAP", raising=False)
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    cfg["simulation"]["resource_cap"] = 32
    monkeypatch.setattr(defaults, "_active", cfg)
    check_scan("scan", 32)
    with pytest.raises(ResourceError, match="simulation.resource_cap") as info:
        check_scan("scan", 33)
    assert info.value.cap == 32


class TestDraws:
    def test_iid_frequencies(self) -> None:
        rng = np.random.default_rng(0)
        x = draw_iid(np.array([0.2, 0.8]), (20000,), rng)
        assert x.dtype == np.intp
        assert x.mean() == pytest.approx(0.8, abs=0.02)

    def test_iid_seeded(self) -> None:
        a = draw_iid(uniform(Alphabet("A", 3)).mass, (5, 7), np.random.default_rng(3))
        b = draw_iid(uniform(Alphabet("A", 3)).mass, (5, 7), np.random.default_rng(3))
        assert a.shape == (5, 7)
        assert np.array_equal(a, b)

    def test_conditional_copy(self) -> None:
        rng = np.random.default_rng(1)
        given = rng.integers(0, 2, 50)
        out = draw_conditional(given, np.eye(2), rng)
        assert np.array_equal(out, given)

    def test_conditional_extra_axes(self) -> None:
        rng = np.random.default_rng(2)
        given = np.array([0, 1, 1, 0])
        out = draw_conditional(given, np.array([[1.0, 0.0], [0.5, 0.5]]), rng, extra=(6,))
        assert out.shape == (6, 4)
        assert np.all(out[:, [0, 3]] == 0)
