from __future__ import annotations

import numpy as np
import pytest

from bcfb.channels.base import FeedbackConfig
from bcfb.channels.catalog import make_parallel_bsc
from bcfb.errors import ArgumentError, ResourceError
from bcfb.info.pmf import Alphabet, JointPmf, uniform
from bcfb.mcsim.harness import lgw_trial
from bcfb.mcsim.lgw import LgwCode, LgwRates, LgwSizes, gen_lgw_code, lgw_decode, lgw_encode
from bcfb.regions.schemes import AuxiliaryScheme, UpdateScheme, UpdateVariant, constant_update, induced_joint

SIDE = ("X", "YF")


def _make_aux() -> AuxiliaryScheme:
    law = uniform(Alphabet("U0", 1), Alphabet("U1", 2), Alphabet("U2", 2))
    return AuxiliaryScheme.from_map(law, lambda u0, u1, u2: 2 * u1 + u2, 4)


def _make_split_joint() -> JointPmf:
    """Noiseless parallel BSC; V1 and V2 are the two input bits, V0 is constant."""
    channel = make_parallel_bsc(0.0, 0.0, FeedbackConfig.noiseless())
    upd = UpdateScheme.from_map(
        (channel.input, channel.feedback), (1, 2, 2), lambda x, yf: (0, x >> 1, x & 1), UpdateVariant.STAR
    )
    return induced_joint(_make_aux(), upd, channel)


class TestSizes:
    def test_rates_to_sizes(self) -> None:
        sizes = LgwRates(bins=(0.1, 0.2, 0.0), per_bin=(0.0, 0.1, 0.3)).sizes(10)
        assert sizes.bins == (2, 4, 1)
        assert sizes.per_bin == (1, 2, 8)
        assert sizes.total(2) == 8

    def test_sizes_validated(self) -> None:
        with pytest.raises(ArgumentError, match="at least 1"):
            LgwSizes(bins=(0, 1, 1))

    def test_json(self) -> None:
        rates = LgwRates(bins=(0.1, 0.2, 0.3), per_bin=(0.0, 0.0, 0.1))
        assert LgwRates.from_json(rates.to_json()) == rates

    def test_json_needs_three_rates(self) -> None:
        with pytest.raises(ArgumentError, match="three bin rates"):
            LgwRates.from_json({"bins": [0.1, 0.2]})

    def test_json_malformed(self) -> None:
        with pytest.raises(ArgumentError, match="malformed"):
            LgwRates.from_json({"bins": ["a", 0.0, 0.0]})


class TestCodebook:
    def test_shapes(self) -> None:
        joint = _make_split_joint()
        code = gen_lgw_code(joint, SIDE, LgwSizes((1, 2, 3), (1, 4, 5)), 9, np.random.default_rng(0))
        assert code.books[0].shape == (1, 1, 9)
        assert code.books[1].shape == (2, 4, 9)
        assert code.books[2].shape == (3, 5, 9)
        assert np.all(code.books[0] == 0)

    def test_memory_cap(self) -> None:
        with pytest.raises(ResourceError, match="LGW codebook"):
            gen_lgw_code(
                _make_split_joint(), SIDE, LgwSizes((1, 64, 1), (1, 1, 1)), 10, np.random.default_rng(0), memory_cap=50
            )


class TestEncode:
    def test_finds_planted_codewords(self) -> None:
        joint = _make_split_joint()
        n = 40
        x = np.tile([0, 1, 2, 3], n // 4)
        rng = np.random.default_rng(1)
        code = gen_lgw_code(joint, SIDE, LgwSizes((1, 2, 2), (1, 3, 3)), n, rng)
        code.books[1][1, 2] = x >> 1
        code.books[2][0, 1] = x & 1
        enc = lgw_encode(code, (x, x), 0.5, rng)
        assert not enc.fallback
        assert enc.bins == (0, 1, 0)
        assert enc.chosen == (0, 5, 1)
        assert np.array_equal(enc.v[1], x >> 1)

    def test_falls_back_without_match(self) -> None:
        joint = _make_split_joint()
        n = 40
        x = np.tile([0, 1, 2, 3], n // 4)
        rng = np.random.default_rng(2)
        code = gen_lgw_code(joint, SIDE, LgwSizes((1, 1, 1), (1, 2, 2)), n, rng)
        enc = lgw_encode(code, (x, x), 0.5, rng)
        assert enc.fallback


class TestDecode:
    def _code(self, n: int) -> tuple[LgwCode, np.ndarray]:
        joint = _make_split_joint()
        y1 = np.tile([0, 1], n // 2)
        code = gen_lgw_code(joint, SIDE, LgwSizes((1, 1, 1), (1, 4, 1)), n, np.random.default_rng(4))
        code.books[1][0, 2] = y1
        return code, y1

    def test_unique_recovery(self) -> None:
        code, y1 = self._code(40)
        dec = lgw_decode(code, 0, 0, {"Y1": y1}, 1, 0.5, np.random.default_rng(0))
        assert dec.unique
        assert dec.list_size == 1
        assert np.array_equal(dec.v, y1)

    def test_no_candidate(self) -> None:
        code, y1 = self._code(40)
        dec = lgw_decode(code, 0, 0, {"Y1": 1 - y1}, 1, 0.5, np.random.default_rng(0))
        assert not dec.unique
        assert dec.list_size == 0

    def test_bad_receiver(self) -> None:
        code, y1 = self._code(8)
        with pytest.raises(ArgumentError, match="receiver"):
            lgw_decode(code, 0, 0, {"Y1": y1}, 0, 0.5, np.random.default_rng(0))


def test_trial_with_constant_update() -> None:
    channel = make_parallel_bsc(0.0, 0.0, FeedbackConfig.noiseless())
    aux = _make_aux()
    upd = constant_update(aux, channel, UpdateVariant.STAR)
    rng = np.random.default_rng(5)
    outcomes = [lgw_trial(channel, aux, upd, LgwRates(), 200, 0.5, rng) for _ in range(5)]
    assert not any(o.error for o in outcomes)
