from __future__ import annotations

import numpy as np
import pytest

from bcfb.channels.base import FeedbackConfig
from bcfb.channels.catalog import make_parallel_bsc
from bcfb.errors import ArgumentError
from bcfb.info.pmf import Alphabet, uniform
from bcfb.mcsim.block_markov import BlockMarkovConfig, _Layout, block_markov_trial, no_feedback_baseline
from bcfb.mcsim.lgw import LgwRates
from bcfb.mcsim.marton import MartonMessage, MartonSizes
from bcfb.regions.schemes import AuxiliaryScheme, UpdateVariant, constant_update


def _make_config(**overrides: object) -> BlockMarkovConfig:
    channel = make_parallel_bsc(0.0, 0.0, FeedbackConfig.noiseless())
    law = uniform(Alphabet("U0", 1), Alphabet("U1", 2), Alphabet("U2", 2))
    aux = AuxiliaryScheme.from_map(law, lambda u0, u1, u2: 2 * u1 + u2, 4)
    defaults: dict[str, object] = {
        "aux": aux,
        "upd": constant_update(aux, channel, UpdateVariant.STAR),
        "channel": channel,
        "rates": (0.0, 0.2, 0.2),
        "blocks": 2,
        "n": 40,
        "eps": 0.5,
    }
    defaults.update(overrides)
    return BlockMarkovConfig(**defaults)  # type: ignore[arg-type]


class TestConfig:
    def test_tail_length(self) -> None:
        assert _make_config(gamma=1.5).tail_length == 60

    def test_side_labels_follow_variant(self) -> None:
        assert _make_config().side_labels == ("X", "YF")

    def test_message_sizes(self) -> None:
        assert _make_config().message_sizes == (1, 256, 256)

    def test_needs_a_block(self) -> None:
        with pytest.raises(ArgumentError, match="at least one data block"):
            _make_config(blocks=0)

    def test_gamma_above_one(self) -> None:
        with pytest.raises(ArgumentError, match="gamma"):
            _make_config(gamma=1.0)

    def test_split_names(self) -> None:
        with pytest.raises(ArgumentError, match="split"):
            _make_config(key_split=("common", "both"))

    def test_eps_checked(self) -> None:
        with pytest.raises(ArgumentError, match="eps"):
            _make_config(eps=1.5)


class TestLayout:
    LAYOUT = _Layout(msg=(2, 3, 4), key=(5, 1, 2), split=("common", "private"))

    def test_sizes(self) -> None:
        assert self.LAYOUT.sizes((1, 1)) == MartonSizes(j0=10, j1c=1, j1p=3, j2c=1, j2p=8)

    def test_pack(self) -> None:
        packed = self.LAYOUT.pack((1, 2, 3), (4, 0, 1))
        assert packed == MartonMessage(j0=9, j1c=0, j1p=2, j2c=0, j2p=7)

    def test_unpack_each_receiver(self) -> None:
        assert self.LAYOUT.unpack(9, 0, 2, 1) == ((1, 2), (4, 0))
        assert self.LAYOUT.unpack(9, 0, 7, 2) == ((1, 3), (4, 1))


class TestTrial:
    def test_noiseless_channel_decodes(self) -> None:
        cfg = _make_config()
        reports = [block_markov_trial(cfg, np.random.default_rng(seed)) for seed in range(4)]
        assert all(len(r.block_errors) == 2 for r in reports)
        assert sum(r.error for r in reports) <= 1

    def test_seeded_trials_repeat(self) -> None:
        cfg = _make_config()
        a = block_markov_trial(cfg, np.random.default_rng(9))
        b = block_markov_trial(cfg, np.random.default_rng(9))
        assert a == b

    def test_tail_capacity_checked(self) -> None:
        noisy = make_parallel_bsc(0.3, 0.3, FeedbackConfig.noiseless())
        cfg = _make_config(channel=noisy, lgw=LgwRates(bins=(0.5, 0.0, 0.0)), gamma=1.5)
        with pytest.raises(ArgumentError, match="raise gamma"):
            block_markov_trial(cfg, np.random.default_rng(0))


def test_no_feedback_baseline() -> None:
    cfg = _make_config(lgw=LgwRates(bins=(0.1, 0.0, 0.0)))
    base = no_feedback_baseline(cfg)
    assert base.channel.feedback.size == 1
    assert base.upd.is_constant()
    assert base.upd.variant is UpdateVariant.STAR
    assert base.lgw == LgwRates()
    assert base.rates == cfg.rates
