from __future__ import annotations

import pytest

from bcfb.channels.catalog import channel_from_json, channel_to_json
from bcfb.errors import ArgumentError
from bcfb.info.pmf import Alphabet, JointPmf, uniform
from bcfb.mcsim.harness import ExperimentConfig, ExperimentRow, run_experiment
from bcfb.mcsim.lgw import LgwRates
from bcfb.mcsim.marton import MartonRates
from bcfb.regions.schemes import AuxiliaryScheme, UpdateVariant, constant_update


def _make_aux() -> AuxiliaryScheme:
    law = uniform(Alphabet("U0", 1), Alphabet("U1", 2), Alphabet("U2", 2))
    return AuxiliaryScheme.from_map(law, lambda u0, u1, u2: 2 * u1 + u2, 4)


def _make_dsbs() -> JointPmf:
    return JointPmf((Alphabet("X", 2), Alphabet("Y", 2)), [[0.45, 0.05], [0.05, 0.45]])


def _marton_json(**overrides: object) -> dict:
    data: dict = {
        "kind": "marton",
        "n_list": [40],
        "trials": 4,
        "seed": 7,
        "eps": 0.5,
        "channel": {"type": "parallel_bsc", "p1": 0.0, "p2": 0.0},
        "scheme": {"aux": _make_aux().to_json()},
        "rates": {"r1p": 0.2, "r2p": 0.2},
    }
    data.update(overrides)
    return data


def _block_markov_json(**overrides: object) -> dict:
    channel = channel_from_json({"type": "parallel_bsc", "p1": 0.0, "p2": 0.0, "feedback": "noiseless"})
    upd = constant_update(_make_aux(), channel, UpdateVariant.STAR)
    data = _marton_json(
        kind="block_markov",
        n_list=[16],
        trials=2,
        channel=channel_to_json(channel),
        rates={"lgw": LgwRates().to_json()},
        block={"message": [0.0, 0.125, 0.125], "blocks": 2, "gamma": 3.0},
    )
    data["scheme"] = {"aux": _make_aux().to_json(), "update": upd.to_json()}
    data.update(overrides)
    return data


class TestFromJson:
    def test_marton(self) -> None:
        cfg = ExperimentConfig.from_json(_marton_json())
        assert cfg.kind == "marton"
        assert cfg.n_list == (40,)
        assert cfg.marton_rates == MartonRates(r1p=0.2, r2p=0.2)
        assert cfg.channel is not None and cfg.channel.name == "parallel-bsc"

    def test_block_markov(self) -> None:
        cfg = ExperimentConfig.from_json(_block_markov_json())
        assert cfg.upd is not None and cfg.upd.is_constant()
        assert cfg.lgw_rates == LgwRates()
        block = cfg.block_config(16)
        assert block.blocks == 2
        assert block.gamma == 3.0
        assert block.rates == (0.0, 0.125, 0.125)
        assert block.channel.feedback.size == 4

    def test_baseline_drops_feedback(self) -> None:
        cfg = ExperimentConfig.from_json(_block_markov_json(baseline=True))
        assert cfg.block_config(16).channel.feedback.size == 1

    def test_lemma(self) -> None:
        data = {
            "kind": "lemma",
            "n_list": [8],
            "trials": 2,
            "lemma": {"kind": "packing", "law": _make_dsbs().to_json(), "rates": [0.1]},
        }
        cfg = ExperimentConfig.from_json(data)
        assert cfg.lemma_kind == "packing"
        assert cfg.lemma_rates == (0.1,)
        assert cfg.seed == 0

    def test_missing_field(self) -> None:
        data = _marton_json()
        del data["n_list"]
        with pytest.raises(ArgumentError, match="malformed experiment config"):
            ExperimentConfig.from_json(data)

    def test_unknown_rate_key(self) -> None:
        with pytest.raises(ArgumentError, match="unknown Marton rate keys"):
            ExperimentConfig.from_json(_marton_json(rates={"r9": 1.0}))


class TestValidation:
    def test_unknown_kind(self) -> None:
        with pytest.raises(ArgumentError, match="unknown experiment kind"):
            ExperimentConfig("gaussian", (10,), 1, 0)

    def test_blocklengths(self) -> None:
        with pytest.raises(ArgumentError, match="n_list"):
            ExperimentConfig("marton", (), 1, 0)
        with pytest.raises(ArgumentError, match="n_list"):
            ExperimentConfig("marton", (0, 10), 1, 0)

    def test_trials(self) -> None:
        with pytest.raises(ArgumentError, match="trials"):
            ExperimentConfig("marton", (10,), 0, 0)

    def test_marton_needs_channel(self) -> None:
        with pytest.raises(ArgumentError, match="channel and an auxiliary scheme"):
            ExperimentConfig("marton", (10,), 1, 0)

    def test_lgw_needs_update(self) -> None:
        cfg = ExperimentConfig.from_json(_marton_json())
        with pytest.raises(ArgumentError, match="update scheme"):
            ExperimentConfig("lgw", (10,), 1, 0, channel=cfg.channel, aux=cfg.aux)

    def test_lemma_needs_law(self) -> None:
        with pytest.raises(ArgumentError, match="lemma.law"):
            ExperimentConfig("lemma", (10,), 1, 0, lemma_kind="covering")


def test_experiment_row_rates() -> None:
    row = ExperimentRow(n=10, trials=8, errors=2, fallbacks=4)
    assert row.error_rate == pytest.approx(0.25)
    assert row.fallback_rate == pytest.approx(0.5)


class TestRun:
    def test_one_row_per_blocklength(self) -> None:
        cfg = ExperimentConfig.from_json(_marton_json(n_list=[20, 40], trials=3))
        rows = run_experiment(cfg)
        assert [r.n for r in rows] == [20, 40]
        assert all(r.trials == 3 for r in rows)
        assert all(0 <= r.errors <= 3 for r in rows)

    def test_noiseless_marton_decodes(self) -> None:
        rows = run_experiment(ExperimentConfig.from_json(_marton_json()))
        assert rows[0].errors <= 1

    def test_same_seed_same_rows(self) -> None:
        cfg = ExperimentConfig.from_json(_marton_json(n_list=[24], trials=6))
        assert run_experiment(cfg) == run_experiment(cfg)

    def test_workers_do_not_change_results(self) -> None:
        cfg = ExperimentConfig.from_json(_marton_json(n_list=[24], trials=6))
        assert run_experiment(cfg, workers=3) == run_experiment(cfg, workers=1)

    def test_lemma_kind(self) -> None:
        cfg = ExperimentConfig(
            "lemma", (8, 12), 5, 3, eps=0.3, lemma_kind="packing", lemma_law=_make_dsbs(), lemma_rates=(0.0,)
        )
        rows = run_experiment(cfg)
        assert [r.n for r in rows] == [8, 12]
        assert all(r.fallbacks == 0 for r in rows)

    def test_block_markov_kind(self) -> None:
        rows = run_experiment(ExperimentConfig.from_json(_block_markov_json()))
        assert len(rows) == 1
        assert rows[0].trials == 2
