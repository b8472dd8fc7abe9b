"""Experiment configs and the seeded trial runner.

Every trial gets its own generator spawned from the experiment seed by
``(blocklength index, trial index)``, so results do not depend on how
trials are spread over workers.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from bcfb.channels.base import Dmbc, sample_block
from bcfb.channels.catalog import channel_from_json
from bcfb.config.defaults import setting
from bcfb.errors import ArgumentError
from bcfb.info.pmf import JointPmf, marginal_mass
from bcfb.mcsim.block_markov import BlockMarkovConfig, block_markov_trial, no_feedback_baseline
from bcfb.mcsim.lemmas import LEMMA_KINDS, lemma_experiment
from bcfb.mcsim.lgw import LgwRates, gen_lgw_code, lgw_decode, lgw_encode
from bcfb.mcsim.marton import (
    MartonRates,
    decode_both,
    gen_marton_code,
    marton_encode,
    message_errors,
    random_message,
)
from bcfb.mcsim.typicality import TypicalityParams, draw_iid, typical_mask
from bcfb.regions.schemes import AuxiliaryScheme, UpdateScheme, UpdateVariant, induced_joint

log = logging.getLogger(__name__)

EXPERIMENT_KINDS: tuple[str, ...] = ("marton", "lgw", "block_markov", "lemma")


@dataclass(frozen=True, slots=True)
class TrialOutcome:
    error: bool
    fallback: bool


@dataclass(frozen=True, slots=True)
class ExperimentRow:
    n: int
    trials: int
    errors: int
    fallbacks: int

    @property
    def error_rate(self) -> float:
        return self.errors / self.trials

    @property
    def fallback_rate(self) -> float:
        return self.fallbacks / self.trials


@dataclass(frozen=True, slots=True, eq=False)
class ExperimentConfig:
    """A simulation request as read from JSON.

    Which fields are needed depends on ``kind``: ``marton`` uses
    ``marton_rates``; ``lgw`` uses ``upd`` and ``lgw_rates``;
    ``block_markov`` uses all of them plus ``block``; ``lemma`` uses the
    ``lemma_*`` fields only.
    """

    kind: str
    n_list: tuple[int, ...]
    trials: int
    seed: int
    eps: float = field(default_factory=lambda: float(setting("simulation", "eps")))
    channel: Dmbc | None = None
    aux: AuxiliaryScheme | None = None
    upd: UpdateScheme | None = None
    marton_rates: MartonRates = MartonRates()
    lgw_rates: LgwRates = LgwRates()
    block: Mapping = field(default_factory=dict)
    baseline: bool = False
    lemma_kind: str = ""
    lemma_law: JointPmf | None = None
    lemma_rates: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in EXPERIMENT_KINDS:
            raise ArgumentError(f"unknown experiment kind {self.kind!r}; use one of {EXPERIMENT_KINDS}")
        if not self.n_list or min(self.n_list) < 1:
            raise ArgumentError("n_list must hold positive blocklengths")
        if self.trials < 1:
            raise ArgumentError(f"trials must be positive, got {self.trials}")
        if self.kind == "lemma":
            if self.lemma_kind not in LEMMA_KINDS or self.lemma_law is None:
                raise ArgumentError(f"lemma experiments need lemma.kind in {LEMMA_KINDS} and lemma.law")
            return
        if self.channel is None or self.aux is None:
            raise ArgumentError(f"{self.kind} experiments need a channel and an auxiliary scheme")
        if self.kind in ("lgw", "block_markov") and self.upd is None:
            raise ArgumentError(f"{self.kind} experiments need an update scheme")
        limit = int(setting("simulation", "max_n_block" if self.kind == "block_markov" else "max_n_single"))
        if max(self.n_list) > limit:
            log.warning("blocklength %d exceeds the desk-scale limit %d", max(self.n_list), limit)

    @classmethod
    def from_json(cls, data: Mapping) -> ExperimentConfig:
        try:
            kind = str(data["kind"])
            scheme = data.get("scheme") or {}
            lemma = data.get("lemma") or {}
            rates = data.get("rates") or {}
            return cls(
                kind=kind,
                n_list=tuple(int(n) for n in data["n_list"]),
                trials=int(data["trials"]),
                seed=int(data.get("seed", 0)),
                eps=float(data.get("eps", setting("simulation", "eps"))),
                channel=channel_from_json(data["channel"]) if "channel" in data else None,
                aux=AuxiliaryScheme.from_json(scheme["aux"]) if "aux" in scheme else None,
                upd=UpdateScheme.from_json(scheme["update"]) if "update" in scheme else None,
                marton_rates=MartonRates.from_json(rates) if kind == "marton" else MartonRates(),
                lgw_rates=(
                    LgwRates.from_json(rates.get("lgw", rates))
                    if kind in ("lgw", "block_markov")
                    else LgwRates()
                ),
                block=dict(data.get("block") or {}),
                baseline=bool(data.get("baseline", False)),
                lemma_kind=str(lemma.get("kind", "")),
                lemma_law=JointPmf.from_json(lemma["law"]) if "law" in lemma else None,
                lemma_rates=tuple(float(r) for r in lemma.get("rates", ())),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ArgumentError):
                raise
            raise ArgumentError(f"malformed experiment config: {exc!r}") from exc

    def block_config(self, n: int) -> BlockMarkovConfig:
        b = self.block
        cfg = BlockMarkovConfig(
            aux=self.aux,  # type: ignore[arg-type]
            upd=self.upd,  # type: ignore[arg-type]
            channel=self.channel,  # type: ignore[arg-type]
            rates=tuple(float(r) for r in b.get("message", (0.0, 0.0, 0.0))),  # type: ignore[arg-type]
            lgw=self.lgw_rates,
            bin_rates=tuple(float(r) for r in b.get("bins", (0.0, 0.0))),  # type: ignore[arg-type]
            key_split=tuple(b.get("key_split", ("private", "private"))),  # type: ignore[arg-type]
            blocks=int(b.get("blocks", 1)),
            gamma=float(b.get("gamma", setting("simulation", "gamma"))),
            n=n,
            eps=self.eps,
            tail_split=tuple(b.get("tail_split", ("common", "common"))),  # type: ignore[arg-type]
        )
        return no_feedback_baseline(cfg) if self.baseline else cfg


# ── Trials ──────────────────────────────────────────────────────────────


def marton_trial(
    channel: Dmbc, aux: AuxiliaryScheme, rates: MartonRates, n: int, eps: float, rng: np.random.Generator
) -> TrialOutcome:
    """One random Marton code, one message, both receivers decoded."""
    params = TypicalityParams(eps, n)
    code = gen_marton_code(aux, induced_joint(aux, None, channel), rates.sizes(n), n, rng)
    msg = random_message(code.sizes, rng)
    enc = marton_encode(code, msg, params.eps_marton_enc, rng)
    y1, y2, _ = sample_block(channel, enc.x, rng)
    decoded = decode_both(code, ({"Y1": y1}, {"Y2": y2}), params.eps_decoder, rng)
    return TrialOutcome(any(message_errors(msg, decoded)), enc.fallback)


def lgw_trial(
    channel: Dmbc,
    aux: AuxiliaryScheme,
    upd: UpdateScheme,
    rates: LgwRates,
    n: int,
    eps: float,
    rng: np.random.Generator,
) -> TrialOutcome:
    """Describe one source block; fail when a receiver's reconstruction is atypical."""
    params = TypicalityParams(eps, n)
    joint = induced_joint(aux, upd, channel)
    side_labels = ("U0", "U1", "U2", "YF") if upd.variant is UpdateVariant.FULL else ("X", "YF")
    code = gen_lgw_code(joint, side_labels, rates.sizes(n), n, rng)
    flat = draw_iid(aux.law_u.mass, (n,), rng)
    u = np.unravel_index(flat, aux.law_u.shape)
    x = aux.f_table[u]
    y1, y2, yf = sample_block(channel, x, rng)
    seqs = {"U0": u[0], "U1": u[1], "U2": u[2], "X": x, "Y1": y1, "Y2": y2, "YF": yf}
    side = tuple(seqs[k] for k in side_labels)
    enc = lgw_encode(code, side, params.eps_lgw_enc, rng)
    failed = False
    for i in (1, 2):
        dec = lgw_decode(code, enc.bins[0], enc.bins[i], {f"Y{i}": seqs[f"Y{i}"]}, i, params.eps_decoder, rng)
        law = marginal_mass(joint, (*side_labels, "V0", f"V{i}", f"Y{i}"))
        ok = typical_mask((*side, dec.v0, dec.v, seqs[f"Y{i}"]), law, params.eps_decoder)[0]
        failed |= not bool(ok)
    return TrialOutcome(failed, enc.fallback)


def _trial_fn(cfg: ExperimentConfig, n: int) -> Callable[[np.random.Generator], TrialOutcome]:
    channel, aux, upd = cfg.channel, cfg.aux, cfg.upd
    if cfg.kind == "marton":
        assert channel is not None and aux is not None
        return lambda rng: marton_trial(channel, aux, cfg.marton_rates, n, cfg.eps, rng)
    if cfg.kind == "lgw":
        assert channel is not None and aux is not None and upd is not None
        return lambda rng: lgw_trial(channel, aux, upd, cfg.lgw_rates, n, cfg.eps, rng)
    if cfg.kind == "block_markov":
        block = cfg.block_config(n)

        def run(rng: np.random.Generator) -> TrialOutcome:
            report = block_markov_trial(block, rng)
            return TrialOutcome(report.error, report.fallbacks > 0)

        return run

    law = cfg.lemma_law
    assert law is not None

    def lemma(rng: np.random.Generator) -> TrialOutcome:
        point = lemma_experiment(cfg.lemma_kind, law, cfg.lemma_rates, [n], 1, rng, cfg.eps)[0]
        return TrialOutcome(point.events > 0, False)

    return lemma


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> list[ExperimentRow]:
    """Run ``trials`` independent trials at every blocklength."""
    streams = np.random.SeedSequence(cfg.seed).spawn(len(cfg.n_list))
    rows = []
    for n, stream in zip(cfg.n_list, streams):
        trial = _trial_fn(cfg, n)
        seeds = stream.spawn(cfg.trials)

        def one(seed: np.random.SeedSequence) -> TrialOutcome:
            return trial(np.random.default_rng(seed))

        if workers <= 1:
            outcomes = [one(s) for s in seeds]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(one, seeds))
        row = ExperimentRow(
            n, cfg.trials, sum(o.error for o in outcomes), sum(o.fallback for o in outcomes)
        )
        log.info("%s n=%d: error rate %.4f over %d trials", cfg.kind, n, row.error_rate, row.trials)
        rows.append(row)
    return rows
