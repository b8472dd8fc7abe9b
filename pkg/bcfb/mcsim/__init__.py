from __future__ import annotations

from bcfb.mcsim.block_markov import (
    BlockMarkovConfig,
    TrialReport,
    block_markov_trial,
    no_feedback_baseline,
)
from bcfb.mcsim.harness import (
    EXPERIMENT_KINDS,
    ExperimentConfig,
    ExperimentRow,
    TrialOutcome,
    lgw_trial,
    marton_trial,
    run_experiment,
)
from bcfb.mcsim.lemmas import (
    LEMMA_KINDS,
    LemmaPoint,
    box_probability,
    lemma_experiment,
    lemma_threshold,
)
from bcfb.mcsim.lgw import LgwCode, LgwRates, LgwSizes, gen_lgw_code, lgw_decode, lgw_encode
from bcfb.mcsim.marton import (
    MartonCode,
    MartonMessage,
    MartonRates,
    MartonSizes,
    gen_marton_code,
    marton_decode,
    marton_encode,
    random_message,
)
from bcfb.mcsim.typicality import TypicalityParams, is_jointly_typical, typical_mask

__all__ = [
    "EXPERIMENT_KINDS",
    "LEMMA_KINDS",
    "BlockMarkovConfig",
    "ExperimentConfig",
    "ExperimentRow",
    "LemmaPoint",
    "LgwCode",
    "LgwRates",
    "LgwSizes",
    "MartonCode",
    "MartonMessage",
    "MartonRates",
    "MartonSizes",
    "TrialOutcome",
    "TrialReport",
    "TypicalityParams",
    "block_markov_trial",
    "box_probability",
    "gen_lgw_code",
    "gen_marton_code",
    "is_jointly_typical",
    "lemma_experiment",
    "lemma_threshold",
    "lgw_decode",
    "lgw_encode",
    "lgw_trial",
    "marton_decode",
    "marton_encode",
    "marton_trial",
    "no_feedback_baseline",
    "random_message",
    "run_experiment",
    "typical_mask",
]
