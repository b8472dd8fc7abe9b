from __future__ import annotations

from bcfb.channels.base import (
    CHANNEL_OUTPUTS,
    FEEDBACK,
    INPUT,
    OUTPUT_1,
    OUTPUT_2,
    Dmbc,
    FeedbackConfig,
    FeedbackKind,
    marginal_channel,
    output_channel,
    sample,
    sample_block,
)
from bcfb.channels.blackwell import BlackwellParams, make_blackwell
from bcfb.channels.catalog import channel_from_json, channel_to_json, make_parallel_bsc
from bcfb.channels.dueck import (
    NOISE_AXES,
    DueckParams,
    dueck_condition_holds,
    make_dueck,
    noise_law_from_table,
    pack_input,
    split_input,
    z_markov_chain_holds,
)

__all__ = [
    "CHANNEL_OUTPUTS",
    "FEEDBACK",
    "INPUT",
    "NOISE_AXES",
    "OUTPUT_1",
    "OUTPUT_2",
    "BlackwellParams",
    "Dmbc",
    "DueckParams",
    "FeedbackConfig",
    "FeedbackKind",
    "channel_from_json",
    "channel_to_json",
    "dueck_condition_holds",
    "make_blackwell",
    "make_dueck",
    "make_parallel_bsc",
    "marginal_channel",
    "noise_law_from_table",
    "output_channel",
    "pack_input",
    "sample",
    "sample_block",
    "split_input",
    "z_markov_chain_holds",
]
