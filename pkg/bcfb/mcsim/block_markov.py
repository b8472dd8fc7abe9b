"""Block-Markov feedback scheme with backward decoding.

Block ``b`` carries fresh messages together with the LGW-SI bin indices
describing block ``b - 1``; a final stretched Marton block of length
``ceil(gamma * n)`` delivers the last indices.  Receivers decode the
tail first and walk backwards, augmenting each block's output with the
update sequence recovered from the next one.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from bcfb.channels.base import Dmbc, marginal_channel, sample_block
from bcfb.config.defaults import setting
from bcfb.errors import ArgumentError
from bcfb.mcsim.lgw import LgwRates, gen_lgw_code, lgw_decode, lgw_encode
from bcfb.mcsim.marton import (
    MartonMessage,
    MartonSizes,
    gen_marton_code,
    marton_decode,
    marton_encode,
    size_of,
)
from bcfb.mcsim.typicality import TypicalityParams
from bcfb.regions.oracles import channel_capacity
from bcfb.regions.schemes import (
    AUX_LABELS,
    AuxiliaryScheme,
    UpdateScheme,
    UpdateVariant,
    constant_update,
    induced_joint,
)

log = logging.getLogger(__name__)

SPLITS: tuple[str, str] = ("common", "private")


@dataclass(frozen=True, slots=True, eq=False)
class BlockMarkovConfig:
    """One block-Markov experiment point.

    ``key_split[i]`` places receiver ``i``'s update index in the common
    (``"common"``) or private (``"private"``) part of its Marton message;
    ``tail_split`` does the same for the final block, which by default
    reuses ``aux``.
    """

    aux: AuxiliaryScheme
    upd: UpdateScheme
    channel: Dmbc
    rates: tuple[float, float, float]
    lgw: LgwRates = LgwRates()
    bin_rates: tuple[float, float] = (0.0, 0.0)
    key_split: tuple[str, str] = ("private", "private")
    blocks: int = 1
    gamma: float = field(default_factory=lambda: float(setting("simulation", "gamma")))
    n: int = 12
    eps: float = field(default_factory=lambda: float(setting("simulation", "eps")))
    tail_aux: AuxiliaryScheme | None = None
    tail_split: tuple[str, str] = ("common", "common")
    tail_bin_rates: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        if self.blocks < 1:
            raise ArgumentError(f"need at least one data block, got {self.blocks}")
        if not self.gamma > 1.0:
            raise ArgumentError(f"gamma must exceed 1, got {self.gamma}")
        for split in (*self.key_split, *self.tail_split):
            if split not in SPLITS:
                raise ArgumentError(f"split must be one of {SPLITS}, got {split!r}")
        TypicalityParams(self.eps, self.n)
        for r in (*self.rates, *self.bin_rates, *self.tail_bin_rates):
            size_of(r, self.n)

    @property
    def tail_length(self) -> int:
        return math.ceil(self.gamma * self.n)

    @property
    def side_labels(self) -> tuple[str, ...]:
        if self.upd.variant is UpdateVariant.FULL:
            return (*AUX_LABELS, "YF")
        return ("X", "YF")

    @property
    def message_sizes(self) -> tuple[int, int, int]:
        return tuple(size_of(r, self.n) for r in self.rates)  # type: ignore[return-value]


# ── Index packing ───────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class _Layout:
    """How ``(message, key)`` pairs map onto Marton indices."""

    msg: tuple[int, int, int]
    key: tuple[int, int, int]
    split: tuple[str, str]

    def sizes(self, bins: tuple[int, int]) -> MartonSizes:
        parts = []
        for i in (1, 2):
            if self.split[i - 1] == "common":
                parts.extend((self.key[i], self.msg[i]))
            else:
                parts.extend((1, self.msg[i] * self.key[i]))
        return MartonSizes(self.msg[0] * self.key[0], parts[0], parts[1], parts[2], parts[3], *bins)

    def pack(self, m: tuple[int, int, int], k: tuple[int, int, int]) -> MartonMessage:
        j0 = m[0] * self.key[0] + k[0]
        parts = []
        for i in (1, 2):
            if self.split[i - 1] == "common":
                parts.extend((k[i], m[i]))
            else:
                parts.extend((0, m[i] * self.key[i] + k[i]))
        return MartonMessage(j0, parts[0], parts[1], parts[2], parts[3])

    def unpack(self, j0: int, jc: int, jp: int, receiver: int) -> tuple[tuple[int, int], tuple[int, int]]:
        """``((m0, mi), (k0, ki))`` as seen by receiver ``i``."""
        m0, k0 = divmod(j0, self.key[0])
        if self.split[receiver - 1] == "common":
            mi, ki = jp, jc
        else:
            mi, ki = divmod(jp, self.key[receiver])
        return (m0, mi), (k0, ki)


def _check_tail_capacity(cfg: BlockMarkovConfig, keys: tuple[int, int, int]) -> None:
    bits = [math.log2(k) for k in keys]
    for i in (1, 2):
        load = (bits[0] + bits[i]) / cfg.tail_length
        cap = channel_capacity(marginal_channel(cfg.channel, i)).capacity
        if load > 0.0 and not load < cap:
            raise ArgumentError(
                f"tail block must carry {load:.3f} bits/use to receiver {i} "
                f"but its capacity is {cap:.3f}; raise gamma"
            )


# ── Trial ───────────────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class TrialReport:
    """Per-block errors ``(receiver 1, receiver 2)`` and the end-to-end indicator."""

    block_errors: tuple[tuple[bool, bool], ...]
    error: bool
    fallbacks: int
    ambiguous: int
    trials: int = 1


def block_markov_trial(cfg: BlockMarkovConfig, rng: np.random.Generator) -> TrialReport:
    """Simulate ``B`` data blocks and the tail block once.

    Codebooks are drawn once per trial and reused in every data block.
    """
    params = TypicalityParams(cfg.eps, cfg.n)
    msg_sizes = cfg.message_sizes
    lgw_sizes = cfg.lgw.sizes(cfg.n)
    keys = lgw_sizes.bins
    _check_tail_capacity(cfg, keys)

    layout = _Layout(msg_sizes, keys, cfg.key_split)
    joint = induced_joint(cfg.aux, cfg.upd, cfg.channel)
    bins = (size_of(cfg.bin_rates[0], cfg.n), size_of(cfg.bin_rates[1], cfg.n))
    block_code = gen_marton_code(cfg.aux, joint, layout.sizes(bins), cfg.n, rng)
    lgw_code = gen_lgw_code(joint, cfg.side_labels, lgw_sizes, cfg.n, rng)

    tail_aux = cfg.tail_aux or cfg.aux
    nt = cfg.tail_length
    tail_layout = _Layout((1, 1, 1), keys, cfg.tail_split)
    tail_bins = (size_of(cfg.tail_bin_rates[0], nt), size_of(cfg.tail_bin_rates[1], nt))
    tail_code = gen_marton_code(
        tail_aux, induced_joint(tail_aux, None, cfg.channel), tail_layout.sizes(tail_bins), nt, rng
    )

    messages = [tuple(int(v) for v in rng.integers(0, msg_sizes)) for _ in range(cfg.blocks)]
    outputs: list[tuple[np.ndarray, np.ndarray]] = []
    fallbacks = 0
    key = (0, 0, 0)
    for m in messages:
        enc = marton_encode(block_code, layout.pack(m, key), params.eps_marton_enc, rng)  # type: ignore[arg-type]
        y1, y2, yf = sample_block(cfg.channel, enc.x, rng)
        side = (*enc.u, yf) if cfg.upd.variant is UpdateVariant.FULL else (enc.x, yf)
        lenc = lgw_encode(lgw_code, side, params.eps_lgw_enc, rng)
        key = lenc.bins
        outputs.append((y1, y2))
        fallbacks += int(enc.fallback) + int(lenc.fallback)

    tail_enc = marton_encode(tail_code, tail_layout.pack((0, 0, 0), key), params.eps_marton_enc, rng)
    t1, t2, _ = sample_block(cfg.channel, tail_enc.x, rng)
    fallbacks += int(tail_enc.fallback)

    per_block = [[False, False] for _ in messages]
    ambiguous = 0
    for i, t in ((1, t1), (2, t2)):
        dec = marton_decode(tail_code, {f"Y{i}": t}, i, params.eps_decoder, rng)
        _, (k0, ki) = tail_layout.unpack(dec.j0, dec.jc, dec.jp, i)
        for b in range(cfg.blocks - 1, -1, -1):
            y = outputs[b][i - 1]
            v = lgw_decode(lgw_code, k0, ki, {f"Y{i}": y}, i, params.eps_decoder, rng)
            ambiguous += int(not v.unique)
            d = marton_decode(block_code, {f"Y{i}": y, f"V{i}": v.v}, i, params.eps_decoder, rng)
            (m0, mi), (k0, ki) = layout.unpack(d.j0, d.jc, d.jp, i)
            per_block[b][i - 1] = (m0, mi) != (messages[b][0], messages[b][i])

    block_errors = tuple((e1, e2) for e1, e2 in per_block)
    return TrialReport(block_errors, any(any(e) for e in block_errors), fallbacks, ambiguous)


def no_feedback_baseline(cfg: BlockMarkovConfig) -> BlockMarkovConfig:
    """Same rates and blocks with a trivial feedback link and constant updates."""
    channel = cfg.channel.without_feedback()
    upd = constant_update(cfg.aux, channel, cfg.upd.variant)
    return replace(cfg, channel=channel, upd=upd, lgw=LgwRates())
