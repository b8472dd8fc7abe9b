"""Small test channels and the ``{"type": ...}`` JSON channel format."""

from __future__ import annotations

import logging

import numpy as np

from bcfb.channels.base import Dmbc, FeedbackConfig, FeedbackKind
from bcfb.channels.blackwell import BlackwellParams, make_blackwell
from bcfb.channels.dueck import DueckParams, make_dueck
from bcfb.errors import ArgumentError
from bcfb.info.pmf import ConditionalPmf, JointPmf

log = logging.getLogger(__name__)


def make_parallel_bsc(p1: float, p2: float, feedback: FeedbackConfig | None = None) -> Dmbc:
    """``X = (X1, X2)`` packed as ``2*x1 + x2``; ``Yi = Xi xor Ni`` with ``Ni ~ Bern(pi)``.

    Feedback defaults to noiseless, returning ``2*y1 + y2``.
    """
    for q in (p1, p2):
        if not 0.0 <= q <= 1.0:
            raise ArgumentError(f"crossover probability out of range: {q}")
    fb = feedback or FeedbackConfig.noiseless()
    if fb.kind is FeedbackKind.NOISY:
        raise ArgumentError("parallel BSC supports only none/noiseless feedback")
    nf = 1 if fb.kind is FeedbackKind.NONE else 4
    mass = np.zeros((4, 2, 2, nf))
    for x in range(4):
        x1, x2 = x >> 1, x & 1
        for n1, n2 in np.ndindex(2, 2):
            pr = (p1 if n1 else 1.0 - p1) * (p2 if n2 else 1.0 - p2)
            y1, y2 = x1 ^ n1, x2 ^ n2
            mass[x, y1, y2, 0 if nf == 1 else 2 * y1 + y2] += pr
    return Dmbc.from_mass(mass, (4, 2, 2, nf), name="parallel-bsc")


def channel_to_json(channel: Dmbc) -> dict:
    return {"type": "custom", "name": channel.name, "law": channel.law.to_json()}


def channel_from_json(data: dict) -> Dmbc:
    """Parse ``{"type": "dueck"|"blackwell"|"parallel_bsc"|"custom", ...}``."""
    if not isinstance(data, dict) or "type" not in data:
        raise ArgumentError("channel JSON needs a 'type' field")
    kind = data["type"]
    feedback = FeedbackConfig.from_json(data.get("feedback"))
    try:
        if kind == "dueck":
            noise = JointPmf.from_json(data["noise_law"])
            return make_dueck(DueckParams(noise, feedback))
        if kind == "blackwell":
            return make_blackwell(
                BlackwellParams(float(data["p"]), feedback, bool(data.get("shared_noise", True)))
            )
        if kind == "parallel_bsc":
            return make_parallel_bsc(float(data["p1"]), float(data["p2"]), feedback)
        if kind == "custom":
            return Dmbc(ConditionalPmf.from_json(data["law"]), str(data.get("name", "custom")))
    except KeyError as exc:
        raise ArgumentError(f"channel JSON of type {kind!r} is missing {exc}") from exc
    raise ArgumentError(f"unknown channel type {kind!r}")
