"""Noisy Blackwell channel.

Ternary input, binary outputs driven by a Bern(p) noise bit:

    X=0 -> (Z, Z)      X=1 -> (1-Z, Z)      X=2 -> (1-Z, 1-Z)

With ``shared_noise=False`` each output gets its own independent noise
bit; the per-receiver marginals are unchanged.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from bcfb.channels.base import Dmbc, FeedbackConfig, FeedbackKind
from bcfb.errors import ArgumentError

log = logging.getLogger(__name__)

# deterministic part of each output per input symbol
_FLIP_1: tuple[int, int, int] = (0, 1, 1)
_FLIP_2: tuple[int, int, int] = (0, 0, 1)


@dataclass(frozen=True, slots=True)
class BlackwellParams:
    p: float
    feedback: FeedbackConfig = field(default_factory=FeedbackConfig.noiseless)
    shared_noise: bool = True

    def __post_init__(self) -> None:
        if not 0.0 <= self.p < 0.5:
            raise ArgumentError(f"Blackwell noise must satisfy 0 <= p < 0.5, got {self.p}")


def make_blackwell(params: BlackwellParams) -> Dmbc:
    p = params.p
    fb = params.feedback
    w = fb.noise_mass().sum(axis=0)  # (W1, W2)
    nf = 1 if fb.kind is FeedbackKind.NONE else 4
    bit = np.array([1.0 - p, p])

    mass = np.zeros((3, 2, 2, nf))
    for x in range(3):
        for z1, z2 in np.ndindex(2, 2):
            if params.shared_noise:
                pz = bit[z1] if z1 == z2 else 0.0
            else:
                pz = bit[z1] * bit[z2]
            if pz == 0.0:
                continue
            y1, y2 = _FLIP_1[x] ^ z1, _FLIP_2[x] ^ z2
            if fb.kind is FeedbackKind.NONE:
                mass[x, y1, y2, 0] += pz
                continue
            for w1, w2 in np.ndindex(2, 2):
                if w[w1, w2] > 0.0:
                    mass[x, y1, y2, 2 * (y1 ^ w1) + (y2 ^ w2)] += pz * w[w1, w2]
    name = "blackwell" if params.shared_noise else "blackwell-independent"
    return Dmbc.from_mass(mass, (3, 2, 2, nf), name=name)
