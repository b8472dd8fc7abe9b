"""Generalized Dueck channel.

Input ``X = (X1, X0, X2)`` packed big-endian as ``4*x1 + 2*x0 + x2``.
Receiver 1 sees ``(X1+Z1, X0+Z0)`` and receiver 2 sees ``(X0+Z0, X2+Z2)``
(mod 2), so the middle bit is common to both outputs.  The feedback symbol
is the three distinct output bits ``(Y11, Y10, Y22)``, possibly XOR-corrupted.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from bcfb.channels.base import Dmbc, FeedbackConfig, FeedbackKind
from bcfb.errors import ArgumentError
from bcfb.info.measures import entropy, mutual_information, num_tol
from bcfb.info.pmf import Alphabet, JointPmf, marginal_mass

log = logging.getLogger(__name__)

NOISE_AXES: tuple[str, str, str] = ("Z0", "Z1", "Z2")


def check_noise_law(noise_law: JointPmf) -> None:
    if sorted(noise_law.labels) != sorted(NOISE_AXES):
        raise ArgumentError(f"noise law must have axes {NOISE_AXES}, got {noise_law.labels}")
    for label in NOISE_AXES:
        if noise_law.alphabet(label).size != 2:
            raise ArgumentError(f"noise axis {label} must be binary")


@dataclass(frozen=True, slots=True)
class DueckParams:
    noise_law: JointPmf = field(compare=False)
    feedback: FeedbackConfig = field(default_factory=FeedbackConfig.noiseless)

    def __post_init__(self) -> None:
        check_noise_law(self.noise_law)


def split_input(x: int) -> tuple[int, int, int]:
    """``x -> (x1, x0, x2)``."""
    return (x >> 2) & 1, (x >> 1) & 1, x & 1


def pack_input(x1: int, x0: int, x2: int) -> int:
    return 4 * x1 + 2 * x0 + x2


def make_dueck(params: DueckParams) -> Dmbc:
    z = marginal_mass(params.noise_law, NOISE_AXES)
    fb = params.feedback
    w = fb.noise_mass()
    nf = {FeedbackKind.NONE: 1}.get(fb.kind, 8)

    mass = np.zeros((8, 4, 4, nf))
    for x in range(8):
        x1, x0, x2 = split_input(x)
        for z0, z1, z2 in np.ndindex(2, 2, 2):
            pz = z[z0, z1, z2]
            if pz == 0.0:
                continue
            y11, y10, y22 = x1 ^ z1, x0 ^ z0, x2 ^ z2
            y1, y2 = 2 * y11 + y10, 2 * y10 + y22
            if fb.kind is FeedbackKind.NONE:
                mass[x, y1, y2, 0] += pz
                continue
            for w0, w1, w2 in np.ndindex(2, 2, 2):
                pw = w[w0, w1, w2]
                if pw == 0.0:
                    continue
                yf = 4 * (y11 ^ w1) + 2 * (y10 ^ w0) + (y22 ^ w2)
                mass[x, y1, y2, yf] += pz * pw
    log.debug("built Dueck channel with %s feedback", fb.kind.value)
    return Dmbc.from_mass(mass, (8, 4, 4, nf), name="dueck")


def dueck_condition_holds(noise_law: JointPmf) -> bool:
    """``H(Z0,Z1) <= 1`` and ``H(Z0,Z2) <= 1``."""
    check_noise_law(noise_law)
    return (
        entropy(noise_law, ("Z0", "Z1")) <= 1.0 + num_tol()
        and entropy(noise_law, ("Z0", "Z2")) <= 1.0 + num_tol()
    )


def z_markov_chain_holds(noise_law: JointPmf) -> bool:
    """True iff ``Z1 - Z0 - Z2`` is a Markov chain."""
    check_noise_law(noise_law)
    return mutual_information(noise_law, "Z1", "Z2", "Z0") <= num_tol()


def noise_law_from_table(mass: np.ndarray) -> JointPmf:
    """Noise law from a 2x2x2 table indexed ``[z0, z1, z2]``."""
    return JointPmf(tuple(Alphabet(label, 2) for label in NOISE_AXES), np.asarray(mass, dtype=float))
