"""Discrete memoryless broadcast channels with generalized feedback."""

from __future__ import annotations

import enum
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from bcfb.errors import ArgumentError
from bcfb.info.pmf import Alphabet, ConditionalPmf, JointPmf, bernoulli, marginal_mass, product

log = logging.getLogger(__name__)

INPUT = "X"
OUTPUT_1 = "Y1"
OUTPUT_2 = "Y2"
FEEDBACK = "YF"
CHANNEL_OUTPUTS: tuple[str, str, str] = (OUTPUT_1, OUTPUT_2, FEEDBACK)

NOISE_LABELS: tuple[str, str, str] = ("W0", "W1", "W2")


class FeedbackKind(str, enum.Enum):
    NONE = "none"
    NOISELESS = "noiseless"
    NOISY = "noisy"


@dataclass(frozen=True, slots=True)
class FeedbackConfig:
    """Feedback link description.

    ``flips`` are the per-component flip probabilities ``(q0, q1, q2)`` of
    the XOR noise on the fed-back bits.  ``joint`` optionally replaces the
    independent product with a joint law over ``(W0, W1, W2)``.
    """

    kind: FeedbackKind = FeedbackKind.NOISELESS
    flips: tuple[float, float, float] = (0.0, 0.0, 0.0)
    joint: JointPmf | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", FeedbackKind(self.kind))
        flips = tuple(float(q) for q in self.flips)
        if len(flips) != 3:
            raise ArgumentError(f"feedback flips need 3 entries, got {len(flips)}")
        for q in flips:
            if not 0.0 <= q <= 1.0:
                raise ArgumentError(f"feedback flip probability out of range: {q}")
        object.__setattr__(self, "flips", flips)
        if self.joint is not None:
            if self.kind is not FeedbackKind.NOISY:
                raise ArgumentError("a joint feedback-noise law needs kind='noisy'")
            for label in NOISE_LABELS:
                if self.joint.alphabet(label).size != 2:
                    raise ArgumentError(f"feedback noise axis {label} must be binary")

    @classmethod
    def none(cls) -> FeedbackConfig:
        return cls(FeedbackKind.NONE)

    @classmethod
    def noiseless(cls) -> FeedbackConfig:
        return cls(FeedbackKind.NOISELESS)

    @classmethod
    def noisy(cls, q0: float, q1: float, q2: float) -> FeedbackConfig:
        return cls(FeedbackKind.NOISY, (q0, q1, q2))

    def noise_mass(self) -> np.ndarray:
        """``P(W0, W1, W2)`` as a 2x2x2 array (a point mass at 0 unless noisy)."""
        if self.kind is not FeedbackKind.NOISY:
            mass = np.zeros((2, 2, 2))
            mass[0, 0, 0] = 1.0
            return mass
        if self.joint is not None:
            return marginal_mass(self.joint, NOISE_LABELS)
        law = product(*(bernoulli(label, q) for label, q in zip(NOISE_LABELS, self.flips)))
        return np.array(law.mass)

    def to_json(self) -> dict:
        data: dict = {"kind": self.kind.value, "flips": list(self.flips)}
        if self.joint is not None:
            data["joint"] = self.joint.to_json()
        return data

    @classmethod
    def from_json(cls, data: dict | str | None) -> FeedbackConfig:
        if data is None:
            return cls.noiseless()
        if isinstance(data, str):
            return cls(FeedbackKind(data))
        joint = JointPmf.from_json(data["joint"]) if data.get("joint") else None
        return cls(FeedbackKind(data.get("kind", "noiseless")), tuple(data.get("flips", (0, 0, 0))), joint)


@dataclass(frozen=True, slots=True, eq=False)
class Dmbc:
    """One-shot law ``P(Y1, Y2, YF | X)``; memorylessness is structural."""

    law: ConditionalPmf
    name: str = "custom"

    def __post_init__(self) -> None:
        if self.law.given_labels != (INPUT,):
            raise ArgumentError(f"channel law must condition on ({INPUT},), got {self.law.given_labels}")
        if self.law.out_labels != CHANNEL_OUTPUTS:
            raise ArgumentError(
                f"channel law outputs must be {CHANNEL_OUTPUTS}, got {self.law.out_labels}"
            )

    @classmethod
    def from_mass(
        cls, mass: np.ndarray, sizes: Sequence[int], name: str = "custom"
    ) -> Dmbc:
        """Build from a ``(|X|, |Y1|, |Y2|, |YF|)`` array."""
        nx, n1, n2, nf = (int(s) for s in sizes)
        law = ConditionalPmf(
            (Alphabet(INPUT, nx),),
            (Alphabet(OUTPUT_1, n1), Alphabet(OUTPUT_2, n2), Alphabet(FEEDBACK, nf)),
            mass,
        )
        return cls(law, name)

    @property
    def input(self) -> Alphabet:
        return self.law.given_axes[0]

    @property
    def outputs(self) -> tuple[Alphabet, Alphabet]:
        return self.law.out_axes[0], self.law.out_axes[1]

    @property
    def feedback(self) -> Alphabet:
        return self.law.out_axes[2]

    @property
    def has_feedback(self) -> bool:
        return self.feedback.size > 1

    def without_feedback(self) -> Dmbc:
        """Same broadcast law with a trivial feedback alphabet."""
        mass = self.law.mass.sum(axis=3, keepdims=True)
        return Dmbc.from_mass(mass, (self.input.size, *[a.size for a in self.outputs], 1), self.name)


def marginal_channel(channel: Dmbc, receiver: int) -> ConditionalPmf:
    """``P(Yi | X)`` with the other output and the feedback summed out."""
    if receiver not in (1, 2):
        raise ArgumentError(f"receiver must be 1 or 2, got {receiver}")
    drop = (2, 3) if receiver == 1 else (1, 3)
    mass = channel.law.mass.sum(axis=drop)
    return ConditionalPmf((channel.input,), (channel.law.out_axes[receiver - 1],), mass)


def output_channel(channel: Dmbc) -> ConditionalPmf:
    """``P(Y1, Y2 | X)``."""
    return ConditionalPmf(
        (channel.input,), channel.law.out_axes[:2], channel.law.mass.sum(axis=3)
    )


# ── Sampling ────────────────────────────────────────────────────────────


def _cdf_table(channel: Dmbc) -> np.ndarray:
    flat = channel.law.mass.reshape(channel.input.size, -1)
    cdf = np.cumsum(flat, axis=1)
    cdf[:, -1] = 1.0
    return cdf


def sample(channel: Dmbc, x: int, rng: np.random.Generator) -> tuple[int, int, int]:
    """One use of the channel: ``(y1, y2, yf)``."""
    if not 0 <= x < channel.input.size:
        raise ArgumentError(f"input symbol {x} outside 0..{channel.input.size - 1}")
    y1, y2, yf = sample_block(channel, np.array([x]), rng)
    return int(y1[0]), int(y2[0]), int(yf[0])


def sample_block(
    channel: Dmbc, xs: np.ndarray, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Independent uses of the channel for every entry of ``xs``."""
    xs = np.asarray(xs, dtype=np.intp)
    if xs.size and (xs.min() < 0 or xs.max() >= channel.input.size):
        raise ArgumentError("input block has symbols outside the input alphabet")
    cdf = _cdf_table(channel)
    u = rng.random(xs.shape)
    flat = np.sum(u[..., None] >= cdf[xs], axis=-1)
    flat = np.minimum(flat, cdf.shape[1] - 1)
    y1, y2, yf = np.unravel_index(flat, channel.law.mass.shape[1:])
    return y1.astype(np.intp), y2.astype(np.intp), yf.astype(np.intp)
