"""Auxiliary (Marton) and update (LGW-SI) random-variable schemes."""

from __future__ import annotations

import enum
import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from bcfb.channels.base import FEEDBACK, INPUT, Dmbc
from bcfb.errors import ArgumentError
from bcfb.info.pmf import Alphabet, ConditionalPmf, JointPmf, compose, deterministic

log = logging.getLogger(__name__)

AUX_LABELS: tuple[str, str, str] = ("U0", "U1", "U2")
UPDATE_LABELS: tuple[str, str, str] = ("V0", "V1", "V2")


class UpdateVariant(str, enum.Enum):
    """FULL updates see ``(U0, U1, U2, YF)``; STAR updates see only ``(X, YF)``."""

    FULL = "full"
    STAR = "star"


_GIVEN: dict[UpdateVariant, tuple[str, ...]] = {
    UpdateVariant.FULL: (*AUX_LABELS, FEEDBACK),
    UpdateVariant.STAR: (INPUT, FEEDBACK),
}


@dataclass(frozen=True, slots=True, eq=False)
class AuxiliaryScheme:
    """``P(U0, U1, U2)`` and the encoder map ``X = f(U0, U1, U2)``.

    ``f_table`` is an integer array of shape ``(|U0|, |U1|, |U2|)``.
    """

    law_u: JointPmf
    f_table: np.ndarray = field(repr=False)
    x_size: int

    def __post_init__(self) -> None:
        if self.law_u.labels != AUX_LABELS:
            raise ArgumentError(f"auxiliary law must have axes {AUX_LABELS}, got {self.law_u.labels}")
        table = np.asarray(self.f_table)
        if table.shape != self.law_u.shape:
            raise ArgumentError(f"f table shape {table.shape} does not match {self.law_u.shape}")
        if not np.issubdtype(table.dtype, np.integer):
            if not np.all(table == np.round(table)):
                raise ArgumentError("f table entries must be integers")
            table = table.astype(np.intp)
        if table.min() < 0 or table.max() >= self.x_size:
            raise ArgumentError(f"f maps outside the input alphabet 0..{self.x_size - 1}")
        table = np.array(table, dtype=np.intp)
        table.flags.writeable = False
        object.__setattr__(self, "f_table", table)

    @classmethod
    def from_map(
        cls, law_u: JointPmf, f: Callable[[int, int, int], int], x_size: int
    ) -> AuxiliaryScheme:
        table = np.zeros(law_u.shape, dtype=np.intp)
        for cell in np.ndindex(*law_u.shape):
            table[cell] = f(*cell)
        return cls(law_u, table, x_size)

    @property
    def sizes(self) -> tuple[int, int, int]:
        s = self.law_u.shape
        return s[0], s[1], s[2]

    def encoder(self) -> ConditionalPmf:
        return deterministic(
            self.law_u.axes, (Alphabet(INPUT, self.x_size),), lambda *u: int(self.f_table[u])
        )

    def to_json(self) -> dict:
        return {
            "law_u": self.law_u.to_json(),
            "f": [int(v) for v in self.f_table.ravel()],
            "x_size": self.x_size,
        }

    @classmethod
    def from_json(cls, data: dict) -> AuxiliaryScheme:
        try:
            law = JointPmf.from_json(data["law_u"])
            table = np.asarray(data["f"], dtype=np.intp).reshape(law.shape)
            return cls(law, table, int(data["x_size"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ArgumentError(f"malformed auxiliary scheme JSON: {exc}") from exc


@dataclass(frozen=True, slots=True, eq=False)
class UpdateScheme:
    """``P(V0, V1, V2 | given)`` where the given axes depend on the variant."""

    law_v: ConditionalPmf
    variant: UpdateVariant = UpdateVariant.FULL

    def __post_init__(self) -> None:
        variant = UpdateVariant(self.variant)
        object.__setattr__(self, "variant", variant)
        if self.law_v.out_labels != UPDATE_LABELS:
            raise ArgumentError(f"update law outputs must be {UPDATE_LABELS}, got {self.law_v.out_labels}")
        if self.law_v.given_labels != _GIVEN[variant]:
            raise ArgumentError(
                f"{variant.value} update must condition on {_GIVEN[variant]}, "
                f"got {self.law_v.given_labels}"
            )

    @classmethod
    def from_map(
        cls,
        given_axes: Sequence[Alphabet],
        v_sizes: Sequence[int],
        fn: Callable[..., tuple[int, int, int]],
        variant: UpdateVariant,
    ) -> UpdateScheme:
        out = tuple(Alphabet(label, int(s)) for label, s in zip(UPDATE_LABELS, v_sizes))
        return cls(deterministic(given_axes, out, fn), variant)

    @property
    def sizes(self) -> tuple[int, int, int]:
        s = [a.size for a in self.law_v.out_axes]
        return s[0], s[1], s[2]

    def is_constant(self) -> bool:
        return self.sizes == (1, 1, 1)

    def to_json(self) -> dict:
        return {"variant": self.variant.value, "law_v": self.law_v.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> UpdateScheme:
        try:
            return cls(ConditionalPmf.from_json(data["law_v"]), UpdateVariant(data.get("variant", "full")))
        except (KeyError, ValueError) as exc:
            raise ArgumentError(f"malformed update scheme JSON: {exc}") from exc


def constant_update(
    aux: AuxiliaryScheme, channel: Dmbc, variant: UpdateVariant = UpdateVariant.FULL
) -> UpdateScheme:
    """Trivial update variables (all alphabets of size 1)."""
    if variant is UpdateVariant.FULL:
        given = (*aux.law_u.axes, channel.feedback)
    else:
        given = (channel.input, channel.feedback)
    return UpdateScheme.from_map(given, (1, 1, 1), lambda *_: (0, 0, 0), variant)


def star_as_full(upd: UpdateScheme, aux: AuxiliaryScheme) -> UpdateScheme:
    """Re-express a star update as a full one through ``X = f(U0, U1, U2)``."""
    if upd.variant is not UpdateVariant.STAR:
        raise ArgumentError("star_as_full needs a star update scheme")
    if upd.law_v.given_axes[0].size != aux.x_size:
        raise ArgumentError("update input alphabet does not match the encoder output")
    mass = upd.law_v.mass[aux.f_table]  # (|U0|, |U1|, |U2|, |YF|, |V0|, |V1|, |V2|)
    law = ConditionalPmf((*aux.law_u.axes, upd.law_v.given_axes[1]), upd.law_v.out_axes, mass)
    return UpdateScheme(law, UpdateVariant.FULL)


@dataclass(frozen=True, slots=True)
class GridSpec:
    """Named parameter ranges swept by searches and curve sweeps."""

    names: tuple[str, ...]
    lows: tuple[float, ...]
    highs: tuple[float, ...]
    steps: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.names)
        if not (len(self.lows) == len(self.highs) == len(self.steps) == n):
            raise ArgumentError("grid spec fields must all have the same length")
        for name, lo, hi, k in zip(self.names, self.lows, self.highs, self.steps):
            if k < 1:
                raise ArgumentError(f"grid axis {name!r} needs at least one step")
            if k > 1 and not lo <= hi:
                raise ArgumentError(f"grid axis {name!r} has an empty range [{lo}, {hi}]")

    @classmethod
    def single(cls, **values: float) -> GridSpec:
        names = tuple(values)
        vals = tuple(float(v) for v in values.values())
        return cls(names, vals, vals, tuple(1 for _ in names))

    def axis(self, name: str) -> np.ndarray:
        i = self.names.index(name)
        if self.steps[i] == 1:
            return np.array([self.lows[i]])
        return np.linspace(self.lows[i], self.highs[i], self.steps[i])

    def points(self) -> list[dict[str, float]]:
        """Cartesian product of all axes, first axis varying slowest."""
        if not self.names:
            raise ArgumentError("grid has no axes")
        axes = [self.axis(name) for name in self.names]
        return [
            dict(zip(self.names, (float(v) for v in combo)))
            for combo in np.array(np.meshgrid(*axes, indexing="ij")).reshape(len(axes), -1).T
        ]

    def to_json(self) -> dict:
        return {
            name: {"low": lo, "high": hi, "steps": k}
            for name, lo, hi, k in zip(self.names, self.lows, self.highs, self.steps)
        }

    @classmethod
    def from_json(cls, data: dict) -> GridSpec:
        try:
            names = tuple(data)
            return cls(
                names,
                tuple(float(data[n]["low"]) for n in names),
                tuple(float(data[n]["high"]) for n in names),
                tuple(int(data[n]["steps"]) for n in names),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ArgumentError(f"malformed grid JSON: {exc}") from exc


def induced_joint(aux: AuxiliaryScheme, upd: UpdateScheme | None, channel: Dmbc) -> JointPmf:
    """Joint law of ``(U0, U1, U2, X, Y1, Y2, YF[, V0, V1, V2])``.

    Built by chaining the auxiliary law, the encoder map, the channel and
    the update law, so both Markov constraints hold by construction.
    """
    if aux.x_size != channel.input.size:
        raise ArgumentError(
            f"encoder maps into {aux.x_size} symbols but the channel input has {channel.input.size}"
        )
    joint = compose(compose(aux.law_u, aux.encoder()), channel.law)
    if upd is None:
        return joint
    return compose(joint, upd.law_v)
