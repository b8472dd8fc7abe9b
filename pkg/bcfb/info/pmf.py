"""Finite-alphabet joint and conditional probability mass functions.

Every pmf is dense, indexed by the mixed-radix tuple of its axes, and
read-only after construction.  Axis labels are plain strings; the
operations here never reorder symbols, only axes.
"""

from __future__ import annotations

import json
import logging
import string
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from bcfb.config.defaults import setting
from bcfb.errors import ArgumentError, DomainError

log = logging.getLogger(__name__)


def norm_tol() -> float:
    return float(setting("numerics", "tau_norm"))


@dataclass(frozen=True, slots=True)
class Alphabet:
    """A finite alphabet ``{0, ..., size-1}`` with a label."""

    name: str
    size: int

    def __post_init__(self) -> None:
        if not self.name:
            raise ArgumentError("alphabet name must be nonempty")
        if int(self.size) != self.size or self.size < 1:
            raise ArgumentError(f"alphabet {self.name!r} has invalid size {self.size}")


def _frozen(values: np.ndarray) -> np.ndarray:
    arr = np.array(values, dtype=float, copy=True)
    arr.flags.writeable = False
    return arr


def _check_labels(axes: Sequence[Alphabet]) -> None:
    names = [a.name for a in axes]
    if len(set(names)) != len(names):
        raise ArgumentError(f"axis labels must be unique: {names}")


def _check_mass(mass: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(mass)):
        raise ArgumentError(f"{what} contains non-finite entries")
    if np.any(mass < 0):
        raise ArgumentError(f"{what} has negative entries (min {mass.min():.3g})")


@dataclass(frozen=True, slots=True, eq=False)
class JointPmf:
    """Probability mass over the product of ``axes``."""

    axes: tuple[Alphabet, ...]
    mass: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        axes = tuple(self.axes)
        if not axes:
            raise ArgumentError("a JointPmf needs at least one axis")
        _check_labels(axes)
        shape = tuple(a.size for a in axes)
        mass = np.asarray(self.mass, dtype=float)
        if mass.size != int(np.prod(shape)):
            raise ArgumentError(
                f"mass has {mass.size} entries, axes {self.labels_of(axes)} need "
                f"{int(np.prod(shape))}"
            )
        mass = mass.reshape(shape)
        _check_mass(mass, "JointPmf")
        total = float(mass.sum())
        if abs(total - 1.0) > norm_tol():
            raise ArgumentError(f"JointPmf mass sums to {total!r}, not 1")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "mass", _frozen(mass))

    @staticmethod
    def labels_of(axes: Iterable[Alphabet]) -> tuple[str, ...]:
        return tuple(a.name for a in axes)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.labels_of(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(a.size for a in self.axes)

    def axis_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ArgumentError(
                f"unknown axis {label!r}; available {self.labels}"
            ) from None

    def alphabet(self, label: str) -> Alphabet:
        return self.axes[self.axis_index(label)]

    def to_json(self) -> dict:
        return {
            "axes": [{"name": a.name, "size": a.size} for a in self.axes],
            "mass": [float(v) for v in self.mass.ravel()],
        }

    @classmethod
    def from_json(cls, data: dict) -> JointPmf:
        try:
            axes = tuple(Alphabet(str(a["name"]), int(a["size"])) for a in data["axes"])
            return cls(axes, np.asarray(data["mass"], dtype=float))
        except (KeyError, TypeError) as exc:
            raise ArgumentError(f"malformed pmf JSON: {exc}") from exc


@dataclass(frozen=True, slots=True, eq=False)
class ConditionalPmf:
    """Conditional law of ``out_axes`` given ``given_axes``.

    ``mass`` has shape ``given sizes + out sizes``; each given-cell sums to 1.
    """

    given_axes: tuple[Alphabet, ...]
    out_axes: tuple[Alphabet, ...]
    mass: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        given = tuple(self.given_axes)
        out = tuple(self.out_axes)
        if not out:
            raise ArgumentError("a ConditionalPmf needs at least one output axis")
        _check_labels(given + out)
        shape = tuple(a.size for a in given + out)
        mass = np.asarray(self.mass, dtype=float)
        if mass.size != int(np.prod(shape)):
            raise ArgumentError(
                f"conditional mass has {mass.size} entries, expected {int(np.prod(shape))}"
            )
        mass = mass.reshape(shape)
        _check_mass(mass, "ConditionalPmf")
        sums = mass.reshape(int(np.prod(shape[: len(given)], dtype=int)), -1).sum(axis=1)
        worst = float(np.max(np.abs(sums - 1.0)))
        if worst > norm_tol():
            raise ArgumentError(f"conditional rows deviate from 1 by {worst:.3g}")
        object.__setattr__(self, "given_axes", given)
        object.__setattr__(self, "out_axes", out)
        object.__setattr__(self, "mass", _frozen(mass))

    @property
    def given_labels(self) -> tuple[str, ...]:
        return JointPmf.labels_of(self.given_axes)

    @property
    def out_labels(self) -> tuple[str, ...]:
        return JointPmf.labels_of(self.out_axes)

    def row(self, *given: int) -> np.ndarray:
        """Out-distribution for one given-cell, flattened."""
        return self.mass[tuple(given)].ravel()

    def to_json(self) -> dict:
        return {
            "given_axes": [{"name": a.name, "size": a.size} for a in self.given_axes],
            "out_axes": [{"name": a.name, "size": a.size} for a in self.out_axes],
            "mass": [float(v) for v in self.mass.ravel()],
        }

    @classmethod
    def from_json(cls, data: dict) -> ConditionalPmf:
        try:
            given = tuple(Alphabet(str(a["name"]), int(a["size"])) for a in data["given_axes"])
            out = tuple(Alphabet(str(a["name"]), int(a["size"])) for a in data["out_axes"])
            return cls(given, out, np.asarray(data["mass"], dtype=float))
        except (KeyError, TypeError) as exc:
            raise ArgumentError(f"malformed conditional pmf JSON: {exc}") from exc


# ── Constructors ────────────────────────────────────────────────────────


def uniform(*axes: Alphabet) -> JointPmf:
    shape = tuple(a.size for a in axes)
    return JointPmf(tuple(axes), np.full(shape, 1.0 / float(np.prod(shape))))


def point_mass(axes: Sequence[Alphabet], symbol: Sequence[int]) -> JointPmf:
    mass = np.zeros(tuple(a.size for a in axes))
    mass[tuple(symbol)] = 1.0
    return JointPmf(tuple(axes), mass)


def bernoulli(name: str, p: float) -> JointPmf:
    if not 0.0 <= p <= 1.0:
        raise ArgumentError(f"Bernoulli parameter out of range: {p}")
    return JointPmf((Alphabet(name, 2),), np.array([1.0 - p, p]))


def deterministic(
    given_axes: Sequence[Alphabet],
    out_axes: Sequence[Alphabet],
    fn: Callable[..., int | tuple[int, ...]],
) -> ConditionalPmf:
    """Conditional pmf of a total map ``given symbols -> out symbols``."""
    given = tuple(given_axes)
    out = tuple(out_axes)
    gshape = tuple(a.size for a in given)
    oshape = tuple(a.size for a in out)
    mass = np.zeros(gshape + oshape)
    for cell in np.ndindex(*gshape):
        value = fn(*cell)
        target = (value,) if isinstance(value, (int, np.integer)) else tuple(value)
        if len(target) != len(out):
            raise ArgumentError(f"map returned {target} for {cell}, expected {len(out)} symbols")
        for sym, alpha in zip(target, out):
            if not 0 <= int(sym) < alpha.size:
                raise ArgumentError(f"map value {sym} outside alphabet {alpha.name!r}")
        mass[cell + tuple(int(s) for s in target)] = 1.0
    return ConditionalPmf(given, out, mass)


# ── Operations ──────────────────────────────────────────────────────────


def _labels(axes: str | Iterable[str]) -> tuple[str, ...]:
    return (axes,) if isinstance(axes, str) else tuple(axes)


def marginalize(p: JointPmf, keep: str | Iterable[str]) -> JointPmf:
    """Marginal law on ``keep``, in the order given."""
    labels = _labels(keep)
    if not labels:
        raise ArgumentError("marginalize needs at least one axis to keep")
    if len(set(labels)) != len(labels):
        raise ArgumentError(f"duplicate labels in {labels}")
    idx = [p.axis_index(label) for label in labels]
    drop = tuple(i for i in range(len(p.axes)) if i not in idx)
    mass = p.mass.sum(axis=drop) if drop else p.mass
    # remaining axes are in ascending original order; permute to the requested order
    remaining = sorted(idx)
    mass = np.transpose(mass, [remaining.index(i) for i in idx])
    return JointPmf(tuple(p.axes[i] for i in idx), mass / mass.sum())


def marginal_mass(p: JointPmf, keep: Iterable[str]) -> np.ndarray:
    """Like :func:`marginalize` but returns the raw array (no validation)."""
    labels = _labels(keep)
    idx = [p.axis_index(label) for label in labels]
    drop = tuple(i for i in range(len(p.axes)) if i not in idx)
    mass = p.mass.sum(axis=drop) if drop else p.mass
    remaining = sorted(idx)
    return np.transpose(mass, [remaining.index(i) for i in idx])


def condition(p: JointPmf, on: str, value: int) -> JointPmf:
    """Law of the remaining axes given ``on == value``."""
    axis = p.axis_index(on)
    if not 0 <= value < p.axes[axis].size:
        raise ArgumentError(f"symbol {value} outside alphabet {on!r}")
    if len(p.axes) == 1:
        raise ArgumentError("cannot condition a single-axis pmf on itself")
    sliced = np.take(p.mass, value, axis=axis)
    total = float(sliced.sum())
    if total <= 0.0:
        raise DomainError(f"event {on}={value} has zero probability", value=total)
    axes = p.axes[:axis] + p.axes[axis + 1 :]
    return JointPmf(axes, sliced / total)


def compose(prior: JointPmf, channel: ConditionalPmf) -> JointPmf:
    """Joint law of ``prior`` followed by ``channel`` (chain rule)."""
    for alpha in channel.given_axes:
        if alpha.name not in prior.labels:
            raise ArgumentError(f"channel input {alpha.name!r} missing from prior {prior.labels}")
        if prior.alphabet(alpha.name).size != alpha.size:
            raise ArgumentError(
                f"alphabet size mismatch on {alpha.name!r}: "
                f"{prior.alphabet(alpha.name).size} vs {alpha.size}"
            )
    clash = set(channel.out_labels) & set(prior.labels)
    if clash:
        raise ArgumentError(f"channel outputs already present in prior: {sorted(clash)}")

    letters = iter(string.ascii_letters)
    sub = {label: next(letters) for label in prior.labels + channel.out_labels}
    prior_sub = "".join(sub[label] for label in prior.labels)
    ch_sub = "".join(sub[label] for label in channel.given_labels + channel.out_labels)
    out_sub = prior_sub + "".join(sub[label] for label in channel.out_labels)
    mass = np.einsum(f"{prior_sub},{ch_sub}->{out_sub}", prior.mass, channel.mass)
    return JointPmf(prior.axes + channel.out_axes, mass / mass.sum())


def product(*pmfs: JointPmf) -> JointPmf:
    """Independent joint of several pmfs with disjoint labels."""
    if not pmfs:
        raise ArgumentError("product needs at least one pmf")
    axes: tuple[Alphabet, ...] = ()
    mass = np.ones(())
    for pmf in pmfs:
        axes = axes + pmf.axes
        mass = np.multiply.outer(mass, pmf.mass)
    return JointPmf(axes, mass)


def relabel(p: JointPmf, mapping: dict[str, str]) -> JointPmf:
    for label in mapping:
        p.axis_index(label)
    axes = tuple(Alphabet(mapping.get(a.name, a.name), a.size) for a in p.axes)
    return JointPmf(axes, p.mass)


def merge_axes(p: JointPmf, labels: Sequence[str], name: str) -> JointPmf:
    """Fuse ``labels`` into one product axis ``name`` appended last.

    The merged symbol is the big-endian mixed-radix index of the parts.
    """
    labels = tuple(labels)
    if len(labels) < 1:
        raise ArgumentError("merge_axes needs at least one label")
    idx = [p.axis_index(label) for label in labels]
    rest = [i for i in range(len(p.axes)) if i not in idx]
    if name in {p.axes[i].name for i in rest}:
        raise ArgumentError(f"merged label {name!r} collides with an existing axis")
    mass = np.transpose(p.mass, rest + idx)
    merged_size = int(np.prod([p.axes[i].size for i in idx]))
    mass = mass.reshape(tuple(p.axes[i].size for i in rest) + (merged_size,))
    return JointPmf(tuple(p.axes[i] for i in rest) + (Alphabet(name, merged_size),), mass)


def dumps(p: JointPmf | ConditionalPmf) -> str:
    return json.dumps(p.to_json())
