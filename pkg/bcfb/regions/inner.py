"""Single-letter inner bounds for a concrete choice of auxiliaries.

Strict inequalities are stored as their closures and the epsilon slack
terms are zero.  ``min``/``max`` over receivers are evaluated to numbers
per scheme, never kept as disjunctions.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from bcfb.channels.base import FEEDBACK, INPUT, OUTPUT_1, OUTPUT_2, Dmbc
from bcfb.config.defaults import setting
from bcfb.errors import ArgumentError
from bcfb.info.measures import mutual_information
from bcfb.info.pmf import Alphabet, JointPmf, compose, point_mass, product
from bcfb.polytope.region import Orientation, RateRegion3
from bcfb.regions.schemes import (
    AUX_LABELS,
    AuxiliaryScheme,
    UpdateScheme,
    UpdateVariant,
    induced_joint,
)

log = logging.getLogger(__name__)

_Y = {1: OUTPUT_1, 2: OUTPUT_2}
_U = {1: "U1", 2: "U2"}
_V = {1: "V1", 2: "V2"}


def cap_factor() -> float:
    return float(setting("numerics", "cap_factor"))


def rate_cap(channel: Dmbc, factor: float | None = None) -> float:
    """Box bound on every rate: ``factor * max_i log2 |Yi|`` (at least ``factor``).

    The default factor is ``numerics.cap_factor``.
    """
    factor = cap_factor() if factor is None else factor
    bits = max(math.log2(a.size) for a in channel.outputs)
    return factor * max(bits, 1.0)


@dataclass(frozen=True, slots=True)
class MartonTerms:
    """Information terms of the no-feedback Marton bound."""

    common: tuple[float, float]  # I(U0; Yi)
    joint: tuple[float, float]  # I(U0, Ui; Yi)
    private: tuple[float, float]  # I(Ui; Yi | U0)
    cover: float  # I(U1; U2 | U0)

    @property
    def sum_bound(self) -> float:
        return self.private[0] + self.private[1] + min(self.common) - self.cover


def marton_terms(joint: JointPmf) -> MartonTerms:
    common = tuple(mutual_information(joint, "U0", _Y[i]) for i in (1, 2))
    full = tuple(mutual_information(joint, ("U0", _U[i]), _Y[i]) for i in (1, 2))
    private = tuple(mutual_information(joint, _U[i], _Y[i], "U0") for i in (1, 2))
    cover = mutual_information(joint, "U1", "U2", "U0")
    return MartonTerms(common, full, private, cover)  # type: ignore[arg-type]


def marton_region(aux: AuxiliaryScheme, channel: Dmbc) -> RateRegion3:
    """Marton's no-feedback region for one auxiliary choice (feedback ignored)."""
    t = marton_terms(induced_joint(aux, None, channel))
    rows = [
        ({"R0": 1.0}, min(t.common)),
        ({"R0": 1.0, "R1": 1.0}, t.joint[0]),
        ({"R0": 1.0, "R2": 1.0}, t.joint[1]),
        ({"R0": 1.0, "R1": 1.0, "R2": 1.0}, t.sum_bound),
    ]
    log.debug("marton_region: %s", t)
    return RateRegion3.from_rows(rows, rate_cap(channel), label="marton")


# ── Lossy Gray-Wyner with side information ──────────────────────────────


def _with_trivial_feedback(source: JointPmf) -> JointPmf:
    if FEEDBACK in source.labels:
        return source
    return product(source, point_mass((Alphabet(FEEDBACK, 1),), (0,)))


def lgw_inner(upd: UpdateScheme, source: JointPmf, variant: str = "inner") -> RateRegion3:
    """Cost region of the LGW-SI scheme describing ``X`` to two receivers.

    ``variant="inner"`` gives the two-sided bounds ``R_i >= I(X;Vi|V0,Yi)``
    and ``R0 + R_i >= I(X;V0,Vi|Yi)``; ``variant="star"`` replaces the
    pair bounds by ``R0 >= max_i I(X;V0|Yi)``.
    """
    if variant not in ("inner", "star"):
        raise ArgumentError(f"unknown LGW variant {variant!r}; use 'inner' or 'star'")
    if upd.variant is not UpdateVariant.STAR:
        raise ArgumentError("LGW source coding needs an update law conditioned on (X, YF)")
    for label in (INPUT, OUTPUT_1, OUTPUT_2):
        source.axis_index(label)
    source = _with_trivial_feedback(source)
    if source.alphabet(FEEDBACK).size != upd.law_v.given_axes[1].size:
        raise ArgumentError("update law feedback alphabet does not match the source")
    joint = compose(source, upd.law_v)
    private = [mutual_information(joint, INPUT, _V[i], ("V0", _Y[i])) for i in (1, 2)]
    rows: list[tuple[dict[str, float], float]] = [
        ({"R1": -1.0}, -private[0]),
        ({"R2": -1.0}, -private[1]),
    ]
    if variant == "inner":
        for i in (1, 2):
            pair = mutual_information(joint, INPUT, ("V0", _V[i]), _Y[i])
            rows.append(({"R0": -1.0, f"R{i}": -1.0}, -pair))
    else:
        common = max(mutual_information(joint, INPUT, "V0", _Y[i]) for i in (1, 2))
        rows.append(({"R0": -1.0}, -common))
    cap = cap_factor() * max(math.log2(source.alphabet(INPUT).size), 1.0)
    return RateRegion3.from_rows(rows, cap, Orientation.COST, label=f"lgw-{variant}")


# ── Feedback scheme ─────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class FeedbackTerms:
    """Constants of the feedback inner bound.

    ``aided`` are ``I(U0;Yi,Vi)``, ``joint`` are ``I(U0,Ui;Yi,Vi)``,
    ``private`` are ``I(Ui;Yi,Vi|U0)``.  ``update_private`` and
    ``update_common`` are the LGW-SI description costs of ``Vi`` and ``V0``.
    """

    aided: tuple[float, float]
    joint: tuple[float, float]
    private: tuple[float, float]
    cover: float
    update_private: tuple[float, float]
    update_common: tuple[float, float]

    @property
    def m(self) -> float:
        return min(self.aided)

    @property
    def s(self) -> float:
        return self.private[0] + self.private[1] + self.m - self.cover


def _aided_terms(joint: JointPmf) -> tuple[tuple, tuple, tuple, float]:
    aided = tuple(mutual_information(joint, "U0", (_Y[i], _V[i])) for i in (1, 2))
    full = tuple(mutual_information(joint, ("U0", _U[i]), (_Y[i], _V[i])) for i in (1, 2))
    private = tuple(mutual_information(joint, _U[i], (_Y[i], _V[i]), "U0") for i in (1, 2))
    cover = mutual_information(joint, "U1", "U2", "U0")
    return aided, full, private, cover


def feedback_terms(joint: JointPmf, variant: UpdateVariant) -> FeedbackTerms:
    aided, full, private, cover = _aided_terms(joint)
    side = (*AUX_LABELS, FEEDBACK) if variant is UpdateVariant.FULL else (INPUT, FEEDBACK)
    upd_private = tuple(mutual_information(joint, side, _V[i], ("V0", _Y[i])) for i in (1, 2))
    upd_common = tuple(mutual_information(joint, side, "V0", _Y[i]) for i in (1, 2))
    return FeedbackTerms(aided, full, private, cover, upd_private, upd_common)  # type: ignore[arg-type]


def feedback_rows(t: FeedbackTerms, variant: UpdateVariant) -> list[tuple[dict[str, float], float]]:
    a1, a2 = t.update_private
    if variant is UpdateVariant.STAR:
        big = max(t.update_common)
        return [
            ({"R0": 1.0}, t.m - big),
            ({"R0": 1.0, "R1": 1.0}, t.joint[0] - a1 - big),
            ({"R0": 1.0, "R2": 1.0}, t.joint[1] - a2 - big),
            ({"R0": 1.0, "R1": 1.0, "R2": 1.0}, t.s - a1 - a2 - big),
        ]
    c1, c2 = a1 + t.update_common[0], a2 + t.update_common[1]
    return [
        ({"R0": 1.0}, t.m),
        ({"R0": 1.0, "R1": 1.0}, t.joint[0] - c1),
        ({"R0": 1.0, "R2": 1.0}, t.joint[1] - c2),
        ({"R0": 1.0, "R1": 1.0, "R2": 1.0}, t.s - a1 - c2),
        ({"R0": 1.0, "R1": 1.0, "R2": 1.0}, t.s - c1 - a2),
        ({"R0": 2.0, "R1": 1.0, "R2": 1.0}, t.m + t.s - c1 - c2),
    ]


def feedback_inner(
    aux: AuxiliaryScheme,
    upd: UpdateScheme,
    channel: Dmbc,
    variant: UpdateVariant | str = UpdateVariant.FULL,
) -> RateRegion3:
    """Inner bound of the block-Markov feedback scheme for one auxiliary choice."""
    variant = UpdateVariant(variant)
    if upd.variant is not variant:
        raise ArgumentError(
            f"update scheme is {upd.variant.value!r} but the {variant.value!r} bound was requested"
        )
    t = feedback_terms(induced_joint(aux, upd, channel), variant)
    log.debug("feedback_inner(%s): %s", variant.value, t)
    return RateRegion3.from_rows(
        feedback_rows(t, variant), rate_cap(channel), label=f"feedback-{variant.value}"
    )
