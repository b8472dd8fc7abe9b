"""Rate-split constraint systems and their Fourier-Motzkin projections.

Each scheme is first written over all of its internal rates (splits,
bin rates, update rates) with the information terms as constants; the
projection onto ``(R0, R1, R2)`` must reproduce the closed-form region.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, fields
from typing import Union

import numpy as np

from bcfb.errors import ArgumentError
from bcfb.info.measures import mutual_information
from bcfb.info.pmf import JointPmf
from bcfb.polytope.region import RATE_VARIABLES, Orientation, RateRegion3, region_equal
from bcfb.polytope.system import LinIneqSystem, SystemBuilder, geo_tol, project
from bcfb.regions.inner import FeedbackTerms, MartonTerms, feedback_rows, feedback_terms, marton_terms
from bcfb.regions.schemes import UpdateVariant

log = logging.getLogger(__name__)


class PresplitKind(str, enum.Enum):
    MARTON = "marton"
    LGW = "lgw"
    COMBINED = "combined"


@dataclass(frozen=True, slots=True)
class LgwTerms:
    """``g0 = I(X;V0)``, ``g_i = I(Vi;X,V0)``, ``h_i = I(V0;Yi)``, ``k_i = I(Vi;V0,Yi)``."""

    g0: float
    g: tuple[float, float]
    h: tuple[float, float]
    k: tuple[float, float]


Constants = Union[MartonTerms, LgwTerms, FeedbackTerms]

MARTON_VARIABLES = (*RATE_VARIABLES, "R1p", "R1c", "R2p", "R2c", "R1b", "R2b")
LGW_VARIABLES = (*RATE_VARIABLES, "R0b", "R1b", "R2b")
COMBINED_VARIABLES = (*RATE_VARIABLES, "Rt0", "Rt1", "Rt2")

_EXPECTED: dict[PresplitKind, type] = {
    PresplitKind.MARTON: MartonTerms,
    PresplitKind.LGW: LgwTerms,
    PresplitKind.COMBINED: FeedbackTerms,
}

_ORIENTATION: dict[PresplitKind, Orientation] = {
    PresplitKind.MARTON: Orientation.ACHIEVABLE,
    PresplitKind.LGW: Orientation.COST,
    PresplitKind.COMBINED: Orientation.ACHIEVABLE,
}


def _kind(kind: PresplitKind | str, constants: Constants) -> PresplitKind:
    try:
        kind = PresplitKind(kind)
    except ValueError:
        raise ArgumentError(f"unknown pre-split kind {kind!r}") from None
    if not isinstance(constants, _EXPECTED[kind]):
        raise ArgumentError(
            f"{kind.value} system needs {_EXPECTED[kind].__name__}, got {type(constants).__name__}"
        )
    return kind


def _marton_system(t: MartonTerms) -> LinIneqSystem:
    b = SystemBuilder(MARTON_VARIABLES).nonnegative()
    b.ge({"R1b": 1.0, "R2b": 1.0}, t.cover)
    for i in (1, 2):
        common = {"R0": 1.0, "R1c": 1.0, "R2c": 1.0}
        b.le(common, t.joint[i - 1])
        # index-consistent reading: receiver i's private split with its own bin rate
        b.le({f"R{i}p": 1.0, f"R{i}b": 1.0}, t.private[i - 1])
        b.le({**common, f"R{i}p": 1.0, f"R{i}b": 1.0}, t.joint[i - 1])
        b.eq({f"R{i}": 1.0, f"R{i}p": -1.0, f"R{i}c": -1.0}, 0.0)
    return b.build()


def _lgw_system(t: LgwTerms) -> LinIneqSystem:
    b = SystemBuilder(LGW_VARIABLES).nonnegative()
    b.ge({"R0b": 1.0, "R0": 1.0}, t.g0)
    for i in (1, 2):
        b.ge({f"R{i}b": 1.0, f"R{i}": 1.0}, t.g[i - 1])
        b.le({"R0b": 1.0, f"R{i}b": 1.0}, t.h[i - 1] + t.k[i - 1])
        b.le({"R0b": 1.0}, t.h[i - 1])
        b.le({f"R{i}b": 1.0}, t.k[i - 1])
    return b.build()


def _combined_system(t: FeedbackTerms) -> LinIneqSystem:
    """Marton constraints on ``R + Rt`` plus LGW-SI cost constraints on ``Rt``."""
    b = SystemBuilder(COMBINED_VARIABLES).nonnegative()
    everything = {name: 1.0 for name in COMBINED_VARIABLES}
    for i in (1, 2):
        b.le({"R0": 1.0, "Rt0": 1.0}, t.aided[i - 1])
        b.le({"R0": 1.0, "Rt0": 1.0, f"R{i}": 1.0, f"Rt{i}": 1.0}, t.joint[i - 1])
        b.le(everything, t.private[0] + t.private[1] + t.aided[i - 1] - t.cover)
        b.ge({f"Rt{i}": 1.0}, t.update_private[i - 1])
        b.ge({"Rt0": 1.0, f"Rt{i}": 1.0}, t.update_private[i - 1] + t.update_common[i - 1])
    return b.build()


def presplit_system(kind: PresplitKind | str, constants: Constants) -> LinIneqSystem:
    """Constraint system over all internal rates of the named scheme."""
    kind = _kind(kind, constants)
    if kind is PresplitKind.MARTON:
        return _marton_system(constants)  # type: ignore[arg-type]
    if kind is PresplitKind.LGW:
        return _lgw_system(constants)  # type: ignore[arg-type]
    return _combined_system(constants)  # type: ignore[arg-type]


def _cap(constants: Constants) -> float:
    values: list[float] = []
    for f in fields(constants):
        item = getattr(constants, f.name)
        values.extend(item if isinstance(item, tuple) else (item,))
    return 4.0 * (1.0 + max(abs(x) for x in values))


def eliminate_presplit(kind: PresplitKind | str, constants: Constants) -> RateRegion3:
    """Project the pre-split system onto ``(R0, R1, R2)``."""
    kind = _kind(kind, constants)
    sys = presplit_system(kind, constants)
    projected = project(sys, RATE_VARIABLES)
    log.debug("%s pre-split: %d rows -> %d rows", kind.value, sys.n_rows, projected.n_rows)
    return RateRegion3(projected, _cap(constants), _ORIENTATION[kind], label=f"{kind.value}-fm")


def marton_fm_region(t: MartonTerms, feasibility_row: bool = True, cap: float | None = None) -> RateRegion3:
    """Post-elimination Marton polytope.

    Rows ``R0+Ri <= I(U0,Ui;Yi)``, the two sum rows, and
    ``2R0+R1+R2 <= I(U0,U1;Y1)+I(U0,U2;Y2)-I(U1;U2|U0)``.  The exact
    projection also carries the constant row ``0 <= B1+B2-I(U1;U2|U0)``,
    which the printed form leaves out; ``feasibility_row=False`` drops it.
    """
    a1, a2 = t.joint
    b1, b2 = t.private
    rows: list[tuple[dict[str, float], float]] = [
        ({"R0": 1.0, "R1": 1.0}, a1),
        ({"R0": 1.0, "R2": 1.0}, a2),
        ({"R0": 1.0, "R1": 1.0, "R2": 1.0}, b1 + b2 + (a1 - b1) - t.cover),
        ({"R0": 1.0, "R1": 1.0, "R2": 1.0}, b1 + b2 + (a2 - b2) - t.cover),
        ({"R0": 2.0, "R1": 1.0, "R2": 1.0}, a1 + a2 - t.cover),
    ]
    if feasibility_row:
        rows.append(({}, b1 + b2 - t.cover))
    return RateRegion3.from_rows(rows, cap or _cap(t), label="marton-closed")


def closed_form_region(kind: PresplitKind | str, constants: Constants) -> RateRegion3:
    """Directly-built region the projection is compared against."""
    kind = _kind(kind, constants)
    cap = _cap(constants)
    if kind is PresplitKind.MARTON:
        return marton_fm_region(constants, cap=cap)  # type: ignore[arg-type]
    if kind is PresplitKind.LGW:
        t: LgwTerms = constants  # type: ignore[assignment]
        rows: list[tuple[dict[str, float], float]] = [({"R0": -1.0}, -(t.g0 - min(t.h)))]
        for i in (1, 2):
            rows.append(({f"R{i}": -1.0}, -(t.g[i - 1] - t.k[i - 1])))
            rows.append(
                ({"R0": -1.0, f"R{i}": -1.0}, -(t.g0 + t.g[i - 1] - t.h[i - 1] - t.k[i - 1]))
            )
        return RateRegion3.from_rows(rows, cap, Orientation.COST, label="lgw-closed")
    rows = feedback_rows(constants, UpdateVariant.FULL)  # type: ignore[arg-type]
    return RateRegion3.from_rows(rows, cap, label="combined-closed")


# ── Constants ───────────────────────────────────────────────────────────


def lgw_terms(joint: JointPmf) -> LgwTerms:
    """Constants of the LGW-SI system from a joint over ``(X, Y1, Y2, V0, V1, V2)``."""
    return LgwTerms(
        g0=mutual_information(joint, "X", "V0"),
        g=tuple(mutual_information(joint, f"V{i}", ("X", "V0")) for i in (1, 2)),  # type: ignore[arg-type]
        h=tuple(mutual_information(joint, "V0", f"Y{i}") for i in (1, 2)),  # type: ignore[arg-type]
        k=tuple(mutual_information(joint, f"V{i}", ("V0", f"Y{i}")) for i in (1, 2)),  # type: ignore[arg-type]
    )


def constants_from_joint(kind: PresplitKind | str, joint: JointPmf) -> Constants:
    kind = PresplitKind(kind)
    if kind is PresplitKind.MARTON:
        return marton_terms(joint)
    if kind is PresplitKind.LGW:
        return lgw_terms(joint)
    return feedback_terms(joint, UpdateVariant.FULL)


def random_constants(kind: PresplitKind | str, rng: np.random.Generator) -> Constants:
    """Random nonnegative constants with the chain-rule structure of real terms."""
    kind = PresplitKind(kind)

    def u(k: int | None = None) -> np.ndarray:
        return rng.uniform(0.0, 1.0, k)

    if kind is PresplitKind.MARTON:
        common, private = u(2), u(2)
        return MartonTerms(
            tuple(common), tuple(common + private), tuple(private), float(u())  # type: ignore[arg-type]
        )
    if kind is PresplitKind.LGW:
        return LgwTerms(float(u()), tuple(u(2)), tuple(u(2)), tuple(u(2)))  # type: ignore[arg-type]
    aided, private = u(2), u(2)
    return FeedbackTerms(
        tuple(aided),  # type: ignore[arg-type]
        tuple(aided + private),  # type: ignore[arg-type]
        tuple(private),  # type: ignore[arg-type]
        float(u()),
        tuple(0.5 * u(2)),  # type: ignore[arg-type]
        tuple(0.5 * u(2)),  # type: ignore[arg-type]
    )


@dataclass(frozen=True, slots=True)
class FmCheck:
    kind: PresplitKind
    passed: bool
    tol: float
    projected_rows: int
    closed_rows: int
    error: str = ""


def fm_check(kind: PresplitKind | str, constants: Constants, tol: float | None = None) -> FmCheck:
    """Project the pre-split system and compare with the closed form."""
    tol = geo_tol(tol)
    kind = _kind(kind, constants)
    projected = eliminate_presplit(kind, constants)
    closed = closed_form_region(kind, constants)
    passed = region_equal(projected, closed, tol)
    return FmCheck(
        kind,
        passed,
        tol,
        projected.system.n_rows,
        closed.system.n_rows,
        "" if passed else "projection differs from the closed form",
    )
