"""Capacity regions and the feedback scheme for the generalized Dueck channel."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from bcfb.channels.base import FeedbackConfig, FeedbackKind
from bcfb.channels.dueck import (
    DueckParams,
    check_noise_law,
    dueck_condition_holds,
    make_dueck,
    pack_input,
    z_markov_chain_holds,
)
from bcfb.errors import ArgumentError, DomainError
from bcfb.info.measures import entropy, mutual_information, num_tol
from bcfb.info.pmf import Alphabet, JointPmf, uniform
from bcfb.polytope.region import RateRegion3, convex_hull_union, sum_rate_max
from bcfb.regions.inner import feedback_inner, rate_cap
from bcfb.regions.schemes import AUX_LABELS, AuxiliaryScheme, UpdateScheme, UpdateVariant

log = logging.getLogger(__name__)

# V0 = (Z0, Z1) or V0 = (Z0, Z2), recovered from the fed-back bits
V0_CHOICES: tuple[str, str] = ("z01", "z02")


def dueck_capacity(noise_law: JointPmf, which: str = "feedback") -> RateRegion3:
    """Capacity region at ``R0 = 0`` with or without noiseless feedback."""
    check_noise_law(noise_law)
    if which not in ("feedback", "nofeedback"):
        raise ArgumentError(f"which must be 'feedback' or 'nofeedback', got {which!r}")
    h01 = entropy(noise_law, ("Z0", "Z1"))
    h02 = entropy(noise_law, ("Z0", "Z2"))
    h012 = entropy(noise_law, ("Z0", "Z1", "Z2"))
    sum_bound = 3.0 - h012
    if which == "feedback":
        for name, h in (("H(Z0,Z1)", h01), ("H(Z0,Z2)", h02)):
            if h > 1.0 + num_tol():
                raise DomainError(
                    f"feedback capacity needs {name} <= 1 bit, got {h:.6f}", value=h
                )
    else:
        sum_bound -= mutual_information(noise_law, "Z1", "Z2", "Z0")
    rows = [
        ({"R0": 1.0}, 0.0),
        ({"R1": 1.0}, 2.0 - h01),
        ({"R2": 1.0}, 2.0 - h02),
        ({"R1": 1.0, "R2": 1.0}, sum_bound),
    ]
    return RateRegion3.from_rows(rows, 4.0, label=f"dueck-{which}")


def dueck_scheme(
    noise_law: JointPmf,
    feedback: FeedbackConfig | None = None,
    choice: str = "z01",
) -> tuple[AuxiliaryScheme, UpdateScheme]:
    """Auxiliaries of the Dueck achievability argument.

    ``U0, U1, U2`` i.i.d. fair bits drive ``X0, X1, X2``; ``V1 = (X0, X1)``,
    ``V2 = (X0, X2)`` and ``V0`` is the noise pair recovered by XOR-ing the
    fed-back bits with the sent ones.  Written as maps of
    ``(U0, U1, U2, YF)`` so the same scheme applies under noisy feedback.
    """
    check_noise_law(noise_law)
    if choice not in V0_CHOICES:
        raise ArgumentError(f"V0 choice must be one of {V0_CHOICES}, got {choice!r}")
    fb = feedback or FeedbackConfig.noiseless()
    if fb.kind is FeedbackKind.NONE:
        raise ArgumentError("the Dueck update scheme needs a feedback link")

    law_u = uniform(*(Alphabet(label, 2) for label in AUX_LABELS))
    aux = AuxiliaryScheme.from_map(law_u, lambda u0, u1, u2: pack_input(u1, u0, u2), 8)

    def update(u0: int, u1: int, u2: int, yf: int) -> tuple[int, int, int]:
        f11, f10, f22 = (yf >> 2) & 1, (yf >> 1) & 1, yf & 1
        second = (f11 ^ u1) if choice == "z01" else (f22 ^ u2)
        return 2 * (f10 ^ u0) + second, 2 * u0 + u1, 2 * u0 + u2

    given = (*law_u.axes, Alphabet("YF", 8))
    upd = UpdateScheme.from_map(given, (4, 4, 4), update, UpdateVariant.FULL)
    return aux, upd


def dueck_feedback_region(noise_law: JointPmf, feedback: FeedbackConfig | None = None) -> RateRegion3:
    """Hull of the feedback inner bound over both ``V0`` choices."""
    fb = feedback or FeedbackConfig.noiseless()
    channel = make_dueck(DueckParams(noise_law, fb))
    regions = []
    for choice in V0_CHOICES:
        aux, upd = dueck_scheme(noise_law, fb, choice)
        regions.append(feedback_inner(aux, upd, channel))
    hull = convex_hull_union(regions[0], regions[1])
    return RateRegion3(hull.system, rate_cap(channel), hull.orientation, label="dueck-feedback-inner")


@dataclass(frozen=True, slots=True)
class DueckComparison:
    fb_sum: float
    nofb_sum: float
    markov_chain: bool
    condition: bool
    scheme_sum: float

    @property
    def gain(self) -> bool:
        return self.fb_sum > self.nofb_sum + num_tol()


def compare_dueck(noise_law: JointPmf) -> DueckComparison:
    """Feedback vs no-feedback sum capacities plus the scheme's sum rate."""
    condition = dueck_condition_holds(noise_law)
    nofb = sum_rate_max(dueck_capacity(noise_law, "nofeedback")).value
    fb = sum_rate_max(dueck_capacity(noise_law, "feedback")).value if condition else float("nan")
    scheme = sum_rate_max(dueck_feedback_region(noise_law)).value
    return DueckComparison(fb, nofb, z_markov_chain_holds(noise_law), condition, scheme)


def sum_rate_continuity(noise_law: JointPmf, flips: Sequence[float]) -> list[float]:
    """Scheme sum rate at ``R0 = 0`` for noisy feedback with every flip probability ``q``."""
    out = []
    for q in flips:
        fb = FeedbackConfig.noisy(q, q, q) if q > 0 else FeedbackConfig.noiseless()
        out.append(sum_rate_max(dueck_feedback_region(noise_law, fb)).value)
        log.debug("continuity: q=%.3g sum=%.9f", q, out[-1])
    return out
