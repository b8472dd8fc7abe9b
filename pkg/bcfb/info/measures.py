from __future__ import annotations

import logging
import math
from collections.abc import Iterable

import numpy as np
from scipy.special import xlogy

from bcfb.config.defaults import setting
from bcfb.errors import ArgumentError
from bcfb.info.pmf import JointPmf, marginal_mass

log = logging.getLogger(__name__)


def num_tol() -> float:
    """Active ``numerics.tau_num``: slack for entropy and rate comparisons."""
    return float(setting("numerics", "tau_num"))


_LN2 = math.log(2.0)


def _group(axes: str | Iterable[str]) -> tuple[str, ...]:
    return (axes,) if isinstance(axes, str) else tuple(axes)


def entropy_of(mass: np.ndarray) -> float:
    """Shannon entropy in bits of a raw mass array (0 log 0 = 0)."""
    h = -float(np.sum(xlogy(mass, mass))) / _LN2
    return max(h, 0.0)


def entropy(p: JointPmf, axes: str | Iterable[str]) -> float:
    """Joint entropy in bits of the marginal on ``axes``."""
    labels = _group(axes)
    if not labels:
        raise ArgumentError("entropy needs a nonempty axis set")
    return entropy_of(marginal_mass(p, labels))


def conditional_entropy(
    p: JointPmf, axes: str | Iterable[str], given: str | Iterable[str] = ()
) -> float:
    """H(A | C) = H(A, C) - H(C)."""
    a = _group(axes)
    c = _group(given)
    if set(a) & set(c):
        raise ArgumentError(f"groups overlap: {sorted(set(a) & set(c))}")
    h_c = entropy(p, c) if c else 0.0
    return max(entropy(p, a + c) - h_c, 0.0)


def mutual_information(
    p: JointPmf,
    group_a: str | Iterable[str],
    group_b: str | Iterable[str],
    group_c: str | Iterable[str] = (),
) -> float:
    """I(A; B | C) in bits, clamped at 0."""
    a, b, c = _group(group_a), _group(group_b), _group(group_c)
    if not a or not b:
        raise ArgumentError("mutual information needs nonempty A and B groups")
    seen: set[str] = set()
    for group in (a, b, c):
        overlap = seen & set(group)
        if overlap or len(set(group)) != len(group):
            raise ArgumentError(f"groups must be disjoint; repeated {sorted(overlap) or group}")
        seen |= set(group)
    for label in seen:
        p.axis_index(label)

    h_c = entropy(p, c) if c else 0.0
    value = entropy(p, a + c) + entropy(p, b + c) - entropy(p, a + b + c) - h_c
    if value < -num_tol():
        log.warning("I(%s;%s|%s) = %.3g below -tau_num; clamping", a, b, c, value)
    return max(value, 0.0)


def _check_probability(value: float, name: str) -> None:
    if not (0.0 <= value <= 1.0) or math.isnan(value):
        raise ArgumentError(f"{name} must lie in [0, 1], got {value}")


def binary_entropy(p: float) -> float:
    _check_probability(p, "p")
    if p in (0.0, 1.0):
        return 0.0
    return float(-(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p)))


def binary_convolution(p: float, q: float) -> float:
    """p * q = p(1-q) + q(1-p)."""
    _check_probability(p, "p")
    _check_probability(q, "q")
    return p * (1.0 - q) + q * (1.0 - p)
