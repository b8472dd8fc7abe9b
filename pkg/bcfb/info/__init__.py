from __future__ import annotations

from bcfb.info.measures import (
    binary_convolution,
    binary_entropy,
    conditional_entropy,
    entropy,
    mutual_information,
)
from bcfb.info.pmf import (
    Alphabet,
    ConditionalPmf,
    JointPmf,
    bernoulli,
    compose,
    condition,
    deterministic,
    marginalize,
    merge_axes,
    point_mass,
    product,
    relabel,
    uniform,
)

__all__ = [
    "Alphabet",
    "ConditionalPmf",
    "JointPmf",
    "bernoulli",
    "binary_convolution",
    "binary_entropy",
    "compose",
    "condition",
    "conditional_entropy",
    "deterministic",
    "entropy",
    "marginalize",
    "merge_axes",
    "mutual_information",
    "point_mass",
    "product",
    "relabel",
    "uniform",
]
