from __future__ import annotations

import math


class BcfbError(Exception):
    """Base class for all bcfb failures."""


class ArgumentError(BcfbError, ValueError):
    """Invalid argument: unknown axis, overlapping groups, bad parameters."""


class DomainError(BcfbError, ArithmeticError):
    """Mathematically undefined request (zero-mass conditioning, unbounded region)."""

    def __init__(self, message: str, value: float | None = None) -> None:
        super().__init__(message)
        self.value = value


class ResourceError(BcfbError, RuntimeError):
    """A scan, codebook or search would exceed its configured cap.

    ``knob`` names the setting that raises the cap.
    """

    def __init__(
        self,
        what: str,
        required: float,
        cap: int,
        knob: str = "BCFB_RESOURCE_CAP or simulation.resource_cap",
    ) -> None:
        self.required = required
        self.cap = cap
        self.knob = knob
        # Sizes are 2^(n * rate), so the excess is reported in bits.
        excess = math.log2(max(required, 1.0)) - math.log2(max(cap, 1))
        super().__init__(
            f"{what} needs {required:.4g} but the cap is {cap}; "
            f"reduce n*rate by at least {max(excess, 0.0):.3f} bits "
            f"or raise {knob}"
        )
