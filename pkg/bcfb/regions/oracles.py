"""Blahut-Arimoto capacity oracle and single-letter cut-set bounds."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import rel_entr

from bcfb.channels.base import Dmbc, marginal_channel, output_channel
from bcfb.errors import ArgumentError
from bcfb.info.pmf import ConditionalPmf

log = logging.getLogger(__name__)

_LN2 = math.log(2.0)


@dataclass(frozen=True, slots=True)
class CapacityResult:
    """``upper`` is ``max_x D(W(.|x) || q)`` at the last iterate, always >= capacity."""

    lower: float
    upper: float
    input_law: np.ndarray = field(repr=False)
    iterations: int

    @property
    def capacity(self) -> float:
        return self.upper


def _as_matrix(law: ConditionalPmf | np.ndarray) -> np.ndarray:
    if isinstance(law, ConditionalPmf):
        n_in = int(np.prod([a.size for a in law.given_axes]))
        return np.asarray(law.mass).reshape(n_in, -1)
    w = np.asarray(law, dtype=float)
    if w.ndim != 2:
        raise ArgumentError(f"transition matrix must be 2-D, got shape {w.shape}")
    if np.any(np.abs(w.sum(axis=1) - 1.0) > 1e-9):
        raise ArgumentError("transition matrix rows must sum to 1")
    return w


def channel_capacity(
    law: ConditionalPmf | np.ndarray, tol: float = 1e-10, max_iter: int = 20000
) -> CapacityResult:
    """Capacity in bits of a single-user channel ``W[x, y]``.

    Iterates ``r(x) <- r(x) exp(D(W(.|x) || q))`` until the standard
    lower and upper bounds meet within ``tol``.
    """
    w = _as_matrix(law)
    m = w.shape[0]
    r = np.full(m, 1.0 / m)
    lower = upper = 0.0
    it = 0
    for it in range(1, max_iter + 1):
        q = r @ w
        d = np.sum(rel_entr(w, q[None, :]), axis=1)  # nats
        lower = math.log(float(np.dot(r, np.exp(d)))) / _LN2
        upper = float(d.max()) / _LN2
        if upper - lower < tol:
            break
        r = r * np.exp(d)
        r /= r.sum()
    else:
        log.warning("Blahut-Arimoto stopped after %d iterations, gap %.3g bits", max_iter, upper - lower)
    return CapacityResult(max(lower, 0.0), max(upper, 0.0), r, it)


@dataclass(frozen=True, slots=True)
class CutsetBounds:
    """``max I(X;Y1)``, ``max I(X;Y2)`` and ``max I(X;Y1,Y2)`` in bits."""

    receiver_1: float
    receiver_2: float
    sum_rate: float


def cutset_bounds(channel: Dmbc) -> CutsetBounds:
    c1 = channel_capacity(marginal_channel(channel, 1)).capacity
    c2 = channel_capacity(marginal_channel(channel, 2)).capacity
    both = channel_capacity(output_channel(channel)).capacity
    log.debug("cut-set bounds for %s: %.6f %.6f %.6f", channel.name, c1, c2, both)
    return CutsetBounds(c1, c2, both)
