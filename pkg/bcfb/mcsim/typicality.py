"""Robust joint typicality of finite-alphabet sequences.

A tuple of sequences is eps-typical for ``P`` when every joint symbol
``s`` satisfies ``|pi(s) - P(s)| <= eps * P(s)``, so symbols of zero
mass must not occur at all.  Candidate scans are vectorized: one call
tests a whole batch of codewords against fixed sequences.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from bcfb.config.defaults import get_resource_cap
from bcfb.errors import ArgumentError, ResourceError
from bcfb.info.pmf import JointPmf

log = logging.getLogger(__name__)

# slack on the integer count bounds against rounding in n * P * (1 +- eps)
_COUNT_SLACK = 1e-9


@dataclass(frozen=True, slots=True)
class TypicalityParams:
    eps: float
    n: int

    def __post_init__(self) -> None:
        if not 0.0 < self.eps < 1.0:
            raise ArgumentError(f"typicality eps must lie in (0, 1), got {self.eps}")
        if self.n < 1:
            raise ArgumentError(f"blocklength must be positive, got {self.n}")

    @property
    def eps_marton_enc(self) -> float:
        return self.eps / 32.0

    @property
    def eps_lgw_enc(self) -> float:
        return self.eps / 2.0

    @property
    def eps_decoder(self) -> float:
        return self.eps


def count_bounds(mass: np.ndarray, n: int, eps: float) -> tuple[np.ndarray, np.ndarray]:
    """Integer count window ``[lo, hi]`` per joint symbol for blocklength ``n``."""
    m = np.asarray(mass, dtype=float)
    lo = np.ceil(n * m * (1.0 - eps) - _COUNT_SLACK)
    hi = np.floor(n * m * (1.0 + eps) + _COUNT_SLACK)
    lo = np.where(m > 0.0, np.maximum(lo, 0.0), 0.0)
    hi = np.where(m > 0.0, hi, 0.0)
    return lo.astype(np.int64), hi.astype(np.int64)


def _as_batch(seqs: Sequence[np.ndarray], shape: tuple[int, ...]) -> np.ndarray:
    arrays = [np.asarray(s) for s in seqs]
    if len(arrays) != len(shape):
        raise ArgumentError(f"got {len(arrays)} sequences for a law over {len(shape)} axes")
    lengths = {a.shape[-1] for a in arrays}
    if len(lengths) != 1:
        raise ArgumentError(f"sequence length mismatch: {sorted(lengths)}")
    try:
        return np.ravel_multi_index(tuple(np.broadcast_arrays(*arrays)), shape)
    except ValueError as exc:
        raise ArgumentError(f"sequence symbol outside its alphabet: {exc}") from exc


def joint_counts(seqs: Sequence[np.ndarray], shape: tuple[int, ...]) -> np.ndarray:
    """Joint symbol counts with a leading batch axis, shape ``(m, prod(shape))``.

    Each sequence is 1-D of length ``n`` or 2-D ``(m, n)``; 1-D sequences are
    shared by every row of the batch.
    """
    flat = np.atleast_2d(_as_batch(seqs, shape))
    m, cells = flat.shape[0], int(np.prod(shape))
    offset = (np.arange(m, dtype=np.int64) * cells)[:, None]
    return np.bincount((flat + offset).ravel(), minlength=m * cells).reshape(m, cells)


def typical_mask(seqs: Sequence[np.ndarray], law: JointPmf | np.ndarray, eps: float) -> np.ndarray:
    """Boolean array over the batch: which rows are jointly eps-typical."""
    mass = np.asarray(law.mass if isinstance(law, JointPmf) else law, dtype=float)
    n = np.asarray(seqs[0]).shape[-1]
    counts = joint_counts(seqs, mass.shape)
    lo, hi = count_bounds(mass.ravel(), n, eps)
    return np.all((counts >= lo) & (counts <= hi), axis=1)


def is_jointly_typical(seqs: Sequence[np.ndarray], law: JointPmf, eps: float) -> bool:
    """Whether the 1-D sequences, one per axis of ``law`` in axis order, are jointly typical."""
    if any(np.asarray(s).ndim != 1 for s in seqs):
        raise ArgumentError("is_jointly_typical expects one 1-D sequence per axis")
    return bool(typical_mask(seqs, law, eps)[0])


def check_scan(what: str, required: float, cap: int | None = None) -> None:
    """Raise :class:`ResourceError` when a scan would exceed the cap."""
    cap = get_resource_cap() if cap is None else cap
    if required > cap:
        raise ResourceError(what, float(required), cap)
    log.debug("%s: %d candidate evaluations", what, int(required))


def draw_iid(mass: np.ndarray, shape: tuple[int, ...], rng: np.random.Generator) -> np.ndarray:
    """I.i.d. symbols with law ``mass``."""
    p = np.asarray(mass, dtype=float).ravel()
    return rng.choice(p.size, size=shape, p=p / p.sum()).astype(np.intp)


def draw_conditional(
    given: np.ndarray, cond_mass: np.ndarray, rng: np.random.Generator, extra: tuple[int, ...] = ()
) -> np.ndarray:
    """Symbols drawn componentwise from ``cond_mass[given[j], :]``.

    ``given`` has shape ``(..., n)``; ``extra`` adds leading axes of
    independent draws on top of it (e.g. the codewords of one bin).
    """
    cdf = np.cumsum(np.asarray(cond_mass, dtype=float), axis=-1)
    cdf[:, -1] = 1.0
    rows = cdf[np.asarray(given)]
    u = rng.random((*extra, *np.shape(given)))
    return (u[..., None] > rows).sum(axis=-1).astype(np.intp)
