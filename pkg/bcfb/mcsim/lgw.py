"""Random codes for lossy Gray-Wyner coding with side information.

``V0, V1, V2`` codebooks are drawn independently from their marginals,
each split into bins; the encoder sends the bin indices of a jointly
typical triple and receiver ``i`` resolves it from its side information.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from bcfb.config.defaults import get_memory_cap
from bcfb.errors import ArgumentError, ResourceError
from bcfb.info.pmf import JointPmf, marginal_mass
from bcfb.mcsim.marton import size_of
from bcfb.mcsim.typicality import check_scan, draw_iid, typical_mask

log = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class LgwSizes:
    """Bins ``k`` and codewords per bin ``l`` for ``V0, V1, V2``."""

    bins: tuple[int, int, int] = (1, 1, 1)
    per_bin: tuple[int, int, int] = (1, 1, 1)

    def __post_init__(self) -> None:
        if min(self.bins) < 1 or min(self.per_bin) < 1:
            raise ArgumentError("LGW codebook dimensions must be at least 1")

    def total(self, i: int) -> int:
        return self.bins[i] * self.per_bin[i]


@dataclass(frozen=True, slots=True)
class LgwRates:
    """Bin rates ``(R~0, R~1, R~2)`` and in-bin rates ``(R~'0, R~'1, R~'2)``."""

    bins: tuple[float, float, float] = (0.0, 0.0, 0.0)
    per_bin: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def sizes(self, n: int) -> LgwSizes:
        return LgwSizes(
            tuple(size_of(r, n) for r in self.bins),  # type: ignore[arg-type]
            tuple(size_of(r, n) for r in self.per_bin),  # type: ignore[arg-type]
        )

    def to_json(self) -> dict:
        return {"bins": list(self.bins), "per_bin": list(self.per_bin)}

    @classmethod
    def from_json(cls, data: Mapping) -> LgwRates:
        try:
            bins = tuple(float(v) for v in data.get("bins", (0.0, 0.0, 0.0)))
            per_bin = tuple(float(v) for v in data.get("per_bin", (0.0, 0.0, 0.0)))
        except (TypeError, ValueError) as exc:
            raise ArgumentError(f"malformed LGW rates: {exc}") from exc
        if len(bins) != 3 or len(per_bin) != 3:
            raise ArgumentError("LGW rates need three bin rates and three in-bin rates")
        return cls(bins, per_bin)  # type: ignore[arg-type]


@dataclass(frozen=True, slots=True, eq=False)
class LgwCode:
    """``books[i][k, l]`` is the ``l``-th ``Vi`` codeword of bin ``k``.

    ``side`` names the encoder's side-information axes in ``joint``.
    """

    joint: JointPmf
    side: tuple[str, ...]
    sizes: LgwSizes
    n: int
    books: tuple[np.ndarray, np.ndarray, np.ndarray] = field(repr=False)


def gen_lgw_code(
    joint: JointPmf,
    side: Sequence[str],
    sizes: LgwSizes,
    n: int,
    rng: np.random.Generator,
    memory_cap: int | None = None,
) -> LgwCode:
    memory_cap = get_memory_cap() if memory_cap is None else memory_cap
    symbols = n * sum(sizes.total(i) for i in range(3))
    if symbols > memory_cap:
        raise ResourceError("LGW codebook", float(symbols), memory_cap, knob="simulation.memory_cap")
    books = tuple(
        draw_iid(marginal_mass(joint, (f"V{i}",)), (sizes.bins[i], sizes.per_bin[i], n), rng)
        for i in range(3)
    )
    return LgwCode(joint, tuple(side), sizes, n, books)  # type: ignore[arg-type]


@dataclass(frozen=True, slots=True, eq=False)
class LgwEncoding:
    bins: tuple[int, int, int]
    chosen: tuple[int, int, int]
    fallback: bool
    v: tuple[np.ndarray, np.ndarray, np.ndarray] = field(repr=False)


def lgw_encode(
    code: LgwCode, side: Sequence[np.ndarray], eps: float, rng: np.random.Generator
) -> LgwEncoding:
    """Find ``(l0, l1, l2)`` with ``(side, V0, V1, V2)`` jointly typical at ``eps``.

    The caller passes ``eps/2``.  Every codeword is pruned against the
    side information alone, then pairs ``(V0, Vi)`` are pruned before
    the triple test.  An empty list falls back to random codewords.
    """
    flat = [code.books[i].reshape(-1, code.n) for i in range(3)]
    check_scan("LGW encoder (singles)", sum(len(f) for f in flat))
    keep = [
        np.flatnonzero(typical_mask((*side, flat[i]), marginal_mass(code.joint, (*code.side, f"V{i}")), eps))
        for i in range(3)
    ]
    pair_ok = []
    for i in (1, 2):
        check_scan("LGW encoder (pairs)", len(keep[0]) * len(keep[i]))
        grid = np.array(np.meshgrid(keep[0], keep[i], indexing="ij")).reshape(2, -1)
        law = marginal_mass(code.joint, (*code.side, "V0", f"V{i}"))
        ok = typical_mask((*side, flat[0][grid[0]], flat[i][grid[1]]), law, eps) if grid.size else []
        pair_ok.append({(int(a), int(b)) for a, b, good in zip(grid[0], grid[1], ok) if good})

    law = marginal_mass(code.joint, (*code.side, "V0", "V1", "V2"))
    by_v0: dict[int, list[int]] = defaultdict(list)
    for a, c in sorted(pair_ok[1]):
        by_v0[a].append(c)
    check_scan("LGW encoder (triples)", sum(len(by_v0[a]) for a, _ in pair_ok[0]))
    triples = [(a, b, c) for a, b in sorted(pair_ok[0]) for c in by_v0.get(a, ())]
    if triples:
        t = np.asarray(triples)
        ok = typical_mask((*side, flat[0][t[:, 0]], flat[1][t[:, 1]], flat[2][t[:, 2]]), law, eps)
        hits = np.flatnonzero(ok)
    else:
        hits = np.zeros(0, dtype=np.intp)
    if hits.size:
        chosen = tuple(int(v) for v in triples[int(hits[rng.integers(hits.size)])])
        fallback = False
    else:
        chosen = tuple(int(rng.integers(len(f))) for f in flat)
        fallback = True
    bins = tuple(chosen[i] // code.sizes.per_bin[i] for i in range(3))
    v = tuple(flat[i][chosen[i]] for i in range(3))
    return LgwEncoding(bins, chosen, fallback, v)  # type: ignore[arg-type]


@dataclass(frozen=True, slots=True, eq=False)
class LgwDecoding:
    v0: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False)
    unique: bool
    list_size: int


def lgw_decode(
    code: LgwCode,
    k0: int,
    ki: int,
    side: Mapping[str, np.ndarray],
    receiver: int,
    eps: float,
    rng: np.random.Generator,
) -> LgwDecoding:
    """Recover ``(V0, Vi)`` from bins ``(k0, ki)`` and receiver side information.

    Returns the unique jointly typical pair; zero or several candidates
    yield a uniformly random pair from the two bins.
    """
    if receiver not in (1, 2):
        raise ArgumentError(f"receiver must be 1 or 2, got {receiver}")
    labels = tuple(side)
    seqs = tuple(np.asarray(side[k]) for k in labels)
    bin0, bini = code.books[0][k0], code.books[receiver][ki]
    keep0 = np.flatnonzero(typical_mask((bin0, *seqs), marginal_mass(code.joint, ("V0", *labels)), eps))
    keepi = np.flatnonzero(
        typical_mask((bini, *seqs), marginal_mass(code.joint, (f"V{receiver}", *labels)), eps)
    )
    check_scan("LGW decoder", len(keep0) * len(keepi))
    grid = np.array(np.meshgrid(keep0, keepi, indexing="ij")).reshape(2, -1)
    law = marginal_mass(code.joint, ("V0", f"V{receiver}", *labels))
    if grid.size:
        hits = np.flatnonzero(typical_mask((bin0[grid[0]], bini[grid[1]], *seqs), law, eps))
    else:
        hits = np.zeros(0, dtype=np.intp)
    if hits.size == 1:
        a, b = int(grid[0, hits[0]]), int(grid[1, hits[0]])
    else:
        a, b = int(rng.integers(len(bin0))), int(rng.integers(len(bini)))
    return LgwDecoding(bin0[a], bini[b], hits.size == 1, int(hits.size))
