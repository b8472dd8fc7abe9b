"""Random Marton codes: superposition over a common codebook plus binning.

Message indices are mixed-radix: the common codeword index is
``(j0, j1c, j2c)`` and receiver ``i`` owns ``(j_ic, j_ip)``.  Codebook
sizes are the floors ``floor(2**(n * rate))`` of the configured rates.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, fields

import numpy as np

from bcfb.config.defaults import get_memory_cap
from bcfb.errors import ArgumentError, ResourceError
from bcfb.info.pmf import JointPmf, marginal_mass
from bcfb.mcsim.typicality import check_scan, draw_conditional, draw_iid, typical_mask
from bcfb.regions.schemes import AuxiliaryScheme

log = logging.getLogger(__name__)


def conditional_table(joint: JointPmf, given: str, out: str) -> np.ndarray:
    """``P(out | given)`` as a ``(|given|, |out|)`` array; zero-mass rows become uniform."""
    mass = marginal_mass(joint, (given, out))
    total = mass.sum(axis=1, keepdims=True)
    safe = np.where(total > 0.0, total, 1.0)
    return np.where(total > 0.0, mass / safe, 1.0 / mass.shape[1])


def size_of(rate: float, n: int) -> int:
    if rate < 0.0 or not math.isfinite(rate):
        raise ArgumentError(f"rates must be finite and nonnegative, got {rate}")
    return max(int(math.floor(2.0 ** (n * rate) + 1e-9)), 1)


@dataclass(frozen=True, slots=True)
class MartonSizes:
    """Codebook dimensions: message indices ``j0, j1c, j1p, j2c, j2p`` and bins ``b1, b2``."""

    j0: int = 1
    j1c: int = 1
    j1p: int = 1
    j2c: int = 1
    j2p: int = 1
    b1: int = 1
    b2: int = 1

    def __post_init__(self) -> None:
        for name in ("j0", "j1c", "j1p", "j2c", "j2p", "b1", "b2"):
            if getattr(self, name) < 1:
                raise ArgumentError(f"codebook dimension {name} must be at least 1")

    @property
    def common(self) -> int:
        return self.j0 * self.j1c * self.j2c

    def private(self, receiver: int) -> int:
        return self.j1p if receiver == 1 else self.j2p

    def bins(self, receiver: int) -> int:
        return self.b1 if receiver == 1 else self.b2

    def common_part(self, receiver: int) -> int:
        return self.j1c if receiver == 1 else self.j2c


@dataclass(frozen=True, slots=True)
class MartonRates:
    """Rates ``(R0, R1p, R1c, R2p, R2c, R'1, R'2)`` in bits per channel use."""

    r0: float = 0.0
    r1p: float = 0.0
    r1c: float = 0.0
    r2p: float = 0.0
    r2c: float = 0.0
    r1b: float = 0.0
    r2b: float = 0.0

    def sizes(self, n: int) -> MartonSizes:
        return MartonSizes(
            size_of(self.r0, n),
            size_of(self.r1c, n),
            size_of(self.r1p, n),
            size_of(self.r2c, n),
            size_of(self.r2p, n),
            size_of(self.r1b, n),
            size_of(self.r2b, n),
        )

    @property
    def message_rates(self) -> tuple[float, float, float]:
        return self.r0, self.r1p + self.r1c, self.r2p + self.r2c

    @classmethod
    def from_json(cls, data: Mapping[str, float]) -> MartonRates:
        known = {"r0", "r1p", "r1c", "r2p", "r2c", "r1b", "r2b"}
        unknown = set(data) - known
        if unknown:
            raise ArgumentError(f"unknown Marton rate keys: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in data.items()})

    def to_json(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True, slots=True)
class MartonMessage:
    j0: int = 0
    j1c: int = 0
    j1p: int = 0
    j2c: int = 0
    j2p: int = 0

    def receiver_view(self, receiver: int) -> tuple[int, int, int]:
        """What receiver ``i`` must recover: ``(j0, j_ic, j_ip)``."""
        if receiver == 1:
            return self.j0, self.j1c, self.j1p
        return self.j0, self.j2c, self.j2p


def random_message(sizes: MartonSizes, rng: np.random.Generator) -> MartonMessage:
    j = rng.integers(0, [sizes.j0, sizes.j1c, sizes.j1p, sizes.j2c, sizes.j2p])
    return MartonMessage(*(int(v) for v in j))


@dataclass(frozen=True, slots=True, eq=False)
class MartonCode:
    """``c0[m_c]`` are U0 codewords; ``c_i[m_c, j_ip, l]`` the Ui codewords of bin ``j_ip``.

    ``joint`` is the law the scheme was designed for; it must contain the
    auxiliaries and every receiver-side axis a decoder will be handed.
    """

    aux: AuxiliaryScheme
    joint: JointPmf
    sizes: MartonSizes
    n: int
    c0: np.ndarray = field(repr=False)
    c1: np.ndarray = field(repr=False)
    c2: np.ndarray = field(repr=False)

    def common_index(self, msg: MartonMessage) -> int:
        s = self.sizes
        return int(np.ravel_multi_index((msg.j0, msg.j1c, msg.j2c), (s.j0, s.j1c, s.j2c)))

    def split_common(self, mc: int) -> tuple[int, int, int]:
        s = self.sizes
        j0, j1c, j2c = np.unravel_index(mc, (s.j0, s.j1c, s.j2c))
        return int(j0), int(j1c), int(j2c)

    def codebook(self, receiver: int) -> np.ndarray:
        return self.c1 if receiver == 1 else self.c2


def codebook_symbols(sizes: MartonSizes, n: int) -> int:
    return n * sizes.common * (1 + sizes.j1p * sizes.b1 + sizes.j2p * sizes.b2)


def gen_marton_code(
    aux: AuxiliaryScheme,
    joint: JointPmf,
    sizes: MartonSizes,
    n: int,
    rng: np.random.Generator,
    memory_cap: int | None = None,
) -> MartonCode:
    """Draw ``c0`` i.i.d. from ``P(U0)`` and each ``c_i`` entry from ``P(Ui | U0)`` of its anchor."""
    memory_cap = get_memory_cap() if memory_cap is None else memory_cap
    symbols = codebook_symbols(sizes, n)
    if symbols > memory_cap:
        raise ResourceError("Marton codebook", float(symbols), memory_cap, knob="simulation.memory_cap")
    c0 = draw_iid(marginal_mass(joint, ("U0",)), (sizes.common, n), rng)
    books = []
    for i, b in ((1, sizes.b1), (2, sizes.b2)):
        cond = conditional_table(joint, "U0", f"U{i}")
        draw = draw_conditional(c0, cond, rng, extra=(sizes.private(i), b))
        # (j_ip, l, m_c, n) -> (m_c, j_ip, l, n)
        books.append(np.ascontiguousarray(np.moveaxis(draw, 2, 0)))
    log.debug("Marton code n=%d sizes=%s (%d symbols)", n, sizes, symbols)
    return MartonCode(aux, joint, sizes, n, c0, books[0], books[1])


# ── Encoding ────────────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True, eq=False)
class MartonEncoding:
    x: np.ndarray = field(repr=False)
    u: tuple[np.ndarray, np.ndarray, np.ndarray] = field(repr=False)
    chosen: tuple[int, int]
    fallback: bool
    list_size: int


def marton_encode(
    code: MartonCode, msg: MartonMessage, eps: float, rng: np.random.Generator
) -> MartonEncoding:
    """Pick a jointly typical bin pair at ``eps`` (the caller passes ``eps/32``).

    Rows of each bin are first pruned against ``u0`` with the pair
    marginals; surviving pairs are tested against ``P(U0, U1, U2)``.
    An empty list falls back to a uniformly random pair.
    """
    mc = code.common_index(msg)
    u0 = code.c0[mc]
    bin1, bin2 = code.c1[mc, msg.j1p], code.c2[mc, msg.j2p]
    keep1 = np.flatnonzero(typical_mask((u0, bin1), marginal_mass(code.joint, ("U0", "U1")), eps))
    keep2 = np.flatnonzero(typical_mask((u0, bin2), marginal_mass(code.joint, ("U0", "U2")), eps))
    check_scan("Marton encoder", len(keep1) * len(keep2))
    pairs = np.array(np.meshgrid(keep1, keep2, indexing="ij")).reshape(2, -1)
    law = marginal_mass(code.joint, ("U0", "U1", "U2"))
    ok = typical_mask((u0, bin1[pairs[0]], bin2[pairs[1]]), law, eps) if pairs.shape[1] else np.zeros(0, bool)
    hits = np.flatnonzero(ok)
    if hits.size:
        pick = int(hits[rng.integers(hits.size)])
        l1, l2 = int(pairs[0, pick]), int(pairs[1, pick])
        fallback = False
    else:
        l1, l2 = int(rng.integers(code.sizes.b1)), int(rng.integers(code.sizes.b2))
        fallback = True
    u1, u2 = bin1[l1], bin2[l2]
    x = code.aux.f_table[u0, u1, u2]
    return MartonEncoding(x, (u0, u1, u2), (l1, l2), fallback, int(hits.size))


# ── Decoding ────────────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class MartonDecoding:
    """Decoded ``(j0, j_ic, j_ip)`` for one receiver."""

    j0: int
    jc: int
    jp: int
    list_size: int

    @property
    def message(self) -> tuple[int, int, int]:
        return self.j0, self.jc, self.jp


def marton_decode(
    code: MartonCode,
    outputs: Mapping[str, np.ndarray],
    receiver: int,
    eps: float,
    rng: np.random.Generator,
) -> MartonDecoding:
    """List decoder of receiver ``i``.

    ``outputs`` maps joint-law labels (``Y1`` and, under feedback, the
    decoded ``V1``) to their sequences.  Common codewords are pruned
    against ``P(U0, outputs)`` before the bins of survivors are scanned
    against ``P(U0, Ui, outputs)``.  An empty list yields a uniform guess.
    """
    if receiver not in (1, 2):
        raise ArgumentError(f"receiver must be 1 or 2, got {receiver}")
    labels = tuple(outputs)
    seqs = tuple(np.asarray(outputs[k]) for k in labels)
    s = code.sizes
    np_, nb = s.private(receiver), s.bins(receiver)
    book = code.codebook(receiver)

    check_scan("Marton decoder (common)", s.common)
    common_ok = np.flatnonzero(
        typical_mask((code.c0, *seqs), marginal_mass(code.joint, ("U0", *labels)), eps)
    )
    check_scan("Marton decoder", len(common_ok) * np_ * nb)
    law = marginal_mass(code.joint, ("U0", f"U{receiver}", *labels))
    hits: list[tuple[int, int]] = []
    for mc in common_ok:
        rows = book[mc].reshape(np_ * nb, code.n)
        ok = np.flatnonzero(typical_mask((code.c0[mc], rows, *seqs), law, eps))
        hits.extend((int(mc), int(r) // nb) for r in ok)
    if hits:
        mc, jp = hits[int(rng.integers(len(hits)))]
    else:
        mc, jp = int(rng.integers(s.common)), int(rng.integers(np_))
    j0, j1c, j2c = code.split_common(mc)
    return MartonDecoding(j0, j1c if receiver == 1 else j2c, jp, len(hits))


def decode_both(
    code: MartonCode,
    outputs: Sequence[Mapping[str, np.ndarray]],
    eps: float,
    rng: np.random.Generator,
) -> tuple[MartonDecoding, MartonDecoding]:
    return (
        marton_decode(code, outputs[0], 1, eps, rng),
        marton_decode(code, outputs[1], 2, eps, rng),
    )


def message_errors(msg: MartonMessage, decoded: Sequence[MartonDecoding]) -> tuple[bool, bool]:
    """Per-receiver error: ``(M0, Mi)`` differs from receiver ``i``'s estimate."""
    return tuple(msg.receiver_view(i + 1) != d.message for i, d in enumerate(decoded))  # type: ignore[return-value]
