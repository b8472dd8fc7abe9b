"""Monte Carlo checks of the covering and packing lemmas.

When the codebook fits under the resource cap every trial draws it and
scans it.  Beyond the cap the per-codeword typicality probability is
computed exactly from the anchor's type (a box probability of a
multinomial, evaluated as a chain of binomials) and the trial's event is
drawn from it; the three-codebook packing event uses the exact expected
number of typical triples with a Poisson existence law.
"""

from __future__ import annotations

import functools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.stats import binom

from bcfb.config.defaults import get_memory_cap, get_resource_cap
from bcfb.errors import ArgumentError
from bcfb.info.measures import mutual_information
from bcfb.info.pmf import Alphabet, JointPmf, marginal_mass
from bcfb.mcsim.marton import size_of
from bcfb.mcsim.typicality import count_bounds, draw_iid, typical_mask

log = logging.getLogger(__name__)

LEMMA_KINDS: tuple[str, ...] = ("covering", "packing", "mv_packing")


@functools.lru_cache(maxsize=4096)
def box_probability(
    total: int, probs: tuple[float, ...], lo: tuple[int, ...], hi: tuple[int, ...]
) -> float:
    """``Pr(lo <= N <= hi)`` cellwise for ``N ~ Multinomial(total, probs)``."""
    if sum(lo) > total or sum(hi) < total:
        return 0.0
    state = np.zeros(total + 1)
    state[total] = 1.0
    rest = float(sum(probs))
    for k in range(len(probs) - 1):
        p = min(probs[k] / rest, 1.0) if rest > 0.0 else 0.0
        rest -= probs[k]
        nxt = np.zeros_like(state)
        for c in range(lo[k], min(hi[k], total) + 1):
            r = np.arange(c, total + 1)
            nxt[: total + 1 - c] += state[c:] * binom.pmf(c, r, p)
        state = nxt
    return float(state[lo[-1] : hi[-1] + 1].sum()) if lo[-1] <= total else 0.0


def conditional_hit_probability(anchor: np.ndarray, law: JointPmf, eps: float) -> float:
    """Probability that one ``Y^n ~ P_Y`` i.i.d. is jointly typical with ``anchor``.

    ``law`` is over ``(X, Y)``; positions are grouped by anchor symbol and
    each group's output counts must fall in the typical window.
    """
    mass = np.asarray(law.mass)
    n = len(anchor)
    p_y = tuple(float(v) for v in mass.sum(axis=0))
    lo, hi = count_bounds(mass, n, eps)
    counts = np.bincount(anchor, minlength=mass.shape[0])
    q = 1.0
    for a, n_a in enumerate(counts):
        q *= box_probability(int(n_a), p_y, tuple(int(v) for v in lo[a]), tuple(int(v) for v in hi[a]))
        if q == 0.0:
            break
    return q


def triple_hit_probability(law: JointPmf, n: int, eps: float) -> float:
    """Probability that independent ``U1^n, U2^n, U3^n`` drawn from the marginals are jointly typical."""
    mass = np.asarray(law.mass)
    margins = [mass.sum(axis=tuple(j for j in range(3) if j != i)) for i in range(3)]
    product = np.einsum("i,j,k->ijk", *margins).ravel()
    lo, hi = count_bounds(mass.ravel(), n, eps)
    return box_probability(
        n, tuple(float(v) for v in product), tuple(int(v) for v in lo), tuple(int(v) for v in hi)
    )


def lemma_threshold(kind: str, law: JointPmf) -> float:
    """Rate threshold of the lemma: ``I(X;Y)`` or ``I(U1;U2) + I(U3;U1,U2)``."""
    a = law.labels
    if kind in ("covering", "packing"):
        return mutual_information(law, a[0], a[1])
    if kind == "mv_packing":
        return mutual_information(law, a[0], a[1]) + mutual_information(law, a[2], (a[0], a[1]))
    raise ArgumentError(f"unknown lemma kind {kind!r}; use one of {LEMMA_KINDS}")


@dataclass(frozen=True, slots=True)
class LemmaPoint:
    n: int
    trials: int
    events: int
    method: str

    @property
    def frequency(self) -> float:
        return self.events / self.trials if self.trials else math.nan


def _pair_trial(
    kind: str, law: JointPmf, rate: float, n: int, eps: float, cap: int, rng: np.random.Generator
) -> tuple[bool, str]:
    mass = np.asarray(law.mass)
    x = draw_iid(mass.sum(axis=1), (n,), rng)
    m = size_of(rate, n)
    if m <= cap and m * n <= get_memory_cap():
        book = draw_iid(mass.sum(axis=0), (m, n), rng)
        hit = bool(typical_mask((x, book), law, eps).any())
        method = "scan"
    else:
        q = conditional_hit_probability(x, law, eps)
        miss = math.exp(m * math.log1p(-q)) if q < 1.0 else 0.0
        hit = bool(rng.random() >= miss)
        method = "exact"
    return (not hit if kind == "covering" else hit), method


def _triple_trial(
    law: JointPmf, rates: Sequence[float], n: int, eps: float, cap: int, rng: np.random.Generator
) -> tuple[bool, str]:
    sizes = [size_of(r, n) for r in rates]
    fits = (sum(sizes) + sizes[0] * sizes[1]) * n <= get_memory_cap()
    if math.prod(sizes) <= cap and fits:
        labels = law.labels
        books = [draw_iid(marginal_mass(law, (lab,)), (s, n), rng) for lab, s in zip(labels, sizes)]
        pair_law = marginal_mass(law, labels[:2])
        i, j = np.meshgrid(np.arange(sizes[0]), np.arange(sizes[1]), indexing="ij")
        i, j = i.ravel(), j.ravel()
        keep = typical_mask((books[0][i], books[1][j]), pair_law, eps)
        i, j = i[keep], j[keep]
        for a, b in zip(i, j):
            if typical_mask((books[0][a], books[1][b], books[2]), law, eps).any():
                return True, "scan"
        return False, "scan"
    lam = math.prod(sizes) * triple_hit_probability(law, n, eps)
    return bool(rng.random() < -math.expm1(-lam)), "poisson"


def lemma_experiment(
    kind: str,
    law: JointPmf,
    rates: Sequence[float],
    n_list: Sequence[int],
    trials: int,
    rng: np.random.Generator,
    eps: float,
    cap: int | None = None,
) -> list[LemmaPoint]:
    """Empirical frequency of the lemma's failure event at every blocklength.

    ``covering`` counts codebooks with no codeword typical with the
    anchor; ``packing`` counts codebooks with at least one; ``mv_packing``
    counts independent triples of codebooks holding a typical triple.
    """
    if kind not in LEMMA_KINDS:
        raise ArgumentError(f"unknown lemma kind {kind!r}; use one of {LEMMA_KINDS}")
    want_axes, want_rates = (3, 3) if kind == "mv_packing" else (2, 1)
    if len(law.axes) != want_axes or len(rates) != want_rates:
        raise ArgumentError(f"{kind} needs a {want_axes}-axis law and {want_rates} rate(s)")
    if trials < 1:
        raise ArgumentError(f"trials must be positive, got {trials}")
    cap = get_resource_cap() if cap is None else cap
    out = []
    for n in n_list:
        events = 0
        method = ""
        for _ in range(trials):
            if kind == "mv_packing":
                hit, method = _triple_trial(law, rates, n, eps, cap, rng)
            else:
                hit, method = _pair_trial(kind, law, rates[0], n, eps, cap, rng)
            events += int(hit)
        log.debug("%s n=%d: %d/%d events (%s)", kind, n, events, trials, method)
        out.append(LemmaPoint(int(n), trials, events, method))
    return out


# ── threshold suite ─────────────────────────────────────────────────────

SUITE_OFFSET = 0.2
SUITE_N: tuple[int, ...] = (50, 100, 200)
SUITE_TRIALS = 2000
# at 0.15 the i.i.d. anchor itself leaves the window ~4% of the time at n = 200
SUITE_EPS = 0.2


def _bits(*names: str) -> tuple[Alphabet, ...]:
    return tuple(Alphabet(name, 2) for name in names)


def threshold_suite(offset: float = SUITE_OFFSET) -> list[dict]:
    """Each lemma on a doubly symmetric binary law, ``offset`` bits on either side of its threshold.

    Entries carry ``side``: ``"good"`` where the lemma promises a vanishing
    failure event, ``"bad"`` across the threshold.  The multivariate rate
    is split evenly over its three codebooks.
    """
    pair = JointPmf(_bits("X", "Y"), np.array([[0.45, 0.05], [0.05, 0.45]]))
    flip = np.array([[0.9, 0.1], [0.1, 0.9]])
    triple = JointPmf(_bits("U1", "U2", "U3"), np.einsum("ij,ik->ijk", np.asarray(pair.mass), flip))
    suite = []
    for kind, law, good in (("covering", pair, 1.0), ("packing", pair, -1.0), ("mv_packing", triple, -1.0)):
        t = lemma_threshold(kind, law)
        k = 3 if kind == "mv_packing" else 1
        for side, sign in (("good", good), ("bad", -good)):
            suite.append({"kind": kind, "law": law, "rates": [(t + sign * offset) / k] * k, "side": side})
    return suite
