"""Sum-rate bounds for the noisy Blackwell channel."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import entr

from bcfb.channels.base import FeedbackConfig, FeedbackKind, output_channel
from bcfb.channels.blackwell import BlackwellParams, make_blackwell
from bcfb.config.defaults import setting
from bcfb.errors import ArgumentError
from bcfb.info.measures import num_tol
from bcfb.info.pmf import Alphabet, JointPmf
from bcfb.polytope.region import RateRegion3
from bcfb.regions.oracles import channel_capacity
from bcfb.regions.schemes import AUX_LABELS, AuxiliaryScheme, GridSpec, UpdateScheme, UpdateVariant

log = logging.getLogger(__name__)


def _hb(x: np.ndarray | float) -> np.ndarray:
    """Binary entropy in bits, elementwise."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    return (entr(x) + entr(1.0 - x)) / np.log(2.0)


def _scaled_hb(t: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``t * h(x / t)``, zero where ``t == 0``."""
    t = np.asarray(t, dtype=float)
    safe = np.where(t > 0.0, t, 1.0)
    return np.where(t > 0.0, t * _hb(np.asarray(x) / safe), 0.0)


def _star(a: np.ndarray | float, b: float) -> np.ndarray:
    return np.asarray(a) * (1.0 - b) + b * (1.0 - np.asarray(a))


@dataclass(frozen=True, slots=True)
class BlackwellRows:
    """Right-hand sides of the closed-form region (``R0``, ``R0+Ri``, sum)."""

    common: float
    pair: float
    total: float


def blackwell_rows(alpha: float, beta: float, p: float) -> BlackwellRows:
    _check_family(alpha, beta)
    common, pair, total = (float(v) for v in _rows_vec(np.array(alpha), np.array(beta), p))
    return BlackwellRows(common, pair, total)


def _rows_vec(alpha: np.ndarray, beta: np.ndarray, p: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    lead = _hb(_star((alpha + beta) / 2.0, p)) - _hb(p)
    common = lead - 0.5 * (_hb(alpha) + _hb(beta))
    total = lead + 0.5 * (_scaled_hb(1.0 - beta, alpha) + _scaled_hb(1.0 - alpha, beta))
    return common, lead, total


def blackwell_region_closed_form(alpha: float, beta: float, p: float) -> RateRegion3:
    r = blackwell_rows(alpha, beta, p)
    rows = [
        ({"R0": 1.0}, r.common),
        ({"R0": 1.0, "R1": 1.0}, r.pair),
        ({"R0": 1.0, "R2": 1.0}, r.pair),
        ({"R0": 1.0, "R1": 1.0, "R2": 1.0}, r.total),
    ]
    return RateRegion3.from_rows(rows, 2.0, label="blackwell-closed")


def _check_family(alpha: float, beta: float) -> None:
    if alpha < 0 or beta < 0 or alpha + beta > 1.0 + 1e-12:
        raise ArgumentError(f"need alpha, beta >= 0 and alpha + beta <= 1, got ({alpha}, {beta})")


def blackwell_scheme(
    alpha: float, beta: float, feedback: FeedbackConfig | None = None
) -> tuple[AuxiliaryScheme, UpdateScheme]:
    """The ``(alpha, beta)`` family with star-variant updates.

    Given ``U0 = 0`` the pair ``(U1, U2)`` takes ``00, 10, 11`` with
    probabilities ``(alpha, 1-alpha-beta, beta)``; ``U0 = 1`` swaps alpha
    and beta.  ``X = U1 + U2``, ``V1 = [X >= 1]``, ``V2 = [X == 2]`` and
    ``V0 = V1 xor (fed-back Y1)``.
    """
    _check_family(alpha, beta)
    fb = feedback or FeedbackConfig.noiseless()
    if fb.kind is FeedbackKind.NONE:
        raise ArgumentError("the Blackwell update scheme needs a feedback link")
    mid = max(1.0 - alpha - beta, 0.0)
    mass = np.zeros((2, 2, 2))
    mass[0, 0, 0], mass[0, 1, 0], mass[0, 1, 1] = alpha, mid, beta
    mass[1, 0, 0], mass[1, 1, 0], mass[1, 1, 1] = beta, mid, alpha
    mass /= mass.sum()
    law_u = JointPmf(tuple(Alphabet(label, 2) for label in AUX_LABELS), mass)
    aux = AuxiliaryScheme.from_map(law_u, lambda u0, u1, u2: u1 + u2, 3)

    def update(x: int, yf: int) -> tuple[int, int, int]:
        v1, v2 = int(x >= 1), int(x == 2)
        return v1 ^ (yf >> 1), v1, v2

    given = (Alphabet("X", 3), Alphabet("YF", 4))
    upd = UpdateScheme.from_map(given, (2, 2, 2), update, UpdateVariant.STAR)
    return aux, upd


# ── Bounds ──────────────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class BlackwellBounds:
    p: float
    fb_lower: float
    nofb_upper: float
    fb_cutset: float
    alpha: float
    beta: float


def default_grid() -> GridSpec:
    k = int(setting("search", "alpha_steps"))
    return GridSpec(("alpha", "beta"), (0.0, 0.0), (1.0, 1.0), (k, k))


def _best_on_grid(alphas: np.ndarray, betas: np.ndarray, p: float) -> tuple[float, float, float]:
    a, b = np.meshgrid(alphas, betas, indexing="ij")
    ok = (a >= 0) & (b >= 0) & (a + b <= 1.0 + 1e-12)
    common, _, total = _rows_vec(a, b, p)
    ok &= common >= -num_tol()
    if not np.any(ok):
        return -np.inf, 0.0, 0.0
    score = np.where(ok, total, -np.inf)
    i, j = np.unravel_index(int(np.argmax(score)), score.shape)
    return float(score[i, j]), float(a[i, j]), float(b[i, j])


def blackwell_lower(p: float, grid: GridSpec | None = None) -> tuple[float, float, float]:
    """Best sum rate of the family at ``R0 = 0`` subject to ``R0``-row >= 0.

    Coarse grid over the ``alpha + beta <= 1`` triangle followed by
    successively zoomed grids around the incumbent.
    """
    grid = grid or default_grid()
    alphas = np.clip(grid.axis("alpha"), 0.0, 1.0)
    betas = np.clip(grid.axis("beta"), 0.0, 1.0)
    value, a, b = _best_on_grid(alphas, betas, p)
    if not np.isfinite(value):
        return 0.0, 0.0, 0.0
    step = max(float(np.ptp(alphas)), float(np.ptp(betas))) / max(len(alphas) - 1, 1)
    for _ in range(int(setting("search", "refine_rounds"))):
        if step == 0.0:
            break
        k = int(setting("search", "refine_points"))
        local_a = np.clip(np.linspace(a - step, a + step, k), 0.0, 1.0)
        local_b = np.clip(np.linspace(b - step, b + step, k), 0.0, 1.0)
        cand, ca, cb = _best_on_grid(local_a, local_b, p)
        if cand > value:
            value, a, b = cand, ca, cb
        step *= 2.0 / (k - 1)
    return max(value, 0.0), a, b


def blackwell_bounds(p: float, grid: GridSpec | None = None) -> BlackwellBounds:
    """Feedback lower bound, no-feedback cut-set bound and feedback cut-set bound."""
    if not 0.0 <= p < 0.5:
        raise ArgumentError(f"Blackwell noise must satisfy 0 <= p < 0.5, got {p}")
    fb_lower, a, b = blackwell_lower(p, grid)
    none = FeedbackConfig.none()
    independent = make_blackwell(BlackwellParams(p, none, shared_noise=False))
    shared = make_blackwell(BlackwellParams(p, none))
    nofb = channel_capacity(output_channel(independent)).capacity
    cutset = channel_capacity(output_channel(shared)).capacity
    log.debug("blackwell p=%.4f: lower=%.6f nofb=%.6f cutset=%.6f", p, fb_lower, nofb, cutset)
    return BlackwellBounds(p, fb_lower, nofb, cutset, a, b)


def blackwell_sweep(
    ps: Sequence[float], grid: GridSpec | None = None, workers: int = 1
) -> list[BlackwellBounds]:
    """Bounds for every ``p``, in input order."""
    if workers <= 1:
        return [blackwell_bounds(p, grid) for p in ps]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda p: blackwell_bounds(p, grid), ps))


def blackwell_printed_cutset(p: float, alpha: float) -> tuple[np.ndarray, float]:
    """Entries of the four-point law printed for the no-feedback bound, and their total.

    The entries only form a distribution for special ``(alpha, p)``, e.g.
    ``alpha = 0.25, p = 0`` totals 2; the shipped no-feedback bound uses
    the capacity oracle instead.
    """
    q = 1.0 - p
    entries = np.array(
        [alpha * (p - q) ** 2 + p * q, q**2 + 2 * alpha * p, p**2 + 2 * alpha * q, alpha * (p - q) ** 2 + p * q]
    )
    return entries, float(entries.sum())

