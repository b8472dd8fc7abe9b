"""Grid search over small parametric families of auxiliary schemes."""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from bcfb.channels.base import Dmbc, FeedbackConfig
from bcfb.config.defaults import setting
from bcfb.errors import ArgumentError, ResourceError
from bcfb.info.measures import num_tol
from bcfb.info.pmf import Alphabet, JointPmf
from bcfb.polytope.region import RateRegion3, convex_hull_union, max_weighted, sum_rate_max
from bcfb.regions.blackwell import blackwell_scheme
from bcfb.regions.dueck import V0_CHOICES, dueck_scheme
from bcfb.regions.inner import feedback_inner
from bcfb.regions.schemes import (
    AUX_LABELS,
    AuxiliaryScheme,
    GridSpec,
    UpdateScheme,
    UpdateVariant,
    constant_update,
)

log = logging.getLogger(__name__)


FAMILIES: tuple[str, ...] = ("blackwell", "dueck", "simplex")
OBJECTIVES: tuple[str, ...] = ("sum_rate", "weighted")


@dataclass(frozen=True, slots=True)
class SearchTemplate:
    """What to search: a family, its grid and per-family inputs.

    ``grid`` drives the ``blackwell`` family (axes ``alpha``, ``beta``);
    ``noise_law`` is required by ``dueck``; ``sizes`` and ``resolution``
    describe the ``simplex`` family, whose laws are all points of the joint
    simplex with masses in multiples of ``1/resolution``.
    """

    family: str
    grid: GridSpec | None = None
    sizes: tuple[int, int, int] = (2, 2, 2)
    resolution: int = 4
    noise_law: JointPmf | None = None
    feedback: FeedbackConfig | None = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ArgumentError(f"unknown search family {self.family!r}; use one of {FAMILIES}")
        if any(s < 1 or s > 4 for s in self.sizes):
            raise ArgumentError(f"auxiliary alphabet sizes must lie in 1..4, got {self.sizes}")
        if self.family == "simplex" and max(self.sizes) > 3:
            raise ArgumentError("free-simplex search is limited to alphabet sizes <= 3")
        if self.resolution < 1:
            raise ArgumentError(f"simplex resolution must be positive, got {self.resolution}")


@dataclass(frozen=True, slots=True, eq=False)
class SearchResult:
    params: dict[str, float | str]
    aux: AuxiliaryScheme
    upd: UpdateScheme
    region: RateRegion3 = field(repr=False)
    value: float
    evaluated: int


_Candidate = tuple[dict[str, float | str], Callable[[], tuple[AuxiliaryScheme, UpdateScheme, RateRegion3]]]


# ── Families ────────────────────────────────────────────────────────────


def _blackwell_candidates(channel: Dmbc, template: SearchTemplate) -> list[_Candidate]:
    grid = template.grid or GridSpec(("alpha", "beta"), (0.0, 0.0), (1.0, 1.0), (21, 21))
    if set(grid.names) != {"alpha", "beta"}:
        raise ArgumentError(f"blackwell grid needs axes alpha and beta, got {grid.names}")
    fb = template.feedback or FeedbackConfig.noiseless()
    out: list[_Candidate] = []
    for point in grid.points():
        a, b = point["alpha"], point["beta"]
        if a + b > 1.0 + 1e-12:
            continue

        def build(a: float = a, b: float = b) -> tuple[AuxiliaryScheme, UpdateScheme, RateRegion3]:
            aux, upd = blackwell_scheme(a, b, fb)
            return aux, upd, feedback_inner(aux, upd, channel, UpdateVariant.STAR)

        out.append(({"alpha": a, "beta": b}, build))
    return out


def _dueck_candidates(channel: Dmbc, template: SearchTemplate) -> list[_Candidate]:
    if template.noise_law is None:
        raise ArgumentError("the dueck family needs the channel's noise law")
    noise, fb = template.noise_law, template.feedback or FeedbackConfig.noiseless()
    built: dict[str, tuple[AuxiliaryScheme, UpdateScheme, RateRegion3]] = {}

    def single(choice: str) -> tuple[AuxiliaryScheme, UpdateScheme, RateRegion3]:
        if choice not in built:
            aux, upd = dueck_scheme(noise, fb, choice)
            built[choice] = (aux, upd, feedback_inner(aux, upd, channel))
        return built[choice]

    def hull() -> tuple[AuxiliaryScheme, UpdateScheme, RateRegion3]:
        parts = [single(c) for c in V0_CHOICES]
        joined = convex_hull_union(parts[0][2], parts[1][2])
        region = RateRegion3(joined.system, parts[0][2].cap, joined.orientation, label="dueck-hull")
        return parts[0][0], parts[0][1], region

    out: list[_Candidate] = [({"choice": c}, lambda c=c: single(c)) for c in V0_CHOICES]
    out.append(({"choice": "hull"}, hull))
    return out


def _compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    """All nonnegative integer vectors of length ``parts`` summing to ``total``."""
    out = []
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        edges = (-1, *bars, total + parts - 1)
        out.append(tuple(edges[i + 1] - edges[i] - 1 for i in range(parts)))
    return out


def _simplex_candidates(channel: Dmbc, template: SearchTemplate) -> list[_Candidate]:
    sizes = template.sizes
    cells = math.prod(sizes)
    x_size = channel.input.size
    n_laws = math.comb(template.resolution + cells - 1, cells - 1)
    n_maps = x_size**cells
    limit = int(setting("search", "max_candidates"))
    if n_laws * n_maps > limit:
        raise ResourceError("simplex search", float(n_laws * n_maps), limit, knob="search.max_candidates")
    axes = tuple(Alphabet(label, s) for label, s in zip(AUX_LABELS, sizes))
    laws = [
        np.asarray(c, dtype=float).reshape(sizes) / template.resolution
        for c in _compositions(template.resolution, cells)
    ]
    maps = [np.asarray(m, dtype=np.intp).reshape(sizes) for m in itertools.product(range(x_size), repeat=cells)]
    out: list[_Candidate] = []
    for i, mass in enumerate(laws):
        for j, table in enumerate(maps):

            def build(
                mass: np.ndarray = mass, table: np.ndarray = table
            ) -> tuple[AuxiliaryScheme, UpdateScheme, RateRegion3]:
                aux = AuxiliaryScheme(JointPmf(axes, mass), table, x_size)
                upd = constant_update(aux, channel)
                return aux, upd, feedback_inner(aux, upd, channel)

            out.append(({"law_index": i, "map_index": j}, build))
    return out


_BUILDERS = {
    "blackwell": _blackwell_candidates,
    "dueck": _dueck_candidates,
    "simplex": _simplex_candidates,
}


# ── Search ──────────────────────────────────────────────────────────────


def _score(region: RateRegion3, objective: str, weights: Sequence[float] | None) -> float:
    if objective == "sum_rate":
        res = sum_rate_max(region)
    else:
        res = max_weighted(region, weights or (1.0, 1.0, 1.0))
    return res.value if res.feasible else -math.inf


def aux_grid_search(
    channel: Dmbc,
    template: SearchTemplate,
    objective: str = "sum_rate",
    weights: Sequence[float] | None = None,
    workers: int = 1,
) -> SearchResult:
    """Best scheme of the family under the objective.

    Candidates are scored independently; ties within ``tau_num`` go to
    the first candidate in grid order.
    """
    if objective not in OBJECTIVES:
        raise ArgumentError(f"unknown objective {objective!r}; use one of {OBJECTIVES}")
    if objective == "weighted" and weights is not None and len(weights) != 3:
        raise ArgumentError("weighted objective needs three weights")
    candidates = _BUILDERS[template.family](channel, template)
    if not candidates:
        raise ArgumentError(f"the {template.family} grid has no admissible points")

    def evaluate(item: _Candidate) -> tuple[float, tuple[AuxiliaryScheme, UpdateScheme, RateRegion3]]:
        built = item[1]()
        return _score(built[2], objective, weights), built

    if workers <= 1:
        scored = [evaluate(c) for c in candidates]
    else:
        log.debug("aux_grid_search: %d candidates on %d workers", len(candidates), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            scored = list(pool.map(evaluate, candidates))

    values = np.array([s[0] for s in scored])
    best_value = float(values.max())
    if not math.isfinite(best_value):
        raise ArgumentError(f"no {template.family} candidate gives a nonempty region")
    best = int(np.flatnonzero(values >= best_value - num_tol())[0])
    aux, upd, region = scored[best][1]
    params = candidates[best][0]
    log.debug("aux_grid_search(%s): best %s -> %.9f", template.family, params, values[best])
    return SearchResult(dict(params), aux, upd, region, float(values[best]), len(candidates))
