"""Three-dimensional rate regions over (R0, R1, R2).

Regions are stored as their explicit halfspaces; non-negativity and the
per-coordinate cap are implicit and appended whenever the geometry is
evaluated, so every region is a bounded polytope.
"""

from __future__ import annotations

import csv
import enum
import io
import itertools
import json
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from bcfb.errors import ArgumentError, DomainError
from bcfb.config.defaults import setting
from bcfb.polytope.system import LinIneqSystem, geo_tol, infeasible, remove_redundant

log = logging.getLogger(__name__)

RATE_VARIABLES: tuple[str, str, str] = ("R0", "R1", "R2")


class Orientation(str, enum.Enum):
    """ACHIEVABLE regions are down-sets (rates); COST regions are up-sets (compression rates)."""

    ACHIEVABLE = "achievable"
    COST = "cost"


@dataclass(frozen=True, slots=True, eq=False)
class RateRegion3:
    system: LinIneqSystem
    cap: float
    orientation: Orientation = Orientation.ACHIEVABLE
    label: str = ""

    def __post_init__(self) -> None:
        if self.system.variables != RATE_VARIABLES:
            object.__setattr__(self, "system", self.system.reorder(RATE_VARIABLES))
        if not self.cap > 0:
            raise ArgumentError(f"region cap must be positive, got {self.cap}")
        object.__setattr__(self, "orientation", Orientation(self.orientation))

    @classmethod
    def from_rows(
        cls,
        rows: Sequence[tuple[dict[str, float], float]],
        cap: float,
        orientation: Orientation = Orientation.ACHIEVABLE,
        label: str = "",
    ) -> RateRegion3:
        return cls(LinIneqSystem.from_rows(RATE_VARIABLES, rows), cap, orientation, label)

    def full_system(self) -> LinIneqSystem:
        """Explicit rows plus ``R >= 0`` and ``R <= cap``."""
        if np.isinf(self.cap):
            raise DomainError("region is unbounded (infinite cap)", value=self.cap)
        eye = np.eye(3)
        implicit = LinIneqSystem(
            RATE_VARIABLES, np.vstack([-eye, eye]), np.concatenate([np.zeros(3), np.full(3, self.cap)])
        )
        return self.system.with_rows(implicit)

    def with_cap(self, cap: float) -> RateRegion3:
        return replace(self, cap=cap)

    def reduced(self) -> RateRegion3:
        return replace(self, system=remove_redundant(self.system))

    def is_empty(self) -> bool:
        return len(vertices(self)) == 0

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "orientation": self.orientation.value,
            "cap": self.cap,
            "variables": list(RATE_VARIABLES),
            "halfspaces": [
                {"a": [float(c) for c in row], "b": float(bound)}
                for row, bound in zip(self.system.a, self.system.b)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> RateRegion3:
        try:
            rows = data["halfspaces"]
            a = np.array([r["a"] for r in rows], dtype=float).reshape(-1, 3)
            b = np.array([r["b"] for r in rows], dtype=float)
            return cls(
                LinIneqSystem(RATE_VARIABLES, a, b),
                float(data["cap"]),
                Orientation(data.get("orientation", "achievable")),
                str(data.get("label", "")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ArgumentError(f"malformed region JSON: {exc}") from exc


@dataclass(frozen=True, slots=True, eq=False)
class VertexCloud:
    """Vertices of a region, one row per point."""

    points: np.ndarray = field(repr=False)
    label: str = ""

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def to_csv(self, path: str | Path | None = None, digits: int = 9) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(RATE_VARIABLES)
        for point in self.points:
            writer.writerow([f"{float(v):.{digits}g}" for v in point])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text, encoding="utf-8")
        return text


@dataclass(frozen=True, slots=True)
class LpValue:
    """Optimum of a linear objective over a region; ``feasible`` is False for empty regions."""

    value: float
    point: tuple[float, float, float] | None
    feasible: bool


def _row_tol(b: np.ndarray, tol: float) -> np.ndarray:
    return tol * (1.0 + np.abs(b))


def _dedupe_points(points: list[np.ndarray], tol: float) -> np.ndarray:
    kept: list[np.ndarray] = []
    for p in points:
        if not any(np.max(np.abs(p - q)) <= tol * (1.0 + np.max(np.abs(q))) for q in kept):
            kept.append(p)
    return np.array(kept).reshape(-1, 3)


def vertices(region: RateRegion3, tol: float | None = None) -> VertexCloud:
    """Enumerate vertices by solving every triple of tight rows."""
    tol = geo_tol(tol)
    full = region.full_system()
    a, b = full.a, full.b
    found: list[np.ndarray] = []
    for i, j, k in itertools.combinations(range(full.n_rows), 3):
        m = a[[i, j, k]]
        if abs(np.linalg.det(m)) < 1e-12:
            continue
        x = np.linalg.solve(m, b[[i, j, k]])
        if np.all(a @ x <= b + _row_tol(b, tol) * 10):
            found.append(x)
    points = _dedupe_points(found, tol * 10)
    # canonical order for stable output
    if len(points):
        points = points[np.lexsort(points.T[::-1])]
    log.debug("vertices(%s): %d points", region.label or "region", len(points))
    return VertexCloud(points, region.label)


def contains_point(region: RateRegion3, point: Sequence[float], tol: float | None = None) -> bool:
    x = np.asarray(point, dtype=float)
    if x.shape != (3,):
        raise ArgumentError(f"rate point must have 3 coordinates, got shape {x.shape}")
    return region.full_system().satisfied(x, tol)


def is_achievable(
    region: RateRegion3, point: Sequence[float], margin: float | None = None
) -> bool:
    """Containment of *point* backed off by *margin* bits per coordinate.

    Achievable regions test ``point - margin`` (clipped at 0), cost regions
    ``point + margin`` (clipped at the cap).  The default margin is ``numerics.margin``.
    """
    mu = float(setting("numerics", "margin")) if margin is None else margin
    if mu < 0:
        raise ArgumentError(f"margin must be non-negative, got {mu}")
    x = np.asarray(point, dtype=float)
    if region.orientation is Orientation.ACHIEVABLE:
        x = np.maximum(x - mu, 0.0)
    else:
        x = np.minimum(x + mu, region.cap)
    return contains_point(region, x)


def region_equal(a: RateRegion3, b: RateRegion3, tol: float = 1e-7) -> bool:
    """Set equality via mutual vertex containment at a common cap."""
    cap = max(a.cap, b.cap)
    a, b = a.with_cap(cap), b.with_cap(cap)
    va, vb = vertices(a).points, vertices(b).points
    if len(va) == 0 or len(vb) == 0:
        return len(va) == len(vb)
    return all(contains_point(b, p, tol) for p in va) and all(contains_point(a, p, tol) for p in vb)


def max_weighted(region: RateRegion3, weights: Sequence[float]) -> LpValue:
    """Maximize ``weights . R`` over the region."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (3,):
        raise ArgumentError(f"weights must have 3 entries, got {w.shape}")
    full = region.full_system()
    res = linprog(-w, A_ub=full.a, b_ub=full.b, bounds=[(None, None)] * 3, method="highs")
    if res.status != 0:
        return LpValue(0.0, None, False)
    x = tuple(float(v) for v in res.x)
    return LpValue(float(-res.fun), (x[0], x[1], x[2]), True)


def min_weighted(region: RateRegion3, weights: Sequence[float]) -> LpValue:
    res = max_weighted(region, -np.asarray(weights, dtype=float))
    return replace(res, value=-res.value) if res.feasible else res


def sum_rate_max(region: RateRegion3) -> LpValue:
    """max R1 + R2 with R0 = 0. Cost regions report the minimum instead."""
    pinned = pin_r0(region)
    if region.orientation is Orientation.COST:
        return min_weighted(pinned, (0.0, 1.0, 1.0))
    return max_weighted(pinned, (0.0, 1.0, 1.0))


def pin_r0(region: RateRegion3, value: float = 0.0) -> RateRegion3:
    """Intersect with ``R0 == value``."""
    extra = LinIneqSystem(
        RATE_VARIABLES, np.array([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]]), np.array([value, -value])
    )
    return replace(region, system=region.system.with_rows(extra))


def time_share(
    p: Sequence[float], q: Sequence[float], lam: float
) -> tuple[float, float, float]:
    """``lam p + (1 - lam) q``."""
    if not 0.0 <= lam <= 1.0:
        raise ArgumentError(f"time-sharing weight must lie in [0, 1], got {lam}")
    x = lam * np.asarray(p, dtype=float) + (1.0 - lam) * np.asarray(q, dtype=float)
    return float(x[0]), float(x[1]), float(x[2])


def _hull_rows(points: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Halfspaces of conv(points), handling lower-dimensional clouds."""
    center = points.mean(axis=0)
    centered = points - center
    _, s, vt = np.linalg.svd(centered)
    scale = max(1.0, float(np.max(np.abs(points))))
    rank = int(np.sum(s > 1e3 * tol * scale))
    basis, normal = vt[:rank], vt[rank:]

    a_rows: list[np.ndarray] = []
    b_rows: list[float] = []
    for n in normal:
        c = float(n @ center)
        a_rows += [n, -n]
        b_rows += [c, -c]

    coords = centered @ basis.T
    if rank == 1:
        lo, hi = float(coords.min()), float(coords.max())
        d = basis[0]
        a_rows += [d, -d]
        b_rows += [hi + d @ center, -lo - d @ center]
    elif rank >= 2:
        hull = ConvexHull(coords)
        for eq in hull.equations:
            normal_local, offset = eq[:-1], eq[-1]
            row = basis.T @ normal_local
            a_rows.append(row)
            b_rows.append(float(-offset + row @ center))
    return np.vstack(a_rows), np.asarray(b_rows)


def convex_hull_union(a: RateRegion3, b: RateRegion3, tol: float | None = None) -> RateRegion3:
    """conv(a U b) as a halfspace region."""
    tol = geo_tol(tol)
    if a.orientation is not b.orientation:
        raise ArgumentError("cannot take the hull of regions with different orientations")
    cap = max(a.cap, b.cap)
    a, b = a.with_cap(cap), b.with_cap(cap)
    clouds = [c.points for c in (vertices(a), vertices(b)) if len(c)]
    label = f"conv({a.label},{b.label})"
    if not clouds:
        return RateRegion3(infeasible(RATE_VARIABLES), cap, a.orientation, label)
    points = np.vstack(clouds)
    rows_a, rows_b = _hull_rows(points, tol)
    system = remove_redundant(LinIneqSystem(RATE_VARIABLES, rows_a, rows_b), tol)
    return RateRegion3(system, cap, a.orientation, label)


def dumps(region: RateRegion3) -> str:
    return json.dumps(region.to_json(), indent=2)
