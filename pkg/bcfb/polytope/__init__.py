from __future__ import annotations

from bcfb.polytope.region import (
    RATE_VARIABLES,
    LpValue,
    Orientation,
    RateRegion3,
    VertexCloud,
    contains_point,
    is_achievable,
    convex_hull_union,
    max_weighted,
    min_weighted,
    pin_r0,
    region_equal,
    sum_rate_max,
    time_share,
    vertices,
)
from bcfb.polytope.system import (
    LinIneqSystem,
    SystemBuilder,
    eliminate_all,
    fm_eliminate,
    infeasible,
    project,
    remove_redundant,
)

__all__ = [
    "RATE_VARIABLES",
    "LinIneqSystem",
    "LpValue",
    "Orientation",
    "RateRegion3",
    "SystemBuilder",
    "VertexCloud",
    "contains_point",
    "convex_hull_union",
    "eliminate_all",
    "fm_eliminate",
    "infeasible",
    "is_achievable",
    "max_weighted",
    "min_weighted",
    "pin_r0",
    "project",
    "region_equal",
    "remove_redundant",
    "sum_rate_max",
    "time_share",
    "vertices",
]
