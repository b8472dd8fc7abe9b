from __future__ import annotations

from bcfb.channels.dueck import dueck_condition_holds, z_markov_chain_holds
from bcfb.regions.blackwell import (
    BlackwellBounds,
    BlackwellRows,
    blackwell_bounds,
    blackwell_printed_cutset,
    blackwell_region_closed_form,
    blackwell_rows,
    blackwell_scheme,
    blackwell_sweep,
)
from bcfb.regions.dueck import (
    DueckComparison,
    compare_dueck,
    dueck_capacity,
    dueck_feedback_region,
    dueck_scheme,
    sum_rate_continuity,
)
from bcfb.regions.inner import (
    FeedbackTerms,
    MartonTerms,
    feedback_inner,
    feedback_terms,
    lgw_inner,
    marton_region,
    marton_terms,
    rate_cap,
)
from bcfb.regions.oracles import CapacityResult, CutsetBounds, channel_capacity, cutset_bounds
from bcfb.regions.presplit import (
    FmCheck,
    LgwTerms,
    PresplitKind,
    closed_form_region,
    constants_from_joint,
    eliminate_presplit,
    fm_check,
    marton_fm_region,
    presplit_system,
    random_constants,
)
from bcfb.regions.schemes import (
    AuxiliaryScheme,
    GridSpec,
    UpdateScheme,
    UpdateVariant,
    constant_update,
    induced_joint,
    star_as_full,
)
from bcfb.regions.search import SearchResult, SearchTemplate, aux_grid_search

__all__ = [
    "AuxiliaryScheme",
    "BlackwellBounds",
    "BlackwellRows",
    "CapacityResult",
    "CutsetBounds",
    "DueckComparison",
    "FeedbackTerms",
    "FmCheck",
    "GridSpec",
    "LgwTerms",
    "MartonTerms",
    "PresplitKind",
    "SearchResult",
    "SearchTemplate",
    "UpdateScheme",
    "UpdateVariant",
    "aux_grid_search",
    "blackwell_bounds",
    "blackwell_printed_cutset",
    "blackwell_region_closed_form",
    "blackwell_rows",
    "blackwell_scheme",
    "blackwell_sweep",
    "channel_capacity",
    "closed_form_region",
    "compare_dueck",
    "constant_update",
    "constants_from_joint",
    "cutset_bounds",
    "dueck_capacity",
    "dueck_condition_holds",
    "dueck_feedback_region",
    "dueck_scheme",
    "eliminate_presplit",
    "feedback_inner",
    "feedback_terms",
    "fm_check",
    "induced_joint",
    "lgw_inner",
    "marton_fm_region",
    "marton_region",
    "marton_terms",
    "presplit_system",
    "random_constants",
    "rate_cap",
    "star_as_full",
    "sum_rate_continuity",
    "z_markov_chain_holds",
]
