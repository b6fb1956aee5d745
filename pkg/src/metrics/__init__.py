"""
Opportunistic-routing metrics.

`prioritize` is the single entry point the router uses to turn a covered
candidate set into a PrioritizedCS under any metric.
"""

from typing import Mapping, Optional, Sequence

from src.constants.errors import DomainError
from src.constants.params import MetricKind, RoutingConfig
from .costs import attempt_cost, coord_delay, delay_cost, energy_cost
from .types import Candidate, CandidateScore, PrioritizedCS
from .progress import dp, dp_prioritize, edp_prioritize, pin_destination
from .cost_metrics import (
    LOCAL_COST_KINDS,
    ascending_prioritize,
    global_cs_fitness,
    global_prioritize,
    local_fitness,
)
from .grid import GridChoice, grid_fitness, select_best
from .global_table import GlobalMetricTable, TableEntry, global_fitness


def prioritize(kind: MetricKind, cands: Sequence[Candidate], cfg: RoutingConfig, dest: Optional[int] = None,
               downstream: Optional[Mapping[int, float]] = None) -> PrioritizedCS:
    """
    Order a candidate set and compute its fitness under `kind`.

    Args:
        downstream: node id -> global fitness, required for global kinds
    """
    kind = MetricKind(kind)
    if kind is MetricKind.DP:
        return dp_prioritize(cands, dest)
    if kind is MetricKind.EDP:
        return edp_prioritize(cands, cfg.edp_rule, dest)
    if kind in LOCAL_COST_KINDS:
        return ascending_prioritize(kind, cands, cfg, dest)
    if downstream is None:
        raise DomainError(f"{kind.value} needs downstream fitness values")
    return global_prioritize(kind, cands, downstream, cfg, dest)
