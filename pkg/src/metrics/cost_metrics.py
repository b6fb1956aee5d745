"""
Cost-type metrics: ExNT, energy (EEM) and latency (LLM), local and global.

Local variants price a candidate set by its own broadcast ExNT. Global
variants add the expected remaining cost of whichever candidate forwards,
taken from a table of downstream fitness values.
"""

from typing import Mapping, Optional, Sequence

import numpy as np

from src.constants.errors import DomainError
from src.constants.params import MetricKind, RoutingConfig
from src.link import attempt_series, exnt_unicast, sfr_vector
from src.metrics.costs import attempt_cost
from src.metrics.progress import _checked, build_prioritized, pin_destination
from src.metrics.types import Candidate, PrioritizedCS

LOCAL_COST_KINDS = (MetricKind.EEM_LOCAL, MetricKind.LLM_LOCAL, MetricKind.EXNT_LOCAL)


def ascending_prioritize(kind: MetricKind, cands: Sequence[Candidate], cfg: RoutingConfig,
                         dest: Optional[int] = None) -> PrioritizedCS:
    """
    Lowest per-candidate cost first, the cost being E, D or the count itself
    evaluated at the candidate's unicast ExNT with K attempts. Equal costs go
    to the lower link PER, then the lower id.
    """
    kind = MetricKind(kind)
    if kind not in LOCAL_COST_KINDS:
        raise DomainError(f"{kind.value} is not a local cost metric")
    cands = _checked(cands)
    unit = attempt_cost(kind, len(cands), cfg)
    score = {c.node: unit * exnt_unicast(c.per, cfg.targets.max_retx_K) for c in cands}

    ordered = sorted(cands, key=lambda c: (score[c.node], c.per, c.node))
    ordered = pin_destination(ordered, dest)
    scores = [score[c.node] for c in ordered]
    pcs = build_prioritized(kind, ordered, 0.0, scores)
    return build_prioritized(kind, ordered, local_fitness(kind, pcs, cfg), scores)


def local_fitness(kind: MetricKind, pcs: PrioritizedCS, cfg: RoutingConfig) -> float:
    """
    Fitness of a prioritized set under a local metric.

    DP: largest progress. EDP: sum DP * SFR. EEM / LLM / ExNT: cost of the
    normalized broadcast ExNT 1 / PDR_bc of the set.
    """
    kind = MetricKind(kind)
    if pcs.size == 0:
        raise DomainError("candidate set is empty")
    if kind is MetricKind.DP:
        return max(m.score for m in pcs.per_member)
    if kind is MetricKind.EDP:
        return float(sum(m.score for m in pcs.per_member))
    if kind in LOCAL_COST_KINDS:
        return float(attempt_cost(kind, pcs.size, cfg)) * pcs.exnt_bc
    raise DomainError(f"{kind.value} needs the network-wide metric table")


def global_cs_fitness(kind: MetricKind, pers_ordered, downstream_ordered, cfg: RoutingConfig) -> float:
    """
    Expected total cost to the destination through an ordered candidate set.

        F = c1 * N_bc + S0 * sum_j SFR_j * F_j

    c1 is the per-attempt cost, N_bc the capped broadcast ExNT (drops count
    K attempts and end the packet), S0 = sum_{k=1..K} PER_bc^(k-1) and F_j
    the downstream fitness of candidate j.
    """
    pers = np.asarray(pers_ordered, dtype=float)
    if pers.size == 0:
        raise DomainError("candidate set is empty")
    K = cfg.targets.max_retx_K
    per_bc = float(np.prod(pers))
    forward = float(np.sum(sfr_vector(pers) * np.asarray(downstream_ordered, dtype=float)))
    unit = float(attempt_cost(kind, pers.size, cfg))
    return unit * exnt_unicast(per_bc, K) + attempt_series(per_bc, K) * forward


def global_prioritize(kind: MetricKind, cands: Sequence[Candidate], downstream: Mapping[int, float],
                      cfg: RoutingConfig, dest: Optional[int] = None) -> PrioritizedCS:
    """Ascending downstream fitness (ties by link PER, then id); the destination has fitness 0."""
    kind = MetricKind(kind)
    if not kind.is_global:
        raise DomainError(f"{kind.value} is not a global metric")
    cands = _checked(cands)
    ordered = sorted(cands, key=lambda c: (downstream[c.node], c.per, c.node))
    ordered = pin_destination(ordered, dest)
    scores = [float(downstream[c.node]) for c in ordered]
    fitness = global_cs_fitness(kind, [c.per for c in ordered], scores, cfg)
    return build_prioritized(kind, ordered, fitness, scores)
