"""
Distance-progress metrics.

DP ranks candidates by how much closer they are to the destination than
the forwarder; EDP weights that progress by the probability that each
candidate ends up forwarding the packet.
"""

import math
from typing import Optional, Sequence

from src.constants.errors import DomainError
from src.constants.params import EdpRule, MetricKind
from src.link import sfr_vector
from src.metrics.types import Candidate, CandidateScore, PrioritizedCS


def dp(l_s, l_d, l_j) -> float:
    """||l_s - l_d|| - ||l_j - l_d||; negative for candidates that move away."""
    return math.dist(l_s, l_d) - math.dist(l_j, l_d)


def pin_destination(ordered: list, dest: Optional[int]) -> list:
    """Move the destination, when present, to the highest priority."""
    if dest is None:
        return ordered
    head = [c for c in ordered if c.node == dest]
    return head + [c for c in ordered if c.node != dest]


def _checked(cands: Sequence[Candidate]) -> list:
    cands = list(cands)
    if not cands:
        raise DomainError("candidate set is empty")
    return cands


def build_prioritized(kind: MetricKind, ordered: Sequence[Candidate], fitness: float,
                      scores: Sequence[float]) -> PrioritizedCS:
    sfrs = sfr_vector([c.per for c in ordered])
    per_member = tuple(
        CandidateScore(c.node, c.pdr, float(s), float(score))
        for c, s, score in zip(ordered, sfrs, scores)
    )
    return PrioritizedCS(kind, tuple(c.node for c in ordered), float(fitness), per_member)


def dp_prioritize(cands: Sequence[Candidate], dest: Optional[int] = None) -> PrioritizedCS:
    """Descending DP (ties by id); fitness is the largest DP in the set."""
    ordered = sorted(_checked(cands), key=lambda c: (-c.dp, c.node))
    ordered = pin_destination(ordered, dest)
    return build_prioritized(MetricKind.DP, ordered, max(c.dp for c in ordered), [c.dp for c in ordered])


def _edp_greedy(cands: list) -> list:
    # each pick maximizes DP * SFR against the committed prefix; the prefix
    # miss probability is shared by every remaining candidate, so the picks
    # come out in descending DP * PDR
    return sorted(cands, key=lambda c: (-(c.dp * c.pdr), c.node))


def edp_prioritize(cands: Sequence[Candidate], rule: EdpRule = EdpRule.GREEDY,
                   dest: Optional[int] = None) -> PrioritizedCS:
    """
    Order a candidate set for expected distance progress.

    GREEDY puts the largest DP * PDR first and then, one by one, the
    candidate with the largest DP * SFR against the chosen prefix. OPTIMAL
    sorts by descending DP (ties: higher PDR, then id), which maximizes
    sum DP * SFR over all orders; GREEDY can fall short of it.
    Fitness is sum DP * SFR over the final order.
    """
    cands = _checked(cands)
    if EdpRule(rule) is EdpRule.GREEDY:
        ordered = _edp_greedy(cands)
    else:
        ordered = sorted(cands, key=lambda c: (-c.dp, -c.pdr, c.node))
    ordered = pin_destination(ordered, dest)

    sfrs = sfr_vector([c.per for c in ordered])
    contributions = [c.dp * float(s) for c, s in zip(ordered, sfrs)]
    return build_prioritized(MetricKind.EDP, ordered, sum(contributions), contributions)
