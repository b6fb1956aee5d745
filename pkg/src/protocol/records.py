"""
Route records and their end-to-end aggregation.
"""

import math
from dataclasses import dataclass
from typing import Optional

from src.constants.errors import DomainError
from src.constants.params import MetricKind
from src.metrics import PrioritizedCS
from src.topology import Sector


@dataclass(frozen=True)
class HopMetrics:
    pdr_bc: float
    exnt_bc: float
    distance_m: float
    energy_j: float
    delay_s: float


@dataclass(frozen=True)
class HopRecord:
    """
    One forwarding step.

    Attributes:
        forwarder (int): transmitting node
        sector (Sector): sector the forwarder used
        prioritized_cs (PrioritizedCS): candidate set in priority order
        chosen_next (int): node that forwarded the packet on
        metrics (HopMetrics): analytic hop figures
        attempts (Optional[int]): transmissions spent, sampled routes only
    """
    forwarder: int
    sector: Sector
    prioritized_cs: PrioritizedCS
    chosen_next: int
    metrics: HopMetrics
    attempts: Optional[int] = None


@dataclass(frozen=True)
class E2EMetrics:
    pdr: float
    exnt: float
    distance: float
    energy: float
    delay: float
    hop_count: int


@dataclass
class RouteResult:
    """
    Outcome of routing one packet from source to destination.

    Attributes:
        kind (Optional[MetricKind]): metric that drove the route, None for the unicast baseline
        hops (list[HopRecord]): forwarding steps in order
        reached (bool): whether the destination was reached
        e2e (Optional[E2EMetrics]): aggregated figures of a reached route
        failure (Optional[str]): why discovery stopped, None when reached
    """
    kind: Optional[MetricKind]
    hops: list
    reached: bool
    e2e: Optional[E2EMetrics] = None
    failure: Optional[str] = None

    @property
    def path(self) -> list[int]:
        if not self.hops:
            return []
        return [self.hops[0].forwarder] + [h.chosen_next for h in self.hops]


def aggregate_e2e(hops) -> E2EMetrics:
    """
    End-to-end figures of a sequence of HopRecord or HopMetrics.

    PDR multiplies the per-hop single-attempt broadcast PDRs; ExNT, distance,
    energy and delay add up over hops.
    """
    hops = list(hops)
    if not hops:
        raise DomainError("cannot aggregate an empty route")
    metrics = [h.metrics if isinstance(h, HopRecord) else h for h in hops]
    return E2EMetrics(
        pdr=math.prod(m.pdr_bc for m in metrics),
        exnt=sum(m.exnt_bc for m in metrics),
        distance=sum(m.distance_m for m in metrics),
        energy=sum(m.energy_j for m in metrics),
        delay=sum(m.delay_s for m in metrics),
        hop_count=len(metrics),
    )
