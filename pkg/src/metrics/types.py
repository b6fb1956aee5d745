from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.constants.params import MetricKind
from src.topology import Sector


@dataclass(frozen=True)
class Candidate:
    """
    One node of a candidate set, as seen from the forwarder.

    Attributes:
        node (int): node id
        dp (float): distance progress toward the destination, m
        per (float): PER of the forwarder -> node link at the sector's divergence
    """
    node: int
    dp: float
    per: float

    @property
    def pdr(self) -> float:
        return 1.0 - self.per


@dataclass(frozen=True)
class CandidateScore:
    node: int
    pdr: float
    sfr: float
    score: float


@dataclass(frozen=True)
class PrioritizedCS:
    """
    Candidate set in forwarding-priority order.

    Attributes:
        kind (MetricKind): metric that ordered the set
        members (tuple[int, ...]): node ids, highest priority first
        fitness (float): metric value of the whole set
        per_member (tuple[CandidateScore, ...]): pdr, sfr and metric score per member, same order
        sector (Optional[Sector]): sector that produced the set, attached by the router
    """
    kind: MetricKind
    members: tuple
    fitness: float
    per_member: tuple
    sector: Optional[Sector] = None

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def pers(self) -> np.ndarray:
        return np.array([1.0 - m.pdr for m in self.per_member])

    @property
    def per_bc(self) -> float:
        return float(np.prod(self.pers))

    @property
    def pdr_bc(self) -> float:
        return 1.0 - self.per_bc

    @property
    def exnt_bc(self) -> float:
        """Normalized broadcast ExNT 1 / PDR_bc."""
        pdr = self.pdr_bc
        return 1.0 / pdr if pdr > 0 else float("inf")
