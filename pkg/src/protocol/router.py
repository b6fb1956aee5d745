"""
SectOR routing engine.

At every hop the forwarder filters its search space, tries every pointing
angle and every divergence breakpoint, keeps the best candidate set under
the metric, prioritizes it and hands the packet to the next forwarder:

    while the packet is not at the destination:
        S  = search space of the forwarder
        for psi in pointing angles:  best CS over the breakpoints of psi
        psi* = best angle, CS* = its set, in priority order
        broadcast; the highest-priority receiver becomes the forwarder

The (psi*, CS*) choice of a node only depends on positions, so it is
computed once per node and reused for later packets on the same topology.
"""

import logging
from dataclasses import replace
from enum import Enum
from typing import Optional

import numpy as np

from src.constants.errors import DomainError, NoCandidateError
from src.constants.params import MetricKind, RoutingConfig
from src.metrics import (
    Candidate,
    GlobalMetricTable,
    PrioritizedCS,
    coord_delay,
    delay_cost,
    energy_cost,
    grid_fitness,
    prioritize,
    select_best,
)
from src.protocol.records import E2EMetrics, HopMetrics, HopRecord, RouteResult, aggregate_e2e
from src.topology import CoverageGrid, CoverageModel, NetworkTopology, SearchMode, coverage_grid, search_space

logger = logging.getLogger(__name__)


class RouteMode(str, Enum):
    """EXPECTED follows the top-priority candidate; STOCHASTIC samples receptions."""
    EXPECTED = "expected"
    STOCHASTIC = "stochastic"


class SectorRouter:
    """
    Router bound to one topology, configuration and metric.

    Attributes:
        topo (NetworkTopology): network being routed over
        cfg (RoutingConfig): link, energy and selection settings
        kind (MetricKind): routing metric
        model (CoverageModel): range model shared with the global table
        debug (bool): emit per-hop debug logging
    """

    def __init__(self, topo: NetworkTopology, cfg: RoutingConfig, kind: MetricKind,
                 model: Optional[CoverageModel] = None, debug: bool = False):
        self.topo = topo
        self.cfg = cfg
        self.kind = MetricKind(kind)
        self.model = model if model is not None else CoverageModel(cfg)
        self.debug = debug
        self._cache: dict[int, PrioritizedCS] = {}
        self._table: Optional[GlobalMetricTable] = None

    def _dbg(self, msg: str):
        if self.debug:
            logger.debug(msg)

    @property
    def table(self) -> GlobalMetricTable:
        if self._table is None:
            self._table = GlobalMetricTable(self.topo, self.cfg, self.kind, self.model, self.debug).build()
        return self._table

    def _progress(self, i: int, members: np.ndarray) -> np.ndarray:
        to_dest = self.topo.dest_distances
        return to_dest[i] - to_dest[members]

    def _local_choice(self, i: int):
        ss = search_space(self.topo, i, SearchMode.LOCAL, self.model.search_radius(self.topo))
        if not ss:
            raise NoCandidateError(i, "empty search space")
        grid = coverage_grid(self.model, self.topo, i, ss)
        fit = grid_fitness(self.kind, grid, self.cfg, dp=self._progress(i, grid.members), dest=self.topo.dest)
        choice = select_best(fit, grid, self.kind.maximize)
        if choice is None:
            raise NoCandidateError(i, "no sector covers a search-space node")
        return grid, choice

    def _build(self, i: int, grid: CoverageGrid, p: int, b: int) -> PrioritizedCS:
        mask = grid.covered[p, b]
        members = grid.members[mask]
        dps = self._progress(i, members)
        cands = [Candidate(int(x), float(d), float(per))
                 for x, d, per in zip(members, dps, grid.per[p, b][mask])]
        downstream = None
        if self.kind.is_global:
            downstream = {int(x): float(self.table.fitness[x]) for x in members}
        pcs = prioritize(self.kind, cands, self.cfg, dest=self.topo.dest, downstream=downstream)
        return replace(pcs, sector=grid.sector_at(p, b))

    def filter_select_prioritize(self, i: int) -> PrioritizedCS:
        """
        Best prioritized candidate set of node i.

        Raises:
            NoCandidateError: node i has nothing to forward to
        """
        if i == self.topo.dest:
            raise DomainError("the destination does not forward")
        if i in self._cache:
            return self._cache[i]

        if self.kind.is_global:
            entry = self.table.entry(i)
            if entry is None:
                raise NoCandidateError(i, "destination unreachable through settled candidates")
            grid, choice = entry.grid, entry.choice
        else:
            grid, choice = self._local_choice(i)

        pcs = self._build(i, grid, choice.p, choice.b)
        self._dbg(f"node {i}: psi={pcs.sector.pointing_psi:.4f} theta={pcs.sector.divergence_theta:.4f} "
                  f"CS={list(pcs.members)} fitness={pcs.fitness:.6g}")
        self._cache[i] = pcs
        return pcs

    def hop_metrics(self, i: int, pcs: PrioritizedCS, nxt: int) -> HopMetrics:
        cfg = self.cfg
        t_c = coord_delay(pcs.size, cfg.energy)
        exnt = pcs.exnt_bc
        return HopMetrics(
            pdr_bc=pcs.pdr_bc,
            exnt_bc=exnt,
            distance_m=self.topo.distance(i, nxt),
            energy_j=energy_cost(exnt, cfg.targets.rate_R, pcs.size, cfg.energy, t_c,
                                 cfg.transceiver.p_tx, cfg.targets.packet_L),
            delay_s=delay_cost(exnt, cfg.targets.rate_R, t_c, cfg.targets.packet_L),
        )

    def _sample_next(self, pcs: PrioritizedCS, rng: np.random.Generator) -> tuple[Optional[int], int]:
        pers = pcs.pers
        for attempt in range(1, self.cfg.targets.max_retx_K + 1):
            received = rng.random(pers.size) >= pers
            if received.any():
                return pcs.members[int(np.argmax(received))], attempt
        return None, self.cfg.targets.max_retx_K

    def route(self, mode: RouteMode = RouteMode.EXPECTED, seed=None) -> RouteResult:
        """
        Route one packet from source to destination.

        Normal failures (no candidate, packet dropped, loop, hop cap) come
        back as reached=False with a failure reason; they are never raised.
        """
        mode = RouteMode(mode)
        rng = np.random.default_rng(seed) if mode is RouteMode.STOCHASTIC else None
        topo = self.topo
        current, visited, hops = topo.source, {topo.source}, []

        def failed(reason: str) -> RouteResult:
            self._dbg(f"route failed after {len(hops)} hops: {reason}")
            return RouteResult(self.kind, hops, reached=False, failure=reason)

        while current != topo.dest:
            if len(hops) >= len(topo):
                return failed("hop limit reached")
            try:
                pcs = self.filter_select_prioritize(current)
            except NoCandidateError as e:
                return failed(str(e))

            attempts = None
            if mode is RouteMode.EXPECTED:
                nxt = pcs.members[0]
            else:
                nxt, attempts = self._sample_next(pcs, rng)
                if nxt is None:
                    return failed(f"node {current}: dropped after {attempts} attempts")

            hops.append(HopRecord(current, pcs.sector, pcs, nxt, self.hop_metrics(current, pcs, nxt), attempts))
            if nxt in visited:
                return failed(f"node {nxt} revisited")
            visited.add(nxt)
            current = nxt

        return RouteResult(self.kind, hops, reached=True, e2e=aggregate_e2e(hops))


def e2e_to_dict(e2e: Optional[E2EMetrics]) -> Optional[dict]:
    if e2e is None:
        return None
    return {
        "pdr": e2e.pdr,
        "exnt": e2e.exnt,
        "distance_m": e2e.distance,
        "energy_j": e2e.energy,
        "delay_s": e2e.delay,
        "hop_count": e2e.hop_count,
    }


def route_to_dict(result: RouteResult) -> dict:
    """JSON-ready record of a route: hops with sectors and priorities, then the E2E summary."""
    hops = []
    for h in result.hops:
        pcs = h.prioritized_cs
        hops.append({
            "forwarder": h.forwarder,
            "sector": {
                "pointing_psi": h.sector.pointing_psi,
                "divergence_theta": h.sector.divergence_theta,
                "radius_m": h.sector.radius,
            },
            "candidates": [
                {"node": m.node, "pdr": m.pdr, "sfr": m.sfr, "score": m.score}
                for m in pcs.per_member
            ],
            "fitness": pcs.fitness,
            "chosen_next": h.chosen_next,
            "attempts": h.attempts,
            "pdr_bc": h.metrics.pdr_bc,
            "exnt_bc": h.metrics.exnt_bc,
            "distance_m": h.metrics.distance_m,
            "energy_j": h.metrics.energy_j,
            "delay_s": h.metrics.delay_s,
        })
    return {
        "metric": result.kind.value if result.kind is not None else "TUR",
        "reached": result.reached,
        "failure": result.failure,
        "path": result.path,
        "hops": hops,
        "e2e": e2e_to_dict(result.e2e),
    }
