"""
Network-wide (global) EEM, LLM and ExNT.

The fitness of a node is the expected total cost of delivering a packet
from it to the destination, given that every candidate continues with its
own best candidate set. The destination has fitness 0. Values are computed
once per topology by backward induction and kept in a table the router
reads from.

Evaluation order (GlobalOrder):
    COST      nodes are settled in increasing fitness; a node may only use
              already-settled nodes as candidates. Every node connected to
              the destination through in-range links gets a finite value.
    DISTANCE  nodes are evaluated by increasing distance to the destination;
              candidates must be strictly closer to the destination.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.constants.errors import DomainError
from src.constants.params import GlobalOrder, MetricKind, RoutingConfig
from src.metrics.grid import GridChoice, grid_fitness, select_best
from src.topology import (
    CoverageGrid,
    CoverageModel,
    NetworkTopology,
    SearchMode,
    coverage_grid,
    search_space,
)

logger = logging.getLogger(__name__)


@dataclass
class TableEntry:
    fitness: float
    grid: CoverageGrid
    choice: GridChoice


class GlobalMetricTable:
    """
    Memo of global fitness values and best sectors for one topology and metric.

    One instance belongs to one evaluation pass; concurrent routers must use
    their own table or share a completed one read-only.
    """

    def __init__(self, topo: NetworkTopology, cfg: RoutingConfig, kind: MetricKind,
                 model: Optional[CoverageModel] = None, debug: bool = False):
        self.topo = topo
        self.cfg = cfg
        self.kind = MetricKind(kind)
        if not self.kind.is_global:
            raise DomainError(f"{self.kind.value} is not a global metric")
        self.model = model if model is not None else CoverageModel(cfg)
        self.debug = debug

        self.fitness = np.full(len(topo), np.inf)
        self.fitness[topo.dest] = 0.0
        self.entries: dict[int, TableEntry] = {}
        self.settle_order: list[int] = [topo.dest]
        self._spaces: dict[int, list[int]] = {}
        self._grids: dict[int, CoverageGrid] = {}
        self._built = False

    def _dbg(self, msg: str):
        if self.debug:
            logger.debug(msg)

    def _full_grid(self, i: int) -> CoverageGrid:
        # links of a node are evaluated once; later pools are cut from this grid
        if i not in self._grids:
            self._grids[i] = coverage_grid(self.model, self.topo, i, self._spaces[i])
        return self._grids[i]

    def _evaluate(self, i: int, pool: list[int]) -> Optional[TableEntry]:
        if not pool:
            return None
        grid = self._full_grid(i).restrict(pool)
        fit = grid_fitness(self.kind, grid, self.cfg, downstream=self.fitness[grid.members],
                           dest=self.topo.dest)
        choice = select_best(fit, grid, maximize=False)
        if choice is None or not np.isfinite(choice.fitness):
            return None
        return TableEntry(choice.fitness, grid, choice)

    def build(self) -> "GlobalMetricTable":
        if self._built:
            return self
        topo = self.topo
        radius = self.model.search_radius(topo)
        self._spaces = {i: search_space(topo, i, SearchMode.GLOBAL, radius) for i in range(len(topo))}

        if GlobalOrder(self.cfg.global_order) is GlobalOrder.DISTANCE:
            self._build_by_distance(self._spaces)
        else:
            self._build_by_cost(self._spaces)
        self._built = True
        self._grids.clear()
        self._dbg(f"global {self.kind.value}: {len(self.settle_order)} of {len(topo)} nodes reach the destination")
        return self

    def _build_by_cost(self, spaces: dict):
        topo = self.topo
        settled = {topo.dest}
        tentative: dict[int, TableEntry] = {}
        # nodes whose search space holds x
        watchers: dict[int, list[int]] = {x: [] for x in range(len(topo))}
        for j, space in spaces.items():
            for x in space:
                watchers[x].append(j)
        dirty = {j for j in watchers[topo.dest] if j != topo.dest}

        while True:
            for j in dirty:
                entry = self._evaluate(j, [x for x in spaces[j] if x in settled])
                if entry is None:
                    tentative.pop(j, None)
                else:
                    tentative[j] = entry
            if not tentative:
                break
            nxt = min(tentative, key=lambda j: (tentative[j].fitness, j))
            entry = tentative.pop(nxt)
            settled.add(nxt)
            self.fitness[nxt] = entry.fitness
            self.entries[nxt] = entry
            self.settle_order.append(nxt)
            self._dbg(f"settled node {nxt} with fitness {entry.fitness:.6g}")
            dirty = {j for j in watchers[nxt] if j not in settled}

    def _build_by_distance(self, spaces: dict):
        topo = self.topo
        to_dest = topo.dest_distances
        for i in sorted(range(len(topo)), key=lambda j: (to_dest[j], j)):
            if i == topo.dest:
                continue
            pool = [x for x in spaces[i] if to_dest[x] < to_dest[i] and np.isfinite(self.fitness[x])]
            entry = self._evaluate(i, pool)
            if entry is None:
                continue
            self.fitness[i] = entry.fitness
            self.entries[i] = entry
            self.settle_order.append(i)

    def value(self, i: int) -> float:
        self.build()
        return float(self.fitness[i])

    def entry(self, i: int) -> Optional[TableEntry]:
        self.build()
        return self.entries.get(i)


def global_fitness(kind: MetricKind, i: int, topo: NetworkTopology, cfg: RoutingConfig,
                   memo: Optional[GlobalMetricTable] = None) -> float:
    """Global fitness of node i; +inf when the destination is unreachable from i."""
    table = memo if memo is not None else GlobalMetricTable(topo, cfg, kind)
    return table.value(i)
