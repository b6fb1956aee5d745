"""
Traditional unicast routing (TUR) baseline.

Every transmitter uses the narrowest divergence, so each node reaches as
far as the optics allow, and the packet follows the Dijkstra shortest path
by Euclidean length. Each hop is a unicast link (candidate set of one).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import networkx as nx

from src.channel import LinkGeometry
from src.constants.params import RoutingConfig
from src.link import LinkBudget, evaluate_link, exnt_unicast_norm
from src.metrics import coord_delay, delay_cost, energy_cost
from src.protocol import E2EMetrics, HopMetrics, aggregate_e2e
from src.topology import CoverageModel, NetworkTopology

logger = logging.getLogger(__name__)


@dataclass
class TurResult:
    """
    Shortest unicast route of one topology.

    Attributes:
        path (list[int]): node ids source..dest, empty when unreachable
        total_distance (float): summed edge weights, inf when unreachable
        hops (list[HopMetrics]): per-hop figures along the path
        e2e (Optional[E2EMetrics]): aggregated figures of a reached route
        errors (list[str]): why the route failed, if it did
    """
    path: list
    total_distance: float
    hops: list = field(default_factory=list)
    e2e: Optional[E2EMetrics] = None
    errors: list = field(default_factory=list)

    @property
    def reached(self) -> bool:
        return bool(self.path)


def tur_graph(topo: NetworkTopology, cfg: RoutingConfig, model: Optional[CoverageModel] = None) -> nx.DiGraph:
    """
    Directed unicast graph at minimum divergence.

    Edge i->j exists iff the nodes are within the search radius. Edges carry
    `weight` (Euclidean length) and `budget` (LinkBudget at theta_min, on axis).
    """
    model = model if model is not None else CoverageModel(cfg)
    radius = model.search_radius(topo)
    theta = cfg.transceiver.theta_min

    g = nx.DiGraph()
    g.add_nodes_from(range(len(topo)))
    for i in range(len(topo)):
        dists = topo.distances_from(i)
        for j in range(len(topo)):
            if i == j or dists[j] > radius:
                continue
            r = float(dists[j])
            g.add_edge(i, j, weight=r, budget=evaluate_link(cfg, theta, LinkGeometry.from_distance(r)))
    return g


def dijkstra(graph: nx.DiGraph, s: int, d: int) -> tuple[Optional[list], float]:
    """Minimum-weight path from s to d and its total weight; (None, inf) if d is unreachable."""
    try:
        total, path = nx.single_source_dijkstra(graph, s, d, weight="weight")
    except nx.NetworkXNoPath:
        return None, math.inf
    return path, float(total)


def tur_hop_metrics(budget: LinkBudget, distance: float, cfg: RoutingConfig) -> HopMetrics:
    exnt = exnt_unicast_norm(budget.pdr)
    t_c = coord_delay(1, cfg.energy)
    return HopMetrics(
        pdr_bc=budget.pdr,
        exnt_bc=exnt,
        distance_m=distance,
        energy_j=energy_cost(exnt, cfg.targets.rate_R, 1, cfg.energy, t_c, cfg.transceiver.p_tx, cfg.targets.packet_L),
        delay_s=delay_cost(exnt, cfg.targets.rate_R, t_c, cfg.targets.packet_L),
    )


def tur_e2e(path: Sequence[int], graph: nx.DiGraph, cfg: RoutingConfig) -> tuple[list, E2EMetrics]:
    """Per-hop figures along `path` and their end-to-end aggregation."""
    hops = []
    for a, b in zip(path, path[1:]):
        edge = graph.edges[a, b]
        hops.append(tur_hop_metrics(edge["budget"], edge["weight"], cfg))
    return hops, aggregate_e2e(hops)


def is_connected_tur(topo: NetworkTopology, cfg: RoutingConfig, model: Optional[CoverageModel] = None,
                     graph: Optional[nx.DiGraph] = None) -> bool:
    """Whether the destination is reachable from the source over in-range links."""
    g = graph if graph is not None else tur_graph(topo, cfg, model)
    return nx.has_path(g, topo.source, topo.dest)


def route_tur(topo: NetworkTopology, cfg: RoutingConfig, model: Optional[CoverageModel] = None,
              debug: bool = False) -> TurResult:
    g = tur_graph(topo, cfg, model)
    path, total = dijkstra(g, topo.source, topo.dest)
    if path is None:
        if debug:
            logger.debug(f"TUR: node {topo.dest} unreachable from node {topo.source}")
        return TurResult([], total, errors=["destination unreachable"])
    hops, e2e = tur_e2e(path, g, cfg)
    if debug:
        logger.debug(f"TUR: path {path} length {total:.4f} m")
    return TurResult(path, total, hops, e2e)
