"""
SectOR protocol adapter.

`route_packet` is the one-call entry point used by the simulator and the
CLI: build a router for a topology and metric and route one packet.
"""

import json
from typing import Optional

from src.constants.params import MetricKind, RoutingConfig
from src.topology import CoverageModel, NetworkTopology
from .records import E2EMetrics, HopMetrics, HopRecord, RouteResult, aggregate_e2e
from .router import RouteMode, SectorRouter, e2e_to_dict, route_to_dict


def route_packet(topo: NetworkTopology, kind: MetricKind, cfg: RoutingConfig,
                 mode: RouteMode = RouteMode.EXPECTED, seed=None,
                 model: Optional[CoverageModel] = None, debug: bool = False) -> RouteResult:
    """
    Adapter that builds a SectorRouter and routes one packet.

    Returns:
        RouteResult; reached=False with a failure reason when discovery fails
    """
    router = SectorRouter(topo, cfg, kind, model=model, debug=debug)
    return router.route(mode, seed)


def route_to_json(result: RouteResult, indent: Optional[int] = 2) -> str:
    return json.dumps(route_to_dict(result), indent=indent)
