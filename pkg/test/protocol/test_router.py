import json
import math
import os
import sys

import numpy as np
import pytest

# Add project root to path
ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from src.constants.errors import DomainError
from src.constants.params import LinkTargets, MetricKind, RoutingConfig
from src.link import per_at
from src.metrics import Candidate, prioritize
from src.protocol import (
    HopMetrics,
    RouteMode,
    SectorRouter,
    aggregate_e2e,
    route_packet,
    route_to_json,
)
from src.topology import (
    CoverageModel,
    NetworkTopology,
    Node,
    SearchMode,
    candidate_set_family,
    generate_random,
    pointing_angles,
    search_space,
)

CFG = RoutingConfig()
LOCAL_KINDS = [MetricKind.DP, MetricKind.EDP, MetricKind.EEM_LOCAL, MetricKind.LLM_LOCAL, MetricKind.EXNT_LOCAL]
ALL_KINDS = LOCAL_KINDS + [MetricKind.EEM_GLOBAL, MetricKind.LLM_GLOBAL, MetricKind.EXNT_GLOBAL]

DIAMOND = NetworkTopology(
    (Node(0, 0.0, 0.0), Node(1, 2.2, 0.9), Node(2, 2.2, -0.9), Node(3, 4.4, 0.0)), source=0, dest=3)


def _pair(distance):
    return NetworkTopology((Node(0, 0.0, 0.0), Node(1, distance, 0.0)), source=0, dest=1)


@pytest.mark.parametrize("kind", ALL_KINDS, ids=lambda k: k.value)
def test_single_link_is_one_hop(kind):
    result = route_packet(_pair(2.0), kind, CFG)
    assert result.reached and result.failure is None
    assert result.path == [0, 1]
    hop = result.hops[0]
    assert hop.prioritized_cs.members == (1,)
    assert math.isclose(hop.sector.divergence_theta, CFG.transceiver.theta_min)
    assert math.isclose(result.e2e.pdr, 1.0 - per_at(CFG, CFG.transceiver.theta_min, 2.0), rel_tol=1e-12)
    assert result.e2e.hop_count == 1


@pytest.mark.parametrize("kind", ALL_KINDS, ids=lambda k: k.value)
def test_out_of_range_destination_is_not_discovered(kind):
    result = route_packet(_pair(10.0), kind, CFG)
    assert not result.reached
    assert result.hops == [] and result.e2e is None
    assert result.failure.startswith("node 0:")


@pytest.mark.parametrize("kind", ALL_KINDS, ids=lambda k: k.value)
def test_diamond_takes_lower_pointing_angle_on_ties(kind):
    result = route_packet(DIAMOND, kind, CFG)
    assert result.reached
    assert result.path == [0, 1, 3], f"Expected: [0, 1, 3]\n Got:    {result.path}"
    assert math.isclose(result.e2e.distance, 2 * math.hypot(2.2, 0.9))


def _brute_force_fitness(topo, kind, cfg):
    """Best fitness of node 0 over every pointing angle and every distinct candidate set."""
    model = CoverageModel(cfg)
    ss = search_space(topo, 0, SearchMode.LOCAL, model.search_radius(topo))
    to_dest = topo.dest_distances
    best = None
    for psi in pointing_angles(topo, 0, ss):
        for theta, members in candidate_set_family(model, topo, 0, psi, ss):
            cands = [Candidate(m, float(to_dest[0] - to_dest[m]), float(per_at(cfg, theta, topo.distance(0, m))))
                     for m in members]
            fit = prioritize(kind, cands, cfg).fitness
            if best is None or (fit > best if kind.maximize else fit < best):
                best = fit
    return best


@pytest.mark.parametrize("kind", LOCAL_KINDS, ids=lambda k: k.value)
def test_local_choice_is_best_over_all_sectors(kind):
    checked = 0
    for seed in range(25):
        topo = generate_random(4.0, 12, seed=seed)
        expected = _brute_force_fitness(topo, kind, CFG)
        if expected is None:
            continue
        got = SectorRouter(topo, CFG, kind).filter_select_prioritize(0).fitness
        assert math.isclose(got, expected, rel_tol=1e-9), f"seed={seed}\nExpected: {expected}\n Got:    {got}"
        checked += 1
    assert checked > 10


def test_sink_pointing_aims_at_destination():
    topo = NetworkTopology((Node(0, 0.0, 0.0), Node(1, 1.2, 1.0), Node(2, 0.2, 1.5), Node(3, 2.5, 2.5)),
                           source=0, dest=3)
    router = SectorRouter(topo, RoutingConfig(pointing_mode="sink"), MetricKind.EXNT_LOCAL)
    pcs = router.filter_select_prioritize(0)
    assert math.isclose(pcs.sector.pointing_psi, math.pi / 4, rel_tol=1e-12)
    assert pcs.members == (1,)


def test_beam_turns_toward_the_only_reachable_node():
    # nothing lies toward the sink; one relay sits off to the side
    topo = NetworkTopology((Node(0, 0.0, 0.0), Node(1, 1.0, 1.5), Node(2, 6.0, 0.0)), source=0, dest=2)
    pcs = SectorRouter(topo, CFG, MetricKind.EXNT_LOCAL).filter_select_prioritize(0)
    assert pcs.members == (1,)
    assert math.isclose(pcs.sector.pointing_psi, math.atan2(1.5, 1.0), rel_tol=1e-12)

    fixed = route_packet(topo, MetricKind.EXNT_LOCAL, RoutingConfig(pointing_mode="sink"))
    assert not fixed.reached
    assert fixed.failure == "node 0: no sector covers a search-space node"


def test_local_exnt_prefers_the_more_reliable_saturated_set():
    topo = NetworkTopology((Node(0, 0.0, 0.0), Node(1, 0.9, 0.05), Node(2, 0.5, 0.5), Node(3, 10.0, 10.0)),
                           source=0, dest=3)
    pcs = SectorRouter(topo, CFG, MetricKind.EXNT_LOCAL).filter_select_prioritize(0)
    assert pcs.fitness == 1.0
    assert pcs.members == (2,), f"Expected: (2,)\n Got:    {pcs.members}"
    assert math.isclose(pcs.sector.pointing_psi, math.pi / 4, rel_tol=1e-12)


@pytest.mark.parametrize("kind", [MetricKind.EXNT_GLOBAL, MetricKind.EEM_GLOBAL, MetricKind.LLM_GLOBAL],
                         ids=lambda k: k.value)
def test_global_routes_descend_the_fitness_table(kind):
    for seed in range(6):
        topo = generate_random(5.0, 30, seed=seed)
        router = SectorRouter(topo, CFG, kind)
        result = router.route()
        assert result.reached == math.isfinite(router.table.value(topo.source))
        for hop in result.hops:
            assert router.table.value(hop.chosen_next) <= router.table.value(hop.forwarder)


def test_stochastic_route_is_reproducible():
    topo = generate_random(5.0, 30, seed=11)
    router = SectorRouter(topo, CFG, MetricKind.EXNT_LOCAL)
    first = router.route(RouteMode.STOCHASTIC, seed=42)
    again = router.route(RouteMode.STOCHASTIC, seed=42)
    assert first.path == again.path
    assert first.failure == again.failure
    for hop in first.hops:
        assert hop.chosen_next in hop.prioritized_cs.members
        assert 1 <= hop.attempts <= CFG.targets.max_retx_K


def test_stochastic_delivery_frequency_matches_link_pdr():
    cfg = RoutingConfig(targets=LinkTargets(max_retx_K=1))
    distance = 2.5
    pdr = 1.0 - per_at(cfg, cfg.transceiver.theta_min, distance)
    router = SectorRouter(_pair(distance), cfg, MetricKind.EXNT_LOCAL)

    n = 4000
    delivered = sum(router.route(RouteMode.STOCHASTIC, seed=s).reached for s in range(n))
    stderr = math.sqrt(pdr * (1.0 - pdr) / n)
    assert abs(delivered / n - pdr) <= 4 * stderr + 1.0 / n, \
        f"Expected: {pdr}\n Got:    {delivered / n}"


def test_dropped_packet_reports_attempts():
    cfg = RoutingConfig(targets=LinkTargets(max_retx_K=2))
    router = SectorRouter(_pair(2.5), cfg, MetricKind.DP)
    for s in range(2000):
        result = router.route(RouteMode.STOCHASTIC, seed=s)
        if not result.reached:
            assert result.failure == "node 0: dropped after 2 attempts"
            assert result.hops == []
            break


def test_destination_does_not_forward():
    with pytest.raises(DomainError):
        SectorRouter(DIAMOND, CFG, MetricKind.DP).filter_select_prioritize(3)


def test_aggregate_e2e_multiplies_pdr_and_adds_costs():
    hop = HopMetrics(pdr_bc=0.9, exnt_bc=1 / 0.9, distance_m=1.5, energy_j=2.0, delay_s=3.0)
    e2e = aggregate_e2e([hop, hop])
    assert math.isclose(e2e.pdr, 0.81)
    assert math.isclose(e2e.exnt, 2 / 0.9)
    assert (e2e.distance, e2e.energy, e2e.delay, e2e.hop_count) == (3.0, 4.0, 6.0, 2)
    with pytest.raises(DomainError, match="empty route"):
        aggregate_e2e([])


def test_route_json_trace():
    result = route_packet(DIAMOND, MetricKind.EDP, CFG)
    record = json.loads(route_to_json(result))
    assert record["metric"] == "EDP"
    assert record["reached"] is True
    assert record["path"] == [0, 1, 3]
    assert [h["forwarder"] for h in record["hops"]] == [0, 1]
    first = record["hops"][0]
    assert first["candidates"][0]["node"] == first["chosen_next"] == 1
    assert set(first["sector"]) == {"pointing_psi", "divergence_theta", "radius_m"}
    assert record["e2e"]["hop_count"] == 2
    assert np.isclose(record["e2e"]["pdr"], first["pdr_bc"] * record["hops"][1]["pdr_bc"])
