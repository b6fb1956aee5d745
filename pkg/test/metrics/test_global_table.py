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
from src.constants.params import GlobalOrder, LinkTargets, MetricKind, RoutingConfig
from src.link import per_at
from src.metrics import GlobalMetricTable, attempt_cost, global_fitness, global_table
from src.topology import NetworkTopology, Node, coverage_grid, generate_random

# source 0, two mirrored relays 1 and 2, sink 3; no sector covers both relays
DIAMOND = NetworkTopology(
    (Node(0, 0.0, 0.0), Node(1, 2.2, 0.9), Node(2, 2.2, -0.9), Node(3, 4.4, 0.0)), source=0, dest=3)


def _tree(c1, per, downstream, K, k=1):
    """Expected cost of a single-candidate hop, enumerating each attempt's outcome."""
    cost = c1 + (1 - per) * downstream
    if k < K:
        cost += per * _tree(c1, per, downstream, K, k + 1)
    return cost


@pytest.mark.parametrize("order", [GlobalOrder.COST, GlobalOrder.DISTANCE])
@pytest.mark.parametrize("kind", [MetricKind.EXNT_GLOBAL, MetricKind.EEM_GLOBAL, MetricKind.LLM_GLOBAL])
@pytest.mark.parametrize("K", [1, 2, 3])
def test_diamond_matches_outcome_tree(order, kind, K):
    cfg = RoutingConfig(targets=LinkTargets(max_retx_K=K), global_order=order)
    hop = math.hypot(2.2, 0.9)
    per = per_at(cfg, cfg.transceiver.theta_min, hop)
    c1 = float(attempt_cost(kind, 1, cfg))
    relay = _tree(c1, per, 0.0, K)
    source = _tree(c1, per, relay, K)

    table = GlobalMetricTable(DIAMOND, cfg, kind).build()
    assert table.value(3) == 0.0
    for node, expected in ((1, relay), (2, relay), (0, source)):
        got = table.value(node)
        assert math.isclose(got, expected, rel_tol=1e-10), f"node {node}\nExpected: {expected}\n Got:    {got}"
    entry = table.entry(0)
    assert entry.grid.members_at(entry.choice.p, entry.choice.b) == (1,)


def test_unreachable_nodes_stay_infinite():
    topo = NetworkTopology((Node(0, 0.0, 0.0), Node(1, 10.0, 0.0), Node(2, 20.0, 0.0)), source=0, dest=2)
    table = GlobalMetricTable(topo, RoutingConfig(), MetricKind.EXNT_GLOBAL).build()
    assert math.isinf(table.value(0)) and math.isinf(table.value(1))
    assert table.entry(0) is None
    assert table.settle_order == [2]


def test_cost_order_settles_in_increasing_fitness():
    topo = generate_random(5.0, 30, seed=17)
    table = GlobalMetricTable(topo, RoutingConfig(), MetricKind.EXNT_GLOBAL).build()
    values = [table.value(i) for i in table.settle_order]
    assert values[0] == 0.0
    assert all(a <= b for a, b in zip(values, values[1:]))


def test_cost_order_reaches_at_least_what_distance_order_reaches():
    for seed in range(5):
        topo = generate_random(5.0, 30, seed=seed)
        by_cost = GlobalMetricTable(topo, RoutingConfig(), MetricKind.EXNT_GLOBAL).build()
        by_dist = GlobalMetricTable(topo, RoutingConfig(global_order="distance"), MetricKind.EXNT_GLOBAL).build()
        assert set(by_dist.settle_order) <= set(by_cost.settle_order)


def test_global_fitness_helper_and_errors():
    cfg = RoutingConfig()
    table = GlobalMetricTable(DIAMOND, cfg, MetricKind.EXNT_GLOBAL)
    assert global_fitness(MetricKind.EXNT_GLOBAL, 0, DIAMOND, cfg, memo=table) == table.value(0)
    assert np.isfinite(global_fitness(MetricKind.EXNT_GLOBAL, 1, DIAMOND, cfg))
    with pytest.raises(DomainError):
        GlobalMetricTable(DIAMOND, cfg, MetricKind.DP)


@pytest.mark.parametrize("order", [GlobalOrder.COST, GlobalOrder.DISTANCE])
def test_links_of_each_node_are_evaluated_once(order, monkeypatch):
    calls = []

    def counting(model, topo, i, pool, psis=None):
        calls.append(i)
        return coverage_grid(model, topo, i, pool, psis)

    monkeypatch.setattr(global_table, "coverage_grid", counting)
    topo = generate_random(4.0, 30, seed=11)
    table = GlobalMetricTable(topo, RoutingConfig(global_order=order), MetricKind.EXNT_GLOBAL).build()
    assert len(calls) == len(set(calls)), "a node's coverage grid was rebuilt"
    assert len(table.settle_order) > 1
