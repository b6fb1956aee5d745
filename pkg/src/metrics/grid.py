"""
Metric evaluation over a whole coverage grid.

Each (pointing angle, breakpoint) cell of a CoverageGrid is a candidate set;
these functions score every cell at once and pick the best one. Uncovered
members are given PER 1, which zeroes their SFR wherever they sit in the
priority order.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.constants.params import EdpRule, MetricKind, RoutingConfig
from src.link import attempt_series, exnt_unicast, sfr_vector
from src.metrics.cost_metrics import LOCAL_COST_KINDS
from src.metrics.costs import attempt_cost
from src.topology import CoverageGrid


@dataclass(frozen=True)
class GridChoice:
    p: int
    b: int
    fitness: float


def _ordered_sum(per: np.ndarray, weights: np.ndarray, order: np.ndarray) -> np.ndarray:
    """sum_j SFR_j * w_j with members taken in a fixed `order`."""
    return np.sum(sfr_vector(per[..., order]) * weights[order], axis=-1)


def grid_fitness(kind: MetricKind, grid: CoverageGrid, cfg: RoutingConfig, dp: Optional[np.ndarray] = None,
                 downstream: Optional[np.ndarray] = None, dest: Optional[int] = None) -> np.ndarray:
    """
    Fitness of every cell, shape (P, B). Empty cells get the worst value
    (-inf when maximizing, +inf when minimizing).

    Args:
        dp: per-member distance progress, required for DP and EDP
        downstream: per-member downstream fitness, required for global kinds
        dest: destination id, pinned to the top priority when covered
    """
    kind = MetricKind(kind)
    cov = grid.covered
    per = np.where(cov, grid.per, 1.0)
    count = cov.sum(axis=-1)
    empty = count == 0
    worst = -np.inf if kind.maximize else np.inf

    if cov.shape[-1] == 0:
        return np.full(count.shape, worst)

    if kind is MetricKind.DP:
        fit = np.where(cov, dp, -np.inf).max(axis=-1)

    elif kind is MetricKind.EDP:
        if EdpRule(cfg.edp_rule) is EdpRule.OPTIMAL:
            order = np.lexsort((grid.members, -dp))
            fit = _ordered_sum(per, dp, order)
        else:
            key = np.where(cov, -(dp * (1.0 - per)), np.inf)
            if dest is not None:
                key = np.where(cov & (grid.members == dest), -np.inf, key)
            order = np.argsort(key, axis=-1, kind="stable")
            fit = np.sum(sfr_vector(np.take_along_axis(per, order, axis=-1)) * dp[order], axis=-1)

    elif kind in LOCAL_COST_KINDS:
        per_bc = per.prod(axis=-1)
        with np.errstate(divide="ignore"):
            exnt_bc = 1.0 / (1.0 - per_bc)
        fit = attempt_cost(kind, np.maximum(count, 1), cfg) * exnt_bc

    else:
        order = np.lexsort((grid.members, downstream))
        per_bc = per.prod(axis=-1)
        K = cfg.targets.max_retx_K
        fit = (attempt_cost(kind, np.maximum(count, 1), cfg) * exnt_unicast(per_bc, K)
               + attempt_series(per_bc, K) * _ordered_sum(per, downstream, order))

    return np.where(empty, worst, fit)


def _log_per_bc(grid: CoverageGrid, cells: np.ndarray) -> np.ndarray:
    per = np.where(grid.covered[cells[:, 0], cells[:, 1]], grid.per[cells[:, 0], cells[:, 1]], 1.0)
    with np.errstate(divide="ignore"):
        return np.log(per).sum(axis=-1)


def select_best(fit: np.ndarray, grid: CoverageGrid, maximize: bool) -> Optional[GridChoice]:
    """
    Best non-empty cell. Returns None when every cell is empty.

    Ties go to the lower broadcast PER when minimizing a cost, then to the
    narrower beam, then to the smaller pointing angle. Cost fitness saturates
    at its floor once PER_bc drops below machine precision, so the broadcast
    PER is compared in log space.
    """
    valid = grid.nonempty & ~np.isnan(fit)
    if not valid.any():
        return None
    best = fit[valid].max() if maximize else fit[valid].min()
    cells = np.argwhere(valid & (fit == best))
    if not maximize and len(cells) > 1:
        log_per = _log_per_bc(grid, cells)
        cells = cells[log_per == log_per.min()]
    pick = np.lexsort((grid.psis[cells[:, 0]], grid.thetas[cells[:, 0], cells[:, 1]]))[0]
    p, b = cells[pick]
    return GridChoice(int(p), int(b), float(best))
