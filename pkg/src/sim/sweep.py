"""
Monte Carlo sweep over side lengths.

Every (side length, trial) pair draws one random topology and runs every
scheme on it. Trials are independent; each one derives its randomness from

    SeedSequence(master_seed, spawn_key=(side_index, trial_index, stream))

with stream 0 for node placement and stream 1 + scheme index for sampled
routes, so results do not depend on how trials are spread over workers.
Reduction always happens in (side_index, trial_index) order.
"""

import logging
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Optional, Sequence

import numpy as np

from src.benchmark import is_connected_tur, tur_graph
from src.benchmark.tur import dijkstra, tur_e2e
from src.constants.errors import ConfigError, SectorError
from src.constants.params import RoutingConfig
from src.protocol import E2EMetrics, RouteMode, SectorRouter
from src.topology import CoverageModel, NetworkTopology, generate_random
from .schemes import DEFAULT_SCHEMES, Scheme, parse_schemes

logger = logging.getLogger(__name__)

DESK_N_TRIALS = 1000
FULL_N_TRIALS = 10000
DEFAULT_SIDE_LENGTHS = (4.0, 6.0, 8.0, 10.0)
DEFAULT_MASTER_SEED = 0
E2E_FIELDS = ("pdr", "exnt", "distance", "energy", "delay")


@dataclass(frozen=True)
class SimConfig:
    """
    One sweep.

    Attributes:
        side_lengths (tuple[float, ...]): square side lengths, m
        n_nodes (int): relays per topology (source and destination come extra)
        n_trials (int): topologies per side length
        schemes (tuple[Scheme, ...]): routers to compare
        master_seed (int): root of every per-trial seed
        routing (RoutingConfig): link, energy and selection settings
        workers (int): worker processes, 1 runs inline
        route_mode (RouteMode): expected or sampled forwarding
        acoustic_range (Optional[float]): control-plane range, m
    """
    side_lengths: tuple = DEFAULT_SIDE_LENGTHS
    n_nodes: int = 50
    n_trials: int = DESK_N_TRIALS
    schemes: tuple = field(default_factory=lambda: parse_schemes(DEFAULT_SCHEMES))
    master_seed: int = DEFAULT_MASTER_SEED
    routing: RoutingConfig = field(default_factory=RoutingConfig)
    workers: int = 1
    route_mode: RouteMode = RouteMode.EXPECTED
    acoustic_range: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "side_lengths", tuple(float(s) for s in self.side_lengths))
        object.__setattr__(self, "schemes", parse_schemes(self.schemes))
        object.__setattr__(self, "route_mode", RouteMode(self.route_mode))
        if not self.side_lengths:
            raise ConfigError("side_lengths must not be empty")
        if any(s <= 0 for s in self.side_lengths):
            raise ConfigError(f"side lengths must be positive, got {list(self.side_lengths)}")
        if self.n_trials < 1:
            raise ConfigError(f"n_trials must be >= 1, got {self.n_trials}")
        if self.n_nodes < 0:
            raise ConfigError(f"n_nodes must be >= 0, got {self.n_nodes}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.master_seed < 0:
            raise ConfigError(f"master_seed must be >= 0, got {self.master_seed}")


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one scheme on one topology."""
    side_index: int
    side_len: float
    trial: int
    scheme: str
    metric_kind: str
    connected: bool
    reached: bool
    e2e: Optional[E2EMetrics] = None
    failure: Optional[str] = None


@dataclass(frozen=True)
class SchemeSummary:
    """
    Aggregate of one (side length, scheme) cell.

    E2E means and standard errors are taken over discovered trials only;
    standard errors are None below two discoveries, means None at zero.
    """
    side_len: float
    scheme: str
    metric_kind: str
    n_trials: int
    n_discovered: int
    n_connected: int
    means: dict
    stderrs: dict

    @property
    def discovery_rate(self) -> float:
        return self.n_discovered / self.n_trials

    @property
    def connectivity_rate(self) -> float:
        return self.n_connected / self.n_trials


@dataclass
class SweepResult:
    config: SimConfig
    summaries: list = field(default_factory=list)
    trials: list = field(default_factory=list)
    errors: list = field(default_factory=list)


def trial_seed(master_seed: int, side_index: int, trial_index: int, stream: int = 0) -> np.random.SeedSequence:
    return np.random.SeedSequence(master_seed, spawn_key=(side_index, trial_index, stream))


def trial_topology(cfg: SimConfig, side_index: int, trial_index: int) -> NetworkTopology:
    return generate_random(cfg.side_lengths[side_index], cfg.n_nodes,
                           seed=trial_seed(cfg.master_seed, side_index, trial_index),
                           acoustic_range=cfg.acoustic_range)


def run_trial(cfg: SimConfig, side_index: int, trial_index: int) -> list[TrialRecord]:
    """Every scheme of `cfg` on the topology of one (side length, trial) pair."""
    topo = trial_topology(cfg, side_index, trial_index)
    model = CoverageModel(cfg.routing)
    graph = tur_graph(topo, cfg.routing, model)
    connected = is_connected_tur(topo, cfg.routing, graph=graph)
    side_len = cfg.side_lengths[side_index]

    records = []
    for n, scheme in enumerate(cfg.schemes):
        base = dict(side_index=side_index, side_len=side_len, trial=trial_index, scheme=scheme.name,
                    metric_kind=scheme.kind_label, connected=connected)
        try:
            if scheme.is_tur:
                path, _ = dijkstra(graph, topo.source, topo.dest)
                if path is None:
                    records.append(TrialRecord(**base, reached=False, failure="destination unreachable"))
                else:
                    records.append(TrialRecord(**base, reached=True, e2e=tur_e2e(path, graph, cfg.routing)[1]))
                continue
            router = SectorRouter(topo, cfg.routing, scheme.kind, model=model)
            seed = trial_seed(cfg.master_seed, side_index, trial_index, 1 + n)
            result = router.route(cfg.route_mode, seed)
            records.append(TrialRecord(**base, reached=result.reached, e2e=result.e2e, failure=result.failure))
        except SectorError as e:
            records.append(TrialRecord(**base, reached=False, failure=f"error: {e}"))
    return records


def _run_trial(job) -> list[TrialRecord]:
    """Top-level worker for the process pool. job: (cfg, side_index, trial_index)"""
    return run_trial(*job)


def summarize_cell(records: Sequence[TrialRecord], side_len: float, scheme: Scheme) -> SchemeSummary:
    found = [r.e2e for r in records if r.reached]
    means, stderrs = {}, {}
    for name in E2E_FIELDS:
        values = np.array([getattr(e, name) for e in found], dtype=float)
        means[name] = float(values.mean()) if values.size else None
        stderrs[name] = float(values.std(ddof=1) / np.sqrt(values.size)) if values.size >= 2 else None
    return SchemeSummary(
        side_len=side_len,
        scheme=scheme.name,
        metric_kind=scheme.kind_label,
        n_trials=len(records),
        n_discovered=len(found),
        n_connected=sum(r.connected for r in records),
        means=means,
        stderrs=stderrs,
    )


def run_sweep(cfg: SimConfig, keep_trials: bool = False) -> SweepResult:
    """
    Run every scheme over every (side length, trial) topology and aggregate.

    Per-trial failures are recorded in the trial records, never raised.
    """
    result = SweepResult(cfg)
    jobs = [(cfg, s, t) for s in range(len(cfg.side_lengths)) for t in range(cfg.n_trials)]

    if cfg.workers > 1:
        with Pool(cfg.workers) as pool:
            outputs = list(pool.imap(_run_trial, jobs, chunksize=max(1, len(jobs) // (4 * cfg.workers))))
    else:
        outputs = [_run_trial(job) for job in jobs]

    for s, side_len in enumerate(cfg.side_lengths):
        block = outputs[s * cfg.n_trials:(s + 1) * cfg.n_trials]
        flat = [r for records in block for r in records]
        for scheme in cfg.schemes:
            cell = [r for r in flat if r.scheme == scheme.name]
            summary = summarize_cell(cell, side_len, scheme)
            result.summaries.append(summary)
            result.errors.extend(f"SL={side_len} trial={r.trial} {r.scheme}: {r.failure}"
                                 for r in cell if r.failure and r.failure.startswith("error:"))
        connected = sum(records[0].connected for records in block if records)
        found = ", ".join(f"{s.scheme}={s.n_discovered}" for s in result.summaries[-len(cfg.schemes):]) \
            if cfg.schemes else "no schemes"
        logger.info(f"side length {side_len:g} m: {connected}/{cfg.n_trials} connected; discovered {found}")
        if keep_trials:
            result.trials.extend(flat)
    return result
