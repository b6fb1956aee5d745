"""
SectOR command line.

Usage:
    python -m src link  --theta 0.336 --distance 2.0
    python -m src link  --sweep-theta 0.336:0.667:8
    python -m src route --topology net.txt --scheme GOR-ExNT
    python -m src route --seed 7 --side-len 6 --scheme LOR-EDP
    python -m src topo-gen --side-len 6 --n-nodes 50 --seed 7 -o net.txt
    python -m src sweep --side-lengths 4,6,8,10 --n-trials 200 -o sweep.csv

Parameters come from the built-in defaults, then the file named by
--config (or $SECTOR_CONFIG), then --set key=value flags, then the
dedicated flags of each subcommand.

Exit codes: 0 success (an undiscovered route is a result, not a failure),
1 formula domain error (e.g. an infeasible link), 2 bad arguments or
parameter file.
"""

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

import numpy as np

from src.benchmark import route_tur
from src.channel import LinkGeometry, gain_at_distance
from src.config import build_routing, load_config, merge, parse_config, sweep_settings
from src.constants.errors import ConfigError, DomainError
from src.link import achievable_rate, evaluate_link, received_power
from src.protocol import RouteMode, route_packet, route_to_dict
from src.protocol.router import e2e_to_dict
from src.sim import (
    DEFAULT_MASTER_SEED,
    FULL_N_TRIALS,
    TRIAL_COLUMNS,
    SimConfig,
    parse_scheme,
    run_sweep,
    summarize,
    trial_rows,
    write_csv,
)
from src.topology import CoverageModel, format_topology, generate_random, load_topology

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


def _grid(spec: str) -> np.ndarray:
    """'a:b:n' -> n evenly spaced values from a to b inclusive."""
    try:
        a, b, n = spec.split(":")
        values = np.linspace(float(a), float(b), int(n))
    except ValueError:
        raise ConfigError(f"expected start:stop:count, got '{spec}'")
    if values.size < 1:
        raise ConfigError(f"empty grid '{spec}'")
    return values


def _settings(args) -> dict:
    layers = [load_config(args.config)]
    if args.set:
        layers.append(parse_config("\n".join(args.set)))
    return merge(*layers)


# ---------------------------------------------------------------- link

def cmd_link(args) -> int:
    cfg = build_routing(_settings(args))
    model = CoverageModel(cfg)
    model.require_feasible()
    tr, water, targets = cfg.transceiver, cfg.water, cfg.targets

    thetas = _grid(args.sweep_theta) if args.sweep_theta else np.array([args.theta if args.theta is not None
                                                                       else tr.theta_min])
    distances = _grid(args.sweep_distance) if args.sweep_distance else \
        [args.distance] if args.distance is not None else [None]

    print(f"d_min = {model.d_min!r}")
    print(f"d_max = {model.d_max!r}")
    columns = ["theta", "distance_m", "range_m", "ber", "per", "pdr", "exnt", "rate_bps"]
    print("\t".join(columns))
    for theta in thetas:
        reach = float(model.max_range(float(theta)))
        for d in distances:
            d = reach if d is None else float(d)
            budget = evaluate_link(cfg, float(theta), LinkGeometry.from_distance(d))
            p_rx = received_power(tr, tr, gain_at_distance(water, tr.aperture, float(theta), d))
            rate = achievable_rate(float(p_rx), targets.target_per, targets.packet_L, tr,
                                   water.wavelength, cfg.tolerance) if p_rx > 0 else 0.0
            row = [float(theta), d, reach, budget.ber, budget.per, budget.pdr, budget.exnt, rate]
            print("\t".join(f"{v:.10g}" for v in row))
    return 0


# ---------------------------------------------------------------- route

def cmd_route(args) -> int:
    values = _settings(args)
    cfg = build_routing(values)
    acoustic = args.acoustic_range if args.acoustic_range is not None else values.get("acoustic_range")
    if args.topology:
        topo = load_topology(args.topology)
    else:
        topo = generate_random(args.side_len, args.n_nodes, seed=args.seed, acoustic_range=acoustic)

    scheme = parse_scheme(args.scheme)
    if scheme.is_tur:
        tur = route_tur(topo, cfg, debug=args.verbose)
        record = {
            "metric": "TUR",
            "reached": tur.reached,
            "failure": tur.errors[0] if tur.errors else None,
            "path": tur.path,
            "total_distance_m": tur.total_distance if tur.reached else None,
            "hops": [
                {"forwarder": a, "chosen_next": b, "pdr_bc": h.pdr_bc, "exnt_bc": h.exnt_bc,
                 "distance_m": h.distance_m, "energy_j": h.energy_j, "delay_s": h.delay_s}
                for a, b, h in zip(tur.path, tur.path[1:], tur.hops)
            ],
            "e2e": e2e_to_dict(tur.e2e),
        }
    else:
        seed = args.route_seed if args.route_seed is not None else values.get("master_seed", DEFAULT_MASTER_SEED)
        result = route_packet(topo, scheme.kind, cfg, mode=RouteMode(args.mode), seed=seed, debug=args.verbose)
        record = route_to_dict(result)
    record["scheme"] = scheme.name
    print(json.dumps(record, indent=2))
    return 0


# ---------------------------------------------------------------- topo-gen

def cmd_topo_gen(args) -> int:
    topo = generate_random(args.side_len, args.n_nodes, seed=args.seed, acoustic_range=args.acoustic_range)
    text = format_topology(topo)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
        print(f"✓ {len(topo)} nodes written to {args.output}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------- sweep

def cmd_sweep(args) -> int:
    values = _settings(args)
    flags = {
        "side_lengths": tuple(float(s) for s in args.side_lengths.split(",")) if args.side_lengths else None,
        "n_nodes": args.n_nodes,
        "n_trials": FULL_N_TRIALS if args.full_scale else args.n_trials,
        "schemes": args.schemes,
        "master_seed": args.master_seed,
        "workers": args.workers,
        "route_mode": args.mode,
        "acoustic_range": args.acoustic_range,
    }
    values = merge(values, flags)
    sim = SimConfig(**sweep_settings(values), routing=build_routing(values))
    logger.info(f"sweep: {len(sim.side_lengths)} side lengths x {sim.n_trials} trials x {len(sim.schemes)} schemes")

    result = run_sweep(sim, keep_trials=bool(args.dump_trials))
    rows = summarize(result)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as f:
            write_csv(rows, f)
        print(f"✓ {len(rows)} rows written to {args.output}", file=sys.stderr)
    else:
        write_csv(rows, sys.stdout)
    if args.dump_trials:
        with open(args.dump_trials, "w", encoding="utf-8", newline="") as f:
            write_csv(trial_rows(result.trials), f, columns=TRIAL_COLUMNS)
    for err in result.errors:
        logger.warning(err)
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="parameter file (default: $SECTOR_CONFIG)")
    common.add_argument("--set", action="append", metavar="KEY=VALUE", default=[],
                        help="override one parameter; may be repeated")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(prog="python -m src", description="SectOR underwater optical routing simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("link", parents=[common], help="link budget and range tables")
    p.add_argument("--theta", type=float, help="divergence angle, rad (default theta_min)")
    p.add_argument("--distance", type=float, help="link distance, m (default: range at theta)")
    p.add_argument("--sweep-theta", metavar="A:B:N", help="N divergence angles from A to B")
    p.add_argument("--sweep-distance", metavar="A:B:N", help="N distances from A to B")
    p.set_defaults(func=cmd_link)

    p = sub.add_parser("route", parents=[common], help="route one packet and print the hop trace as JSON")
    p.add_argument("--topology", help="topology file; otherwise a random one is drawn")
    p.add_argument("--seed", type=int, default=0, help="placement seed for a random topology")
    p.add_argument("--side-len", type=float, default=6.0, help="side length of a random topology, m")
    p.add_argument("--n-nodes", type=int, default=50, help="relays in a random topology")
    p.add_argument("--acoustic-range", type=float, help="control-plane range of a random topology, m")
    p.add_argument("--scheme", default="LOR-ExNT", help="LOR-DP, LOR-EDP, LOR-EEM, LOR-LLM, LOR-ExNT, "
                                                       "GOR-EEM, GOR-LLM, GOR-ExNT or TUR")
    p.add_argument("--mode", choices=[m.value for m in RouteMode], default=RouteMode.EXPECTED.value)
    p.add_argument("--route-seed", type=int,
                   help="seed of sampled receptions in stochastic mode (default: master_seed)")
    p.set_defaults(func=cmd_route)

    p = sub.add_parser("topo-gen", parents=[common], help="draw a random topology")
    p.add_argument("--side-len", type=float, required=True)
    p.add_argument("--n-nodes", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--acoustic-range", type=float)
    p.add_argument("-o", "--output", help="write here instead of stdout")
    p.set_defaults(func=cmd_topo_gen)

    p = sub.add_parser("sweep", parents=[common], help="Monte Carlo sweep over side lengths, CSV out")
    p.add_argument("--side-lengths", help="comma-separated side lengths, m")
    p.add_argument("--n-nodes", type=int)
    p.add_argument("--n-trials", type=int)
    p.add_argument("--full-scale", action="store_true", help=f"run {FULL_N_TRIALS} trials per side length")
    p.add_argument("--schemes", help="comma-separated scheme names")
    p.add_argument("--master-seed", type=int)
    p.add_argument("--workers", type=int, help="worker processes")
    p.add_argument("--mode", choices=[m.value for m in RouteMode])
    p.add_argument("--acoustic-range", type=float)
    p.add_argument("-o", "--output", help="CSV path (default stdout)")
    p.add_argument("--dump-trials", metavar="PATH", help="also write every per-trial record")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format=LOG_FORMAT)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"✗ {e}", file=sys.stderr)
        return 2
    except DomainError as e:
        print(f"✗ {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"✗ {e}", file=sys.stderr)
        return 2
