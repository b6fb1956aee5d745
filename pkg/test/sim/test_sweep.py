import csv
import io
import math
import os
import sys

import numpy as np
import pytest

# Add project root to path
ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from src.constants.errors import ConfigError
from src.sim import (
    CSV_COLUMNS,
    SCHEMES,
    TRIAL_COLUMNS,
    SimConfig,
    parse_scheme,
    parse_schemes,
    run_trial,
    simulate,
    trial_rows,
    trial_topology,
    write_csv,
)

ALL_SCHEMES = tuple(SCHEMES)
SMALL = SimConfig(side_lengths=(1.0, 5.0), n_nodes=10, n_trials=8, schemes=ALL_SCHEMES, master_seed=7)


def _csv_text(rows, columns=CSV_COLUMNS):
    out = io.StringIO()
    write_csv(rows, out, columns)
    return out.getvalue()


@pytest.fixture(scope="module")
def small_sweep():
    return simulate(SMALL, keep_trials=True)


def test_one_row_per_side_length_and_scheme(small_sweep):
    result, rows = small_sweep
    assert len(rows) == len(SMALL.side_lengths) * len(ALL_SCHEMES)
    assert [(r["side_len"], r["scheme"]) for r in rows] == \
        [(s, name) for s in SMALL.side_lengths for name in ALL_SCHEMES]
    assert result.errors == []
    header = _csv_text(rows).splitlines()[0]
    assert header == ",".join(CSV_COLUMNS)


def test_short_side_always_discovers(small_sweep):
    _, rows = small_sweep
    for row in rows:
        if row["side_len"] == 1.0:
            assert row["discovery_rate"] == 1.0, row["scheme"]
            assert row["connectivity_rate"] == 1.0


def test_global_exnt_and_tur_track_connectivity(small_sweep):
    _, rows = small_sweep
    by_cell = {(r["side_len"], r["scheme"]): r for r in rows}
    for side in SMALL.side_lengths:
        tur = by_cell[(side, "TUR")]
        gor = by_cell[(side, "GOR-ExNT")]
        assert tur["discovery_rate"] == tur["connectivity_rate"]
        assert gor["discovery_rate"] == tur["connectivity_rate"]
        for name in ALL_SCHEMES:
            assert by_cell[(side, name)]["discovery_rate"] <= tur["connectivity_rate"]


def test_means_recompute_from_trials(small_sweep):
    result, rows = small_sweep
    trials = trial_rows(result.trials)
    assert len(trials) == len(SMALL.side_lengths) * SMALL.n_trials * len(ALL_SCHEMES)
    for row in rows:
        cell = [t for t in trials if t["side_len"] == row["side_len"] and t["scheme"] == row["scheme"]]
        found = [t for t in cell if t["reached"]]
        assert row["n_discovered"] == len(found)
        assert row["n_trials"] == len(cell) == SMALL.n_trials
        if not found:
            assert row["mean_pdr"] is None
            continue
        pdrs = np.array([t["pdr"] for t in found])
        assert math.isclose(row["mean_pdr"], pdrs.mean(), rel_tol=1e-12)
        if len(found) >= 2:
            assert math.isclose(row["se_pdr"], pdrs.std(ddof=1) / math.sqrt(len(found)), rel_tol=1e-12)
        else:
            assert row["se_pdr"] is None


def test_schemes_share_one_topology_per_trial():
    records = run_trial(SMALL, 1, 3)
    assert [r.scheme for r in records] == list(ALL_SCHEMES)
    assert len({r.connected for r in records}) == 1
    a = trial_topology(SMALL, 1, 3)
    b = trial_topology(SMALL, 1, 3)
    assert np.array_equal(a.positions, b.positions)
    assert not np.array_equal(a.positions, trial_topology(SMALL, 1, 4).positions)


def test_sweep_is_deterministic(small_sweep):
    _, rows = small_sweep
    _, again = simulate(SMALL)
    assert _csv_text(rows) == _csv_text(again)


def test_worker_count_does_not_change_results(small_sweep):
    _, rows = small_sweep
    cfg = SimConfig(side_lengths=SMALL.side_lengths, n_nodes=SMALL.n_nodes, n_trials=SMALL.n_trials,
                    schemes=SMALL.schemes, master_seed=SMALL.master_seed, workers=2)
    _, parallel = simulate(cfg)
    assert _csv_text(parallel) == _csv_text(rows)


def test_stochastic_mode_discovers_no_more_than_expected():
    base = dict(side_lengths=(4.0,), n_nodes=15, n_trials=6, schemes="LOR-ExNT,GOR-ExNT,TUR", master_seed=3)
    _, expected = simulate(SimConfig(**base))
    _, sampled = simulate(SimConfig(**base, route_mode="stochastic"))
    _, sampled_again = simulate(SimConfig(**base, route_mode="stochastic"))
    assert _csv_text(sampled) == _csv_text(sampled_again)
    for e, s in zip(expected, sampled):
        assert s["discovery_rate"] <= e["connectivity_rate"]
        assert s["connectivity_rate"] == e["connectivity_rate"]


def test_no_schemes_writes_header_only():
    result, rows = simulate(SimConfig(side_lengths=(4.0,), n_nodes=5, n_trials=2, schemes=()))
    assert rows == []
    assert _csv_text(rows) == ",".join(CSV_COLUMNS) + "\n"


def test_trial_dump_columns(small_sweep):
    result, _ = small_sweep
    text = _csv_text(trial_rows(result.trials), TRIAL_COLUMNS)
    reader = csv.DictReader(io.StringIO(text))
    first = next(reader)
    assert list(first) == TRIAL_COLUMNS
    assert first["reached"] in ("true", "false")


def test_scheme_names():
    assert parse_scheme("gor-exnt").name == "GOR-ExNT"
    assert parse_scheme("TUR").is_tur
    assert [s.name for s in parse_schemes("LOR-DP, lor-edp")] == ["LOR-DP", "LOR-EDP"]
    with pytest.raises(ConfigError):
        parse_scheme("LOR-XYZ")


@pytest.mark.parametrize("changes", [
    dict(side_lengths=()),
    dict(side_lengths=(4.0, -1.0)),
    dict(n_trials=0),
    dict(n_nodes=-1),
    dict(workers=0),
    dict(master_seed=-5),
    dict(schemes="LOR-DP,nope"),
], ids=["no-sides", "negative-side", "no-trials", "negative-nodes", "no-workers", "negative-seed", "bad-scheme"])
def test_invalid_sim_config(changes):
    with pytest.raises(ConfigError):
        SimConfig(**changes)


def test_trends_across_side_lengths():
    cfg = SimConfig(side_lengths=(2.0, 4.0, 6.0), n_nodes=30, n_trials=10, schemes=ALL_SCHEMES, master_seed=1)
    result, rows = simulate(cfg, keep_trials=True)
    assert result.errors == []
    by_cell = {(r["side_len"], r["scheme"]): r for r in rows}
    for side in cfg.side_lengths:
        tur = by_cell[(side, "TUR")]
        assert by_cell[(side, "GOR-ExNT")]["discovery_rate"] == tur["discovery_rate"] == tur["connectivity_rate"]
        for name in ALL_SCHEMES:
            assert by_cell[(side, name)]["discovery_rate"] <= tur["discovery_rate"], f"{name} at {side} m"

    # the shortest path is never beaten on the same topology
    tur_distance = {(t.side_index, t.trial): t.e2e.distance for t in result.trials if t.scheme == "TUR" and t.reached}
    for t in result.trials:
        if t.reached:
            assert tur_distance[(t.side_index, t.trial)] <= t.e2e.distance + 1e-9, f"{t.scheme} trial {t.trial}"
