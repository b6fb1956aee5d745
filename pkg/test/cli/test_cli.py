import csv
import io
import json
import os
import sys

import pytest

# Add project root to path
ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from src.cli import main
from src.config import CONFIG_ENV
from src.sim import CSV_COLUMNS
from src.topology import load_topology


@pytest.fixture(autouse=True)
def _no_env_config(monkeypatch):
    monkeypatch.delenv(CONFIG_ENV, raising=False)


def _table(out: str):
    lines = out.strip().splitlines()
    header_at = next(n for n, line in enumerate(lines) if line.startswith("theta\t"))
    return lines[:header_at], lines[header_at].split("\t"), [line.split("\t") for line in lines[header_at + 1:]]


def test_link_defaults_to_range_at_narrowest_beam(capsys):
    assert main(["link"]) == 0
    summary, header, rows = _table(capsys.readouterr().out)
    assert summary[0].startswith("d_min = ") and summary[1].startswith("d_max = ")
    d_max = float(summary[1].split("=")[1])
    assert 2.45 < d_max < 2.6
    assert header == ["theta", "distance_m", "range_m", "ber", "per", "pdr", "exnt", "rate_bps"]
    assert len(rows) == 1
    row = dict(zip(header, map(float, rows[0])))
    assert row["distance_m"] == pytest.approx(row["range_m"])
    assert row["per"] == pytest.approx(0.1, rel=1e-6)
    assert row["rate_bps"] == pytest.approx(1e9, rel=1e-6)


def test_link_sweeps(capsys):
    assert main(["link", "--sweep-theta", "0.336:0.667:8"]) == 0
    _, header, rows = _table(capsys.readouterr().out)
    assert len(rows) == 8
    ranges = [float(r[header.index("range_m")]) for r in rows]
    assert ranges == sorted(ranges, reverse=True)

    assert main(["link", "--theta", "0.4", "--sweep-distance", "0.5:2.0:4"]) == 0
    _, header, rows = _table(capsys.readouterr().out)
    pers = [float(r[header.index("per")]) for r in rows]
    assert len(rows) == 4 and pers == sorted(pers)


def test_topo_gen_then_route(tmp_path, capsys):
    path = tmp_path / "net.txt"
    assert main(["topo-gen", "--side-len", "4", "--n-nodes", "20", "--seed", "5", "-o", str(path)]) == 0
    assert "22 nodes written" in capsys.readouterr().err
    topo = load_topology(path)
    assert len(topo) == 22 and topo.dest == 21

    traces = []
    for _ in range(2):
        assert main(["route", "--topology", str(path), "--scheme", "gor-exnt"]) == 0
        traces.append(capsys.readouterr().out)
    assert traces[0] == traces[1]
    record = json.loads(traces[0])
    assert record["scheme"] == "GOR-ExNT"
    assert record["metric"] == "ExNT_global"
    if record["reached"]:
        assert record["path"][0] == 0 and record["path"][-1] == 21
        assert record["e2e"]["hop_count"] == len(record["hops"])


def test_route_tur_and_random_topology(capsys):
    assert main(["route", "--seed", "2", "--side-len", "1.5", "--n-nodes", "10", "--scheme", "TUR"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["metric"] == "TUR" and record["reached"] is True
    assert record["total_distance_m"] >= 1.5 * 2 ** 0.5 - 1e-9

    assert main(["route", "--seed", "2", "--side-len", "3", "--n-nodes", "10", "--scheme", "LOR-EDP",
                 "--mode", "stochastic", "--route-seed", "9"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert all(h["attempts"] is not None for h in record["hops"])


def test_sweep_writes_csv(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    trials = tmp_path / "trials.csv"
    argv = ["sweep", "--side-lengths", "1,5", "--n-nodes", "6", "--n-trials", "3",
            "--schemes", "LOR-DP,GOR-ExNT,TUR", "-o", str(out), "--dump-trials", str(trials)]
    assert main(argv) == 0
    assert "6 rows written" in capsys.readouterr().err
    with open(out, encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    assert list(rows[0]) == CSV_COLUMNS
    assert [(r["side_len"], r["scheme"]) for r in rows[:3]] == [("1.0", "LOR-DP"), ("1.0", "GOR-ExNT"), ("1.0", "TUR")]
    assert all(r["n_trials"] == "3" for r in rows)
    with open(trials, encoding="utf-8") as f:
        assert len(list(csv.DictReader(f))) == 2 * 3 * 3


def test_sweep_to_stdout_with_config_file(tmp_path, capsys):
    params = tmp_path / "params.txt"
    params.write_text("side_lengths = 2\nn_nodes = 4\nn_trials = 2\nschemes = TUR\n", encoding="utf-8")
    assert main(["sweep", "--config", str(params)]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 1 and rows[0]["scheme"] == "TUR" and rows[0]["n_trials"] == "2"

    # flags beat the file
    assert main(["sweep", "--config", str(params), "--n-trials", "3"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert rows[0]["n_trials"] == "3"


@pytest.mark.parametrize("argv, code", [
    (["link", "--set", "bogus = 1"], 2),
    (["link", "--sweep-theta", "0.3:x:4"], 2),
    (["route", "--scheme", "LOR-XYZ"], 2),
    (["route", "--topology", "/nonexistent/net.txt"], 2),
    (["sweep", "--n-trials", "0"], 2),
    (["link", "--set", "extinction_c = 1e5"], 1),
    (["link", "--set", "alpha = 2", "--set", "extinction_c = 1e5", "--set", "p_tx = 1e-6"], 1),
], ids=["unknown-key", "bad-grid", "bad-scheme", "missing-topology", "zero-trials",
        "wide-beam-outreaches", "no-range"])
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code
    assert capsys.readouterr().err.startswith("✗ ")


def test_argparse_rejects_missing_command():
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2


def test_infeasible_link_messages(capsys):
    assert main(["link", "--set", "extinction_c = 1e5"]) == 1
    assert "exceeds range at theta_min" in capsys.readouterr().err

    assert main(["link", "--set", "alpha = 2", "--set", "extinction_c = 1e5", "--set", "p_tx = 1e-6"]) == 1
    assert "exceeds the peak gain" in capsys.readouterr().err


def test_stochastic_route_defaults_to_master_seed(tmp_path, capsys):
    argv = ["route", "--seed", "4", "--side-len", "3", "--n-nodes", "12", "--scheme", "LOR-ExNT",
            "--mode", "stochastic"]
    traces = []
    for _ in range(2):
        assert main(argv) == 0
        traces.append(capsys.readouterr().out)
    assert traces[0] == traces[1]

    params = tmp_path / "params.txt"
    params.write_text("master_seed = 11\n", encoding="utf-8")
    assert main(argv + ["--config", str(params)]) == 0
    from_file = capsys.readouterr().out
    assert main(argv + ["--route-seed", "11"]) == 0
    assert capsys.readouterr().out == from_file
