"""
CSV output of sweeps.

One row per (side length, scheme). Floats are written with repr() so a
re-read gives back the exact value; missing statistics are blank.
"""

import csv
from typing import IO, Iterable

from .sweep import E2E_FIELDS, SweepResult, TrialRecord

CSV_COLUMNS = [
    "side_len", "scheme", "metric_kind", "discovery_rate",
    "mean_pdr", "se_pdr",
    "mean_exnt", "se_exnt",
    "mean_distance_m", "se_distance_m",
    "mean_energy_j", "se_energy_j",
    "mean_delay_s", "se_delay_s",
    "n_discovered", "n_trials", "connectivity_rate",
]

TRIAL_COLUMNS = [
    "side_len", "trial", "scheme", "metric_kind", "connected", "reached",
    "pdr", "exnt", "distance_m", "energy_j", "delay_s", "hop_count", "failure",
]

_SUFFIX = {"pdr": "pdr", "exnt": "exnt", "distance": "distance_m", "energy": "energy_j", "delay": "delay_s"}


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def summarize(result: SweepResult) -> list[dict]:
    """Flatten a sweep into CSV rows, in (side length, scheme) order."""
    rows = []
    for s in result.summaries:
        row = {
            "side_len": s.side_len,
            "scheme": s.scheme,
            "metric_kind": s.metric_kind,
            "discovery_rate": s.discovery_rate,
        }
        for name in E2E_FIELDS:
            row[f"mean_{_SUFFIX[name]}"] = s.means[name]
            row[f"se_{_SUFFIX[name]}"] = s.stderrs[name]
        row["n_discovered"] = s.n_discovered
        row["n_trials"] = s.n_trials
        row["connectivity_rate"] = s.connectivity_rate
        rows.append(row)
    return rows


def write_csv(rows: Iterable[dict], out: IO, columns=CSV_COLUMNS):
    writer = csv.DictWriter(out, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(row.get(k)) for k in columns})


def trial_rows(trials: Iterable[TrialRecord]) -> list[dict]:
    """Raw per-trial records, one row per (side length, trial, scheme)."""
    rows = []
    for t in trials:
        e = t.e2e
        rows.append({
            "side_len": t.side_len,
            "trial": t.trial,
            "scheme": t.scheme,
            "metric_kind": t.metric_kind,
            "connected": t.connected,
            "reached": t.reached,
            "pdr": e.pdr if e else None,
            "exnt": e.exnt if e else None,
            "distance_m": e.distance if e else None,
            "energy_j": e.energy if e else None,
            "delay_s": e.delay if e else None,
            "hop_count": e.hop_count if e else None,
            "failure": t.failure,
        })
    return rows
