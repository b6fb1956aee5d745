"""
Routing schemes compared in sweeps.

A scheme is a router family plus a metric: LOR (local metrics), GOR
(global metrics) or TUR (the unicast baseline, no metric).
"""

from dataclasses import dataclass
from typing import Optional

from src.constants.errors import ConfigError
from src.constants.params import MetricKind


@dataclass(frozen=True)
class Scheme:
    name: str
    kind: Optional[MetricKind]

    @property
    def is_tur(self) -> bool:
        return self.kind is None

    @property
    def kind_label(self) -> str:
        return self.kind.value if self.kind is not None else "TUR"


SCHEMES = {
    "LOR-DP": MetricKind.DP,
    "LOR-EDP": MetricKind.EDP,
    "LOR-EEM": MetricKind.EEM_LOCAL,
    "LOR-LLM": MetricKind.LLM_LOCAL,
    "LOR-ExNT": MetricKind.EXNT_LOCAL,
    "GOR-EEM": MetricKind.EEM_GLOBAL,
    "GOR-LLM": MetricKind.LLM_GLOBAL,
    "GOR-ExNT": MetricKind.EXNT_GLOBAL,
    "TUR": None,
}

DEFAULT_SCHEMES = ("LOR-DP", "LOR-EDP", "LOR-ExNT", "GOR-ExNT", "TUR")


def parse_scheme(name: str) -> Scheme:
    """Scheme from its name, matched case-insensitively ("lor-exnt" == "LOR-ExNT")."""
    key = name.strip()
    for known, kind in SCHEMES.items():
        if known.lower() == key.lower():
            return Scheme(known, kind)
    raise ConfigError(f"unknown scheme '{name}', expected one of {', '.join(SCHEMES)}")


def parse_schemes(names) -> tuple[Scheme, ...]:
    if isinstance(names, str):
        names = [n for n in names.split(",") if n.strip()]
    return tuple(parse_scheme(n) if isinstance(n, str) else n for n in names)
