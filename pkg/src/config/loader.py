"""
Parameter files.

    # reference operating point
    p_tx = 0.1
    theta_min = 0.336
    coord_scheme = FSA
    side_lengths = 4, 6, 8, 10
    schemes = LOR-DP, GOR-ExNT, TUR

Keys follow the parameter-table symbols. Every key is optional; values
fall back to the built-in defaults. Precedence when assembling a run:
defaults < file < command-line flags.
"""

import os
from dataclasses import replace
from pathlib import Path
from typing import Callable, Mapping, Optional, Union

from lark import Lark, Token, UnexpectedInput

from src.constants.errors import ConfigError
from src.constants.params import RoutingConfig

CONFIG_ENV = "SECTOR_CONFIG"

_GRAMMAR_PATH = Path(__file__).resolve().parent.parent / "constants" / "config.lark"
_PARSER = Lark(_GRAMMAR_PATH.read_text(encoding="utf-8"), parser="lalr")


def _float_list(raw: str) -> tuple[float, ...]:
    return tuple(float(v) for v in raw.split(",") if v.strip())


def _name_list(raw: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in raw.split(",") if v.strip())


# key -> (section, converter); section None means a sweep setting
KEYS: dict[str, tuple[Optional[str], Callable]] = {
    "extinction_c": ("water", float),
    "alpha": ("water", float),
    "wavelength": ("water", float),
    "p_tx": ("transceiver", float),
    "eta_tx": ("transceiver", float),
    "eta_rx": ("transceiver", float),
    "eta_c": ("transceiver", float),
    "aperture": ("transceiver", float),
    "pulse_T": ("transceiver", float),
    "theta_min": ("transceiver", float),
    "theta_max": ("transceiver", float),
    "planck_h": ("transceiver", float),
    "light_speed_water": ("transceiver", float),
    "f_dc": ("transceiver", float),
    "f_bg": ("transceiver", float),
    "rate_R": ("targets", float),
    "target_per": ("targets", float),
    "packet_L": ("targets", int),
    "max_retx_K": ("targets", int),
    "p_listen": ("energy", float),
    "p_coord": ("energy", float),
    "tau_sifs": ("energy", float),
    "tau_ack": ("energy", float),
    "tau_sens": ("energy", float),
    "coord_scheme": ("energy", str),
    "pointing_mode": ("routing", str),
    "global_order": ("routing", str),
    "edp_rule": ("routing", str),
    "search_range": ("routing", float),
    "side_lengths": (None, _float_list),
    "n_nodes": (None, int),
    "n_trials": (None, int),
    "master_seed": (None, int),
    "schemes": (None, _name_list),
    "workers": (None, int),
    "route_mode": (None, str),
    "acoustic_range": (None, float),
}

ROUTING_SECTIONS = ("water", "transceiver", "targets", "energy")


def _source_line(text: str, line_no: int) -> str:
    lines = text.splitlines()
    return lines[line_no - 1] if 1 <= line_no <= len(lines) else ""


def parse_config(text: str) -> dict[str, object]:
    """
    Parse parameter text into converted values keyed by parameter name.

    Raises:
        ConfigError: syntax error, unknown or duplicate key, or a value
            that does not convert; the message carries a caret block
    """
    if text and not text.endswith("\n"):
        text += "\n"
    try:
        tree = _PARSER.parse(text)
    except UnexpectedInput as e:
        line_no = getattr(e, "line", 1) or 1
        col_no = getattr(e, "column", 1) or 1
        raise ConfigError("expected 'key = value'", _source_line(text, line_no), line_no, col_no)

    values: dict[str, object] = {}
    for entry in tree.find_data("entry"):
        key_tok, value_tok = entry.children
        key: Token = key_tok
        where = (_source_line(text, key.line), key.line, key.column)
        if str(key) not in KEYS:
            raise ConfigError(f"unknown parameter '{key}'", *where)
        if str(key) in values:
            raise ConfigError(f"duplicate parameter '{key}'", *where)
        _, convert = KEYS[str(key)]
        raw = str(value_tok).strip()
        try:
            values[str(key)] = convert(raw)
        except ValueError:
            raise ConfigError(f"bad value '{raw}' for '{key}'",
                              _source_line(text, value_tok.line), value_tok.line, value_tok.column)
    return values


def load_config(path: Union[str, Path, None] = None) -> dict[str, object]:
    """
    Read a parameter file; without a path fall back to $SECTOR_CONFIG.

    Returns an empty mapping when neither is given.
    """
    if path is None:
        path = os.environ.get(CONFIG_ENV) or None
    if path is None:
        return {}
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read parameter file {path}: {e.strerror}")
    return parse_config(text)


def build_routing(values: Mapping[str, object], base: Optional[RoutingConfig] = None) -> RoutingConfig:
    """Apply the routing-related entries of `values` on top of `base`."""
    cfg = base if base is not None else RoutingConfig()
    blocks = {}
    for section in ROUTING_SECTIONS:
        changes = {k: v for k, v in values.items() if v is not None and KEYS[k][0] == section}
        if changes:
            blocks[section] = replace(getattr(cfg, section), **changes)
    top = {k: v for k, v in values.items() if v is not None and KEYS[k][0] == "routing"}
    return replace(cfg, **blocks, **top)


def sweep_settings(values: Mapping[str, object]) -> dict[str, object]:
    """Entries of `values` that configure the sweep itself."""
    return {k: v for k, v in values.items() if v is not None and KEYS[k][0] is None}


def merge(*layers: Mapping[str, object]) -> dict[str, object]:
    """Later layers win; None values do not override."""
    out: dict[str, object] = {}
    for layer in layers:
        out.update({k: v for k, v in layer.items() if v is not None})
    return out
