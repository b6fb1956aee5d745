"""
Text format for topologies.

    # comment
    side_len = 4.0
    source = 0
    dest = 3
    acoustic_range = 2.5
    0 0.0 0.0
    1 1.5 0.25
    ...

Header keys may appear in any order before or between node lines; `source`
and `dest` are required, `side_len` and `acoustic_range` optional. Node ids
must be 0..M-1 (lines may come in any order).
"""

import logging
from pathlib import Path
from typing import Union

from lark import Lark, Transformer, UnexpectedInput

from src.constants.errors import ConfigError, TopologyFormatError
from src.topology.geometry import NetworkTopology, Node

logger = logging.getLogger(__name__)

_GRAMMAR_PATH = Path(__file__).resolve().parent.parent / "constants" / "topology.lark"
_PARSER = Lark(_GRAMMAR_PATH.read_text(encoding="utf-8"), parser="lalr")


class _TopologyTransformer(Transformer):
    def header(self, items):
        key, value = items
        return ("header", str(key), value)

    def node(self, items):
        node_id, x, y = items
        return ("node", node_id, x, y)

    def line(self, items):
        return items[0] if items else None

    def start(self, items):
        return [item for item in items if item is not None]


def _source_line(text: str, line_no: int) -> str:
    lines = text.splitlines()
    return lines[line_no - 1] if 1 <= line_no <= len(lines) else ""


def parse_topology(text: str) -> NetworkTopology:
    """Parse topology text; raises TopologyFormatError with a caret block on bad input."""
    if text and not text.endswith("\n"):
        text += "\n"
    try:
        entries = _TopologyTransformer().transform(_PARSER.parse(text))
    except UnexpectedInput as e:
        line_no = getattr(e, "line", 1) or 1
        col_no = getattr(e, "column", 1) or 1
        raise TopologyFormatError("unexpected input in topology file",
                                  _source_line(text, line_no), line_no, col_no)

    header: dict[str, float] = {}
    coords: dict[int, tuple[float, float]] = {}
    at: dict[tuple[float, float], int] = {}
    for entry in entries:
        if entry[0] == "header":
            _, key, token = entry
            if key in header:
                raise TopologyFormatError(f"duplicate header key '{key}'",
                                          _source_line(text, token.line), token.line, token.column)
            header[key] = float(token)
        else:
            _, id_tok, x_tok, y_tok = entry
            node_id = int(id_tok)
            if node_id in coords:
                raise TopologyFormatError(f"duplicate node id {node_id}",
                                          _source_line(text, id_tok.line), id_tok.line, id_tok.column)
            pos = (float(x_tok), float(y_tok))
            if pos in at:
                raise TopologyFormatError(f"node {node_id} sits on node {at[pos]}",
                                          _source_line(text, id_tok.line), id_tok.line, id_tok.column)
            coords[node_id] = pos
            at[pos] = node_id

    for key in ("source", "dest"):
        if key not in header:
            raise TopologyFormatError(f"missing header '{key}'")
        if header[key] != int(header[key]):
            raise TopologyFormatError(f"'{key}' must be a node id, got {header[key]}")
    if sorted(coords) != list(range(len(coords))):
        raise TopologyFormatError(f"node ids must be dense 0..{len(coords) - 1}")

    nodes = tuple(Node(k, *coords[k]) for k in range(len(coords)))
    try:
        return NetworkTopology(nodes, source=int(header["source"]), dest=int(header["dest"]),
                               acoustic_range=header.get("acoustic_range"),
                               side_len=header.get("side_len"))
    except ConfigError as e:
        raise TopologyFormatError(str(e))


def load_topology(path: Union[str, Path]) -> NetworkTopology:
    topo = parse_topology(Path(path).read_text(encoding="utf-8"))
    logger.debug("loaded %d nodes from %s", len(topo), path)
    return topo


def format_topology(topo: NetworkTopology) -> str:
    lines = ["# SectOR topology: id x y"]
    if topo.side_len is not None:
        lines.append(f"side_len = {float(topo.side_len)!r}")
    lines.append(f"source = {topo.source}")
    lines.append(f"dest = {topo.dest}")
    if topo.acoustic_range is not None:
        lines.append(f"acoustic_range = {float(topo.acoustic_range)!r}")
    lines.extend(f"{n.id} {float(n.x)!r} {float(n.y)!r}" for n in topo.nodes)
    return "\n".join(lines) + "\n"


def save_topology(topo: NetworkTopology, path: Union[str, Path]):
    Path(path).write_text(format_topology(topo), encoding="utf-8")
