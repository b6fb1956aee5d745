"""
Planar network geometry: nodes, topologies, bearings and search spaces.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from src.constants.errors import ConfigError, DomainError

TWO_PI = 2.0 * math.pi


class SearchMode(str, Enum):
    """LOCAL keeps only nodes closer to the destination; GLOBAL keeps every node in range."""
    LOCAL = "local"
    GLOBAL = "global"


@dataclass(frozen=True)
class Node:
    id: int
    x: float
    y: float

    @property
    def pos(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class NetworkTopology:
    """
    Immutable planar network.

    Attributes:
        nodes (tuple[Node, ...]): ids must be 0..M-1 in order
        source (int): id of the source node
        dest (int): id of the destination (sink) node
        acoustic_range (Optional[float]): acoustic control-plane reach, m; None means
            "same as the optical d_max"
        side_len (Optional[float]): side of the deployment square, m, when known
    """
    nodes: tuple
    source: int
    dest: int
    acoustic_range: Optional[float] = None
    side_len: Optional[float] = None
    positions: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nodes = tuple(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        for expected, node in enumerate(nodes):
            if node.id != expected:
                raise ConfigError(f"node ids must be dense 0..{len(nodes) - 1}, found {node.id} at {expected}")
        for name in ("source", "dest"):
            value = getattr(self, name)
            if not 0 <= value < len(nodes):
                raise ConfigError(f"{name} id {value} is not a node")
        if self.source == self.dest:
            raise ConfigError("source and destination must differ")
        if self.acoustic_range is not None and not self.acoustic_range > 0:
            raise ConfigError(f"acoustic_range must be > 0, got {self.acoustic_range}")

        positions = np.array([[n.x, n.y] for n in nodes], dtype=float).reshape(len(nodes), 2)
        positions.setflags(write=False)
        object.__setattr__(self, "positions", positions)

    def __len__(self) -> int:
        return len(self.nodes)

    def distance(self, a: int, b: int) -> float:
        return float(math.hypot(*(self.positions[b] - self.positions[a])))

    def distances_from(self, a: int) -> np.ndarray:
        return np.hypot(*(self.positions - self.positions[a]).T)

    @property
    def dest_distances(self) -> np.ndarray:
        """Distance of every node to the destination."""
        return self.distances_from(self.dest)


def wrap_angle(angle):
    """Map an angle (or array of angles) into [-pi, pi)."""
    return (np.asarray(angle) + math.pi) % TWO_PI - math.pi


def angular_offset(bearings, psi):
    """|wrap(bearing - psi)|: how far a direction lies from the beam axis."""
    return np.abs(wrap_angle(np.asarray(bearings) - psi))


def bearing(src: Node, dst: Node) -> float:
    """Planar angle of the vector src -> dst, in [0, 2*pi)."""
    dx, dy = dst.x - src.x, dst.y - src.y
    if dx == 0 and dy == 0:
        raise DomainError(f"nodes {src.id} and {dst.id} share a position")
    return math.atan2(dy, dx) % TWO_PI


def bearings_from(topo: NetworkTopology, i: int, targets: Sequence[int]) -> np.ndarray:
    rel = topo.positions[list(targets)] - topo.positions[i]
    return np.arctan2(rel[:, 1], rel[:, 0]) % TWO_PI


def search_space(topo: NetworkTopology, i: int, mode: SearchMode, radius: float) -> tuple[int, ...]:
    """
    Nodes a forwarder may consider, sorted by id.

    LOCAL: within `radius` of i and strictly closer to the destination than i.
    GLOBAL: every node within `radius` of i. Node i itself is never included.
    """
    if not 0 <= i < len(topo):
        raise ConfigError(f"node {i} is not in the topology")
    near = topo.distances_from(i) <= radius
    near[i] = False
    if SearchMode(mode) is SearchMode.LOCAL:
        to_dest = topo.dest_distances
        near &= to_dest < to_dest[i]
    return tuple(int(x) for x in np.flatnonzero(near))


def generate_random(side_len: float, n_nodes: int, seed=None,
                    acoustic_range: Optional[float] = None) -> NetworkTopology:
    """
    Source at (0, 0), destination at (side_len, side_len), and n_nodes relays
    drawn uniformly over the square.

    Node 0 is the source, nodes 1..n_nodes are relays, node n_nodes + 1 is the
    destination. `seed` is anything numpy.random.default_rng accepts.
    """
    if not side_len > 0:
        raise ConfigError(f"side_len must be > 0, got {side_len}")
    if n_nodes < 0:
        raise ConfigError(f"n_nodes must be >= 0, got {n_nodes}")

    rng = np.random.default_rng(seed)
    relays = rng.uniform(0.0, side_len, size=(n_nodes, 2))
    coords = [(0.0, 0.0)] + [(float(x), float(y)) for x, y in relays] + [(float(side_len), float(side_len))]
    nodes = tuple(Node(k, x, y) for k, (x, y) in enumerate(coords))
    return NetworkTopology(nodes, source=0, dest=n_nodes + 1,
                           acoustic_range=acoustic_range, side_len=float(side_len))
