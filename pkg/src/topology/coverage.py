"""
Sector coverage: which nodes a forwarder reaches for a pointing angle psi and
a divergence angle theta, and the finite families of sectors the router has
to compare.

A sector (psi, theta) covers a node when the node lies within theta/2 of the
beam axis and no farther than the range the link budget allows at theta.
Pointing angles are the bearings to search-space nodes; for each of them the
divergence breakpoints are 2 * |offset| of every node, plus theta_min and
theta_max.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from src.constants.errors import InfeasibleLinkError
from src.constants.params import PointingMode, RoutingConfig
from src.link import max_divergence, max_range, per_at
from src.topology.geometry import (
    NetworkTopology,
    angular_offset,
    bearing,
    bearings_from,
)

logger = logging.getLogger(__name__)

# bearings closer than this are the same pointing angle
BEARING_EPS = 1e-12


@dataclass(frozen=True)
class Sector:
    """
    Circular-sector coverage region of a transmitter.

    Attributes:
        apex (tuple[float, float]): transmitter position, m
        pointing_psi (float): beam axis, rad in [0, 2*pi)
        divergence_theta (float): full beam width, rad
        radius (float): communication range at this divergence, m
    """
    apex: tuple
    pointing_psi: float
    divergence_theta: float
    radius: float


@dataclass(frozen=True)
class Coverage:
    covered: bool
    phi: float
    distance: float


class CoverageModel:
    """
    Range model of one routing configuration.

    Binds the link budget (rate, PER target, optics, water) so that ranges
    and widest usable divergences can be queried by angle or distance alone.
    """

    def __init__(self, cfg: RoutingConfig):
        self.cfg = cfg
        self.theta_min = cfg.transceiver.theta_min
        self.theta_max = cfg.transceiver.theta_max

    def max_range(self, theta):
        """Range at divergence theta (scalar or array), m."""
        tr, targets = self.cfg.transceiver, self.cfg.targets
        return max_range(tr, tr, self.cfg.water, theta, 0.0, targets.rate_R,
                         targets.target_per, targets.packet_L, self.cfg.tolerance)

    @cached_property
    def d_min(self) -> float:
        return float(self.max_range(self.theta_max))

    @cached_property
    def d_max(self) -> float:
        if self.cfg.search_range is not None:
            return self.cfg.search_range
        return float(self.max_range(self.theta_min))

    def require_feasible(self):
        """
        Raises:
            InfeasibleLinkError: the link budget has no range, or the widest
                beam outreaches the narrowest one
        """
        wide, narrow = float(self.max_range(self.theta_max)), float(self.max_range(self.theta_min))
        if wide > narrow:
            raise InfeasibleLinkError(f"range at theta_max ({wide:.4g} m) exceeds range at theta_min ({narrow:.4g} m)")

    def search_radius(self, topo: NetworkTopology) -> float:
        """Optical reach limited by the acoustic control plane."""
        if topo.acoustic_range is None:
            return self.d_max
        return min(self.d_max, topo.acoustic_range)

    def theta_upper(self, distance: float) -> Optional[float]:
        """Widest divergence that still reaches `distance`, or None if none does."""
        tr, targets = self.cfg.transceiver, self.cfg.targets
        return max_divergence(tr, tr, self.cfg.water, distance, targets.rate_R,
                              targets.target_per, targets.packet_L, self.cfg.tolerance)

    def sector(self, apex, psi: float, theta: float) -> Sector:
        return Sector(tuple(float(c) for c in apex), float(psi), float(theta), float(self.max_range(theta)))

    def covers(self, sector: Sector, target) -> Coverage:
        """Whether `target` (a position) lies in `sector`, with its misalignment and distance."""
        dx, dy = target[0] - sector.apex[0], target[1] - sector.apex[1]
        distance = math.hypot(dx, dy)
        if distance == 0:
            return Coverage(False, 0.0, 0.0)
        phi = float(angular_offset(math.atan2(dy, dx), sector.pointing_psi))
        covered = phi <= sector.divergence_theta / 2.0 and distance <= sector.radius
        return Coverage(bool(covered), phi, distance)


def pointing_angles(topo: NetworkTopology, i: int, ss: Sequence[int],
                    mode: PointingMode = PointingMode.SWEEP) -> list[float]:
    """
    Candidate beam directions of node i, ascending (counter-clockwise from +x).

    SWEEP: the bearing to every search-space node, near-identical bearings merged.
    SINK: the bearing to the destination only.
    """
    if PointingMode(mode) is PointingMode.SINK:
        return [bearing(topo.nodes[i], topo.nodes[topo.dest])]
    if not ss:
        return []
    angles = np.sort(bearings_from(topo, i, ss))
    keep = np.concatenate([[True], np.diff(angles) > BEARING_EPS])
    return [float(a) for a in angles[keep]]


@dataclass
class CoverageGrid:
    """
    Every sector a forwarder can form over a node pool.

    Axis 0 runs over pointing angles (ascending), axis 1 over the divergence
    breakpoints of that angle (ascending, padded with repeats of theta_max),
    axis 2 over pool members (ascending id).

    Attributes:
        forwarder (int): transmitting node
        apex (tuple[float, float]): forwarder position
        members (np.ndarray): pool node ids, shape (X,)
        distances (np.ndarray): forwarder -> member distances, shape (X,)
        psis (np.ndarray): pointing angles, shape (P,)
        thetas (np.ndarray): divergence breakpoints, shape (P, B)
        radii (np.ndarray): range at each breakpoint, shape (P, B)
        covered (np.ndarray): coverage mask, shape (P, B, X)
        per (np.ndarray): link PER of each member at each breakpoint, shape (P, B, X)
        theta_source (Optional[np.ndarray]): member index behind each breakpoint,
            -2 / -1 for theta_min / theta_max, shape (P, B)
        member_rows (Optional[np.ndarray]): pointing-angle row of each member,
            shape (X,); None when the angles do not come from the members
    """
    forwarder: int
    apex: tuple
    members: np.ndarray
    distances: np.ndarray
    psis: np.ndarray
    thetas: np.ndarray
    radii: np.ndarray
    covered: np.ndarray
    per: np.ndarray
    theta_source: Optional[np.ndarray] = None
    member_rows: Optional[np.ndarray] = None

    @property
    def nonempty(self) -> np.ndarray:
        return self.covered.any(axis=-1)

    def restrict(self, pool: Sequence[int]) -> "CoverageGrid":
        """
        The grid coverage_grid would build over `pool`, a subset of the members,
        cut out of this one without evaluating any link again.
        """
        keep = np.isin(self.members, np.asarray(list(pool), dtype=int))
        rows = np.arange(self.psis.size) if self.member_rows is None else np.unique(self.member_rows[keep])
        source = self.theta_source[rows]
        wanted = source < 0
        if keep.size:
            wanted |= keep[np.maximum(source, 0)]
        # every row keeps the two limits and one breakpoint per kept member, in order
        cols = np.argsort(~wanted, axis=1, kind="stable")[:, :2 + int(keep.sum())]
        pick = cols[:, :, np.newaxis]
        return CoverageGrid(
            self.forwarder, self.apex, self.members[keep], self.distances[keep], self.psis[rows],
            np.take_along_axis(self.thetas[rows], cols, axis=1),
            np.take_along_axis(self.radii[rows], cols, axis=1),
            np.take_along_axis(self.covered[rows][:, :, keep], pick, axis=1),
            np.take_along_axis(self.per[rows][:, :, keep], pick, axis=1),
        )

    def members_at(self, p: int, b: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.members[self.covered[p, b]])

    def sector_at(self, p: int, b: int) -> Sector:
        return Sector(self.apex, float(self.psis[p]), float(self.thetas[p, b]), float(self.radii[p, b]))


def coverage_grid(model: CoverageModel, topo: NetworkTopology, i: int, pool: Sequence[int],
                  psis: Optional[Sequence[float]] = None) -> CoverageGrid:
    """
    Coverage of every (pointing angle, divergence breakpoint) sector of node i over `pool`.

    `psis` defaults to the pointing angles of the configured pointing mode.
    """
    members = np.array(sorted(pool), dtype=int)
    member_rows = None
    if psis is None:
        psis = pointing_angles(topo, i, members.tolist(), model.cfg.pointing_mode)
        if PointingMode(model.cfg.pointing_mode) is PointingMode.SWEEP and members.size:
            # merged bearings keep the smallest of their group
            member_rows = np.searchsorted(psis, bearings_from(topo, i, members), side="right") - 1
    psis = np.asarray(psis, dtype=float).reshape(-1)
    apex = (float(topo.positions[i, 0]), float(topo.positions[i, 1]))

    if members.size:
        rel = topo.positions[members] - topo.positions[i]
        distances = np.hypot(rel[:, 0], rel[:, 1])
        offsets = angular_offset(bearings_from(topo, i, members)[np.newaxis, :], psis[:, np.newaxis])
    else:
        distances = np.zeros(0)
        offsets = np.zeros((psis.size, 0))

    # clipping a breakpoint above theta_max turns it into a repeat of theta_max
    limits = np.broadcast_to([model.theta_min, model.theta_max], (psis.size, 2))
    raw = np.concatenate([limits, np.clip(2.0 * offsets, model.theta_min, model.theta_max)], axis=1)
    order = np.argsort(raw, axis=1, kind="stable")
    thetas = np.take_along_axis(raw, order, axis=1)
    radii = np.asarray(model.max_range(thetas), dtype=float).reshape(thetas.shape)

    covered = ((offsets[:, np.newaxis, :] <= thetas[:, :, np.newaxis] / 2.0)
               & (distances[np.newaxis, np.newaxis, :] <= radii[:, :, np.newaxis]))
    per = np.asarray(per_at(model.cfg, thetas[:, :, np.newaxis], distances[np.newaxis, np.newaxis, :]), dtype=float)
    per = np.broadcast_to(per, covered.shape)

    return CoverageGrid(i, apex, members, distances, psis, thetas, radii, covered, per,
                        theta_source=order - 2, member_rows=member_rows)


def candidate_set_family(model: CoverageModel, topo: NetworkTopology, i: int, psi: float,
                         ss: Sequence[int]) -> list[tuple[float, tuple[int, ...]]]:
    """
    Distinct candidate sets obtained by widening the beam at pointing angle psi.

    Returns (theta, members) pairs in ascending theta; each set is listed at
    the narrowest breakpoint producing it, consecutive repeats and empty sets
    are dropped.
    """
    grid = coverage_grid(model, topo, i, ss, psis=[psi])
    family: list[tuple[float, tuple[int, ...]]] = []
    last = None
    for b in range(grid.thetas.shape[1]):
        members = grid.members_at(0, b)
        if members and members != last:
            family.append((float(grid.thetas[0, b]), members))
        last = members
    return family
