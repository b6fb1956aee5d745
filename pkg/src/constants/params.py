"""
Parameter blocks shared by every phase of the simulator.

Each block is a frozen dataclass so it can be hashed, cached and shipped to
worker processes. Defaults are the reference operating point; the
remaining constants (alpha, retransmission cap, energy/delay figures) are
assumptions and are meant to be overridden.

Validation happens in __post_init__ and raises ConfigError.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from src.constants.errors import ConfigError


# --- reference operating point ---
DEFAULT_P_TX = 0.1                 # W
DEFAULT_ETA_TX = 0.9
DEFAULT_ETA_RX = 0.9
DEFAULT_ETA_C = 0.16
DEFAULT_APERTURE = 5e-4            # 5 cm^2 in m^2
DEFAULT_PLANCK_H = 6.62e-34        # J*s
DEFAULT_LIGHT_SPEED_WATER = 2.55e8  # m/s
DEFAULT_WAVELENGTH = 532e-9        # m
DEFAULT_EXTINCTION_C = 0.1514      # 1/m, listed as e(lambda)
DEFAULT_F_BG = 1e6                 # 1/s
DEFAULT_F_DC = 1e6                 # 1/s
DEFAULT_PULSE_T = 1e-9             # s
DEFAULT_RATE_R = 1e9               # bit/s
DEFAULT_PACKET_L = 124 * 8         # bits
DEFAULT_TARGET_PER = 0.1
DEFAULT_THETA_MIN = 0.336          # rad
DEFAULT_THETA_MAX = 2.0 / 3.0      # rad

DEFAULT_ALPHA = 0.5
DEFAULT_MAX_RETX_K = 3


def _require(condition: bool, message: str):
    if not condition:
        raise ConfigError(message)


@dataclass(frozen=True)
class ToleranceConfig:
    """
    Iteration controls for the special functions and root finders.

    Attributes:
        rel_tol (float): relative tolerance, > 0
        max_iter (int): iteration cap, >= 1
    """
    rel_tol: float = 1e-12
    max_iter: int = 100

    def __post_init__(self):
        _require(self.rel_tol > 0, f"rel_tol must be > 0, got {self.rel_tol}")
        _require(self.max_iter >= 1, f"max_iter must be >= 1, got {self.max_iter}")


DEFAULT_TOLERANCE = ToleranceConfig()


@dataclass(frozen=True)
class WaterChannelParams:
    """
    Physical water environment.

    Attributes:
        extinction_c (float): extinction coefficient c(lambda) = a + b, in 1/m
        alpha (float): scattering correction exponent; 0 keeps ballistic photons only
        wavelength (float): carrier wavelength in m
    """
    extinction_c: float = DEFAULT_EXTINCTION_C
    alpha: float = DEFAULT_ALPHA
    wavelength: float = DEFAULT_WAVELENGTH

    def __post_init__(self):
        _require(self.extinction_c > 0, f"extinction_c must be > 0, got {self.extinction_c}")
        _require(self.alpha >= 0, f"alpha must be >= 0, got {self.alpha}")
        _require(self.wavelength > 0, f"wavelength must be > 0, got {self.wavelength}")


@dataclass(frozen=True)
class TransceiverParams:
    """
    Optical front-end of a node. All nodes share one block in the experiments,
    but every link function takes a transmitter and a receiver separately.

    Attributes:
        p_tx (float): transmit power, W
        eta_tx (float): transmitter efficiency in (0, 1]
        eta_rx (float): receiver efficiency in (0, 1]
        eta_c (float): detector counting efficiency in (0, 1]
        aperture (float): receiver aperture area, m^2
        pulse_T (float): pulse duration, s
        theta_min (float): narrowest full-width divergence angle, rad
        theta_max (float): widest full-width divergence angle, rad
        planck_h (float): Planck constant as used by the photon-rate formula, J*s
        light_speed_water (float): speed of light in water, m/s
        f_dc (float): dark-count photon rate, 1/s
        f_bg (float): background photon rate, 1/s
    """
    p_tx: float = DEFAULT_P_TX
    eta_tx: float = DEFAULT_ETA_TX
    eta_rx: float = DEFAULT_ETA_RX
    eta_c: float = DEFAULT_ETA_C
    aperture: float = DEFAULT_APERTURE
    pulse_T: float = DEFAULT_PULSE_T
    theta_min: float = DEFAULT_THETA_MIN
    theta_max: float = DEFAULT_THETA_MAX
    planck_h: float = DEFAULT_PLANCK_H
    light_speed_water: float = DEFAULT_LIGHT_SPEED_WATER
    f_dc: float = DEFAULT_F_DC
    f_bg: float = DEFAULT_F_BG

    def __post_init__(self):
        for name in ("p_tx", "aperture", "pulse_T", "theta_min", "theta_max",
                     "planck_h", "light_speed_water", "f_dc", "f_bg"):
            value = getattr(self, name)
            _require(value > 0, f"{name} must be > 0, got {value}")
        for name in ("eta_tx", "eta_rx", "eta_c"):
            value = getattr(self, name)
            _require(0 < value <= 1, f"{name} must be in (0, 1], got {value}")
        _require(self.theta_min < self.theta_max,
                 f"theta_min ({self.theta_min}) must be < theta_max ({self.theta_max})")

    @property
    def f_noise(self) -> float:
        """Total noise photon rate f_dc + f_bg."""
        return self.f_dc + self.f_bg


@dataclass(frozen=True)
class LinkTargets:
    """
    Operating point every link is dimensioned for.

    Attributes:
        rate_R (float): data rate, bit/s
        target_per (float): packet error rate the range is computed for
        packet_L (int): packet length, bits
        max_retx_K (int): transmission attempts before a packet is dropped
    """
    rate_R: float = DEFAULT_RATE_R
    target_per: float = DEFAULT_TARGET_PER
    packet_L: int = DEFAULT_PACKET_L
    max_retx_K: int = DEFAULT_MAX_RETX_K

    def __post_init__(self):
        _require(self.rate_R > 0, f"rate_R must be > 0, got {self.rate_R}")
        _require(0 < self.target_per < 1, f"target_per must be in (0, 1), got {self.target_per}")
        _require(self.packet_L >= 1, f"packet_L must be >= 1, got {self.packet_L}")
        _require(self.max_retx_K >= 1, f"max_retx_K must be >= 1, got {self.max_retx_K}")


class CoordScheme(str, Enum):
    """Candidate coordination (acknowledgment) schemes."""
    SA = "SA"      # slotted
    CSA = "CSA"    # compressed slotted
    FSA = "FSA"    # fast slotted


@dataclass(frozen=True)
class EnergyDelayParams:
    """
    Costs of listening and coordinating, used by the energy and delay metrics.

    Attributes:
        p_listen (float): listening power of each candidate, W
        p_coord (float): coordination power, W
        tau_sifs (float): short interframe space, s
        tau_ack (float): ACK duration, s
        tau_sens (float): acoustic channel sensing duration, s
        coord_scheme (CoordScheme): acknowledgment scheme
    """
    p_listen: float = 0.01
    p_coord: float = 0.05
    tau_sifs: float = 1e-3
    tau_ack: float = 1e-3
    tau_sens: float = 1e-4
    coord_scheme: CoordScheme = CoordScheme.FSA

    def __post_init__(self):
        for name in ("p_listen", "p_coord", "tau_sifs", "tau_ack", "tau_sens"):
            value = getattr(self, name)
            _require(value >= 0, f"{name} must be >= 0, got {value}")
        if not isinstance(self.coord_scheme, CoordScheme):
            try:
                object.__setattr__(self, "coord_scheme", CoordScheme(str(self.coord_scheme).upper()))
            except ValueError:
                raise ConfigError(f"unknown coordination scheme: {self.coord_scheme}")


class MetricKind(str, Enum):
    """Opportunistic-routing metrics. DP and EDP are maximized, the rest minimized."""
    DP = "DP"
    EDP = "EDP"
    EEM_LOCAL = "EEM_local"
    LLM_LOCAL = "LLM_local"
    EEM_GLOBAL = "EEM_global"
    LLM_GLOBAL = "LLM_global"
    EXNT_LOCAL = "ExNT_local"
    EXNT_GLOBAL = "ExNT_global"

    @property
    def maximize(self) -> bool:
        return self in (MetricKind.DP, MetricKind.EDP)

    @property
    def is_global(self) -> bool:
        return self in (MetricKind.EEM_GLOBAL, MetricKind.LLM_GLOBAL, MetricKind.EXNT_GLOBAL)


class PointingMode(str, Enum):
    """SWEEP rotates the beam over the search space; SINK always aims at the destination."""
    SWEEP = "sweep"
    SINK = "sink"


class GlobalOrder(str, Enum):
    """
    Evaluation order of the global backward induction.

    COST settles nodes in increasing fitness, candidates must already be settled.
    DISTANCE evaluates nodes by increasing distance to the destination,
    candidates must be strictly closer.
    """
    COST = "cost"
    DISTANCE = "distance"


class EdpRule(str, Enum):
    """GREEDY ranks by DP*PDR one pick at a time; OPTIMAL orders by descending DP, maximizing sum DP*SFR."""
    GREEDY = "greedy"
    OPTIMAL = "optimal"


@dataclass(frozen=True)
class RoutingConfig:
    """
    Everything a router needs besides the topology.

    Attributes:
        water (WaterChannelParams): channel block
        transceiver (TransceiverParams): optical front-end shared by all nodes
        targets (LinkTargets): rate / PER / packet / retransmission operating point
        energy (EnergyDelayParams): energy and coordination costs
        tolerance (ToleranceConfig): numerics controls
        pointing_mode (PointingMode): how candidate pointing angles are enumerated
        global_order (GlobalOrder): evaluation order for global metrics
        edp_rule (EdpRule): EDP candidate ordering rule
        search_range (Optional[float]): override for d_max, m
    """
    water: WaterChannelParams = field(default_factory=WaterChannelParams)
    transceiver: TransceiverParams = field(default_factory=TransceiverParams)
    targets: LinkTargets = field(default_factory=LinkTargets)
    energy: EnergyDelayParams = field(default_factory=EnergyDelayParams)
    tolerance: ToleranceConfig = DEFAULT_TOLERANCE
    pointing_mode: PointingMode = PointingMode.SWEEP
    global_order: GlobalOrder = GlobalOrder.COST
    edp_rule: EdpRule = EdpRule.GREEDY
    search_range: Optional[float] = None

    def __post_init__(self):
        for name, enum in (("pointing_mode", PointingMode), ("global_order", GlobalOrder), ("edp_rule", EdpRule)):
            value = getattr(self, name)
            if not isinstance(value, enum):
                try:
                    object.__setattr__(self, name, enum(str(value).lower()))
                except ValueError:
                    raise ConfigError(f"unknown {name}: {value}")
        if self.search_range is not None:
            _require(self.search_range > 0 and math.isfinite(self.search_range),
                     f"search_range must be a positive finite distance, got {self.search_range}")
