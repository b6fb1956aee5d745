"""
Single-hop unicast link budget.

Chain: channel gain -> received power -> signal photon rate -> BER -> PER,
plus the two inversions used for dimensioning: the achievable rate at a
target PER and the maximum range at a target rate and PER.

Noise is carried as photon rates (f_dc, f_bg). Whenever a power is needed it
is derived with P = f * h * c * R * T / (eta_c * lambda), so the rate and the
power description of the detector never disagree.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.channel import LinkGeometry, channel_gain, gain_at_distance
from src.constants.errors import DomainError, InfeasibleLinkError
from src.constants.params import (
    DEFAULT_TOLERANCE,
    DEFAULT_PACKET_L,
    RoutingConfig,
    ToleranceConfig,
    TransceiverParams,
    WaterChannelParams,
)
from src.numerics import INV_E, erfc, erfc_inv, lambert_w0


def _scalar(value):
    arr = np.asarray(value)
    return float(arr) if arr.ndim == 0 else arr


def received_power(tx: TransceiverParams, rx: TransceiverParams, gain):
    """P_rx = P_tx * eta_tx * eta_rx * gain, W."""
    return tx.p_tx * tx.eta_tx * rx.eta_rx * gain


def photon_rate(tx: TransceiverParams, rx: TransceiverParams, gain, rate_R: float, wavelength: float):
    """Signal photon arrival rate at the receiver, 1/s."""
    if not rate_R > 0:
        raise DomainError(f"rate_R must be > 0, got {rate_R}")
    p_rx = received_power(tx, rx, gain)
    return p_rx * rx.eta_c * wavelength / (rate_R * rx.pulse_T * rx.planck_h * rx.light_speed_water)


def ber(f_signal, f_dc: float, f_bg: float, pulse_T: float):
    """OOK bit error rate, 1/2 * erfc(sqrt(T/2) * (sqrt(f1) - sqrt(f0)))."""
    f0 = f_dc + f_bg
    f1 = np.asarray(f_signal, dtype=float) + f0
    return _scalar(0.5 * erfc(np.sqrt(pulse_T / 2.0) * (np.sqrt(f1) - np.sqrt(f0))))


def per_from_ber(ber_value, L: int):
    """1 - (1 - BER)^L, evaluated through log1p/expm1 to keep tiny BERs exact."""
    b = np.asarray(ber_value, dtype=float)
    with np.errstate(divide="ignore"):
        out = -np.expm1(L * np.log1p(-b))
    return _scalar(out)


def target_ber(target_per: float, L: int) -> float:
    """Per-bit error probability giving target_per over an L-bit packet."""
    a = -math.expm1(math.log1p(-target_per) / L) if 0 < target_per < 1 else float("nan")
    if not 0 < a < 1:
        raise DomainError(f"target PER {target_per} gives a per-bit error rate outside (0, 1)")
    return a


def required_photon_rate(target_per: float, L: int, rx: TransceiverParams,
                         tol: ToleranceConfig = DEFAULT_TOLERANCE) -> float:
    """
    Signal photon rate at which the BER equals the per-bit target.

    Solving the BER expression for f gives
    f = (q * sqrt(2/T) + sqrt(f_n))^2 - f_n with q = erfc_inv(2a).
    """
    a = target_ber(target_per, L)
    if a >= 0.5:
        raise DomainError(f"per-bit error target {a} is met by noise alone")
    q = erfc_inv(2.0 * a, tol)
    f_n = rx.f_noise
    return (q * math.sqrt(2.0 / rx.pulse_T) + math.sqrt(f_n)) ** 2 - f_n


def achievable_rate(p_rx: float, target_per: float, L: int, rx: TransceiverParams,
                    wavelength: float, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> float:
    """
    Highest data rate at which a link with received power p_rx meets target_per.

    The noise powers scale with R under the rate/power convention, which turns
    the rate expression into a closed form in the required photon rate.
    """
    if not p_rx > 0:
        raise DomainError(f"received power must be > 0, got {p_rx}")
    f_req = required_photon_rate(target_per, L, rx, tol)
    return p_rx * rx.eta_c * wavelength / (rx.pulse_T * rx.planck_h * rx.light_speed_water * f_req)


def required_gain(tx: TransceiverParams, rx: TransceiverParams, rate_R: float, wavelength: float,
                  target_per: float, L: int, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> float:
    """Channel gain a link must reach to carry rate_R at target_per."""
    f_req = required_photon_rate(target_per, L, rx, tol)
    p_req = f_req * rate_R * rx.pulse_T * rx.planck_h * rx.light_speed_water / (rx.eta_c * wavelength)
    return p_req / (tx.p_tx * tx.eta_tx * rx.eta_rx)


def max_range(tx: TransceiverParams, rx: TransceiverParams, water: WaterChannelParams, theta,
              phi: float, rate_R: float, target_per: float, packet_L: int = DEFAULT_PACKET_L,
              tol: ToleranceConfig = DEFAULT_TOLERANCE):
    """
    Euclidean communication range at divergence theta and misalignment phi.

    With u = A / (theta * r) the gain is u^2 * exp(-k * u^(alpha - 1)),
    k = c * A / theta. Setting it equal to the required gain and substituting
    v = u^(alpha - 1) gives v * exp(-beta * v) = exp(gamma), solved by the
    principal Lambert branch (the far root when alpha > 1). The 1/cos(phi)
    factor of the perpendicular form cancels against the projected aperture,
    so the returned distance is the same for every admissible phi.

    Args:
        theta: divergence angle(s), rad; scalar or numpy array

    Raises:
        InfeasibleLinkError: no distance satisfies the target
    """
    if not 0 <= phi < math.pi / 2:
        raise DomainError(f"misalignment must be in [0, pi/2), got {phi}")
    theta_arr = np.asarray(theta, dtype=float)
    g_req = required_gain(tx, rx, rate_R, water.wavelength, target_per, packet_L, tol)

    exponent = water.alpha - 1.0
    k = water.extinction_c * rx.aperture / theta_arr
    if exponent == 0:
        # gain is u^2 * exp(-k)
        return _scalar(rx.aperture / (theta_arr * np.sqrt(g_req * np.exp(k))))
    beta = exponent * k / 2.0
    gamma = exponent / 2.0 * math.log(g_req)
    arg = -beta * math.exp(gamma)
    if np.any(arg < -INV_E):
        raise InfeasibleLinkError(
            f"required gain {g_req:.4e} exceeds the peak gain at theta={theta}")

    v = -lambert_w0(arg, tol) / beta
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        u = np.power(v, 1.0 / exponent)
        distance = rx.aperture / (theta_arr * u)
    if not np.all(np.isfinite(distance) & (distance > 0)):
        raise InfeasibleLinkError(f"no finite range at theta={theta}")
    return _scalar(distance)


def max_divergence(tx: TransceiverParams, rx: TransceiverParams, water: WaterChannelParams,
                   distance: float, rate_R: float, target_per: float,
                   packet_L: int = DEFAULT_PACKET_L,
                   tol: ToleranceConfig = DEFAULT_TOLERANCE) -> Optional[float]:
    """
    Widest divergence angle that still reaches a receiver at `distance`.

    Inverse of max_range in theta. With t = 1/theta and w = (A * t / r)^alpha
    the target reads w * exp(-beta * w) = exp(gamma), beta = alpha * c * r / 2;
    the principal branch gives the wide-beam root. Returns None when no
    divergence angle reaches the receiver.
    """
    if not distance > 0:
        raise DomainError(f"distance must be > 0, got {distance}")
    g_req = required_gain(tx, rx, rate_R, water.wavelength, target_per, packet_L, tol)
    alpha, c, A = water.alpha, water.extinction_c, rx.aperture

    if alpha == 0:
        return A * math.exp(-c * distance / 2.0) / (distance * math.sqrt(g_req))

    beta = alpha * c * distance / 2.0
    arg = -beta * math.exp(alpha / 2.0 * math.log(g_req))
    if arg < -INV_E:
        return None
    w = -lambert_w0(arg, tol) / beta
    return A / (distance * w ** (1.0 / alpha))


def per_at(cfg: RoutingConfig, theta, distance):
    """
    PER of links at divergence theta and Euclidean distance, at the configured rate.

    Broadcasts over numpy arrays; the coverage grids of the router are
    evaluated through this one function.
    """
    tr, water, targets = cfg.transceiver, cfg.water, cfg.targets
    gain = gain_at_distance(water, tr.aperture, theta, distance)
    f_sig = photon_rate(tr, tr, gain, targets.rate_R, water.wavelength)
    return per_from_ber(ber(f_sig, tr.f_dc, tr.f_bg, tr.pulse_T), targets.packet_L)


def success_prob_k(per, k: int):
    """Probability that the k-th attempt is the first successful one."""
    if k < 1:
        raise DomainError(f"attempt index must be >= 1, got {k}")
    return per ** (k - 1) * (1.0 - per)


def exnt_unicast(per, K: int):
    """Expected transmissions with at most K attempts, counting K for a dropped packet."""
    if K < 1:
        raise DomainError(f"K must be >= 1, got {K}")
    p = np.asarray(per, dtype=float)[..., np.newaxis]
    k = np.arange(1, K + 1)
    total = np.sum(k * p ** (k - 1) * (1.0 - p), axis=-1) + K * p[..., 0] ** K
    return _scalar(total)


def attempt_series(per, K: int):
    """sum_{k=1..K} per^(k-1): expected number of attempts that precede a success or drop."""
    p = np.asarray(per, dtype=float)[..., np.newaxis]
    return _scalar(np.sum(p ** np.arange(K), axis=-1))


def exnt_unicast_norm(pdr):
    """Unbounded-retransmission ExNT, 1 / PDR."""
    if np.any(np.asarray(pdr) <= 0):
        raise DomainError("normalized ExNT undefined for PDR = 0")
    return _scalar(1.0 / np.asarray(pdr, dtype=float))


@dataclass(frozen=True)
class LinkBudget:
    """
    Performance of one link at a fixed operating point.

    Attributes:
        rate_R (float): data rate, bit/s
        ber (float): bit error rate
        per (float): packet error rate
        pdr (float): 1 - per
        packet_L (int): packet length, bits
        max_retx_K (int): attempt cap
    """
    rate_R: float
    ber: float
    per: float
    pdr: float
    packet_L: int
    max_retx_K: int

    @property
    def exnt(self) -> float:
        return exnt_unicast(self.per, self.max_retx_K)

    @property
    def exnt_norm(self) -> float:
        return exnt_unicast_norm(self.pdr)


def evaluate_link(cfg: RoutingConfig, theta: float, geom: LinkGeometry) -> LinkBudget:
    """Full unicast budget of one link at the configured rate."""
    tr, water, targets = cfg.transceiver, cfg.water, cfg.targets
    gain = channel_gain(water, tr.aperture, theta, geom)
    f_sig = photon_rate(tr, tr, gain, targets.rate_R, water.wavelength)
    b = ber(f_sig, tr.f_dc, tr.f_bg, tr.pulse_T)
    p = per_from_ber(b, targets.packet_L)
    return LinkBudget(
        rate_R=targets.rate_R,
        ber=float(b),
        per=float(p),
        pdr=1.0 - float(p),
        packet_L=targets.packet_L,
        max_retx_K=targets.max_retx_K,
    )
