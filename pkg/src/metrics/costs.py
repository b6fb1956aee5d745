"""
Coordination, energy and delay costs of a forwarding attempt.

All functions broadcast over numpy arrays of attempt counts and candidate
set sizes so the router can price a whole coverage grid in one call.
"""

import numpy as np

from src.constants.errors import DomainError
from src.constants.params import CoordScheme, EnergyDelayParams, MetricKind, RoutingConfig, DEFAULT_PACKET_L


def coord_delay(cs_size, params: EnergyDelayParams):
    """
    Time the candidates spend agreeing on a forwarder, s.

    SA:  C * (tau_sifs + tau_ack)
    CSA: tau_sifs + C * tau_ack
    FSA: tau_sifs + tau_ack + C * tau_sens
    """
    c = np.asarray(cs_size)
    if np.any(c < 1):
        raise DomainError(f"candidate set size must be >= 1, got {cs_size}")
    scheme = CoordScheme(params.coord_scheme)
    if scheme is CoordScheme.SA:
        out = c * (params.tau_sifs + params.tau_ack)
    elif scheme is CoordScheme.CSA:
        out = params.tau_sifs + c * params.tau_ack
    else:
        out = params.tau_sifs + params.tau_ack + c * params.tau_sens
    return float(out) if np.ndim(out) == 0 else out


def energy_cost(k, rate_R: float, cs_size, params: EnergyDelayParams, coord_T, p_tx: float,
                packet_L: int = DEFAULT_PACKET_L):
    """k * [T_s * (P_tx + C * P_l) + P_c * T_c] with T_s = L / R, J."""
    slot = packet_L / rate_R
    out = np.asarray(k) * (slot * (p_tx + np.asarray(cs_size) * params.p_listen) + params.p_coord * np.asarray(coord_T))
    return float(out) if np.ndim(out) == 0 else out


def delay_cost(k, rate_R: float, coord_T, packet_L: int = DEFAULT_PACKET_L):
    """k * [T_s + T_c], s."""
    out = np.asarray(k) * (packet_L / rate_R + np.asarray(coord_T))
    return float(out) if np.ndim(out) == 0 else out


def attempt_cost(kind: MetricKind, cs_size, cfg: RoutingConfig):
    """
    Cost of one broadcast attempt to a set of `cs_size` candidates under `kind`.

    Energy for EEM kinds, delay for LLM kinds, one transmission otherwise.
    """
    kind = MetricKind(kind)
    if kind in (MetricKind.EEM_LOCAL, MetricKind.EEM_GLOBAL):
        t_c = coord_delay(cs_size, cfg.energy)
        return energy_cost(1, cfg.targets.rate_R, cs_size, cfg.energy, t_c, cfg.transceiver.p_tx, cfg.targets.packet_L)
    if kind in (MetricKind.LLM_LOCAL, MetricKind.LLM_GLOBAL):
        t_c = coord_delay(cs_size, cfg.energy)
        return delay_cost(1, cfg.targets.rate_R, t_c, cfg.targets.packet_L)
    out = np.ones_like(np.asarray(cs_size), dtype=float)
    return float(out) if out.ndim == 0 else out
