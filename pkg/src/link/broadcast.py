"""
Broadcast (opportunistic) link figures for a prioritized candidate set.

A transmission fails only when every candidate misses the packet; when it
succeeds, the highest-priority receiver forwards it. Candidate PERs are
assumed independent.
"""

import numpy as np

from src.constants.errors import DomainError
from src.link.unicast import _scalar, exnt_unicast


def _as_pers(pers) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(pers, dtype=float))
    if arr.shape[-1] == 0:
        raise DomainError("candidate set is empty")
    return arr


def broadcast_per(pers):
    """Probability that no candidate receives the packet (product over the last axis)."""
    return _scalar(np.prod(_as_pers(pers), axis=-1))


def sfr_vector(pers_ordered):
    """
    Successful forwarding ratio of every candidate, in priority order.

    SFR_j = PDR_j * prod_{k<j} PER_k. Works along the last axis so a stack of
    candidate sets can be evaluated in one call.
    """
    p = _as_pers(pers_ordered)
    before = np.cumprod(p, axis=-1)
    before = np.concatenate([np.ones_like(before[..., :1]), before[..., :-1]], axis=-1)
    return (1.0 - p) * before


def sfr(pers_ordered, j: int) -> float:
    """SFR of the candidate at 1-based priority j."""
    p = _as_pers(pers_ordered)
    if p.ndim != 1:
        raise DomainError("sfr expects a single candidate set")
    if not 1 <= j <= p.size:
        raise IndexError(f"priority {j} outside 1..{p.size}")
    return float((1.0 - p[j - 1]) * np.prod(p[: j - 1]))


def exnt_broadcast(pers, K: int):
    """Broadcast ExNT with at most K attempts; a singleton set gives the unicast value."""
    return exnt_unicast(broadcast_per(pers), K)


def exnt_broadcast_norm(pers):
    """1 / (1 - prod PER): broadcast ExNT without an attempt cap."""
    per_bc = np.asarray(broadcast_per(pers))
    if np.any(per_bc >= 1.0):
        raise DomainError("normalized broadcast ExNT undefined when every candidate always fails")
    return _scalar(1.0 / (1.0 - per_bc))
