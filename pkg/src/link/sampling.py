"""
Bernoulli retransmission sampler.

Each attempt delivers to every candidate independently with its PDR; the
packet is forwarded by the first attempt with at least one receiver and
dropped after K failed attempts. Used to check the closed-form ExNT and by
the stochastic routing mode.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.constants.errors import DomainError


@dataclass
class AttemptSample:
    """
    Outcome of n independent packets over one hop.

    Attributes:
        attempts (np.ndarray): transmissions spent per packet (K for drops)
        delivered (np.ndarray): whether any candidate received the packet
        forwarder_rank (np.ndarray): 0-based priority of the forwarding candidate, -1 on drop
    """
    attempts: np.ndarray
    delivered: np.ndarray
    forwarder_rank: np.ndarray

    @property
    def mean(self) -> float:
        return float(np.mean(self.attempts))

    @property
    def stderr(self) -> float:
        return float(np.std(self.attempts, ddof=1) / np.sqrt(self.attempts.size))


def sample_attempts(pers, K: int, n_samples: int, rng: Optional[np.random.Generator] = None) -> AttemptSample:
    """
    Draw n_samples packets through a candidate set with per-candidate PERs `pers`
    (priority order) and attempt cap K.
    """
    pers = np.atleast_1d(np.asarray(pers, dtype=float))
    if pers.size == 0:
        raise DomainError("candidate set is empty")
    if K < 1 or n_samples < 1:
        raise DomainError("K and n_samples must be >= 1")
    rng = rng if rng is not None else np.random.default_rng()

    received = rng.random((n_samples, K, pers.size)) >= pers   # True where a candidate got it
    any_rx = received.any(axis=-1)                               # (n, K)
    delivered = any_rx.any(axis=-1)
    first_ok = np.argmax(any_rx, axis=-1)                        # 0-based attempt
    attempts = np.where(delivered, first_ok + 1, K)

    rows = np.arange(n_samples)
    rank = np.argmax(received[rows, first_ok], axis=-1)
    rank = np.where(delivered, rank, -1)
    return AttemptSample(attempts=attempts, delivered=delivered, forwarder_rank=rank)
