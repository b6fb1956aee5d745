from .unicast import (
    LinkBudget,
    achievable_rate,
    attempt_series,
    ber,
    evaluate_link,
    exnt_unicast,
    exnt_unicast_norm,
    max_divergence,
    max_range,
    per_at,
    per_from_ber,
    photon_rate,
    received_power,
    required_gain,
    required_photon_rate,
    success_prob_k,
    target_ber,
)
from .broadcast import broadcast_per, exnt_broadcast, exnt_broadcast_norm, sfr, sfr_vector
from .sampling import AttemptSample, sample_attempts
