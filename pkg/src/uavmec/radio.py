"""Line-of-sight link budget: free-space gain, Shannon rates, upload delay."""

from __future__ import annotations

import math


class DomainError(ValueError):
    pass


def slant_distance(horizontal_m: float, altitude_m: float) -> float:
    if altitude_m <= 0:
        raise DomainError("altitude must be > 0")
    return math.hypot(horizontal_m, altitude_m)


def path_gain(g0: float, d: float) -> float:
    """Free-space channel power gain ``g0 / d**2`` with ``g0`` referenced at 1 m."""
    if d <= 0:
        raise DomainError(f"distance must be > 0, got {d}")
    return g0 / (d * d)


def _require_positive(**kw: float) -> None:
    for k, v in kw.items():
        if not v > 0:
            raise DomainError(f"{k} must be > 0, got {v}")


def uplink_rate(tx_power_w: float, gain: float, noise_w: float, bandwidth_hz: float,
                gamma: float) -> float:
    """Achievable uplink rate ``gamma * W * log2(1 + P h / N0)`` in bit/s."""
    _require_positive(tx_power_w=tx_power_w, gain=gain, noise_w=noise_w, bandwidth_hz=bandwidth_hz)
    if not 0 < gamma < 1:
        raise DomainError(f"gamma must be in (0,1), got {gamma}")
    return gamma * bandwidth_hz * math.log1p(tx_power_w * gain / noise_w) / math.log(2.0)


def upload_delay_slots(input_bits: float, uplink_rate_bps: float, slot_length_s: float) -> int | None:
    """Whole slots needed to push ``input_bits`` at ``uplink_rate_bps``; at least 1.

    Returns ``None`` when the rate is zero (the upload never completes).
    """
    if uplink_rate_bps <= 0:
        return None
    _require_positive(input_bits=input_bits, slot_length_s=slot_length_s)
    return max(1, math.ceil(input_bits / (uplink_rate_bps * slot_length_s)))


def noise_gain_ratio(d_m: float, g0: float, noise_w: float) -> float:
    """``N0 d^2 / g0``: the transmit power giving unit SNR at distance ``d_m``."""
    return noise_w * d_m * d_m / g0


def downlink_rate(power_w: float, d_at_delivery_m: float, g0: float, noise_w: float,
                  bandwidth_hz: float, gamma: float) -> float:
    if power_w < 0:
        raise DomainError(f"power must be >= 0, got {power_w}")
    _require_positive(d=d_at_delivery_m, g0=g0, noise_w=noise_w, bandwidth_hz=bandwidth_hz)
    if not 0 < gamma < 1:
        raise DomainError(f"gamma must be in (0,1), got {gamma}")
    mu = noise_gain_ratio(d_at_delivery_m, g0, noise_w)
    return gamma * bandwidth_hz * math.log1p(power_w / mu) / math.log(2.0)


def power_for_rate(rate_bps: float, mu: float, effective_bandwidth_hz: float) -> float:
    """Inverse of the downlink rate.

    ``mu`` is :func:`noise_gain_ratio` and ``effective_bandwidth_hz`` is ``gamma * W``.
    Returns ``inf`` when the required power is beyond floating-point range.
    """
    # expm1 keeps precision for rates far below gamma*W
    try:
        return mu * math.expm1(rate_bps * math.log(2.0) / effective_bandwidth_hz)
    except OverflowError:
        return math.inf


def min_downlink_power(qos_bps: float, d_at_delivery_m: float, g0: float, noise_w: float,
                       bandwidth_hz: float, gamma: float) -> float:
    """Smallest downlink power whose rate meets ``qos_bps``."""
    if qos_bps < 0:
        raise DomainError(f"qos must be >= 0, got {qos_bps}")
    mu = noise_gain_ratio(d_at_delivery_m, g0, noise_w)
    return power_for_rate(qos_bps, mu, gamma * bandwidth_hz)
