"""Battery virtual queue, drift-minus-reward weights and battery sizing.

The battery deficit ``Q = theta - E`` acts as the Lyapunov virtual queue.
Serving task ``m`` from UAV ``i`` scores ``V * p_m - Q_i * E_im``; batteries
recharge by ``min(theta - E, harvested)`` once per slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .radio import DomainError

# finite stand-in for "never assign"; keeps sorting and sums well-defined
NEG_INF = -1e300


class InvariantError(RuntimeError):
    """A simulation invariant was breached; the run cannot continue."""


@dataclass(frozen=True)
class BatteryQueue:
    theta_j: float
    energy_j: float

    @property
    def queue_j(self) -> float:
        return self.theta_j - self.energy_j


def size_theta(V: float, p_max: float, e_min_j: float, e_max_j: float, channels: int) -> float:
    """Battery target large enough that the per-slot energy budget never binds."""
    if not e_min_j > 0:
        raise DomainError(f"e_min must be > 0, got {e_min_j}")
    if e_max_j < e_min_j:
        raise DomainError("e_max must be >= e_min")
    if channels < 1:
        raise DomainError("channels must be >= 1")
    return V * p_max / e_min_j + channels * e_max_j


def weight(V: float, payment: float, queue_j: float, energy_j_for_task: float,
           feasible: bool = True) -> float:
    if not feasible or not math.isfinite(energy_j_for_task):
        return NEG_INF
    return V * payment - queue_j * energy_j_for_task


def harvest_clip(theta_j: float, energy_j: float, harvested_j: float) -> float:
    return min(theta_j - energy_j, harvested_j)


def battery_step(queue: BatteryQueue, harvested_j: float, consumed_j: float) -> BatteryQueue:
    """Advance one slot: credit the clipped harvest, debit the assigned tasks.

    The harvest clip is computed from the pre-consumption level, so the new
    level never exceeds ``theta``.
    """
    if consumed_j > queue.energy_j:
        raise InvariantError(
            f"consumption {consumed_j:.6g} J exceeds battery {queue.energy_j:.6g} J")
    credit = harvest_clip(queue.theta_j, queue.energy_j, harvested_j)
    return BatteryQueue(queue.theta_j, queue.energy_j + credit - consumed_j)


def battery_target(cfg, uav) -> float:
    """Configured ``battery_target_j`` or, when absent, the redundancy sizing."""
    if uav.battery_target_j is not None:
        return uav.battery_target_j
    from .energy import service_energy_bounds

    e_min, e_max = service_energy_bounds(cfg, uav)
    return size_theta(cfg.control_v, cfg.payment_range[1], e_min, e_max, uav.channels)
