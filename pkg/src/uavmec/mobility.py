"""Vehicle kinematics, coverage checks and the UAV speed limit."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import DensitySpec, Position, RectRegion, TaskRequest, UavConfig, Velocity


def predict_position(pos: Position, vel: Velocity, slot_length_s: float, delay_slots: int) -> Position:
    """Straight-line extrapolation ``delay_slots`` slots ahead."""
    dt = slot_length_s * delay_slots
    return Position(pos.x + vel.vx * dt, pos.y + vel.vy * dt)


def coverage_feasible(task: TaskRequest, uav: UavConfig, delay_slots: int, slot_length_s: float) -> bool:
    """Vehicle inside the UAV's coverage both now and when the upload completes."""
    if not uav.coverage.contains(task.position):
        return False
    return uav.coverage.contains(predict_position(task.position, task.velocity, slot_length_s, delay_slots))


def clamp_uav_move(current: Position, target: Position, v_max: float, slot_length_s: float) -> Position:
    """Move toward ``target`` by at most ``v_max * slot_length_s`` meters."""
    reach = v_max * slot_length_s
    dx, dy = target.x - current.x, target.y - current.y
    dist = math.hypot(dx, dy)
    if dist <= reach:
        return target
    f = reach / dist
    return Position(current.x + f * dx, current.y + f * dy)


@dataclass
class VehicleState:
    id: int
    position: Position
    velocity: Velocity


class DensityModel:
    """Spawn density over the region, possibly moving with time."""

    def __init__(self, spec: DensitySpec, region: RectRegion, horizon: int):
        self.spec = spec
        self.region = region
        self.horizon = max(horizon, 1)

    def hotspot_center(self, slot: int) -> Position:
        a, b = self.spec.hotspot_start, self.spec.hotspot_end
        f = min(max(slot / max(self.horizon - 1, 1), 0.0), 1.0)
        return Position(a.x + f * (b.x - a.x), a.y + f * (b.y - a.y))

    def sample(self, rng: np.random.Generator, slot: int) -> Position:
        r = self.region
        if self.spec.kind == "hotspot" and rng.random() < self.spec.hotspot_weight:
            c = self.hotspot_center(slot)
            # rejection keeps the Gaussian truncated to the region
            for _ in range(1000):
                x, y = rng.normal((c.x, c.y), self.spec.hotspot_sigma_m)
                p = Position(float(x), float(y))
                if r.contains(p):
                    return p
        return Position(float(rng.uniform(r.x_min, r.x_max)), float(rng.uniform(r.y_min, r.y_max)))

    def cell_mass(self, slot: int, xs_edges: np.ndarray, ys_edges: np.ndarray) -> np.ndarray:
        """Probability mass per grid cell, shape ``(nx, ny)``, summing to 1."""
        from scipy.special import ndtr

        wx = np.diff(xs_edges)[:, None]
        wy = np.diff(ys_edges)[None, :]
        r = self.region
        uniform = (wx * wy) / ((r.x_max - r.x_min) * (r.y_max - r.y_min))
        if self.spec.kind != "hotspot":
            return uniform / uniform.sum()
        c = self.hotspot_center(slot)
        sig = self.spec.hotspot_sigma_m
        px = np.diff(ndtr((xs_edges - c.x) / sig))[:, None]
        py = np.diff(ndtr((ys_edges - c.y) / sig))[None, :]
        blob = px * py
        blob = blob / blob.sum()
        w = self.spec.hotspot_weight
        mass = w * blob + (1.0 - w) * uniform / uniform.sum()
        return mass / mass.sum()


class VehicleFleet:
    """Constant-velocity vehicles; leavers respawn from the density."""

    def __init__(self, count: int, region: RectRegion, speed_range: tuple[float, float],
                 density: DensityModel, rng: np.random.Generator):
        self.region = region
        self.speed_range = speed_range
        self.density = density
        self.rng = rng
        self.vehicles = [self._spawn(i, 0) for i in range(count)]

    def _spawn(self, vid: int, slot: int) -> VehicleState:
        pos = self.density.sample(self.rng, slot)
        speed = self.rng.uniform(*self.speed_range)
        heading = self.rng.uniform(0.0, 2.0 * math.pi)
        return VehicleState(vid, pos, Velocity(speed * math.cos(heading), speed * math.sin(heading)))

    def advance(self, slot_length_s: float, slot: int) -> None:
        trip = self.density.spec.trip_mean_slots
        for k, v in enumerate(self.vehicles):
            nxt = predict_position(v.position, v.velocity, slot_length_s, 1)
            # one draw per vehicle per slot whether or not trips are enabled
            leaves = self.rng.random() < (1.0 / trip if trip > 0 else 0.0)
            if self.region.contains(nxt) and not leaves:
                v.position = nxt
            else:
                self.vehicles[k] = self._spawn(v.id, slot)
