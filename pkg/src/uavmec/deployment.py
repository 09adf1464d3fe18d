"""Offline UAV deployment from a vehicle density forecast.

Each UAV hovers over the density centroid of its own coverage, which
minimizes the expected power needed to guarantee the top QoS rate to a
vehicle drawn from that density; the realized path is that target sequence
limited to the UAV's top speed.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .mobility import DensityModel, VehicleFleet, clamp_uav_move
from .model import Position, RectRegion, ScenarioConfig, UavConfig


@dataclass(frozen=True)
class DensityGrid:
    region: RectRegion
    weights: np.ndarray  # shape (nx, ny), sums to 1

    @property
    def nx(self) -> int:
        return self.weights.shape[0]

    @property
    def ny(self) -> int:
        return self.weights.shape[1]

    @property
    def x_edges(self) -> np.ndarray:
        return np.linspace(self.region.x_min, self.region.x_max, self.nx + 1)

    @property
    def y_edges(self) -> np.ndarray:
        return np.linspace(self.region.y_min, self.region.y_max, self.ny + 1)

    @property
    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        xe, ye = self.x_edges, self.y_edges
        return 0.5 * (xe[:-1] + xe[1:]), 0.5 * (ye[:-1] + ye[1:])

    def overlap(self, rect: RectRegion) -> np.ndarray:
        """Fraction of each cell's area lying inside ``rect``."""
        xe, ye = self.x_edges, self.y_edges
        fx = np.clip(np.minimum(xe[1:], rect.x_max) - np.maximum(xe[:-1], rect.x_min), 0, None)
        fy = np.clip(np.minimum(ye[1:], rect.y_max) - np.maximum(ye[:-1], rect.y_min), 0, None)
        return (fx / np.diff(xe))[:, None] * (fy / np.diff(ye))[None, :]

    @classmethod
    def from_function(cls, region: RectRegion, nx: int, ny: int, f) -> "DensityGrid":
        """Grid whose cell masses are ``f`` at the cell midpoints, normalized."""
        g = cls(region, np.zeros((nx, ny)))
        xc, yc = g.centers
        w = np.asarray(f(xc[:, None], yc[None, :]), dtype=float) * np.ones((nx, ny))
        return cls(region, w / w.sum())


def guarantee_power_coeff(qos_max_bps: float, cfg: ScenarioConfig) -> float:
    """Watts per square meter of squared distance to guarantee ``qos_max_bps``."""
    gw = cfg.rate_efficiency * cfg.bandwidth_hz
    return math.expm1(qos_max_bps * math.log(2.0) / gw) * cfg.noise_power_w / cfg.channel_gain_ref


def coverage_power(grid: DensityGrid, pos: Position, uav: UavConfig, qos_max_bps: float,
                   cfg: ScenarioConfig) -> float:
    """Channel-weighted integral of the guarantee power over the UAV's coverage."""
    xc, yc = grid.centers
    d2 = (xc[:, None] - pos.x) ** 2 + (yc[None, :] - pos.y) ** 2 + uav.altitude_m ** 2
    mass = grid.weights * grid.overlap(uav.coverage)
    return uav.channels * guarantee_power_coeff(qos_max_bps, cfg) * float(np.sum(mass * d2))


def avg_transmit_power(grid: DensityGrid, uav_positions: Sequence[Position],
                       uav_configs: Sequence[UavConfig], qos_max_bps: float,
                       cfg: ScenarioConfig) -> float:
    total = sum(coverage_power(grid, p, u, qos_max_bps, cfg) for p, u in zip(uav_positions, uav_configs))
    return total / sum(u.channels for u in uav_configs)


def centroid_target(grid: DensityGrid, coverage: RectRegion) -> Position:
    """Density centroid inside ``coverage``; its geometric center if it holds no mass."""
    mass = grid.weights * grid.overlap(coverage)
    total = float(mass.sum())
    if total <= 0:
        return coverage.center
    xc, yc = grid.centers
    x = float(np.sum(mass.sum(axis=1) * xc)) / total
    y = float(np.sum(mass.sum(axis=0) * yc)) / total
    # midpoints of partial cells can sit just outside the coverage
    x = min(max(x, coverage.x_min), coverage.x_max)
    y = min(max(y, coverage.y_min), coverage.y_max)
    return Position(x, y)


def plan_trajectory(grids: Sequence[DensityGrid], uav_configs: Sequence[UavConfig],
                    slot_length_s: float, initial_positions: Sequence[Position] | None = None,
                    ) -> list[list[Position]]:
    """Per-slot positions ``[slot][uav]`` chasing the centroids at top speed."""
    if initial_positions is None:
        initial_positions = [u.start_position for u in uav_configs]
    current = list(initial_positions)
    plan = []
    for t, grid in enumerate(grids):
        if t > 0:
            current = [
                clamp_uav_move(cur, centroid_target(grid, u.coverage), u.max_speed_mps, slot_length_s)
                for cur, u in zip(current, uav_configs)
            ]
        plan.append(list(current))
    return plan


def fixed_plan(uav_configs: Sequence[UavConfig], num_slots: int) -> list[list[Position]]:
    centers = [u.coverage.center for u in uav_configs]
    return [list(centers) for _ in range(num_slots)]


def oracle_grids(cfg: ScenarioConfig) -> list[DensityGrid]:
    model = DensityModel(cfg.density, cfg.region, cfg.num_slots)
    xe = np.linspace(cfg.region.x_min, cfg.region.x_max, cfg.grid_n + 1)
    ye = np.linspace(cfg.region.y_min, cfg.region.y_max, cfg.grid_n + 1)
    return [DensityGrid(cfg.region, model.cell_mass(t, xe, ye)) for t in range(cfg.num_slots)]


def empirical_grids(cfg: ScenarioConfig, history_runs: int = 20, window: int = 5,
                    history_seed: int | None = None) -> list[DensityGrid]:
    """Laplace-smoothed histograms of vehicle positions from past episodes.

    Past episodes replay the mobility process under seeds unrelated to the
    evaluated run; slot ``t`` pools positions from slots ``t - window .. t + window``.
    """
    n, T = cfg.grid_n, cfg.num_slots
    counts = np.zeros((T, n, n))
    xe = np.linspace(cfg.region.x_min, cfg.region.x_max, n + 1)
    ye = np.linspace(cfg.region.y_min, cfg.region.y_max, n + 1)
    base = cfg.rng_seed if history_seed is None else history_seed
    seq = np.random.SeedSequence([base, 0x4849])
    for child in seq.spawn(history_runs):
        rng = np.random.default_rng(child)
        fleet = VehicleFleet(cfg.vehicle_count, cfg.region, cfg.vehicle_speed_range_mps,
                             DensityModel(cfg.density, cfg.region, T), rng)
        for t in range(T):
            if t > 0:
                fleet.advance(cfg.slot_length_s, t)
            xs = [v.position.x for v in fleet.vehicles]
            ys = [v.position.y for v in fleet.vehicles]
            h, _, _ = np.histogram2d(xs, ys, bins=[xe, ye])
            counts[t] += h
    csum = np.cumsum(np.concatenate([np.zeros((1, n, n)), counts]), axis=0)
    grids = []
    for t in range(T):
        lo, hi = max(0, t - window), min(T, t + window + 1)
        w = csum[hi] - csum[lo] + 1.0
        grids.append(DensityGrid(cfg.region, w / w.sum()))
    return grids


def density_grids(cfg: ScenarioConfig) -> list[DensityGrid]:
    if cfg.planner_density == "empirical":
        return empirical_grids(cfg)
    return oracle_grids(cfg)


def write_plan(plan: Sequence[Sequence[Position]], uav_configs: Sequence[UavConfig], path) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["slot", "uav_id", "x", "y"])
        for t, row in enumerate(plan):
            for u, p in zip(uav_configs, row):
                w.writerow([t, u.id, f"{p.x:.9g}", f"{p.y:.9g}"])
