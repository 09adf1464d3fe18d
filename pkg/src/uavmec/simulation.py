"""Slot-by-slot simulation of the UAV edge-computing system.

Per slot: move UAVs along the offline plan, move vehicles, draw tasks, solve
every (UAV, task) service plan, match tasks to UAVs, then settle batteries
and the channel ledger.  Three policies share everything but the matching
and the deployment:

* ``joaodr``: drift-minus-reward weights, Hungarian matching, centroid deployment
* ``fixed-deploy``: same matching, UAVs parked at their coverage centers
* ``greedy``: highest payment first to the first UAV that can take it
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import lyapunov
from .assignment import AssignmentResult, ChannelLedger, build_weight_matrix, solve_assignment
from .deployment import density_grids, fixed_plan, plan_trajectory
from .energy import plan_constraint_violations, service_energy_bounds, solve_p3
from .lyapunov import BatteryQueue, InvariantError, battery_step, harvest_clip
from .mobility import DensityModel, VehicleFleet, VehicleState, coverage_feasible, predict_position
from .model import ConfigError, Position, ScenarioConfig, ServicePlan, TaskRequest, validate_config
from .radio import path_gain, slant_distance, upload_delay_slots, uplink_rate

logger = logging.getLogger(__name__)

ALGORITHMS = ("joaodr", "greedy", "fixed-deploy")
DISPLACEMENT_TOL = 1e-9


@dataclass
class SlotMetrics:
    slot: int
    remuneration: float
    utility: float
    battery_j: list[float]
    free_channels: list[int]
    tasks_generated: int
    tasks_served: int
    tasks_infeasible: int
    harvest_credit_j: list[float] = field(default_factory=list)
    consumed_j: list[float] = field(default_factory=list)
    queue_j: list[float] = field(default_factory=list)


@dataclass
class InvariantReport:
    """Counts of invariant breaches observed during a run (all zero when healthy)."""

    displacement: int = 0
    capacity: int = 0
    coverage: int = 0
    plan_constraints: int = 0
    energy_budget: int = 0
    negative_queue: int = 0
    battery_bounds: int = 0
    weight_sign: int = 0
    duplicate_task: int = 0
    max_displacement_m: float = 0.0

    def total(self) -> int:
        return (self.displacement + self.capacity + self.coverage + self.plan_constraints
                + self.energy_budget + self.negative_queue + self.battery_bounds
                + self.weight_sign + self.duplicate_task)


@dataclass(frozen=True)
class ServiceRecord:
    slot: int
    uav_index: int
    task: TaskRequest
    upload_delay_slots: int
    energy_j: float


@dataclass
class RunSummary:
    algorithm: str
    seed: int
    config: ScenarioConfig
    theta_j: list[float]
    slots: list[SlotMetrics]
    positions: list[list[Position]]
    invariants: InvariantReport
    initial_battery_j: list[float] = field(default_factory=list)
    # one entry per served task, in service order
    services: list[ServiceRecord] = field(default_factory=list)

    @property
    def cumulative_remuneration(self) -> np.ndarray:
        return np.cumsum([s.remuneration for s in self.slots])

    @property
    def cumulative_utility(self) -> np.ndarray:
        return np.cumsum([s.utility for s in self.slots])

    @property
    def total_remuneration(self) -> float:
        return math.fsum(s.remuneration for s in self.slots)

    @property
    def time_average_utility(self) -> float:
        if not self.slots:
            return 0.0
        return math.fsum(s.utility for s in self.slots) / len(self.slots)

    @property
    def tasks_served(self) -> int:
        return sum(s.tasks_served for s in self.slots)


def rng_streams(seed: int) -> dict[str, np.random.Generator]:
    """Independent task, mobility and harvest generators for one seed."""
    children = np.random.SeedSequence(seed).spawn(3)
    return {name: np.random.default_rng(c) for name, c in zip(("tasks", "mobility", "harvest"), children)}


def sample_tasks(vehicles: Sequence[VehicleState], cfg: ScenarioConfig, rng: np.random.Generator,
                 slot: int = 0, first_id: int = 0) -> list[TaskRequest]:
    """Each vehicle independently issues one task with probability ``task_gen_prob``."""
    tasks = []
    for v in vehicles:
        if rng.random() >= cfg.task_gen_prob:
            continue
        in_bits = rng.uniform(*cfg.input_bits_range)
        tasks.append(TaskRequest(
            task_id=first_id + len(tasks),
            slot=slot,
            input_bits=float(in_bits),
            output_bits=float(rng.uniform(*cfg.output_bits_range)),
            cycles_gc=float(cfg.cycles_per_bit * in_bits),
            payment=float(rng.uniform(*cfg.payment_range)),
            qos_bps=float(rng.uniform(*cfg.qos_range_bps)),
            position=v.position,
            velocity=v.velocity,
            vehicle_id=v.id,
        ))
    return tasks


def deployment_plan(cfg: ScenarioConfig, algorithm: str) -> list[list[Position]]:
    if cfg.num_slots == 0:
        return []
    if algorithm == "fixed-deploy":
        return fixed_plan(cfg.uav_configs, cfg.num_slots)
    return plan_trajectory(density_grids(cfg), cfg.uav_configs, cfg.slot_length_s)


def plan_pair(task: TaskRequest, uav_idx: int, slot: int, cfg: ScenarioConfig,
              plan: Sequence[Sequence[Position]]) -> ServicePlan:
    """Upload delay, coverage check and minimum-energy plan for one pair."""
    uav = cfg.uav_configs[uav_idx]
    here = plan[slot][uav_idx]
    infeasible = ServicePlan(uav_id=uav.id, task_id=task.task_id)
    if not uav.coverage.contains(task.position):
        return infeasible
    d_up = slant_distance(here.distance_to(task.position), uav.altitude_m)
    rate = uplink_rate(cfg.vehicle_tx_power_w, path_gain(cfg.channel_gain_ref, d_up),
                       cfg.noise_power_w, cfg.bandwidth_hz, cfg.rate_efficiency)
    delay = upload_delay_slots(task.input_bits, rate, cfg.slot_length_s)
    if delay is None or not coverage_feasible(task, uav, delay, cfg.slot_length_s):
        return infeasible
    vehicle_then = predict_position(task.position, task.velocity, cfg.slot_length_s, delay)
    uav_then = plan[min(slot + delay, len(plan) - 1)][uav_idx]
    d_dl = slant_distance(uav_then.distance_to(vehicle_then), uav.altitude_m)
    return solve_p3(task, uav, d_dl, delay, cfg)


def greedy_assignment(tasks: Sequence[TaskRequest], plans: Sequence[Sequence[ServicePlan]],
                      free: Sequence[int], battery: Sequence[float]) -> AssignmentResult:
    """Serve the best-paying tasks first, each by the lowest-index UAV able to."""
    free = list(free)
    budget = list(battery)
    matches = []
    order = sorted(range(len(tasks)), key=lambda m: (-tasks[m].payment, m))
    for m in order:
        for i, plan in enumerate(plans[m]):
            if plan.feasible and free[i] > 0 and plan.energy_j <= budget[i]:
                free[i] -= 1
                budget[i] -= plan.energy_j
                matches.append((i, m, plan))
                break
    matches.sort(key=lambda t: (t[0], t[1]))
    return AssignmentResult(matches, math.fsum(p.weight for _, _, p in matches))


def run(cfg: ScenarioConfig, algorithm: str = "joaodr", seed: Optional[int] = None,
        plan: Optional[Sequence[Sequence[Position]]] = None, strict: bool = True) -> RunSummary:
    """Simulate ``cfg.num_slots`` slots under ``algorithm``.

    Identical ``cfg`` and ``seed`` give identical summaries.  With ``strict``
    an invariant breach raises :class:`InvariantError`; otherwise it is only
    counted in ``summary.invariants``.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    problems = validate_config(cfg)
    if problems:
        raise ConfigError("; ".join(problems))
    seed = cfg.rng_seed if seed is None else seed
    streams = rng_streams(seed)
    uavs = cfg.uav_configs
    n_uav = len(uavs)
    T = cfg.num_slots

    theta = [lyapunov.battery_target(cfg, u) for u in uavs]
    auto_sized = [u.battery_target_j is None for u in uavs]
    e_max = [service_energy_bounds(cfg, u)[1] if a else math.inf for u, a in zip(uavs, auto_sized)]
    queues = [BatteryQueue(th, th) for th in theta]
    ledger = ChannelLedger({i: u.channels for i, u in enumerate(uavs)})
    if plan is None:
        plan = deployment_plan(cfg, algorithm)
    fleet = VehicleFleet(cfg.vehicle_count, cfg.region, cfg.vehicle_speed_range_mps,
                         DensityModel(cfg.density, cfg.region, T), streams["mobility"])
    inv = InvariantReport()
    slots: list[SlotMetrics] = []
    services: list[ServiceRecord] = []
    next_task_id = 0

    def breach(kind: str, msg: str) -> None:
        setattr(inv, kind, getattr(inv, kind) + 1)
        if strict:
            raise InvariantError(f"slot {t}: {msg}")

    for t in range(T):
        if t > 0:
            for i, u in enumerate(uavs):
                step = plan[t][i].distance_to(plan[t - 1][i])
                inv.max_displacement_m = max(inv.max_displacement_m, step)
                if step > u.max_speed_mps * cfg.slot_length_s + DISPLACEMENT_TOL:
                    breach("displacement", f"uav {u.id} moved {step:.6g} m")
            fleet.advance(cfg.slot_length_s, t)

        tasks = sample_tasks(fleet.vehicles, cfg, streams["tasks"], t, next_task_id)
        next_task_id += len(tasks)
        ledger.prune(t)
        free = [ledger.free_channels(i, t) for i in range(n_uav)]
        q = [bq.queue_j for bq in queues]
        battery = [bq.energy_j for bq in queues]

        plans: list[list[ServicePlan]] = []
        for task in tasks:
            row = []
            for i in range(n_uav):
                p = plan_pair(task, i, t, cfg, plan) if free[i] > 0 else ServicePlan(uavs[i].id, task.task_id)
                if p.feasible:
                    p = p.with_weight(lyapunov.weight(cfg.control_v, task.payment, q[i], p.energy_j))
                row.append(p)
            plans.append(row)
        infeasible = sum(1 for row in plans if not any(p.feasible for p in row))

        for i in range(n_uav):
            if auto_sized[i] and battery[i] < uavs[i].channels * e_max[i]:
                if any(row[i].feasible and row[i].weight >= 0 for row in plans):
                    breach("weight_sign", f"uav {uavs[i].id} has a nonnegative weight on a low battery")

        if algorithm == "greedy":
            result = greedy_assignment(tasks, plans, free, battery)
        else:
            result = solve_assignment(build_weight_matrix(plans, free), free, plans)

        served = result.task_indices()
        if len(set(served)) != len(served):
            breach("duplicate_task", "a task was matched twice")
        consumed = [0.0] * n_uav
        utility = 0.0
        remuneration = 0.0
        for i, m, p in result.matches:
            task = tasks[m]
            consumed[i] += p.energy_j
            utility += cfg.control_v * task.payment - q[i] * p.energy_j
            remuneration += task.payment
            ledger.reserve(i, t, p.upload_delay_slots)
            services.append(ServiceRecord(t, i, task, p.upload_delay_slots, p.energy_j))
            if not coverage_feasible(task, uavs[i], p.upload_delay_slots, cfg.slot_length_s):
                breach("coverage", f"task {task.task_id} leaves uav {uavs[i].id} coverage")
            bad = plan_constraint_violations(task, p, uavs[i], cfg)
            if bad:
                breach("plan_constraints", f"task {task.task_id}: {bad}")
        for i in range(n_uav):
            if ledger.occupied(i, t) > uavs[i].channels:
                breach("capacity", f"uav {uavs[i].id} over channel capacity")
            if consumed[i] > battery[i]:
                breach("energy_budget", f"uav {uavs[i].id} needs {consumed[i]:.6g} J, has {battery[i]:.6g} J")

        credits = []
        for i, u in enumerate(uavs):
            harvested = min(streams["harvest"].uniform(0.0, 2.0 * u.harvest_mean_w * cfg.slot_length_s),
                            u.harvest_max_w * cfg.slot_length_s)
            credits.append(harvest_clip(queues[i].theta_j, queues[i].energy_j, harvested))
            queues[i] = battery_step(queues[i], harvested, consumed[i])
            if queues[i].queue_j < 0:
                breach("negative_queue", f"uav {u.id} queue {queues[i].queue_j:.6g}")
            if not 0 <= queues[i].energy_j <= queues[i].theta_j:
                breach("battery_bounds", f"uav {u.id} battery {queues[i].energy_j:.6g}")

        slots.append(SlotMetrics(
            slot=t,
            remuneration=remuneration,
            utility=utility,
            battery_j=[bq.energy_j for bq in queues],
            free_channels=[ledger.free_channels(i, t) for i in range(n_uav)],
            tasks_generated=len(tasks),
            tasks_served=len(result.matches),
            tasks_infeasible=infeasible,
            harvest_credit_j=credits,
            consumed_j=consumed,
            queue_j=[bq.queue_j for bq in queues],
        ))

    return RunSummary(algorithm, seed, cfg, theta, slots, [list(r) for r in plan[:T]], inv,
                      initial_battery_j=list(theta), services=services)
