"""Channel-occupancy ledger and capacity-constrained task-to-UAV matching."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .lyapunov import NEG_INF
from .model import ServicePlan


@dataclass
class ChannelLedger:
    """Busy-until slots per UAV.

    A task assigned at slot ``t`` with upload delay ``d`` holds one channel for
    slots ``t .. t + d`` (upload, then compute and downlink) and frees it at
    the start of ``t + d + 1``.
    """

    channels: dict[int, int]
    busy_until: dict[int, list[int]] = field(default_factory=dict)

    def __post_init__(self):
        for uid in self.channels:
            self.busy_until.setdefault(uid, [])

    def occupied(self, uav_id: int, slot: int) -> int:
        return sum(1 for b in self.busy_until[uav_id] if b >= slot)

    def free_channels(self, uav_id: int, slot: int) -> int:
        return self.channels[uav_id] - self.occupied(uav_id, slot)

    def reserve(self, uav_id: int, slot: int, delay_slots: int) -> None:
        if self.free_channels(uav_id, slot) <= 0:
            raise RuntimeError(f"uav {uav_id} has no free channel at slot {slot}")
        self.busy_until[uav_id].append(slot + delay_slots)

    def prune(self, slot: int) -> None:
        """Forget reservations released before ``slot``."""
        for uid, lst in self.busy_until.items():
            self.busy_until[uid] = [b for b in lst if b >= slot]


def free_channels(ledger: ChannelLedger, uav_id: int, slot: int) -> int:
    return ledger.free_channels(uav_id, slot)


@dataclass
class AssignmentResult:
    # (uav index, task index, plan or None)
    matches: list[tuple[int, int, Optional[ServicePlan]]]
    objective: float

    def task_indices(self) -> list[int]:
        return [m for _, m, _ in self.matches]


def build_weight_matrix(plans: Sequence[Sequence[ServicePlan]], free: Sequence[int]) -> np.ndarray:
    """Weights indexed ``[task, uav]``; unusable pairs get :data:`NEG_INF`.

    ``plans[m][i]`` is the plan of UAV ``i`` for task ``m``; coverage and
    deadline infeasibility are both carried by ``plan.feasible``.
    """
    n_tasks, n_uavs = len(plans), len(free)
    w = np.full((n_tasks, n_uavs), NEG_INF)
    for m, row in enumerate(plans):
        for i, plan in enumerate(row):
            if plan.feasible and free[i] > 0 and math.isfinite(plan.weight):
                w[m, i] = plan.weight
    return w


def hungarian_min(cost: np.ndarray) -> list[int]:
    """Min-cost assignment for an ``n x m`` matrix with ``n <= m``.

    Shortest-augmenting-path Hungarian method with row/column potentials.
    Returns the column assigned to each row.  Rows are inserted in index
    order and only strictly shorter paths replace earlier ones, so ties go to
    the lowest column index.
    """
    n, m = cost.shape
    if n > m:
        raise ValueError("need rows <= columns")
    c = cost.tolist()
    inf = math.inf
    u = [0.0] * (n + 1)
    v = [0.0] * (m + 1)
    p = [0] * (m + 1)  # p[j]: row (1-based) matched to column j, 0 = free
    way = [0] * (m + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [inf] * (m + 1)
        used = [False] * (m + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = inf
            j1 = 0
            ci = c[i0 - 1]
            ui = u[i0]
            for j in range(1, m + 1):
                if not used[j]:
                    cur = ci[j - 1] - ui - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(m + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    assign = [-1] * n
    for j in range(1, m + 1):
        if p[j]:
            assign[p[j] - 1] = j - 1
    return assign


def solve_assignment(weights: np.ndarray, free_channel_counts: Sequence[int],
                     plans: Optional[Sequence[Sequence[ServicePlan]]] = None) -> AssignmentResult:
    """Maximize the total weight of a task-to-UAV matching.

    Each task goes to at most one UAV, UAV ``i`` takes at most
    ``free_channel_counts[i]`` tasks, and only strictly positive weights are
    ever selected.  Capacity is realized by repeating each UAV column once per
    free channel; one zero-profit "stay unassigned" column per task keeps the
    problem square enough for the Hungarian solver.
    """
    weights = np.asarray(weights, dtype=float)
    n_tasks = weights.shape[0]
    if n_tasks == 0:
        return AssignmentResult([], 0.0)
    col_uav = [i for i, k in enumerate(free_channel_counts) for _ in range(max(int(k), 0))]
    profit = np.zeros((n_tasks, len(col_uav) + n_tasks))
    if col_uav:
        expanded = weights[:, col_uav]
        profit[:, : len(col_uav)] = np.where(expanded > 0, expanded, 0.0)
    assign = hungarian_min(-profit)

    matches = []
    for m, j in enumerate(assign):
        if j < len(col_uav):
            i = col_uav[j]
            if weights[m, i] > 0:
                matches.append((i, m, plans[m][i] if plans is not None else None))
    matches.sort(key=lambda t: (t[0], t[1]))
    objective = math.fsum(weights[m, i] for i, m, _ in matches)
    return AssignmentResult(matches, objective)
