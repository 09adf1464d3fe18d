"""Per (UAV, task) service-energy minimization.

For one UAV serving one task the UAV picks a CPU speed ``s`` (Gcycles/s) and
a downlink power ``P`` (W) to minimize

    E = C_r * I  +  (alpha s^3 + beta) * phi / s  +  P * O / r(P)

subject to ``r(P) >= qos``, ``phi / s + O / r(P) <= tau`` and ``s <= s_max``.
The CPU and radio terms decouple unless the one-slot deadline binds; in that
case the optimum lies on the deadline curve and is found by a 1-D search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import ScenarioConfig, ServicePlan, TaskRequest, UavConfig
from .radio import DomainError, downlink_rate, noise_gain_ratio, power_for_rate

LN2 = math.log(2.0)
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
SCAN_POINTS = 64
REL_TOL = 1e-9
ABS_TOL = 1e-12


def close_le(a: float, b: float) -> bool:
    """``a <= b`` up to the package-wide comparison tolerance."""
    return a <= b + max(REL_TOL * abs(b), ABS_TOL)


@dataclass(frozen=True)
class EnergyBreakdown:
    recv_j: float
    cpu_j: float
    send_j: float

    @property
    def total_j(self) -> float:
        return self.recv_j + self.cpu_j + self.send_j


class ContractError(RuntimeError):
    pass


def cpu_power(alpha: float, beta: float, s_gcps: float) -> float:
    if s_gcps <= 0:
        raise DomainError(f"cpu speed must be > 0, got {s_gcps}")
    return alpha * s_gcps ** 3 + beta


def cpu_energy(alpha: float, beta: float, s_gcps: float, cycles_gc: float) -> float:
    return cpu_power(alpha, beta, s_gcps) * cycles_gc / s_gcps


def optimal_cpu_speed(alpha: float, beta: float, s_max: float) -> float:
    """Minimizer of CPU energy over ``(0, s_max]``, ignoring the deadline.

    Independent of the workload.  With ``beta == 0`` the energy ``alpha s^2 phi``
    is increasing, so the infimum sits at 0; callers treat that as "slowest
    speed the deadline allows" (see :func:`solve_p3`).
    """
    if alpha <= 0 or s_max <= 0:
        raise DomainError("alpha and s_max must be > 0")
    return min((beta / (2.0 * alpha)) ** (1.0 / 3.0), s_max)


def golden_section_min(f, a: float, b: float, tol: float = 1e-13, max_iter: int = 200):
    """Minimize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


@dataclass(frozen=True)
class _Solution:
    s: float
    power: float
    rate: float
    cpu_j: float
    send_j: float
    boundary: bool


def _solve(phi: float, out_bits: float, qos: float, mu: float, tau: float, alpha: float,
           beta: float, s_max: float, gamma_w: float) -> _Solution | None:
    if phi >= tau * s_max or math.isinf(power_for_rate(qos, mu, gamma_w)):
        return None

    s_star = optimal_cpu_speed(alpha, beta, s_max)
    if s_star > 0:
        p_qos = power_for_rate(qos, mu, gamma_w)
        if phi / s_star + out_bits / qos <= tau:
            return _Solution(s_star, p_qos, qos, cpu_energy(alpha, beta, s_star, phi),
                             p_qos * out_bits / qos, boundary=False)

    # deadline binds: downlink gets exactly the time the CPU leaves over
    s_lo = phi / tau
    s_hi = s_max
    if tau > out_bits / qos:
        # above this speed the deadline-driven rate would undercut the QoS floor
        s_hi = min(s_hi, phi / (tau - out_bits / qos))
    if s_hi <= s_lo:
        return None
    k = out_bits * LN2 / gamma_w

    def objective(s: float) -> float:
        t = tau - phi / s
        if t <= 0:
            return math.inf
        x = k / t
        if x > 700.0:
            return math.inf
        return phi * (alpha * s * s + beta / s) + mu * math.expm1(x) * t

    # objective is convex on (s_lo, s_hi]; the scan only narrows the bracket
    step = (s_hi - s_lo) / SCAN_POINTS
    best_k, best_f = SCAN_POINTS, objective(s_hi)
    for i in range(SCAN_POINTS - 1, 0, -1):
        fi = objective(s_lo + i * step)
        if fi < best_f:
            best_k, best_f = i, fi
    if math.isinf(best_f):
        return None
    a = s_lo + (best_k - 1) * step
    b = min(s_lo + (best_k + 1) * step, s_hi)
    s, f = golden_section_min(objective, a, b)
    if best_f < f:
        s = s_lo + best_k * step if best_k < SCAN_POINTS else s_hi

    t = tau - phi / s
    rate = max(out_bits / t, qos)
    power = power_for_rate(rate, mu, gamma_w)
    if math.isinf(power):
        return None
    return _Solution(s, power, rate, cpu_energy(alpha, beta, s, phi), power * out_bits / rate,
                     boundary=True)


def solve_p3(task: TaskRequest, uav: UavConfig, delivery_distance_m: float, upload_delay: int,
             cfg: ScenarioConfig) -> ServicePlan:
    """Minimum-energy CPU speed and downlink power for ``uav`` serving ``task``.

    ``delivery_distance_m`` is the slant distance at the delivery slot
    ``t + upload_delay``.  Infeasible pairs come back with ``feasible=False``.
    """
    mu = noise_gain_ratio(delivery_distance_m, cfg.channel_gain_ref, cfg.noise_power_w)
    sol = _solve(task.cycles_gc, task.output_bits, task.qos_bps, mu, cfg.slot_length_s,
                 uav.alpha, uav.beta, uav.cpu_max_gcps, cfg.rate_efficiency * cfg.bandwidth_hz)
    if sol is None:
        return ServicePlan(uav_id=uav.id, task_id=task.task_id, upload_delay_slots=upload_delay,
                           delivery_distance_m=delivery_distance_m)
    energy = uav.recv_energy_j_per_bit * task.input_bits + sol.cpu_j + sol.send_j
    return ServicePlan(
        uav_id=uav.id,
        task_id=task.task_id,
        cpu_speed_gcps=sol.s,
        downlink_power_w=sol.power,
        upload_delay_slots=upload_delay,
        energy_j=energy,
        feasible=True,
        downlink_rate_bps=sol.rate,
        delivery_distance_m=delivery_distance_m,
    )


def service_energy(task: TaskRequest, plan: ServicePlan, uav: UavConfig,
                   cfg: ScenarioConfig) -> EnergyBreakdown:
    """Receive, compute and transmit energy of an already-solved plan."""
    if not plan.feasible:
        raise ContractError(f"plan for uav {plan.uav_id} task {plan.task_id} is infeasible")
    rate = downlink_rate(plan.downlink_power_w, plan.delivery_distance_m, cfg.channel_gain_ref,
                         cfg.noise_power_w, cfg.bandwidth_hz, cfg.rate_efficiency)
    return EnergyBreakdown(
        recv_j=uav.recv_energy_j_per_bit * task.input_bits,
        cpu_j=cpu_energy(uav.alpha, uav.beta, plan.cpu_speed_gcps, task.cycles_gc),
        send_j=plan.downlink_power_w * task.output_bits / rate if rate > 0 else 0.0,
    )


def plan_constraint_violations(task: TaskRequest, plan: ServicePlan, uav: UavConfig,
                               cfg: ScenarioConfig) -> list[str]:
    """QoS, deadline and CPU-cap checks of a feasible plan (empty when all hold)."""
    out = []
    rate = downlink_rate(plan.downlink_power_w, plan.delivery_distance_m, cfg.channel_gain_ref,
                         cfg.noise_power_w, cfg.bandwidth_hz, cfg.rate_efficiency)
    if not close_le(task.qos_bps, rate):
        out.append(f"qos: rate {rate} < {task.qos_bps}")
    busy = task.cycles_gc / plan.cpu_speed_gcps + task.output_bits / rate
    if not close_le(busy, cfg.slot_length_s):
        out.append(f"deadline: {busy} s > {cfg.slot_length_s} s")
    if not close_le(plan.cpu_speed_gcps, uav.cpu_max_gcps):
        out.append(f"cpu: {plan.cpu_speed_gcps} > {uav.cpu_max_gcps}")
    return out


def service_energy_bounds(cfg: ScenarioConfig, uav: UavConfig) -> tuple[float, float]:
    """Smallest and largest optimal energy ``uav`` can spend on one task.

    Optimal energy grows with every task attribute and with distance, so the
    bounds are the cheapest task directly below the UAV and the most
    demanding task across the coverage diagonal.
    """
    gamma_w = cfg.rate_efficiency * cfg.bandwidth_hz

    def optimum(in_bits, out_bits, qos, d):
        mu = noise_gain_ratio(d, cfg.channel_gain_ref, cfg.noise_power_w)
        sol = _solve(cfg.cycles_per_bit * in_bits, out_bits, qos, mu, cfg.slot_length_s,
                     uav.alpha, uav.beta, uav.cpu_max_gcps, gamma_w)
        if sol is None:
            return None
        return uav.recv_energy_j_per_bit * in_bits + sol.cpu_j + sol.send_j

    d_near = uav.altitude_m
    d_far = math.hypot(uav.coverage.diagonal, uav.altitude_m)
    e_min = optimum(cfg.input_bits_range[0], cfg.output_bits_range[0], cfg.qos_range_bps[0], d_near)
    e_max = optimum(cfg.input_bits_range[1], cfg.output_bits_range[1], cfg.qos_range_bps[1], d_far)
    if e_max is None:
        # the hardest task is unservable; take the worst servable one on a grid
        levels = [i / 16 for i in range(17)]
        found = []
        for fi in levels:
            for fo in levels:
                for fq in levels:
                    e = optimum(_lerp(cfg.input_bits_range, fi), _lerp(cfg.output_bits_range, fo),
                                _lerp(cfg.qos_range_bps, fq), d_far)
                    if e is not None:
                        found.append(e)
        e_max = max(found) if found else None
    if e_min is None or e_max is None:
        raise DomainError(f"uav {uav.id} cannot serve any task in the configured ranges")
    return e_min, e_max


def _lerp(iv: tuple[float, float], f: float) -> float:
    return iv[0] + f * (iv[1] - iv[0])
