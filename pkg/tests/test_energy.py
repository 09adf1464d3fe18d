import dataclasses
import math

import numpy as np
import pytest

from cases import make_task, random_p3_case
from oracles import P3Instance, p3_grid_oracle
from uavmec.energy import (
    ContractError,
    EnergyBreakdown,
    cpu_energy,
    cpu_power,
    golden_section_min,
    optimal_cpu_speed,
    plan_constraint_violations,
    service_energy,
    service_energy_bounds,
    solve_p3,
)
from uavmec.model import ServicePlan, UavConfig, RectRegion, benchmark_scenario, paper_scenario
from uavmec.radio import DomainError, min_downlink_power

CBRT9 = 2.0800838230519041  # cube root of beta / (2 alpha) for the default CPU


def test_cpu_power_rejects_zero_speed():
    with pytest.raises(DomainError):
        cpu_power(0.05, 0.9, 0.0)


def test_cpu_power_static_only():
    assert cpu_power(0.0, 0.9, 5.0) == 0.9


def test_cpu_power_at_optimal_speed():
    assert cpu_power(0.05, 0.9, 2.08008) == pytest.approx(1.35, abs=1e-4)


def test_optimal_cpu_speed_unclamped():
    assert optimal_cpu_speed(0.05, 0.9, 10.0) == pytest.approx(CBRT9, abs=1e-12)


def test_optimal_cpu_speed_matches_golden_section():
    s, _ = golden_section_min(lambda s: cpu_energy(0.05, 0.9, s, 4.0), 1e-6, 10.0)
    assert s == pytest.approx(optimal_cpu_speed(0.05, 0.9, 10.0), abs=1e-5)


def test_optimal_cpu_speed_clamped():
    assert optimal_cpu_speed(0.05, 0.9, 1.5) == 1.5


def test_optimal_cpu_speed_without_static_power():
    assert optimal_cpu_speed(0.05, 0.0, 5.0) == 0.0


def test_cpu_energy_at_optimum():
    assert cpu_energy(0.05, 0.9, CBRT9, 4.0) == pytest.approx(2.5960492265533351, rel=1e-12)


def test_closed_form_plan_when_deadline_slack():
    cfg = benchmark_scenario()
    uav = cfg.uav_configs[0]
    task = make_task(output_bits=5e5)
    plan = solve_p3(task, uav, 300.0, 1, cfg)
    assert plan.feasible
    assert plan.cpu_speed_gcps == pytest.approx(CBRT9, rel=1e-12)
    assert plan.downlink_power_w == pytest.approx(
        min_downlink_power(2.56e5, 300.0, cfg.channel_gain_ref, cfg.noise_power_w, cfg.bandwidth_hz,
                           cfg.rate_efficiency), rel=1e-12)
    parts = service_energy(task, plan, uav, cfg)
    assert parts.cpu_j == pytest.approx(2.596, abs=1e-3)
    # frozen from a 6-level zoom of the grid oracle
    assert plan.energy_j == pytest.approx(2.6378542188460914, rel=1e-9)


@pytest.mark.parametrize("noise, frozen", [(1e-8, 162.5377000999533), (5e-13, 2.644451155853438)])
def test_deadline_binding_plan(noise, frozen):
    # downlink at the QoS floor alone would take 2e6 / 2.56e5 = 7.8 s > 5 s
    cfg = paper_scenario(noise_power_w=noise)
    uav = cfg.uav_configs[0]
    task = make_task(output_bits=2e6, qos=2.56e5)
    plan = solve_p3(task, uav, 300.0, 1, cfg)
    assert plan.feasible
    busy = task.cycles_gc / plan.cpu_speed_gcps + task.output_bits / plan.downlink_rate_bps
    assert busy == pytest.approx(cfg.slot_length_s, abs=1e-6)
    assert plan_constraint_violations(task, plan, uav, cfg) == []
    assert plan.energy_j == pytest.approx(frozen, rel=1e-6)
    inst = P3Instance(4e6, 2e6, 4.0, 2.56e5, 300.0, 5.0, 0.05, 0.9, 5.0, 1e-8, 1e-5, noise, 1e6, 0.95)
    oracle = p3_grid_oracle(inst)
    assert plan.energy_j <= oracle * (1 + 1e-6)
    assert plan.energy_j >= oracle * (1 - 1e-6)


def test_cpu_alone_exceeds_slot_is_infeasible():
    cfg = benchmark_scenario()
    uav = UavConfig(0, RectRegion(0, 1200, 0, 1200), cpu_max_gcps=0.5)
    plan = solve_p3(make_task(input_bits=4e6), uav, 300.0, 1, cfg)
    assert not plan.feasible
    assert plan.energy_j == math.inf


def test_zero_static_power_takes_deadline_speed():
    cfg = benchmark_scenario()
    uav = UavConfig(0, RectRegion(0, 1200, 0, 1200), beta=0.0)
    task = make_task(output_bits=5e5)
    plan = solve_p3(task, uav, 300.0, 1, cfg)
    assert plan.feasible
    busy = task.cycles_gc / plan.cpu_speed_gcps + task.output_bits / plan.downlink_rate_bps
    assert busy == pytest.approx(cfg.slot_length_s, abs=1e-6)
    inst = P3Instance(4e6, 5e5, 4.0, 2.56e5, 300.0, 5.0, 0.05, 0.0, 5.0, 1e-8, 1e-5,
                      cfg.noise_power_w, 1e6, 0.95)
    assert plan.energy_j == pytest.approx(p3_grid_oracle(inst), rel=1e-6)


def test_service_energy_parts():
    cfg = benchmark_scenario()
    uav = cfg.uav_configs[0]
    task = make_task(input_bits=4e6, output_bits=2e6)
    plan = solve_p3(task, uav, 300.0, 1, cfg)
    parts = service_energy(task, plan, uav, cfg)
    assert isinstance(parts, EnergyBreakdown)
    assert parts.recv_j == pytest.approx(0.04, rel=1e-12)
    assert parts.total_j == pytest.approx(plan.energy_j, rel=1e-12)
    assert min(parts.recv_j, parts.cpu_j, parts.send_j) >= 0


def test_send_energy_arithmetic():
    # P = 0.01849 W delivering 2e6 bits at 2.56e5 b/s
    cfg = benchmark_scenario(channel_gain_ref=1e-2, noise_power_w=1e-8)
    uav = cfg.uav_configs[0]
    task = make_task(output_bits=2e6, qos=2.56e5)
    plan = ServicePlan(0, 0, cpu_speed_gcps=CBRT9, downlink_power_w=0.01849, upload_delay_slots=1,
                       energy_j=1.0, feasible=True, downlink_rate_bps=2.56e5, delivery_distance_m=300.0)
    parts = service_energy(task, plan, uav, cfg)
    assert parts.send_j == pytest.approx(0.1445, abs=1e-3)


def test_service_energy_rejects_infeasible_plan():
    cfg = benchmark_scenario()
    with pytest.raises(ContractError):
        service_energy(make_task(), ServicePlan(0, 0), cfg.uav_configs[0], cfg)


def test_energy_bounds_ordered_and_positive():
    cfg = benchmark_scenario()
    e_min, e_max = service_energy_bounds(cfg, cfg.uav_configs[0])
    assert 0 < e_min < e_max
    # the cheapest task directly below the UAV is the deadline-binding case above
    assert e_min == pytest.approx(2.644451155853438, rel=1e-9)


def test_energy_bounds_bracket_random_tasks():
    cfg = benchmark_scenario()
    uav = cfg.uav_configs[0]
    e_min, e_max = service_energy_bounds(cfg, uav)
    rng = np.random.default_rng(3)
    for _ in range(300):
        task = make_task(input_bits=rng.uniform(*cfg.input_bits_range),
                         output_bits=rng.uniform(*cfg.output_bits_range),
                         qos=rng.uniform(*cfg.qos_range_bps))
        d = math.hypot(rng.uniform(0, uav.coverage.diagonal), uav.altitude_m)
        plan = solve_p3(task, uav, d, 1, cfg)
        if plan.feasible:
            assert e_min * (1 - 1e-9) <= plan.energy_j <= e_max * (1 + 1e-9)


def test_random_instances_match_oracle():
    rng = np.random.default_rng(11)
    for k in range(25):
        case = random_p3_case(rng, closed_form_bias=bool(k % 2))
        plan = solve_p3(case.task, case.uav, case.distance_m, 1, case.cfg)
        oracle = p3_grid_oracle(case.oracle_instance())
        assert (oracle is None) == (not plan.feasible)
        if oracle is not None:
            assert plan.energy_j == pytest.approx(oracle, rel=1e-6)


def test_unreachable_rates_are_infeasible_not_errors():
    c = random_p3_case(np.random.default_rng(4))
    for change in (dict(qos_bps=1e12), dict(output_bits=1e12)):
        task = dataclasses.replace(c.task, **change)
        assert not solve_p3(task, c.uav, c.distance_m, 1, c.cfg).feasible
