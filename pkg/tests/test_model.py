from dataclasses import replace

import pytest

from uavmec.model import (
    DensitySpec,
    Position,
    RectRegion,
    UavConfig,
    benchmark_scenario,
    drifting_hotspot_scenario,
    paper_scenario,
    validate_config,
)


@pytest.mark.parametrize("make", [paper_scenario, benchmark_scenario, drifting_hotspot_scenario])
def test_presets_are_valid(make):
    assert validate_config(make()) == []


def test_published_values():
    cfg = paper_scenario()
    assert cfg.slot_length_s == 5.0
    assert cfg.vehicle_tx_power_w == 0.01
    assert cfg.channel_gain_ref == 1e-5
    assert cfg.noise_power_w == 1e-8
    assert cfg.rate_efficiency == 0.95
    assert cfg.qos_range_bps == (2.56e5, 7.68e5)
    assert cfg.uav_configs[0].harvest_mean_w == 0.2
    assert (cfg.uav_configs[0].alpha, cfg.uav_configs[0].beta) == (0.05, 0.9)


def test_rate_efficiency_violation():
    assert validate_config(benchmark_scenario(rate_efficiency=1.2)) == ["rate_efficiency not in (0,1)"]


def test_coverage_outside_region():
    cfg = benchmark_scenario()
    bad = replace(cfg.uav_configs[1], coverage=RectRegion(800, 2100, 0, 1200))
    problems = validate_config(cfg.with_(uav_configs=(cfg.uav_configs[0], bad)))
    assert problems == ["uav[1].coverage not contained in region"]


@pytest.mark.parametrize("change, needle", [
    (dict(task_gen_prob=1.5), "task_gen_prob"),
    (dict(input_bits_range=(2e6, 1e6)), "input_bits_range lower bound exceeds upper bound"),
    (dict(payment_range=(0.0, 10.0)), "payment_range must be > 0"),
    (dict(noise_power_w=0.0), "noise_power_w must be > 0"),
    (dict(control_v=-1.0), "control_v"),
    (dict(planner_density="psychic"), "planner_density"),
    (dict(density=DensitySpec(kind="hotspot", hotspot_sigma_m=0.0)), "hotspot_sigma_m"),
    (dict(density=DensitySpec(trip_mean_slots=-1.0)), "trip_mean_slots"),
])
def test_scenario_violations_name_field(change, needle):
    problems = validate_config(benchmark_scenario(**change))
    assert problems and any(needle in p for p in problems)


@pytest.mark.parametrize("change, needle", [
    (dict(channels=0), "uav[0].channels"),
    (dict(alpha=0.0), "uav[0].alpha"),
    (dict(beta=-0.1), "uav[0].beta"),
    (dict(cpu_max_gcps=0.0), "uav[0].cpu_max_gcps"),
    (dict(battery_target_j=-3.0), "uav[0].battery_target_j"),
    (dict(start=Position(5000, 5000)), "uav[0].start"),
])
def test_uav_violations_name_field(change, needle):
    cfg = benchmark_scenario()
    u = replace(cfg.uav_configs[0], **change)
    problems = validate_config(cfg.with_(uav_configs=(u, cfg.uav_configs[1])))
    assert problems and any(p.startswith(needle) for p in problems)


def test_duplicate_uav_ids():
    cfg = benchmark_scenario()
    u = replace(cfg.uav_configs[1], id=0)
    assert "uav ids must be unique" in validate_config(cfg.with_(uav_configs=(cfg.uav_configs[0], u)))


def test_region_geometry():
    r = RectRegion(0, 30, 0, 40)
    assert r.diagonal == 50 and r.center == Position(15, 20)
    assert r.contains(Position(30, 40)) and not r.contains(Position(30.001, 0))


def test_start_position_defaults_to_center():
    u = UavConfig(0, RectRegion(0, 10, 0, 20))
    assert u.start_position == Position(5, 10)
