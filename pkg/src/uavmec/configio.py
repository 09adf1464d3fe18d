"""Scenario files: flat INI key/value text with units in the key names.

Example::

    [scenario]
    schema_version = 1
    preset = benchmark
    num_slots = 300
    control_v = 2

    [uav.0]
    coverage_m = 0, 1200, 0, 1200
    channels = 2

``preset`` (``paper``, ``benchmark`` or ``drifting-hotspot``) supplies every
value not given in the file.  When any ``[uav.N]`` section is present the
file's UAV list replaces the preset's; each UAV starts from the default
:class:`UavConfig` values.
"""

from __future__ import annotations

import configparser
import dataclasses
import io
from pathlib import Path
from typing import Callable

from .model import (
    ConfigError,
    DensitySpec,
    Position,
    RectRegion,
    ScenarioConfig,
    UavConfig,
    benchmark_scenario,
    drifting_hotspot_scenario,
    paper_scenario,
    validate_config,
)

SCHEMA_VERSION = 1

PRESETS: dict[str, Callable[..., ScenarioConfig]] = {
    "paper": paper_scenario,
    "benchmark": benchmark_scenario,
    "drifting-hotspot": drifting_hotspot_scenario,
}

# file key -> (dataclass field, kind)
_SCENARIO_KEYS = {
    "slot_length_s": ("slot_length_s", "float"),
    "num_slots": ("num_slots", "int"),
    "region_m": ("region", "rect"),
    "vehicle_count": ("vehicle_count", "int"),
    "vehicle_speed_range_mps": ("vehicle_speed_range_mps", "pair"),
    "task_gen_prob": ("task_gen_prob", "float"),
    "input_bits_range": ("input_bits_range", "pair"),
    "output_bits_range": ("output_bits_range", "pair"),
    "qos_range_bps": ("qos_range_bps", "pair"),
    "payment_range": ("payment_range", "pair"),
    "cycles_per_bit_gc": ("cycles_per_bit", "float"),
    "vehicle_tx_power_w": ("vehicle_tx_power_w", "float"),
    "bandwidth_hz": ("bandwidth_hz", "float"),
    "channel_gain_ref": ("channel_gain_ref", "float"),
    "noise_power_w": ("noise_power_w", "float"),
    "rate_efficiency": ("rate_efficiency", "float"),
    "control_v": ("control_v", "float"),
    "rng_seed": ("rng_seed", "int"),
    "planner_density": ("planner_density", "str"),
    "grid_n": ("grid_n", "int"),
}

_DENSITY_KEYS = {
    "kind": ("kind", "str"),
    "hotspot_start_m": ("hotspot_start", "point"),
    "hotspot_end_m": ("hotspot_end", "point"),
    "hotspot_sigma_m": ("hotspot_sigma_m", "float"),
    "hotspot_weight": ("hotspot_weight", "float"),
    "trip_mean_slots": ("trip_mean_slots", "float"),
}

_UAV_KEYS = {
    "coverage_m": ("coverage", "rect"),
    "altitude_m": ("altitude_m", "float"),
    "max_speed_mps": ("max_speed_mps", "float"),
    "channels": ("channels", "int"),
    "cpu_max_gcps": ("cpu_max_gcps", "float"),
    "cpu_alpha": ("alpha", "float"),
    "cpu_beta": ("beta", "float"),
    "recv_energy_j_per_bit": ("recv_energy_j_per_bit", "float"),
    "battery_target_j": ("battery_target_j", "optfloat"),
    "harvest_max_w": ("harvest_max_w", "float"),
    "harvest_mean_w": ("harvest_mean_w", "float"),
    "start_m": ("start", "optpoint"),
}


def _floats(text: str, n: int, key: str) -> list[float]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n:
        raise ConfigError(f"{key}: expected {n} comma-separated numbers, got {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise ConfigError(f"{key}: not a number list: {text!r}") from None


def _parse_value(key: str, kind: str, text: str):
    text = text.strip()
    if kind == "str":
        return text
    if kind in ("optfloat", "optpoint") and text.lower() in ("", "none", "auto"):
        return None
    try:
        if kind == "int":
            return int(text)
        if kind in ("float", "optfloat"):
            return float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected {'an integer' if kind == 'int' else 'a number'}, got {text!r}") from None
    if kind == "pair":
        return tuple(_floats(text, 2, key))
    if kind in ("point", "optpoint"):
        return Position(*_floats(text, 2, key))
    if kind == "rect":
        return RectRegion(*_floats(text, 4, key))
    raise AssertionError(kind)


def _format_value(kind: str, value) -> str:
    if value is None:
        return "auto" if kind == "optfloat" else "none"
    if kind == "str":
        return value
    if kind == "int":
        return str(int(value))
    if kind in ("float", "optfloat"):
        return repr(float(value))
    if kind == "pair":
        return ", ".join(repr(float(v)) for v in value)
    if kind in ("point", "optpoint"):
        return f"{value.x!r}, {value.y!r}"
    if kind == "rect":
        return ", ".join(repr(float(v)) for v in (value.x_min, value.x_max, value.y_min, value.y_max))
    raise AssertionError(kind)


def _apply(section: configparser.SectionProxy, keys: dict, label: str) -> dict:
    changes = {}
    for key, text in section.items():
        if key not in keys:
            raise ConfigError(f"{label}.{key}: unknown key")
        field_name, kind = keys[key]
        changes[field_name] = _parse_value(f"{label}.{key}", kind, text)
    return changes


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate scenario text; raises :class:`ConfigError` on any problem."""
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__")
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"syntax: {exc}") from None
    if not parser.has_section("scenario"):
        raise ConfigError("scenario: missing [scenario] section")
    sc = dict(parser["scenario"])
    version = sc.pop("schema_version", str(SCHEMA_VERSION)).strip()
    if version != str(SCHEMA_VERSION):
        raise ConfigError(f"scenario.schema_version: unsupported version {version!r}")
    preset = sc.pop("preset", "paper").strip()
    if preset not in PRESETS:
        raise ConfigError(f"scenario.preset: must be one of {sorted(PRESETS)}")
    cfg = PRESETS[preset]()

    scen_section = configparser.ConfigParser(interpolation=None, default_section="__none__")
    scen_section.read_dict({"scenario": sc})
    changes = _apply(scen_section["scenario"], _SCENARIO_KEYS, "scenario")

    if parser.has_section("density"):
        dchanges = _apply(parser["density"], _DENSITY_KEYS, "density")
        changes["density"] = dataclasses.replace(cfg.density, **dchanges)

    uav_sections = []
    for name in parser.sections():
        if name in ("scenario", "density"):
            continue
        if not name.startswith("uav."):
            raise ConfigError(f"{name}: unknown section")
        try:
            uid = int(name[4:])
        except ValueError:
            raise ConfigError(f"{name}: UAV section must be named uav.<integer id>") from None
        uav_sections.append((uid, name))
    if uav_sections:
        uavs = []
        for uid, name in sorted(uav_sections):
            uchanges = _apply(parser[name], _UAV_KEYS, name)
            if "coverage" not in uchanges:
                raise ConfigError(f"{name}.coverage_m: required")
            uavs.append(UavConfig(id=uid, **uchanges))
        changes["uav_configs"] = tuple(uavs)

    cfg = dataclasses.replace(cfg, **changes)
    problems = validate_config(cfg)
    if problems:
        raise ConfigError("; ".join(problems))
    return cfg


def load_config(path) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    return parse_config(text)


def dump_config(cfg: ScenarioConfig) -> str:
    """Serialize every field explicitly; ``parse_config(dump_config(c)) == c``."""
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__")
    scen = {"schema_version": str(SCHEMA_VERSION)}
    for key, (name, kind) in _SCENARIO_KEYS.items():
        scen[key] = _format_value(kind, getattr(cfg, name))
    parser["scenario"] = scen
    parser["density"] = {key: _format_value(kind, getattr(cfg.density, name))
                         for key, (name, kind) in _DENSITY_KEYS.items()}
    for u in cfg.uav_configs:
        parser[f"uav.{u.id}"] = {key: _format_value(kind, getattr(u, name))
                                 for key, (name, kind) in _UAV_KEYS.items()}
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


def save_config(cfg: ScenarioConfig, path) -> None:
    Path(path).write_text(dump_config(cfg))
