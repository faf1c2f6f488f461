"""Run configuration files.

Flat ``key = value`` text with ``[mount]``, ``[antenna]`` and optional
``[aps]`` sections; units live in the key names::

    [mount]
    v_max_az_deg_s = 10
    accel_az_deg_s2 = 20
    latency_s = 0.1

    [antenna]
    gain_dbi = 46
    efficiency = 0.7
    frequency_ghz = 130

Missing mount keys fall back to the defaults of ``MountConfig``.
"""
import configparser
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .kinematics import MountConfig
from .link_budget import AntennaConfig
from .optimizer import ApsConfig

MOUNT_KEYS = {
    "v_max_az_deg_s": "v_max_az",
    "v_max_el_deg_s": "v_max_el",
    "accel_az_deg_s2": "accel_az",
    "accel_el_deg_s2": "accel_el",
    "latency_s": "latency_l",
    "command_interval_s": "command_interval_dt",
    "sim_step_s": "sim_step",
}
APS_KEYS = {
    "initial_step_deg_s": ("initial_step", float),
    "min_step_deg_s": ("min_step", float),
    "max_iterations": ("max_iterations", int),
    "lower_bound_deg_s": ("lower_bound", float),
    "workers": ("workers", int),
}
ANTENNA_KEYS = ("gain_dbi", "efficiency", "frequency_ghz", "hpbw_deg")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    mount: MountConfig
    antenna: Optional[AntennaConfig] = None
    aps: ApsConfig = ApsConfig()
    elevation_first: bool = False


def _read(path) -> configparser.ConfigParser:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return parser


def _float(section, key, path):
    raw = section[key]
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{path}: [{section.name}] {key} = {raw!r} is not a number") from None


def _check_keys(section, allowed, path):
    unknown = set(section) - set(allowed)
    if unknown:
        raise ConfigError(f"{path}: unknown keys in [{section.name}]: {sorted(unknown)}")


def parse_mount(parser, path) -> MountConfig:
    if not parser.has_section("mount"):
        return MountConfig()
    sec = parser["mount"]
    _check_keys(sec, list(MOUNT_KEYS) + ["axis_order"], path)
    kwargs = {field: _float(sec, key, path) for key, field in MOUNT_KEYS.items() if key in sec}
    return MountConfig(**kwargs)


def parse_antenna(parser, path) -> Optional[AntennaConfig]:
    if not parser.has_section("antenna"):
        return None
    sec = parser["antenna"]
    _check_keys(sec, ANTENNA_KEYS, path)
    missing = [k for k in ANTENNA_KEYS[:3] if k not in sec]
    if missing:
        raise ConfigError(f"{path}: [antenna] missing keys {missing}")
    hpbw = _float(sec, "hpbw_deg", path) if "hpbw_deg" in sec else None
    return AntennaConfig(_float(sec, "gain_dbi", path), _float(sec, "efficiency", path),
                         _float(sec, "frequency_ghz", path) * 1e9, hpbw)


def load_config(path) -> RunConfig:
    parser = _read(path)
    mount = parse_mount(parser, path)
    antenna = parse_antenna(parser, path)
    aps = ApsConfig()
    if parser.has_section("aps"):
        sec = parser["aps"]
        _check_keys(sec, APS_KEYS, path)
        kwargs = {}
        for key, (field, conv) in APS_KEYS.items():
            if key in sec:
                try:
                    kwargs[field] = conv(sec[key])
                except ValueError:
                    raise ConfigError(f"{path}: [aps] {key} = {sec[key]!r} is invalid") from None
        aps = ApsConfig(**kwargs)
    order = parser.get("mount", "axis_order", fallback="az,el").replace(" ", "")
    if order not in ("az,el", "el,az"):
        raise ConfigError(f"{path}: axis_order must be 'az,el' or 'el,az', got {order!r}")
    return RunConfig(mount, antenna, aps, elevation_first=(order == "el,az"))


def load_antenna(path) -> AntennaConfig:
    """Antenna settings from a config file's ``[antenna]`` section."""
    parser = _read(path)
    antenna = parse_antenna(parser, path)
    if antenna is None:
        raise ConfigError(f"{path}: no [antenna] section")
    return antenna
