"""Flat ``section.key = value`` configuration with validated defaults.

Every calibration constant in the simulator lives here under a dotted key.
An empty document yields the defaults; unknown keys, bad values, and
out-of-range values are errors that name the offending key (and line).
Parsing is order-independent; duplicate keys are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from .control import Schedule
from .growth import DemandProfile, GrowthParams
from .render import CameraConfig


class ConfigError(ValueError):
    pass


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "1", "yes", "on"):
        return True
    if low in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


@dataclass(frozen=True)
class _Key:
    parse: Callable[[str], Any]
    default: Any
    check: Callable[[Any], bool]
    why: str  # range description used in error messages


def _pos(x) -> bool:
    return x > 0


def _nonneg(x) -> bool:
    return x >= 0


_KEYS: dict[str, _Key] = {
    "sim.seed": _Key(int, 42, _nonneg, ">= 0"),

    "growth.initial_height_cm": _Key(float, 5.0, _pos, "> 0"),
    "growth.initial_width_cm": _Key(float, 6.0, _pos, "> 0"),
    "growth.normal_rate_per_day": _Key(float, 0.0645, _pos, "> 0"),
    "growth.under_multiplier": _Key(float, 0.80, _pos, "> 0"),
    "growth.over_multiplier": _Key(float, 1.15, _pos, "> 0"),
    "growth.width_exponent": _Key(float, 0.55, lambda x: 0 < x <= 1, "in (0, 1]"),
    "growth.jitter": _Key(float, 0.05, lambda x: 0 <= x < 1, "in [0, 1)"),
    "growth.s_max": _Key(float, 0.10, lambda x: 0 < x < 1, "in (0, 1)"),
    "growth.recovery_tau_min": _Key(float, 20.0, _pos, "> 0"),
    "growth.recovery_duration_min": _Key(float, 90.0, _pos, "> 0"),
    "growth.lag_low_min": _Key(float, 10.0, _pos, "> 0"),
    "growth.lag_high_min": _Key(float, 15.0, _pos, "> 0"),

    "demand.window_start_min": _Key(int, 480, lambda x: 0 <= x < 1440, "in [0, 1440)"),
    "demand.window_end_min": _Key(int, 1020, lambda x: 0 < x <= 1440, "in (0, 1440]"),
    "demand.shape": _Key(str, "sine", lambda x: x in ("sine", "flat"), "one of sine, flat"),
    # Comparison-scenario daytime demand; calibrated so the wilt controller
    # lands near 17 L/day for the population.
    "demand.peak_loss_rate": _Key(float, 0.008, _nonneg, ">= 0"),

    # Bundled real-time monitoring session preset.
    "monitor.peak_loss_rate": _Key(float, 0.0030, _nonneg, ">= 0"),
    "monitor.start_day": _Key(int, 30, _nonneg, ">= 0"),
    "monitor.sample_interval_min": _Key(int, 15, _pos, "> 0"),
    "monitor.sample_count": _Key(int, 26, _pos, "> 0"),

    "camera.focal_px": _Key(float, 480.0, _pos, "> 0"),
    "camera.noise_amplitude": _Key(int, 0, lambda x: 0 <= x <= 255, "in [0, 255]"),
    "camera.noise_seed": _Key(int, 0, _nonneg, ">= 0"),
    "camera.canopy_fraction": _Key(float, 0.7, lambda x: 0 < x < 1, "in (0, 1)"),
    "camera.stem_fraction": _Key(float, 0.15, lambda x: 0 < x <= 1, "in (0, 1]"),

    "vision.red_margin": _Key(int, 60, lambda x: 0 <= x <= 255, "in [0, 255]"),
    "vision.min_plant_pixels": _Key(int, 25, _pos, "> 0"),

    "control.wilt_threshold": _Key(float, 0.02, _nonneg, ">= 0"),
    "control.window_start_min": _Key(int, 480, lambda x: 0 <= x < 1440, "in [0, 1440)"),
    "control.window_end_min": _Key(int, 1020, lambda x: 0 < x <= 1440, "in (0, 1440]"),
    "control.timer_period_min": _Key(int, 30, _pos, "> 0"),
    "control.pump_on_min": _Key(float, 3.0, _pos, "> 0"),

    # 101.6 L/day over 18 timer activations of 3 minutes.
    "pump.flow_l_per_min": _Key(float, 101.6 / 54.0, _pos, "> 0"),

    "growth_exp.group_size": _Key(int, 20, _pos, "> 0"),
    "growth_exp.capture_every_days": _Key(int, 3, _pos, "> 0"),
    "growth_exp.days": _Key(int, 43, _pos, "> 0"),
    "growth_exp.spacing_cm": _Key(float, 40.0, _pos, "> 0"),
    "growth_exp.peak_loss_rate": _Key(float, 0.0, _nonneg, ">= 0"),

    "compare.plants": _Key(int, 60, _pos, "> 0"),
    "compare.total_days": _Key(int, 49, _pos, "> 0"),
    "compare.auto_start_day": _Key(int, 31, _pos, "> 0"),
    "compare.auto_end_day": _Key(int, 44, _pos, "> 0"),
    "compare.capture_every_days": _Key(int, 2, _pos, "> 0"),
    "compare.sample_interval_min": _Key(int, 30, _pos, "> 0"),

    "output.dump_frames": _Key(_parse_bool, False, lambda x: True, "true or false"),
}

_SECTION_ORDER = ["sim", "growth", "demand", "monitor", "camera", "vision",
                  "control", "pump", "growth_exp", "compare", "output"]


@dataclass(frozen=True)
class Config:
    values: dict[str, Any]

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    # Builders for the module parameter objects.

    def growth_params(self) -> GrowthParams:
        v = self.values
        return GrowthParams(
            initial_height_cm=v["growth.initial_height_cm"],
            initial_width_cm=v["growth.initial_width_cm"],
            normal_rate_per_day=v["growth.normal_rate_per_day"],
            under_multiplier=v["growth.under_multiplier"],
            over_multiplier=v["growth.over_multiplier"],
            width_exponent=v["growth.width_exponent"],
            jitter=v["growth.jitter"],
            s_max=v["growth.s_max"],
            recovery_tau_min=v["growth.recovery_tau_min"],
            recovery_duration_min=v["growth.recovery_duration_min"],
            lag_low_min=v["growth.lag_low_min"],
            lag_high_min=v["growth.lag_high_min"],
        )

    def camera(self) -> CameraConfig:
        v = self.values
        return CameraConfig(
            focal_px=v["camera.focal_px"],
            noise_amplitude=v["camera.noise_amplitude"],
            noise_seed=v["camera.noise_seed"],
            canopy_fraction=v["camera.canopy_fraction"],
            stem_fraction=v["camera.stem_fraction"],
        )

    def demand(self, peak_key: str = "demand.peak_loss_rate") -> DemandProfile:
        v = self.values
        return DemandProfile(
            window_start_min=float(v["demand.window_start_min"]),
            window_end_min=float(v["demand.window_end_min"]),
            peak_loss_rate=v[peak_key],
            shape=v["demand.shape"],
        )

    def schedule(self, sample_interval_min: int | None = None) -> Schedule:
        v = self.values
        return Schedule(
            sample_interval_min=sample_interval_min or v["monitor.sample_interval_min"],
            window_start_min=v["control.window_start_min"],
            window_end_min=v["control.window_end_min"],
            timer_period_min=v["control.timer_period_min"],
            timer_on_min=v["control.pump_on_min"],
        )


def default_config() -> Config:
    return Config(values={k: entry.default for k, entry in _KEYS.items()})


def parse_config(text: str) -> Config:
    """Parse a config document, apply defaults, and validate every key."""
    values: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'section.key = value', got {raw!r}")
        key, _, raw_value = line.partition("=")
        key = key.strip()
        raw_value = raw_value.strip()
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        entry = _KEYS[key]
        try:
            value = entry.parse(raw_value)
        except ValueError:
            raise ConfigError(
                f"line {lineno}: key {key!r}: cannot parse {raw_value!r}"
            ) from None
        if not entry.check(value):
            raise ConfigError(f"key {key!r}: value {value!r} out of range (must be {entry.why})")
        values[key] = value

    for key, entry in _KEYS.items():
        values.setdefault(key, entry.default)
    _cross_check(values)
    return Config(values=values)


def _cross_check(v: dict[str, Any]) -> None:
    if v["demand.window_start_min"] >= v["demand.window_end_min"]:
        raise ConfigError("key 'demand.window_end_min': must exceed demand.window_start_min")
    if v["control.window_start_min"] >= v["control.window_end_min"]:
        raise ConfigError("key 'control.window_end_min': must exceed control.window_start_min")
    if v["growth.lag_high_min"] < v["growth.lag_low_min"]:
        raise ConfigError("key 'growth.lag_high_min': must be >= growth.lag_low_min")
    if not (1 <= v["compare.auto_start_day"] <= v["compare.auto_end_day"]
            <= v["compare.total_days"]):
        raise ConfigError(
            "key 'compare.auto_start_day': regime timeline must satisfy "
            "1 <= auto_start_day <= auto_end_day <= total_days"
        )


def load_config(path: str) -> Config:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def dump_defaults() -> str:
    """Default config document; re-parsing it reproduces ``default_config()``."""
    lines: list[str] = []
    for section in _SECTION_ORDER:
        lines.append(f"# {section}")
        for key, entry in _KEYS.items():
            if key.split(".", 1)[0] != section:
                continue
            value = entry.default
            if isinstance(value, bool):
                rendered = "true" if value else "false"
            elif isinstance(value, float):
                rendered = repr(value)
            else:
                rendered = str(value)
            lines.append(f"{key} = {rendered}")
        lines.append("")
    return "\n".join(lines)
