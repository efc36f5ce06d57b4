"""Run and batch configuration files.

Configs are YAML with nested sections; every key is optional and omitted
fields fall back to the standard free-space parameter set.  Unknown keys and
invariant violations raise :class:`ConfigError` with the offending line when
it is known.  Key names mirror the published parameter-table rows
(``carrier_frequency_hz``, ``antenna_isolation_db``, ...).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .dsp import ProcessingConfig
from .echo import RadarConfig, WallConfig
from .kinematics import Activity, ActivityParams


class ConfigError(ValueError):
    """Malformed or inconsistent configuration file."""


@dataclass
class SubjectConfig:
    height_m: float = 1.8
    weight_kg: float = 84.24


@dataclass
class RunConfig:
    """Everything one simulation run needs."""

    scenario: str = "free_space"
    radar: RadarConfig = field(default_factory=RadarConfig)
    wall: WallConfig | None = None
    subject: SubjectConfig = field(default_factory=SubjectConfig)
    activity: ActivityParams = field(default_factory=ActivityParams)
    processing: ProcessingConfig = field(default_factory=ProcessingConfig)
    seed: int = 0

    def __post_init__(self):
        if self.scenario not in ("free_space", "through_wall"):
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        if (self.wall is not None) != (self.scenario == "through_wall"):
            raise ConfigError("wall block required iff scenario is through_wall")


@dataclass
class BatchSpec:
    """Randomized dataset generation plan."""

    count_per_activity: int = 300
    train_fraction: float = 0.8
    base_seed: int = 0
    height_range_m: tuple[float, float] = (1.5, 1.9)
    motion_angle_range_deg: tuple[float, float] = (-30.0, 30.0)
    initial_range_m: tuple[float, float] = (1.0, 3.0)
    amplitude_jitter: float = 0.2
    activities: tuple[Activity, ...] = tuple(Activity)
    export_all_variants: bool = False

    def __post_init__(self):
        if self.count_per_activity <= 0:
            raise ConfigError("count_per_activity must be positive")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError("train_fraction must be in (0, 1)")
        for name, (lo, hi), bound in (
                ("height_range_m", self.height_range_m, (0.5, 3.0)),
                ("motion_angle_range_deg", self.motion_angle_range_deg, (-90.0, 90.0)),
                ("initial_range_m", self.initial_range_m, (0.1, 20.0))):
            if not (bound[0] <= lo <= hi <= bound[1]):
                raise ConfigError(f"{name} out of physical bounds {bound}")
        if not 0.0 <= self.amplitude_jitter < 1.0:
            raise ConfigError("amplitude_jitter must be in [0, 1)")
        self.activities = tuple(Activity.parse(a) for a in self.activities)


# --- YAML handling with per-key line numbers -------------------------------

def _compose(path) -> tuple[dict, dict]:
    """Load a YAML mapping plus a {key-path: line} index for diagnostics."""
    text = Path(path).read_text()
    try:
        node = yaml.compose(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    lines: dict[str, int] = {}

    def walk(n, prefix):
        if n is None:
            return None
        if isinstance(n, yaml.MappingNode):
            out = {}
            for key_node, value_node in n.value:
                key = str(key_node.value)
                dotted = f"{prefix}.{key}" if prefix else key
                lines[dotted] = key_node.start_mark.line + 1
                out[key] = walk(value_node, dotted)
            return out
        if isinstance(n, yaml.SequenceNode):
            return [walk(item, prefix) for item in n.value]
        return yaml.safe_load(yaml.serialize(n))

    data = walk(node, "")
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return data, lines


def _take(section: dict, lines: dict, prefix: str, known: dict, path):
    """Match section keys against ``known`` {key: converter}, line-checked."""
    out = {}
    for key, value in section.items():
        dotted = f"{prefix}.{key}" if prefix else key
        if key not in known:
            line = lines.get(dotted)
            where = f" (line {line})" if line else ""
            raise ConfigError(f"{path}: unknown key {dotted!r}{where}")
        if value is not None:
            try:
                out[key] = known[key](value)
            except (TypeError, ValueError) as exc:
                line = lines.get(dotted)
                where = f" (line {line})" if line else ""
                raise ConfigError(f"{path}: bad value for {dotted!r}{where}: {exc}") from exc
    return out


def _xyz(value):
    vec = tuple(float(v) for v in value)
    if len(vec) != 3:
        raise ValueError("expected three components")
    return vec


def _xy(value):
    vec = tuple(float(v) for v in value)
    if len(vec) != 2:
        raise ValueError("expected two components")
    return vec


def _pair(value):
    vec = tuple(float(v) for v in value)
    if len(vec) != 2:
        raise ValueError("expected [low, high]")
    return vec


_RADAR_KEYS = {
    "carrier_frequency_hz": float,
    "bandwidth_hz": float,
    "pulse_repetition_frequency_hz": float,
    "sampling_frequency_hz": float,
    "pulse_duration_s": float,
    "transmitter_position_m": _xyz,
    "receiver_position_m": _xyz,
    "antenna_gain_dbi": float,
    "antenna_isolation_db": float,
    "snr_db": float,
    "simulation_time_s": float,
}

_RADAR_FIELD = {
    "pulse_repetition_frequency_hz": "prf_hz",
    "transmitter_position_m": "tx_position_m",
    "receiver_position_m": "rx_position_m",
    "simulation_time_s": "duration_s",
}

_WALL_KEYS = {
    "center_position_m": _xyz,
    "dimensions_m": _xyz,
    "relative_dielectric_constant": float,
    "loss_tangent": float,
}

_WALL_FIELD = {
    "center_position_m": "center_m",
    "dimensions_m": "size_m",
    "relative_dielectric_constant": "epsilon_r",
}

_SUBJECT_KEYS = {"height_m": float, "weight_kg": float}

_ACTIVITY_KEYS = {
    "label": Activity.parse,
    "gait_frequency_hz": float,
    "thigh_amplitude_deg": float,
    "calf_amplitude_deg": float,
    "arm_amplitude_deg": float,
    "turn_amplitude_deg": float,
    "torso_speed_mps": float,
    "motion_angle_deg": float,
    "initial_position_m": _xy,
    "torso_height_m": float,
    "walk_start_s": float,
    "sit_start_s": float,
    "fall_start_s": float,
    "transition_duration_s": float,
}

_PROCESSING_KEYS = {
    "fft_size": int,
    "window_fraction": float,
    "overlap_fraction": float,
    "smoother_order": int,
    "smoother_frame": int,
    "reassign_threshold": float,
    "range_gate_bins": lambda v: (int(v[0]), int(v[1])),
    "image_size": int,
}

_PROCESSING_FIELD = {
    "fft_size": "n_fft",
    "range_gate_bins": "range_gate",
}

_TOP_KEYS = ("scenario", "radar", "wall", "subject", "activity", "processing", "seed")


def _build_activity(values: dict) -> ActivityParams:
    kwargs = {}
    amplitude = {
        "thigh_amplitude_deg": "thigh_amplitude_rad",
        "calf_amplitude_deg": "calf_amplitude_rad",
        "arm_amplitude_deg": "arm_amplitude_rad",
        "turn_amplitude_deg": "turn_amplitude_rad",
    }
    speed = values.pop("torso_speed_mps", 1.5)
    angle = math.radians(values.pop("motion_angle_deg", 0.0))
    kwargs["velocity_mps"] = (speed * math.cos(angle), speed * math.sin(angle))
    if "label" in values:
        kwargs["activity"] = values.pop("label")
    for key, value in values.items():
        kwargs[amplitude.get(key, key)] = (math.radians(value)
                                           if key in amplitude else value)
    return ActivityParams(**kwargs)


def load_config(path) -> RunConfig:
    """Parse and validate a run configuration file.

    An empty file yields the full free-space default configuration.
    """
    data, lines = _compose(path)
    for key in data:
        if key not in _TOP_KEYS:
            line = lines.get(key)
            where = f" (line {line})" if line else ""
            raise ConfigError(f"{path}: unknown key {key!r}{where}")

    scenario = data.get("scenario") or "free_space"
    radar_vals = _take(data.get("radar") or {}, lines, "radar", _RADAR_KEYS, path)
    radar_kwargs = {_RADAR_FIELD.get(k, k): v for k, v in radar_vals.items()}
    if scenario == "through_wall":
        radar_kwargs.setdefault("carrier_frequency_hz", 2.0e9)
        radar_kwargs.setdefault("bandwidth_hz", 1.0e9)
        radar_kwargs.setdefault("prf_hz", 128.0)

    wall = None
    if data.get("wall") is not None:
        wall_vals = _take(data["wall"], lines, "wall", _WALL_KEYS, path)
        wall = WallConfig(**{_WALL_FIELD.get(k, k): v for k, v in wall_vals.items()})

    subject_vals = _take(data.get("subject") or {}, lines, "subject", _SUBJECT_KEYS, path)
    activity_vals = _take(data.get("activity") or {}, lines, "activity",
                          _ACTIVITY_KEYS, path)
    proc_vals = _take(data.get("processing") or {}, lines, "processing",
                      _PROCESSING_KEYS, path)
    proc_kwargs = {_PROCESSING_FIELD.get(k, k): v for k, v in proc_vals.items()}

    try:
        return RunConfig(
            scenario=scenario,
            radar=RadarConfig(**radar_kwargs),
            wall=wall,
            subject=SubjectConfig(**subject_vals),
            activity=_build_activity(activity_vals),
            processing=ProcessingConfig(**proc_kwargs),
            seed=int(data.get("seed") or 0),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


_BATCH_KEYS = {
    "count_per_activity": int,
    "train_fraction": float,
    "base_seed": int,
    "height_range_m": _pair,
    "motion_angle_range_deg": _pair,
    "initial_range_m": _pair,
    "amplitude_jitter": float,
    "activities": lambda v: tuple(Activity.parse(a) for a in v),
    "export_all_variants": bool,
}


def load_batch_spec(path) -> BatchSpec:
    """Parse and validate a batch specification file."""
    data, lines = _compose(path)
    values = _take(data, lines, "", _BATCH_KEYS, path)
    try:
        return BatchSpec(**values)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
