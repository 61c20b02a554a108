"""Episode configuration: typed dataclasses, JSON round-trip, builders.

The JSON form mirrors the dataclass tree one-to-one. Unknown keys are
rejected so a typo in a config file fails loudly instead of silently
running defaults.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dynamics import JointFilterGains
from .errors import ConfigError
from .geometry import Environment, displaced_hole, sample_goal_error, unit
from .haptics import HapticParams
from .kinematics import KinematicChain, default_chain
from .operators import (CompliantFollower, LiveInputOperator, OperatorModel,
                        PassiveOperator, VisualServoCorrector)
from .trajectory import Trajectory, TrajectoryLimits, plan_trajectory

SCHEMA_VERSION = 1

MODES = ("shared", "autonomous")
POLICIES = ("erf", "baseline", "multi")


@dataclass
class EnvironmentConfig:
    surface_point: list = field(default_factory=lambda: [0.30, 0.0, 0.0])
    surface_normal: list = field(default_factory=lambda: [0.0, 0.0, 1.0])
    surface_x_axis: list = field(default_factory=lambda: [1.0, 0.0, 0.0])
    nominal_hole: list = field(default_factory=lambda: [0.35, 0.05, 0.0])
    hole_radius: float = 0.010
    peg_radius: float = 0.004
    insertion_depth: float = 0.010
    sigma_e: float = 0.010
    goal_offset_x: float = 0.0
    goal_offset_z: Optional[float] = None  # None: draw from rng_seed ~ N(0, sigma_e)


@dataclass
class TrajectoryConfig:
    waypoints: list = field(default_factory=lambda: [
        [0.19, -0.18, 0.26],
        [0.26, -0.12, 0.20],
        [0.33, -0.02, 0.12],
        [0.35, 0.05, 0.08],
        [0.35, 0.05, -0.05],
    ])
    corner_radius: float = 0.02
    v_max: float = 0.2
    a_max: float = 2.0


@dataclass
class ArbitrationConfig:
    policy: str = "erf"
    xi: float = 0.08
    filter_enabled: bool = True
    rate_hz: Optional[float] = None      # None: re-evaluate every tick
    baseline_threshold: float = 0.10
    multi_complement: bool = False
    extra_failure_probs: list = field(default_factory=list)

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ConfigError(f"unknown arbitration policy {self.policy!r}")
        if self.rate_hz is not None and self.rate_hz <= 0.0:
            raise ConfigError("rate_hz must be positive when set")


@dataclass
class DynamicsConfig:
    omega_n: float = 15.0
    zeta: float = 1.0
    speed_limit: float = 6.0


@dataclass
class HapticsConfig:
    k_max: float = 75.0
    k_min: float = 10.0
    damping: float = 7.5
    kv_max: float = 1000.0
    kv_min: float = 200.0


@dataclass
class OperatorConfig:
    kind: str = "visual_servo"
    lag_tau: float = 0.1
    gain_force: float = 0.004
    gain_visual: float = 8.0
    insert_margin: float = 0.004
    fov_radius: float = 0.060
    max_speed: float = 1.5
    initial_position: Optional[list] = None  # None: start at the machine start

    def __post_init__(self):
        from .operators import operator_kinds
        if self.kind not in operator_kinds():
            raise ConfigError(f"unknown operator kind {self.kind!r}")


@dataclass
class EpisodeConfig:
    mode: str = "shared"
    dt: float = 0.001
    timeout: float = 30.0
    rng_seed: int = 0
    stuck_exit_after: float = 1.0        # seconds of settled collision before giving up; 0 disables
    stream_hz: float = 30.0              # state stream decimation for the teleop service
    ik_damping: float = 0.05
    ik_tol: float = 1e-5
    workspace_min: list = field(default_factory=lambda: [0.17, -0.20, -0.07])
    workspace_max: list = field(default_factory=lambda: [0.43, 0.20, 0.32])
    environment: EnvironmentConfig = field(default_factory=EnvironmentConfig)
    trajectory: TrajectoryConfig = field(default_factory=TrajectoryConfig)
    arbitration: ArbitrationConfig = field(default_factory=ArbitrationConfig)
    dynamics: DynamicsConfig = field(default_factory=DynamicsConfig)
    haptics: HapticsConfig = field(default_factory=HapticsConfig)
    operator: OperatorConfig = field(default_factory=OperatorConfig)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.dt <= 0.0:
            raise ConfigError("dt must be positive")
        if self.timeout <= 0.0:
            raise ConfigError("timeout must be positive")
        if self.stuck_exit_after < 0.0:
            raise ConfigError("stuck_exit_after must be non-negative")
        if self.stream_hz <= 0.0:
            raise ConfigError("stream_hz must be positive")
        lo = np.asarray(self.workspace_min, dtype=float)
        hi = np.asarray(self.workspace_max, dtype=float)
        if lo.shape != (3,) or hi.shape != (3,) or np.any(lo >= hi):
            raise ConfigError("workspace bounds must be 3d with min < max")


_SECTION_TYPES = {
    "environment": EnvironmentConfig,
    "trajectory": TrajectoryConfig,
    "arbitration": ArbitrationConfig,
    "dynamics": DynamicsConfig,
    "haptics": HapticsConfig,
    "operator": OperatorConfig,
}


def _from_dict(cls, data: dict, path: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected an object")
    known = {f.name: f for f in dataclasses.fields(cls)}
    unknown = set(data) - set(known)
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    kwargs = {}
    for name, value in data.items():
        sub = _SECTION_TYPES.get(name)
        if sub is not None:
            kwargs[name] = _from_dict(sub, value, f"{path}.{name}")
        else:
            kwargs[name] = value
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def config_from_dict(data: dict) -> EpisodeConfig:
    data = dict(data)
    version = data.pop("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version}")
    return _from_dict(EpisodeConfig, data, "config")


def config_to_dict(cfg: EpisodeConfig) -> dict:
    out = {"schema_version": SCHEMA_VERSION}
    out.update(dataclasses.asdict(cfg))
    return out


def load_config(path) -> EpisodeConfig:
    with open(path) as fh:
        return config_from_dict(json.load(fh))


def save_config(cfg: EpisodeConfig, path) -> None:
    with open(path, "w") as fh:
        json.dump(config_to_dict(cfg), fh, indent=2)
        fh.write("\n")


def merge_overrides(cfg: EpisodeConfig, **overrides) -> EpisodeConfig:
    """Return a copy of cfg with top-level fields replaced."""
    data = config_to_dict(cfg)
    data.pop("schema_version")
    for key, value in overrides.items():
        if value is None:
            continue
        if key not in data:
            raise ConfigError(f"unknown override {key!r}")
        data[key] = value
    return config_from_dict(data)


# Builders: configs -> live objects.

def build_environment(cfg: EpisodeConfig) -> Environment:
    env = cfg.environment
    normal = unit(np.asarray(env.surface_normal, dtype=float))
    x_axis = unit(np.asarray(env.surface_x_axis, dtype=float))
    if env.goal_offset_z is None:
        dx, dz = sample_goal_error(cfg.rng_seed, env.sigma_e, env.goal_offset_x)
    else:
        dx, dz = float(env.goal_offset_x), float(env.goal_offset_z)
    nominal = np.asarray(env.nominal_hole, dtype=float)
    return Environment(
        surface_point=np.asarray(env.surface_point, dtype=float),
        surface_normal=normal,
        surface_x_axis=x_axis,
        nominal_hole=nominal,
        actual_hole=displaced_hole(nominal, x_axis, normal, dx, dz),
        hole_radius=env.hole_radius,
        peg_radius=env.peg_radius,
        insertion_depth=env.insertion_depth,
        sigma_e=env.sigma_e,
    )


def build_trajectory(cfg: EpisodeConfig) -> Trajectory:
    tr = cfg.trajectory
    limits = TrajectoryLimits(v_max=tr.v_max, a_max=tr.a_max)
    return plan_trajectory(tr.waypoints, limits, tr.corner_radius)


def build_gains(cfg: EpisodeConfig) -> JointFilterGains:
    d = cfg.dynamics
    return JointFilterGains(omega_n=d.omega_n, zeta=d.zeta, speed_limit=d.speed_limit)


def build_haptics(cfg: EpisodeConfig) -> HapticParams:
    h = cfg.haptics
    return HapticParams(k_max=h.k_max, k_min=h.k_min, damping=h.damping,
                        kv_max=h.kv_max, kv_min=h.kv_min)


def build_operator(cfg: EpisodeConfig, env: Environment) -> OperatorModel:
    op = cfg.operator
    if op.kind == "passive":
        return PassiveOperator(lag_tau=op.lag_tau)
    if op.kind == "compliant":
        return CompliantFollower(lag_tau=op.lag_tau, gain_force=op.gain_force)
    if op.kind == "visual_servo":
        return VisualServoCorrector(
            lag_tau=op.lag_tau, gain_force=op.gain_force,
            gain_visual=op.gain_visual, insert_margin=op.insert_margin,
            approach_dir=env.surface_normal, insertion_depth=env.insertion_depth)
    if op.kind == "live":
        return LiveInputOperator(lag_tau=op.lag_tau, max_speed=op.max_speed)
    raise ConfigError(f"unknown operator kind {op.kind!r}")


def build_chain(cfg: EpisodeConfig) -> KinematicChain:
    return default_chain()
