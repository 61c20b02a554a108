import numpy as np
import pytest

from arbisim.config import (
    SCHEMA_VERSION,
    EpisodeConfig,
    build_chain,
    build_environment,
    build_gains,
    build_haptics,
    build_operator,
    build_trajectory,
    config_from_dict,
    config_to_dict,
    load_config,
    merge_overrides,
    save_config,
)
from arbisim.errors import ConfigError
from arbisim.operators import (
    CompliantFollower,
    LiveInputOperator,
    PassiveOperator,
    VisualServoCorrector,
)


def test_defaults():
    cfg = EpisodeConfig()
    assert cfg.mode == "shared"
    assert cfg.dt == 0.001
    assert cfg.timeout == 30.0
    assert cfg.environment.sigma_e == 0.010
    assert cfg.environment.hole_radius == 0.010
    assert cfg.environment.peg_radius == 0.004
    assert cfg.trajectory.v_max == 0.2
    assert cfg.trajectory.a_max == 2.0
    assert cfg.arbitration.policy == "erf"
    assert cfg.arbitration.xi == 0.08
    assert cfg.dynamics.omega_n == 15.0
    assert cfg.haptics.k_max == 75.0
    assert cfg.haptics.damping == 7.5
    assert cfg.operator.kind == "visual_servo"
    assert cfg.operator.lag_tau == 0.1
    assert cfg.operator.fov_radius == 0.060


def test_dict_round_trip():
    cfg = EpisodeConfig()
    cfg.rng_seed = 17
    cfg.environment.goal_offset_x = 0.015
    data = config_to_dict(cfg)
    assert data["schema_version"] == SCHEMA_VERSION
    again = config_from_dict(data)
    assert config_to_dict(again) == data


def test_file_round_trip(tmp_path):
    path = tmp_path / "episode.json"
    cfg = EpisodeConfig()
    cfg.mode = "autonomous"
    cfg.operator.kind = "passive"
    save_config(cfg, path)
    loaded = load_config(path)
    assert config_to_dict(loaded) == config_to_dict(cfg)


def test_unknown_keys_rejected():
    data = config_to_dict(EpisodeConfig())
    data["typo_field"] = 1
    with pytest.raises(ConfigError, match="typo_field"):
        config_from_dict(data)
    data = config_to_dict(EpisodeConfig())
    data["environment"]["wrong"] = 2
    with pytest.raises(ConfigError, match="environment"):
        config_from_dict(data)


def test_schema_version_checked():
    data = config_to_dict(EpisodeConfig())
    data["schema_version"] = 999
    with pytest.raises(ConfigError, match="schema_version"):
        config_from_dict(data)


def test_validation_errors():
    with pytest.raises(ConfigError):
        EpisodeConfig(mode="manual")
    with pytest.raises(ConfigError):
        EpisodeConfig(dt=0.0)
    with pytest.raises(ConfigError):
        EpisodeConfig(timeout=-1.0)
    with pytest.raises(ConfigError):
        EpisodeConfig(workspace_min=[0.0, 0.0, 0.0], workspace_max=[0.0, 1.0, 1.0])
    from arbisim.config import ArbitrationConfig, OperatorConfig
    with pytest.raises(ConfigError):
        ArbitrationConfig(policy="magic")
    with pytest.raises(ConfigError):
        ArbitrationConfig(rate_hz=0.0)
    with pytest.raises(ConfigError):
        OperatorConfig(kind="human")


def test_merge_overrides():
    cfg = EpisodeConfig()
    merged = merge_overrides(cfg, mode="autonomous", rng_seed=5)
    assert merged.mode == "autonomous"
    assert merged.rng_seed == 5
    assert cfg.mode == "shared"  # original untouched
    assert merge_overrides(cfg, mode=None).mode == "shared"
    with pytest.raises(ConfigError):
        merge_overrides(cfg, nonsense=1)


def test_build_environment_samples_height_error_from_seed():
    cfg = EpisodeConfig()
    cfg.rng_seed = 3
    env_a = build_environment(cfg)
    env_b = build_environment(cfg)
    assert np.array_equal(env_a.actual_hole, env_b.actual_hole)
    dx, dz = env_a.goal_error
    assert dx == 0.0
    assert dz != 0.0
    cfg.rng_seed = 4
    assert build_environment(cfg).goal_error[1] != dz


def test_build_environment_fixed_offsets():
    cfg = EpisodeConfig()
    cfg.environment.goal_offset_x = 0.020
    cfg.environment.goal_offset_z = -0.005
    env = build_environment(cfg)
    dx, dz = env.goal_error
    assert dx == pytest.approx(0.020, abs=1e-15)
    assert dz == pytest.approx(-0.005, abs=1e-15)


def test_build_trajectory_and_chain():
    cfg = EpisodeConfig()
    traj = build_trajectory(cfg)
    assert np.array_equal(traj.sample(0.0), np.asarray(cfg.trajectory.waypoints[0], dtype=float))
    assert np.array_equal(traj.end_point, np.asarray(cfg.trajectory.waypoints[-1], dtype=float))
    chain = build_chain(cfg)
    assert chain.n_joints == 6
    gains = build_gains(cfg)
    assert gains.omega_n == 15.0
    haptics = build_haptics(cfg)
    assert haptics.kv_max == 1000.0


def test_build_operator_kinds():
    cfg = EpisodeConfig()
    env = build_environment(cfg)
    for kind, cls in (("passive", PassiveOperator), ("compliant", CompliantFollower),
                      ("visual_servo", VisualServoCorrector), ("live", LiveInputOperator)):
        cfg.operator.kind = kind
        assert isinstance(build_operator(cfg, env), cls)
    cfg.operator.kind = "visual_servo"
    servo = build_operator(cfg, env)
    assert np.array_equal(servo.approach_dir, env.surface_normal)
    assert servo.insertion_depth == env.insertion_depth
