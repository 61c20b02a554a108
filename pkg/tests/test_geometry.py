import numpy as np
import pytest

from arbisim.errors import ConfigError
from arbisim.geometry import (
    CONTACT_CODES,
    CONTACT_FROM_CODE,
    ContactStatus,
    Environment,
    actual_depth,
    clamp_to_surface,
    classify_contact,
    displaced_hole,
    radial_offset,
    sample_goal_error,
    signed_distance,
    unit,
    vec3,
)

NOMINAL = vec3(0.35, 0.05, 0.0)
X_AXIS = vec3(1.0, 0.0, 0.0)
NORMAL = vec3(0.0, 0.0, 1.0)


def make_env(dx=0.0, dz=0.0, **kw):
    params = dict(
        surface_point=vec3(0.30, 0.0, 0.0),
        surface_normal=NORMAL,
        surface_x_axis=X_AXIS,
        nominal_hole=NOMINAL,
        actual_hole=displaced_hole(NOMINAL, X_AXIS, NORMAL, dx, dz),
        hole_radius=0.010,
        peg_radius=0.004,
        insertion_depth=0.010,
        sigma_e=0.010,
    )
    params.update(kw)
    return Environment(**params)


def test_environment_validation():
    env = make_env()
    assert env.clearance == pytest.approx(0.006)
    with pytest.raises(ConfigError):
        make_env(hole_radius=0.004, peg_radius=0.010)
    with pytest.raises(ConfigError):
        make_env(insertion_depth=0.0)
    with pytest.raises(ConfigError):
        make_env(sigma_e=-1.0)
    with pytest.raises(ConfigError):
        make_env(surface_x_axis=vec3(0.0, 0.1, 1.0))
    with pytest.raises(ConfigError):
        make_env(nominal_hole=vec3(0.35, 0.05, 0.002))


def test_goal_error_recovered_from_actual_hole():
    env = make_env(dx=0.020, dz=-0.007)
    gx, gz = env.goal_error
    assert gx == pytest.approx(0.020, abs=1e-15)
    assert gz == pytest.approx(-0.007, abs=1e-15)


def test_sample_goal_error_dx_is_deterministic():
    for seed in (0, 1, 99):
        dx, _ = sample_goal_error(seed, 0.010, 0.0)
        assert dx == 0.0
    dx, _ = sample_goal_error(7, 0.010, 0.030)
    assert dx == 0.030


def test_sample_goal_error_repeatable_and_seed_dependent():
    a = sample_goal_error(42, 0.010, 0.005)
    b = sample_goal_error(42, 0.010, 0.005)
    c = sample_goal_error(43, 0.010, 0.005)
    assert a == b
    assert a[1] != c[1]


def test_sample_goal_error_stddev():
    # Statistical check of the height-error draw: sample stddev of 1e5
    # seeded draws should sit within 3% of sigma_e = 10 mm.
    draws = np.array([sample_goal_error(seed, 0.010, 0.0)[1] for seed in range(100_000)])
    assert 0.0097 <= draws.std() <= 0.0103
    assert abs(draws.mean()) < 0.0002


def test_sample_goal_error_rejects_bad_sigma():
    with pytest.raises(ConfigError):
        sample_goal_error(0, 0.0, 0.0)
    with pytest.raises(ConfigError):
        sample_goal_error(0, float("nan"), 0.0)


def test_signed_distance_sign_convention():
    env = make_env()
    assert signed_distance(vec3(0.32, 0.01, 0.0), env) == 0.0
    assert signed_distance(vec3(0.35, 0.05, 0.010), env) == pytest.approx(0.010, abs=1e-15)
    assert signed_distance(vec3(0.35, 0.05, -0.002), env) == pytest.approx(-0.002, abs=1e-15)


def test_signed_distance_ignores_actual_hole():
    rng = np.random.default_rng(3)
    for _ in range(50):
        tip = vec3(*rng.uniform(-0.2, 0.6, 3))
        base = signed_distance(tip, make_env())
        shifted = signed_distance(tip, make_env(dx=rng.uniform(-0.05, 0.05),
                                                dz=rng.uniform(-0.05, 0.05)))
        assert shifted == base


def test_signed_distance_lipschitz_along_normal():
    env = make_env(dz=0.004)
    rng = np.random.default_rng(11)
    for _ in range(50):
        tip = vec3(*rng.uniform(-0.2, 0.6, 3))
        h = rng.uniform(-0.1, 0.1)
        moved = signed_distance(tip + h * env.surface_normal, env)
        assert moved - signed_distance(tip, env) == pytest.approx(h, abs=1e-12)


def test_classify_contact_examples():
    env = make_env()
    # Tip at the hole center, exactly at insertion depth.
    assert classify_contact(env.actual_hole - 0.010 * NORMAL, env) is ContactStatus.INSERTED
    # 7 mm radial offset exceeds the 6 mm clearance at the surface.
    assert classify_contact(env.actual_hole + vec3(0.007, 0.0, 0.0), env) is ContactStatus.SURFACE_COLLISION
    # Well above the surface.
    assert classify_contact(vec3(0.35, 0.05, 0.050), env) is ContactStatus.FREE
    # Radially fine but short of insertion depth.
    assert classify_contact(env.actual_hole - 0.004 * NORMAL, env) is ContactStatus.IN_HOLE_MOUTH


def test_classify_contact_uses_actual_surface():
    env = make_env(dz=0.015)
    # The nominal plane sits 15 mm below the actual one here; a tip outside
    # the hole at nominal height z = 0.002 is already below the actual surface.
    tip = vec3(0.30, -0.05, 0.002)
    assert actual_depth(tip, env) == pytest.approx(0.013, abs=1e-15)
    assert classify_contact(tip, env) is ContactStatus.SURFACE_COLLISION


def test_inserted_implies_radial_clearance():
    rng = np.random.default_rng(5)
    env = make_env(dx=0.004, dz=-0.003)
    for _ in range(500):
        tip = env.actual_hole + vec3(*rng.uniform(-0.02, 0.02, 3))
        if classify_contact(tip, env) is ContactStatus.INSERTED:
            assert radial_offset(tip, env) <= env.clearance


def test_center_insertion_succeeds_for_inplane_error_within_clearance():
    for dx in (0.0, 0.002, 0.005, 0.006):
        env = make_env(dx=dx, dz=0.008)
        tip = env.actual_hole - env.insertion_depth * env.surface_normal
        assert classify_contact(tip, env) is ContactStatus.INSERTED


def test_clamp_to_surface():
    env = make_env(dz=-0.006)
    # Penetrating outside the hole: projected back to the actual plane.
    tip = vec3(0.30, -0.08, -0.010)
    clamped = clamp_to_surface(tip, env)
    assert actual_depth(clamped, env) == pytest.approx(0.0, abs=1e-15)
    assert clamped[0] == tip[0] and clamped[1] == tip[1]
    # Above the surface or inside the hole channel: untouched.
    free = vec3(0.30, -0.08, 0.020)
    assert clamp_to_surface(free, env) is free
    in_hole = env.actual_hole - 0.004 * env.surface_normal
    assert clamp_to_surface(in_hole, env) is in_hole


def test_contact_codes_round_trip():
    assert sorted(CONTACT_CODES.values()) == [0, 1, 2, 3]
    for status, code in CONTACT_CODES.items():
        assert CONTACT_FROM_CODE[code] is status


def test_unit_rejects_zero_vector():
    with pytest.raises(ConfigError):
        unit(vec3(0.0, 0.0, 0.0))
