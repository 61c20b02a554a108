import numpy as np
import pytest

from arbisim.dynamics import JointFilterGains, JointFilterState, joint_filter_step
from arbisim.errors import ConfigError

GAINS = JointFilterGains(omega_n=15.0, zeta=1.0, speed_limit=6.0)
DT = 0.001


def run_filter(cmd_fn, n, gains=GAINS, theta0=0.0):
    state = JointFilterState.at_rest(np.array([theta0]))
    out = np.empty(n)
    for i in range(n):
        state = joint_filter_step(state, np.array([cmd_fn(i * DT)]), DT, gains)
        out[i] = state.theta[0]
    return out


def critically_damped_step(t, omega_n):
    return 1.0 - (1.0 + omega_n * t) * np.exp(-omega_n * t)


def test_equilibrium_unchanged():
    state = JointFilterState.at_rest(np.array([0.3, -0.2, 1.0, 0.0, 0.5, -1.1]))
    cmd = state.theta.copy()
    nxt = joint_filter_step(state, cmd, DT, GAINS)
    assert np.array_equal(nxt.theta, cmd)
    assert np.array_equal(nxt.theta_dot, np.zeros(6))


def test_step_response_matches_critically_damped_solution():
    out = run_filter(lambda t: 1.0, 1000)
    t = 1.0
    assert out[-1] == pytest.approx(critically_damped_step(t, GAINS.omega_n), abs=1e-3)
    # Interior transient: the semi-implicit step leads the continuous
    # solution by under one tick, worth at most ~6e-3 at the steepest point.
    for i in (50, 100, 200, 400):
        ti = (i + 1) * DT
        assert out[i] == pytest.approx(critically_damped_step(ti, GAINS.omega_n), abs=6e-3)


def test_no_overshoot_when_critically_damped():
    out = run_filter(lambda t: 1.0, 2000)
    assert out.max() <= 1.0 + 1e-6


def test_high_frequency_attenuation():
    # 100 Hz square wave of unit amplitude: second-order plant at omega_n = 15
    # attenuates it by far more than 20 dB.
    cmd = lambda t: 1.0 if int(t * 200.0) % 2 == 0 else -1.0
    out = run_filter(cmd, 2000)
    steady = out[1000:]
    ripple = 0.5 * (steady.max() - steady.min())
    assert ripple <= 0.1


def test_bounded_input_bounded_output():
    rng = np.random.default_rng(8)
    cmds = rng.uniform(-1.0, 1.0, 10_000)
    state = JointFilterState.at_rest(np.zeros(1))
    for c in cmds:
        state = joint_filter_step(state, np.array([c]), DT, GAINS)
        assert abs(state.theta[0]) <= 1.5
        assert abs(state.theta_dot[0]) <= GAINS.speed_limit


def test_settles_to_constant_command():
    # Critically damped envelope (1 + wt)e^(-wt): about 4% of the offset
    # remains after 5 time constants, and 1e-6 is reached near t = 1.11 s.
    out = run_filter(lambda t: 1.0, 1300)
    five_tau = int(5.0 / GAINS.omega_n / DT)
    assert abs(out[five_tau] - 1.0) <= 0.05
    assert abs(out[-1] - 1.0) <= 1e-6


def test_speed_limit_clamps_velocity():
    fast = JointFilterGains(omega_n=200.0, zeta=0.2, speed_limit=2.0)
    state = JointFilterState.at_rest(np.zeros(1))
    for _ in range(100):
        state = joint_filter_step(state, np.array([10.0]), DT, fast)
        assert abs(state.theta_dot[0]) <= 2.0


def test_gain_validation():
    with pytest.raises(ConfigError):
        JointFilterGains(omega_n=0.0)
    with pytest.raises(ConfigError):
        JointFilterGains(zeta=-0.5)
    with pytest.raises(ConfigError):
        JointFilterGains(speed_limit=0.0)
