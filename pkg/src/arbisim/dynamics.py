"""Joint-space robot surrogate: decoupled critically-dampable second-order
tracking of the commanded joint vector, integrated semi-implicitly.

This stands in for the real arm's inner position controller: each joint
follows its command like a spring-damper with natural frequency omega_n and
damping ratio zeta, with an optional hard speed cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ContractError


@dataclass(frozen=True)
class JointFilterGains:
    omega_n: float = 15.0
    zeta: float = 1.0
    speed_limit: float = 6.0  # rad/s per joint

    def __post_init__(self):
        if self.omega_n <= 0.0 or self.zeta <= 0.0:
            raise ConfigError("omega_n and zeta must be positive")
        if self.speed_limit <= 0.0:
            raise ConfigError("speed_limit must be positive")


@dataclass
class JointFilterState:
    theta: np.ndarray
    theta_dot: np.ndarray

    @classmethod
    def at_rest(cls, theta) -> "JointFilterState":
        theta = np.asarray(theta, dtype=float).copy()
        return cls(theta=theta, theta_dot=np.zeros_like(theta))


def joint_filter_step(state: JointFilterState, theta_cmd: np.ndarray, dt: float,
                      gains: JointFilterGains) -> JointFilterState:
    """One semi-implicit Euler step of the second-order tracking filter."""
    if dt <= 0.0:
        raise ContractError("dt must be positive")
    wn = gains.omega_n
    acc = (wn * wn) * (theta_cmd - state.theta) - (2.0 * gains.zeta * wn) * state.theta_dot
    vel = state.theta_dot + dt * acc
    np.clip(vel, -gains.speed_limit, gains.speed_limit, out=vel)
    return JointFilterState(theta=state.theta + dt * vel, theta_dot=vel)
