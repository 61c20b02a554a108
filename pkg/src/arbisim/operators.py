"""Deterministic operator behavior models.

Each model produces the human reference q_h once per tick from an
observation of the haptic force and (optionally) the visible goal. The
models share a two-stage structure: an internal intent point p driven by
simple rules, and the output q_h tracking p through a first-order lag that
stands in for limb dynamics. That keeps q_h continuous at a documented
rate bound for every model, including live teleoperation input.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError


@dataclass
class Observation:
    """What the operator senses this tick."""

    t: float
    q_h: np.ndarray
    q_m: np.ndarray
    tip: np.ndarray
    force: np.ndarray                 # total haptic force on the hand
    visible_goal: Optional[np.ndarray]  # actual hole mouth when inside the camera fov


class OperatorModel:
    """Base operator: holds the intent point and the limb lag."""

    kind = "passive"

    def __init__(self, lag_tau: float = 0.1):
        if lag_tau <= 0.0:
            raise ConfigError("lag_tau must be positive")
        self.lag_tau = lag_tau
        self.p = np.zeros(3)
        self.q_h = np.zeros(3)

    def reset(self, q0: np.ndarray) -> None:
        self.p = np.asarray(q0, dtype=float).copy()
        self.q_h = self.p.copy()

    def _drive(self, obs: Observation, dt: float) -> None:
        """Move the intent point p; overridden per model."""

    def step(self, obs: Observation, dt: float) -> np.ndarray:
        self._drive(obs, dt)
        decay = math.exp(-dt / self.lag_tau)
        self.q_h = self.p + (self.q_h - self.p) * decay
        return self.q_h


class PassiveOperator(OperatorModel):
    """Holds the hand still wherever it was reset."""

    kind = "passive"


class CompliantFollower(OperatorModel):
    """Yields to the haptic guidance: intent drifts along the rendered force."""

    kind = "compliant"

    def __init__(self, lag_tau: float = 0.1, gain_force: float = 0.004):
        super().__init__(lag_tau)
        if gain_force < 0.0:
            raise ConfigError("gain_force must be non-negative")
        self.gain_force = gain_force

    def _drive(self, obs: Observation, dt: float) -> None:
        self.p = self.p + (dt * self.gain_force) * obs.force


class VisualServoCorrector(CompliantFollower):
    """Compliant follower that additionally steers toward the goal it can see.

    While the goal is inside the camera field of view the intent point gains
    a proportional pull toward the insertion target below the visible hole
    mouth.
    """

    kind = "visual_servo"

    def __init__(self, lag_tau: float = 0.1, gain_force: float = 0.004,
                 gain_visual: float = 8.0, insert_margin: float = 0.004,
                 approach_dir: Optional[np.ndarray] = None,
                 insertion_depth: float = 0.010):
        super().__init__(lag_tau, gain_force)
        if gain_visual < 0.0:
            raise ConfigError("gain_visual must be non-negative")
        if insert_margin < 0.0:
            raise ConfigError("insert_margin must be non-negative")
        self.gain_visual = gain_visual
        self.insert_margin = insert_margin
        self.insertion_depth = insertion_depth
        self.approach_dir = (np.array([0.0, 0.0, 1.0]) if approach_dir is None
                             else np.asarray(approach_dir, dtype=float))

    def _aim(self, goal: np.ndarray) -> np.ndarray:
        depth = self.insertion_depth + self.insert_margin
        return goal - depth * self.approach_dir

    def _drive(self, obs: Observation, dt: float) -> None:
        super()._drive(obs, dt)
        if obs.visible_goal is not None:
            aim = self._aim(obs.visible_goal)
            self.p = self.p + (dt * self.gain_visual) * (aim - obs.tip)


class LiveInputOperator(OperatorModel):
    """Teleoperation endpoint: follows the latest external sample.

    Samples arrive through a thread-safe mailbox and are applied zero-order
    hold; the intent point slews toward the held sample at a capped speed so
    q_h never teleports no matter what the client sends.
    """

    kind = "live"

    def __init__(self, lag_tau: float = 0.1, max_speed: float = 1.5):
        super().__init__(lag_tau)
        if max_speed <= 0.0:
            raise ConfigError("max_speed must be positive")
        self.max_speed = max_speed
        self._lock = threading.Lock()
        self._target: Optional[np.ndarray] = None

    def set_target(self, pos) -> None:
        pos = np.asarray(pos, dtype=float).copy()
        with self._lock:
            self._target = pos

    def _drive(self, obs: Observation, dt: float) -> None:
        with self._lock:
            target = self._target
        if target is None:
            return
        step = target - self.p
        dist = float(np.linalg.norm(step))
        cap = self.max_speed * dt
        if dist <= cap:
            self.p = target.copy()
        else:
            self.p = self.p + (cap / dist) * step


_OPERATOR_KINDS = {
    "passive": PassiveOperator,
    "compliant": CompliantFollower,
    "visual_servo": VisualServoCorrector,
    "live": LiveInputOperator,
}


def operator_kinds() -> tuple[str, ...]:
    return tuple(_OPERATOR_KINDS)


def max_hand_speed(op: OperatorModel, p_bound: float) -> float:
    """Documented continuity bound: ||dq_h|| <= bound * dt for intent within p_bound."""
    return p_bound / op.lag_tau
