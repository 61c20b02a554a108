"""Fixed-step simulation engine.

One Episode couples the machine trajectory, the operator model, arbitration,
IK, joint dynamics and contact into a deterministic 1 kHz loop. Per tick,
in order: sample the machine reference, step the operator (it senses last
tick's forces and tip), evaluate the distance estimate at the currently
commanded tip, update the level of autonomy, blend, solve IK, advance the
joint filter, clamp the physical tip at the actual surface, render haptic
forces and classify contact.

The distance estimate deliberately uses the commanded tip (the blended
reference the controller is tracking), not the clamped physical tip: the
controller reasons about where it is steering, so commanding past the
nominal plane collapses autonomy even while the physical tip is stopped by
an unexpectedly high surface.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from . import arbitration, geometry
from .config import (EpisodeConfig, build_chain, build_environment, build_gains,
                     build_haptics, build_operator, build_trajectory)
from .dynamics import JointFilterState, joint_filter_step
from .errors import ConfigError, IkError
from .geometry import CONTACT_CODES, CONTACT_FROM_CODE, ContactStatus
from .haptics import haptic_force
from .kinematics import fk, ik_dls
from .operators import LiveInputOperator, Observation

_VEL_SMOOTH_TAU = 0.02   # s, smoothing window for the hand velocity estimate
_STUCK_SPEED = 1e-3      # rad/s, joint speed below which the arm counts as settled


class FailureReason(Enum):
    TIMEOUT = "Timeout"
    STUCK_COLLISION = "StuckCollision"
    IK_UNREACHABLE = "IkUnreachable"


# Trace layout: 36 float columns plus one contact code column.
TRACE_COLUMNS = (
    ["t"]
    + [f"qh_{c}" for c in "xyz"]
    + [f"qm_{c}" for c in "xyz"]
    + [f"qref_{c}" for c in "xyz"]
    + [f"theta_{i}" for i in range(6)]
    + [f"theta_ref_{i}" for i in range(6)]
    + [f"tip_{c}" for c in "xyz"]
    + ["d_e", "alpha"]
    + [f"f_fix_{c}" for c in "xyz"]
    + [f"f_field_{c}" for c in "xyz"]
    + [f"f_total_{c}" for c in "xyz"]
)
N_FLOAT_COLS = len(TRACE_COLUMNS)

_QH = slice(1, 4)
_QM = slice(4, 7)
_QREF = slice(7, 10)
_TH = slice(10, 16)
_THREF = slice(16, 22)
_TIP = slice(22, 25)
_DE = 25
_ALPHA = 26
_FFIX = slice(27, 30)
_FFLD = slice(30, 33)
_FTOT = slice(33, 36)


@dataclass
class SimState:
    """Per-tick snapshot of the shared-control loop."""

    t: float
    q_h: np.ndarray
    q_m: np.ndarray
    q_ref: np.ndarray
    theta: np.ndarray
    theta_ref: np.ndarray
    tip: np.ndarray
    d_e: float
    alpha: float
    f_fixture: np.ndarray
    f_field: np.ndarray
    f_total: np.ndarray
    contact: ContactStatus


class EpisodeResult:
    """Outcome plus the full tick-by-tick trace of one episode."""

    def __init__(self, cfg: EpisodeConfig, floats: np.ndarray, contact: np.ndarray,
                 success: bool, completion_time: Optional[float],
                 failure_reason: Optional[FailureReason]):
        self.cfg = cfg
        self.floats = floats
        self.contact_codes = contact
        self.success = success
        self.completion_time = completion_time
        self.failure_reason = failure_reason
        self._trace: Optional[list[SimState]] = None

    @property
    def n_ticks(self) -> int:
        return len(self.floats)

    @property
    def duration(self) -> float:
        return float(self.floats[-1, 0]) if len(self.floats) else 0.0

    @property
    def final_contact(self) -> ContactStatus:
        if not len(self.contact_codes):
            return ContactStatus.FREE
        return CONTACT_FROM_CODE[int(self.contact_codes[-1])]

    def state_at(self, i: int) -> SimState:
        row = self.floats[i]
        return SimState(
            t=float(row[0]), q_h=row[_QH].copy(), q_m=row[_QM].copy(),
            q_ref=row[_QREF].copy(), theta=row[_TH].copy(),
            theta_ref=row[_THREF].copy(), tip=row[_TIP].copy(),
            d_e=float(row[_DE]), alpha=float(row[_ALPHA]),
            f_fixture=row[_FFIX].copy(), f_field=row[_FFLD].copy(),
            f_total=row[_FTOT].copy(),
            contact=CONTACT_FROM_CODE[int(self.contact_codes[i])],
        )

    @property
    def trace(self) -> list[SimState]:
        if self._trace is None:
            self._trace = [self.state_at(i) for i in range(self.n_ticks)]
        return self._trace

    def trace_hash(self) -> str:
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.floats).tobytes())
        h.update(np.ascontiguousarray(self.contact_codes).tobytes())
        return h.hexdigest()

    def column(self, name: str) -> np.ndarray:
        return self.floats[:, TRACE_COLUMNS.index(name)]


class Episode:
    """One deterministic fixed-step episode; step it manually or run to the end."""

    def __init__(self, cfg: EpisodeConfig):
        self.cfg = cfg
        self.env = build_environment(cfg)
        self.traj = build_trajectory(cfg)
        self.chain = build_chain(cfg)
        self.gains = build_gains(cfg)
        self.haptic_params = build_haptics(cfg)
        self.operator = build_operator(cfg, self.env)
        self.autonomous = cfg.mode == "autonomous"

        tr_end = self.traj.end_point
        if float(np.linalg.norm(tr_end)) > self.chain.reach:
            raise ConfigError("trajectory end outside the arm's reach")

        self.dt = cfg.dt
        self.max_ticks = int(round(cfg.timeout / cfg.dt))
        if self.max_ticks < 1:
            raise ConfigError("timeout shorter than one tick")

        q_m0 = self.traj.sample(0.0)
        self.theta_ref = ik_dls(q_m0, self.chain.home, self.chain,
                                damping=cfg.ik_damping, tol=cfg.ik_tol)
        self.joints = JointFilterState.at_rest(self.theta_ref)
        tip0 = fk(self.theta_ref, self.chain)
        self.tip = geometry.clamp_to_surface(tip0, self.env)
        self.cmd_tip = tip0.copy()

        op0 = cfg.operator.initial_position
        self.operator.reset(np.asarray(op0, dtype=float) if op0 is not None else q_m0)
        self.q_h = self.operator.q_h.copy()
        self._qh_vel = np.zeros(3)
        self._vel_decay = math.exp(-cfg.dt / _VEL_SMOOTH_TAU)

        arb = cfg.arbitration
        self.filter = arbitration.LoaFilter(xi=arb.xi)
        d0 = geometry.signed_distance(self.cmd_tip, self.env)
        self._alpha_raw = 1.0 if self.autonomous else self._policy_alpha(d0)
        self.filter.reset(self._alpha_raw)
        self.alpha = self.filter.alpha
        if arb.rate_hz is None:
            self._arb_every = 1
        else:
            self._arb_every = max(1, int(round(1.0 / (arb.rate_hz * cfg.dt))))

        self.f_fixture = np.zeros(3)
        self.f_field = np.zeros(3)
        self.f_total = np.zeros(3)

        self._floats = np.empty((self.max_ticks, N_FLOAT_COLS))
        self._contact = np.empty(self.max_ticks, dtype=np.int8)
        self.ticks = 0
        self.t = 0.0
        self.done = False
        self.success = False
        self.completion_time: Optional[float] = None
        self.failure_reason: Optional[FailureReason] = None
        self._stuck_ticks = 0
        self._stuck_limit = (int(round(cfg.stuck_exit_after / cfg.dt))
                             if cfg.stuck_exit_after > 0.0 else 0)
        self.contact = geometry.classify_contact(self.tip, self.env)

    def _policy_alpha(self, d_e: float) -> float:
        arb = self.cfg.arbitration
        if arb.policy == "erf":
            return arbitration.loa_erf(d_e, self.env.sigma_e)
        if arb.policy == "baseline":
            dist = float(np.linalg.norm(self.cmd_tip - self.traj.end_point))
            return arbitration.loa_baseline(dist, arb.baseline_threshold)
        probs = [arbitration.failure_probability(d_e, self.env.sigma_e)]
        probs.extend(arb.extra_failure_probs)
        return arbitration.loa_multi(probs, arb.multi_complement)

    def step_n(self, n: int) -> int:
        """Advance up to n ticks; returns how many actually ran."""
        cfg = self.cfg
        env = self.env
        dt = self.dt
        filter_enabled = cfg.arbitration.filter_enabled
        fov2 = cfg.operator.fov_radius ** 2
        executed = 0
        while executed < n and not self.done:
            k = self.ticks
            q_m = self.traj.sample(self.t)

            # Operator senses last tick's tip and forces.
            tip_prev = self.tip
            rel = tip_prev - env.actual_hole
            visible = (rel[0] * rel[0] + rel[1] * rel[1] + rel[2] * rel[2]) <= fov2
            obs = Observation(t=self.t, q_h=self.q_h, q_m=q_m, tip=tip_prev,
                              force=self.f_total,
                              visible_goal=env.actual_hole if visible else None)
            q_h_prev = self.q_h
            q_h = self.operator.step(obs, dt)
            self.q_h = q_h
            vel_raw = (q_h - q_h_prev) / dt
            self._qh_vel = self._qh_vel + (1.0 - self._vel_decay) * (vel_raw - self._qh_vel)

            # Distance estimate at the commanded tip, then the autonomy level.
            d_e = geometry.signed_distance(self.cmd_tip, env)
            if self.autonomous:
                self._alpha_raw = 1.0
                alpha = 1.0
                self.filter.alpha = 1.0
            else:
                if k % self._arb_every == 0:
                    self._alpha_raw = self._policy_alpha(d_e)
                if filter_enabled:
                    alpha = self.filter.step(self._alpha_raw, dt)
                else:
                    alpha = self._alpha_raw
                    self.filter.alpha = alpha
            self.alpha = alpha

            q_ref = arbitration.blend(alpha, q_m, q_h)
            try:
                theta_ref = ik_dls(q_ref, self.theta_ref, self.chain,
                                   damping=cfg.ik_damping, tol=cfg.ik_tol)
            except IkError:
                self.done = True
                self.failure_reason = FailureReason.IK_UNREACHABLE
                break
            self.theta_ref = theta_ref
            self.cmd_tip = q_ref

            self.joints = joint_filter_step(self.joints, theta_ref, dt, self.gains)
            tip = geometry.clamp_to_surface(fk(self.joints.theta, self.chain), env)
            self.tip = tip

            f_fix, f_field, f_total = haptic_force(
                q_h, q_m, self._qh_vel, alpha, env, self.haptic_params)
            self.f_fixture, self.f_field, self.f_total = f_fix, f_field, f_total

            contact = geometry.classify_contact(tip, env)
            self.contact = contact

            self.t += dt
            row = self._floats[k]
            row[0] = self.t
            row[_QH] = q_h
            row[_QM] = q_m
            row[_QREF] = q_ref
            row[_TH] = self.joints.theta
            row[_THREF] = theta_ref
            row[_TIP] = tip
            row[_DE] = d_e
            row[_ALPHA] = alpha
            row[_FFIX] = f_fix
            row[_FFLD] = f_field
            row[_FTOT] = f_total
            self._contact[k] = CONTACT_CODES[contact]
            self.ticks = k + 1
            executed += 1

            if contact is ContactStatus.INSERTED:
                self.done = True
                self.success = True
                self.completion_time = self.t
            elif self.ticks >= self.max_ticks:
                self.done = True
                self.failure_reason = FailureReason.TIMEOUT
            elif self._stuck_limit and self.autonomous and self.t > self.traj.duration:
                if (contact is ContactStatus.SURFACE_COLLISION
                        and float(np.max(np.abs(self.joints.theta_dot))) < _STUCK_SPEED):
                    self._stuck_ticks += 1
                    if self._stuck_ticks >= self._stuck_limit:
                        self.done = True
                        self.failure_reason = FailureReason.STUCK_COLLISION
                else:
                    self._stuck_ticks = 0
        return executed

    def latest_state(self) -> Optional[SimState]:
        if self.ticks == 0:
            return None
        return self.result_view().state_at(self.ticks - 1)

    def result_view(self) -> EpisodeResult:
        return EpisodeResult(self.cfg, self._floats[:self.ticks],
                             self._contact[:self.ticks], self.success,
                             self.completion_time, self.failure_reason)

    def run(self) -> EpisodeResult:
        self.step_n(self.max_ticks + 1)
        return self.result_view()

    @property
    def live_operator(self) -> Optional[LiveInputOperator]:
        return self.operator if isinstance(self.operator, LiveInputOperator) else None


def run_episode(cfg: EpisodeConfig) -> EpisodeResult:
    return Episode(cfg).run()
