"""Machine reference trajectory: waypoint path with blended corners and a
single trapezoidal speed profile over total arc length.

Interior corners are rounded with cubic Bezier blends whose end tangents
match the incoming and outgoing segments, so the path is C1. Blend arc
length is handled with a dense chord-length table, which keeps the speed
profile accurate to well below the tick scale.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, PlanningError

_BLEND_SAMPLES = 256
_MIN_SEGMENT = 1e-9


@dataclass(frozen=True)
class TrajectoryLimits:
    v_max: float = 0.2
    a_max: float = 2.0
    v_endpoints: float = 0.0

    def __post_init__(self):
        if self.v_max <= 0.0 or self.a_max <= 0.0:
            raise ConfigError("v_max and a_max must be positive")
        if self.v_endpoints != 0.0:
            raise ConfigError("only rest-to-rest profiles are supported (v_endpoints = 0)")


class _Line:
    __slots__ = ("p0", "d", "length")

    def __init__(self, p0, p1):
        self.p0 = np.asarray(p0, dtype=float)
        d = np.asarray(p1, dtype=float) - self.p0
        self.length = float(np.linalg.norm(d))
        self.d = d / self.length if self.length > 0.0 else d

    def point_at(self, s: float) -> np.ndarray:
        return self.p0 + s * self.d


class _Blend:
    """Cubic Bezier corner blend, arc-length parameterized via a chord table."""

    __slots__ = ("ctrl", "_s_table", "_t_table", "length")

    def __init__(self, p0, corner, p3):
        self.ctrl = np.array([p0, corner, corner, p3], dtype=float)
        t = np.linspace(0.0, 1.0, _BLEND_SAMPLES + 1)
        pts = self._eval(t)
        seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        s = np.concatenate(([0.0], np.cumsum(seg)))
        self._s_table = s
        self._t_table = t
        self.length = float(s[-1])

    def _eval(self, t):
        t = np.asarray(t, dtype=float)[:, None]
        u = 1.0 - t
        c = self.ctrl
        return (u ** 3) * c[0] + 3.0 * (u ** 2) * t * c[1] + 3.0 * u * (t ** 2) * c[2] + (t ** 3) * c[3]

    def point_at(self, s: float) -> np.ndarray:
        t = float(np.interp(s, self._s_table, self._t_table))
        u = 1.0 - t
        c = self.ctrl
        return (u ** 3) * c[0] + (3.0 * u * u * t) * c[1] + (3.0 * u * t * t) * c[2] + (t ** 3) * c[3]


@dataclass(frozen=True)
class _Profile:
    """Rest-to-rest trapezoidal (or triangular) profile over arc length L."""

    length: float
    v_peak: float
    a: float
    t_acc: float
    t_cruise: float

    @property
    def duration(self) -> float:
        return 2.0 * self.t_acc + self.t_cruise

    def s_at(self, t: float) -> float:
        if t <= 0.0:
            return 0.0
        t_f = self.duration
        if t >= t_f:
            return self.length
        if t < self.t_acc:
            return 0.5 * self.a * t * t
        if t < self.t_acc + self.t_cruise:
            return 0.5 * self.a * self.t_acc ** 2 + self.v_peak * (t - self.t_acc)
        dt = t_f - t
        return self.length - 0.5 * self.a * dt * dt


def _plan_profile(length: float, limits: TrajectoryLimits) -> _Profile:
    a = limits.a_max
    d_acc = limits.v_max ** 2 / (2.0 * a)
    if length <= 2.0 * d_acc:
        t_acc = float(np.sqrt(length / a))
        return _Profile(length, a * t_acc, a, t_acc, 0.0)
    t_acc = limits.v_max / a
    t_cruise = (length - 2.0 * d_acc) / limits.v_max
    return _Profile(length, limits.v_max, a, t_acc, t_cruise)


class Trajectory:
    """Timed path. sample(t) clamps t into [0, duration] and is exact at both ends."""

    def __init__(self, segments, profile: _Profile, waypoints: np.ndarray):
        self._segments = segments
        self._profile = profile
        self.waypoints = waypoints
        self._cum = np.concatenate(([0.0], np.cumsum([s.length for s in segments])))
        self.length = float(self._cum[-1])
        self.duration = profile.duration
        self.start_point = segments[0].point_at(0.0)
        self.end_point = waypoints[-1].copy()

    def point_at(self, s: float) -> np.ndarray:
        if s <= 0.0:
            return self.start_point.copy()
        if s >= self.length:
            return self.end_point.copy()
        i = bisect_right(self._cum, s) - 1
        if i >= len(self._segments):
            i = len(self._segments) - 1
        return self._segments[i].point_at(s - self._cum[i])

    def sample(self, t: float) -> np.ndarray:
        return self.point_at(self._profile.s_at(t))


def plan_trajectory(waypoints, limits: TrajectoryLimits | None = None,
                    corner_radius: float = 0.02) -> Trajectory:
    """Plan a timed path through waypoints with rounded interior corners.

    corner_radius is the distance along each adjoining segment consumed by
    the blend; it must stay below half of the shortest adjoining segment.
    """
    limits = limits or TrajectoryLimits()
    pts = np.asarray(waypoints, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 2:
        raise PlanningError("need at least two 3d waypoints")
    if corner_radius < 0.0:
        raise PlanningError("corner_radius must be non-negative")
    seg_vecs = np.diff(pts, axis=0)
    seg_lens = np.linalg.norm(seg_vecs, axis=1)
    if np.any(seg_lens < _MIN_SEGMENT):
        raise PlanningError("consecutive waypoints coincide")
    if len(pts) > 2 and corner_radius > 0.0 and corner_radius >= 0.5 * float(seg_lens.min()):
        raise PlanningError("corner_radius too large for the shortest segment")

    dirs = seg_vecs / seg_lens[:, None]
    segments = []
    cursor = pts[0]
    for i in range(1, len(pts) - 1):
        if corner_radius > 0.0:
            blend_in = pts[i] - corner_radius * dirs[i - 1]
            blend_out = pts[i] + corner_radius * dirs[i]
            line = _Line(cursor, blend_in)
            if line.length > _MIN_SEGMENT:
                segments.append(line)
            segments.append(_Blend(blend_in, pts[i], blend_out))
            cursor = blend_out
        else:
            segments.append(_Line(cursor, pts[i]))
            cursor = pts[i]
    segments.append(_Line(cursor, pts[-1]))

    total = float(sum(s.length for s in segments))
    if total < _MIN_SEGMENT:
        raise PlanningError("degenerate path")
    return Trajectory(segments, _plan_profile(total, limits), pts)
