"""Haptic guidance rendered to the operator: an autonomy-scaled virtual
fixture that pulls the hand toward the machine reference, plus a repulsive
potential field around the solid surface.

Both stiffnesses scale with the level of autonomy: confident automation
guides firmly, low confidence relaxes the coupling and hands control back.
The potential field pushes the hand out of the material along the surface
normal but is disabled inside a disk around the nominal hole so insertion
itself is never fought.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ContractError
from .geometry import Environment

_NEG_TOL = 1e-12


@dataclass(frozen=True)
class HapticParams:
    k_max: float = 75.0     # N/m, fixture stiffness at full autonomy
    k_min: float = 10.0     # N/m, fixture stiffness at zero autonomy
    damping: float = 7.5    # N*s/m on the hand velocity
    kv_max: float = 1000.0  # N/m, potential field at full autonomy
    kv_min: float = 200.0   # N/m, potential field at zero autonomy

    def __post_init__(self):
        if not (self.k_max > self.k_min > 0.0):
            raise ConfigError("need k_max > k_min > 0")
        if self.damping < 0.0:
            raise ConfigError("damping must be non-negative")
        if not (self.kv_max > self.kv_min > 0.0):
            raise ConfigError("need kv_max > kv_min > 0")


def fixture_stiffness(alpha: float, params: HapticParams) -> float:
    if not 0.0 <= alpha <= 1.0:
        raise ContractError(f"alpha outside [0, 1]: {alpha}")
    return alpha * (params.k_max - params.k_min) + params.k_min


def field_stiffness(alpha: float, params: HapticParams) -> float:
    if not 0.0 <= alpha <= 1.0:
        raise ContractError(f"alpha outside [0, 1]: {alpha}")
    return alpha * (params.kv_max - params.kv_min) + params.kv_min


def fixture_force(q_h, q_m, q_h_dot, alpha: float, params: HapticParams) -> np.ndarray:
    """Virtual fixture spring-damper pulling the hand toward the machine reference."""
    k = fixture_stiffness(alpha, params)
    return -k * (q_h - q_m) - params.damping * q_h_dot


def field_force(q_h, alpha: float, env: Environment, params: HapticParams) -> np.ndarray:
    """Outward surface repulsion on the hand, exempt near the nominal hole.

    Penetration is measured against the nominal plane (the machine's belief);
    the force points along the outward surface normal, proportional to
    penetration depth. Inside a disk of hole_radius around the nominal hole
    centerline the field is off.
    """
    d = q_h - env.surface_point
    n = env.surface_normal
    height = float(d[0] * n[0] + d[1] * n[1] + d[2] * n[2])
    if height >= -_NEG_TOL:
        return np.zeros(3)
    rel = q_h - env.nominal_hole
    along = rel[0] * n[0] + rel[1] * n[1] + rel[2] * n[2]
    lx = rel[0] - along * n[0]
    ly = rel[1] - along * n[1]
    lz = rel[2] - along * n[2]
    if lx * lx + ly * ly + lz * lz <= env.hole_radius * env.hole_radius:
        return np.zeros(3)
    return (-height * field_stiffness(alpha, params)) * n


def haptic_force(q_h, q_m, q_h_dot, alpha: float, env: Environment,
                 params: HapticParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Total force on the hand: (fixture, field, total)."""
    f_fix = fixture_force(q_h, q_m, q_h_dot, alpha, params)
    f_field = field_force(q_h, alpha, env, params)
    return f_fix, f_field, f_fix + f_field
