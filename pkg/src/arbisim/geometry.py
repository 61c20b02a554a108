"""Task-board geometry: surface plane, nominal and actual hole, contact queries.

The board is a plane with a single round hole. The planner and the
distance-to-surface estimate only ever see the *nominal* hole pose. Contact
physics uses the *actual* hole, which is the nominal one displaced in-plane
(centerline error) and along the normal (surface height error). The actual
surface plane is the nominal plane shifted along the normal so it contains
the actual hole mouth.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigError

_TOL = 1e-9


def vec3(x: float, y: float, z: float) -> np.ndarray:
    return np.array([float(x), float(y), float(z)])


def unit(v: np.ndarray) -> np.ndarray:
    n = float(np.linalg.norm(v))
    if n < _TOL:
        raise ConfigError("zero-length direction vector")
    return np.asarray(v, dtype=float) / n


class ContactStatus(Enum):
    FREE = "Free"
    SURFACE_COLLISION = "SurfaceCollision"
    IN_HOLE_MOUTH = "InHoleMouth"
    INSERTED = "Inserted"


# Stable small integers for trace encoding.
CONTACT_CODES = {
    ContactStatus.FREE: 0,
    ContactStatus.SURFACE_COLLISION: 1,
    ContactStatus.IN_HOLE_MOUTH: 2,
    ContactStatus.INSERTED: 3,
}
CONTACT_FROM_CODE = {v: k for k, v in CONTACT_CODES.items()}


@dataclass(frozen=True)
class Environment:
    """Immutable geometry for one episode.

    surface_point / surface_normal define the nominal plane, surface_x_axis
    is the in-plane direction along which the centerline error is applied.
    nominal_hole lies on the nominal plane; actual_hole is displaced by the
    goal error and defines the actual plane (same normal).
    """

    surface_point: np.ndarray
    surface_normal: np.ndarray
    surface_x_axis: np.ndarray
    nominal_hole: np.ndarray
    actual_hole: np.ndarray
    hole_radius: float
    peg_radius: float
    insertion_depth: float
    sigma_e: float

    def __post_init__(self):
        n = unit(self.surface_normal)
        x = unit(self.surface_x_axis)
        object.__setattr__(self, "surface_normal", n)
        object.__setattr__(self, "surface_x_axis", x)
        if abs(float(np.dot(n, x))) > 1e-9:
            raise ConfigError("surface_x_axis must be perpendicular to surface_normal")
        if not (self.hole_radius > self.peg_radius > 0.0):
            raise ConfigError("need hole_radius > peg_radius > 0")
        if self.insertion_depth <= 0.0:
            raise ConfigError("insertion_depth must be positive")
        if not (self.sigma_e > 0.0 and np.isfinite(self.sigma_e)):
            raise ConfigError("sigma_e must be positive and finite")
        off_plane = float(np.dot(self.nominal_hole - self.surface_point, n))
        if abs(off_plane) > 1e-9:
            raise ConfigError("nominal_hole must lie on the nominal surface plane")

    @property
    def clearance(self) -> float:
        return self.hole_radius - self.peg_radius

    @property
    def goal_error(self) -> tuple[float, float]:
        """(in-plane, along-normal) displacement of the actual hole."""
        d = self.actual_hole - self.nominal_hole
        return float(np.dot(d, self.surface_x_axis)), float(np.dot(d, self.surface_normal))


def sample_goal_error(rng_seed: int, sigma_e: float, fixed_dx: float) -> tuple[float, float]:
    """Draw the per-episode goal error: fixed in-plane offset, Gaussian height offset."""
    if not (sigma_e > 0.0 and np.isfinite(sigma_e)):
        raise ConfigError("sigma_e must be positive and finite")
    dz = float(np.random.default_rng(rng_seed).normal(0.0, sigma_e))
    return float(fixed_dx), dz


def displaced_hole(nominal_hole, x_axis, normal, dx: float, dz: float) -> np.ndarray:
    return np.asarray(nominal_hole, dtype=float) + dx * np.asarray(x_axis) + dz * np.asarray(normal)


def signed_distance(tip: np.ndarray, env: Environment) -> float:
    """Signed normal distance from the tip to the *nominal* plane.

    Positive on the approach side, negative past the plane. Deliberately
    blind to the actual surface: this is the estimate the arbitration layer
    consumes.
    """
    d = tip - env.surface_point
    n = env.surface_normal
    return float(d[0] * n[0] + d[1] * n[1] + d[2] * n[2])


def actual_depth(tip: np.ndarray, env: Environment) -> float:
    """Penetration depth past the actual plane (positive = below the surface)."""
    d = env.actual_hole - tip
    n = env.surface_normal
    return float(d[0] * n[0] + d[1] * n[1] + d[2] * n[2])


def radial_offset(tip: np.ndarray, env: Environment) -> float:
    """Distance from the tip to the actual hole centerline."""
    d = tip - env.actual_hole
    n = env.surface_normal
    along = d[0] * n[0] + d[1] * n[1] + d[2] * n[2]
    lx = d[0] - along * n[0]
    ly = d[1] - along * n[1]
    lz = d[2] - along * n[2]
    return float(np.sqrt(lx * lx + ly * ly + lz * lz))


def classify_contact(tip: np.ndarray, env: Environment) -> ContactStatus:
    """Contact state of the peg tip against the actual geometry."""
    depth = actual_depth(tip, env)
    if radial_offset(tip, env) <= env.clearance:
        if depth >= env.insertion_depth:
            return ContactStatus.INSERTED
        if depth > 0.0:
            return ContactStatus.IN_HOLE_MOUTH
        return ContactStatus.FREE
    if depth >= 0.0:
        return ContactStatus.SURFACE_COLLISION
    return ContactStatus.FREE


def clamp_to_surface(tip: np.ndarray, env: Environment) -> np.ndarray:
    """Project the tip back onto the actual surface if it penetrates outside the hole."""
    depth = actual_depth(tip, env)
    if depth <= 0.0 or radial_offset(tip, env) <= env.clearance:
        return tip
    return tip + depth * env.surface_normal
