"""Serial-chain kinematics: forward pass, geometric Jacobian, damped IK.

The chain model is deliberately simple: each joint is a revolute joint
about one principal axis (x, y or z) of its parent frame, preceded by a
fixed translation. That covers the usual 6R tabletop arm layouts and keeps
the forward pass cheap enough for a 1 kHz control loop; the inner math is
scalar on purpose, small-array overhead dominates otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import atan2, cos, pi, sin, sqrt

import numpy as np

from .errors import ConfigError, IkError

_AXIS_INDEX = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True)
class KinematicChain:
    offsets: np.ndarray          # (n, 3) fixed translation before each joint, parent frame
    axes: tuple[str, ...]        # rotation axis per joint, 'x' | 'y' | 'z'
    tip_offset: np.ndarray       # (3,) translation from last joint frame to the tool tip
    lower: np.ndarray            # (n,) joint lower limits, rad
    upper: np.ndarray            # (n,) joint upper limits, rad
    home: np.ndarray             # (n,) preferred seed posture

    def __post_init__(self):
        offsets = np.asarray(self.offsets, dtype=float)
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "tip_offset", np.asarray(self.tip_offset, dtype=float))
        object.__setattr__(self, "lower", np.asarray(self.lower, dtype=float))
        object.__setattr__(self, "upper", np.asarray(self.upper, dtype=float))
        object.__setattr__(self, "home", np.asarray(self.home, dtype=float))
        n = len(offsets)
        if n == 0:
            raise ConfigError("chain needs at least one joint")
        if len(self.axes) != n or any(a not in _AXIS_INDEX for a in self.axes):
            raise ConfigError("axes must be one of 'x', 'y', 'z' per joint")
        for arr in (self.lower, self.upper, self.home):
            if arr.shape != (n,):
                raise ConfigError("joint limit and home arrays must match joint count")
        if np.any(self.lower >= self.upper):
            raise ConfigError("joint limits must satisfy lower < upper")
        if np.any(self.home < self.lower) or np.any(self.home > self.upper):
            raise ConfigError("home posture violates joint limits")
        # Flattened scalar views for the hot path.
        object.__setattr__(self, "_off", tuple(map(tuple, offsets.tolist())))
        object.__setattr__(self, "_axid", tuple(_AXIS_INDEX[a] for a in self.axes))
        object.__setattr__(self, "_tip", tuple(self.tip_offset.tolist()))
        object.__setattr__(self, "_lo", tuple(self.lower.tolist()))
        object.__setattr__(self, "_hi", tuple(self.upper.tolist()))
        object.__setattr__(self, "_reach", float(
            np.sum(np.linalg.norm(offsets, axis=1)) + np.linalg.norm(self.tip_offset)))

    @property
    def n_joints(self) -> int:
        return len(self.axes)

    @property
    def reach(self) -> float:
        """Upper bound on tip distance from the base origin."""
        return self._reach


def default_chain() -> KinematicChain:
    """Tabletop 6R arm: yaw base, two pitch links, roll, pitch wrist, roll tip."""
    return KinematicChain(
        offsets=np.array([
            [0.0, 0.0, 0.110],
            [0.0, 0.0, 0.090],
            [0.0, 0.0, 0.230],
            [0.0, 0.0, 0.080],
            [0.0, 0.0, 0.120],
            [0.0, 0.0, 0.070],
        ]),
        axes=("z", "y", "y", "z", "y", "z"),
        tip_offset=np.array([0.0, 0.0, 0.100]),
        lower=np.array([-3.1, -2.2, -2.5, -3.1, -2.2, -3.1]),
        upper=np.array([3.1, 2.2, 2.5, 3.1, 2.2, 3.1]),
        home=np.array([0.15, 0.55, 0.95, 0.0, 0.6, 0.0]),
    )


def _tip_scalar(theta, chain):
    """Tip position as three floats; theta is any indexable of joint angles."""
    off = chain._off
    axid = chain._axid
    r00 = r11 = r22 = 1.0
    r01 = r02 = r10 = r12 = r20 = r21 = 0.0
    px = py = pz = 0.0
    for i in range(len(axid)):
        ox, oy, oz = off[i]
        px += r00 * ox + r01 * oy + r02 * oz
        py += r10 * ox + r11 * oy + r12 * oz
        pz += r20 * ox + r21 * oy + r22 * oz
        c = cos(theta[i])
        s = sin(theta[i])
        a = axid[i]
        if a == 2:
            t0, t1, t2 = r00, r10, r20
            r00 = c * r00 + s * r01
            r10 = c * r10 + s * r11
            r20 = c * r20 + s * r21
            r01 = c * r01 - s * t0
            r11 = c * r11 - s * t1
            r21 = c * r21 - s * t2
        elif a == 1:
            t0, t1, t2 = r00, r10, r20
            r00 = c * r00 - s * r02
            r10 = c * r10 - s * r12
            r20 = c * r20 - s * r22
            r02 = s * t0 + c * r02
            r12 = s * t1 + c * r12
            r22 = s * t2 + c * r22
        else:
            t0, t1, t2 = r01, r11, r21
            r01 = c * r01 + s * r02
            r11 = c * r11 + s * r12
            r21 = c * r21 + s * r22
            r02 = c * r02 - s * t0
            r12 = c * r12 - s * t1
            r22 = c * r22 - s * t2
    tx, ty, tz = chain._tip
    return (px + r00 * tx + r01 * ty + r02 * tz,
            py + r10 * tx + r11 * ty + r12 * tz,
            pz + r20 * tx + r21 * ty + r22 * tz)


def _frames_scalar(theta, chain):
    """Tip plus per-joint origin and world rotation axis, all as float tuples."""
    off = chain._off
    axid = chain._axid
    n = len(axid)
    r00 = r11 = r22 = 1.0
    r01 = r02 = r10 = r12 = r20 = r21 = 0.0
    px = py = pz = 0.0
    origins = []
    zaxes = []
    for i in range(n):
        ox, oy, oz = off[i]
        px += r00 * ox + r01 * oy + r02 * oz
        py += r10 * ox + r11 * oy + r12 * oz
        pz += r20 * ox + r21 * oy + r22 * oz
        origins.append((px, py, pz))
        c = cos(theta[i])
        s = sin(theta[i])
        a = axid[i]
        if a == 2:
            zaxes.append((r02, r12, r22))
            t0, t1, t2 = r00, r10, r20
            r00 = c * r00 + s * r01
            r10 = c * r10 + s * r11
            r20 = c * r20 + s * r21
            r01 = c * r01 - s * t0
            r11 = c * r11 - s * t1
            r21 = c * r21 - s * t2
        elif a == 1:
            zaxes.append((r01, r11, r21))
            t0, t1, t2 = r00, r10, r20
            r00 = c * r00 - s * r02
            r10 = c * r10 - s * r12
            r20 = c * r20 - s * r22
            r02 = s * t0 + c * r02
            r12 = s * t1 + c * r12
            r22 = s * t2 + c * r22
        else:
            zaxes.append((r00, r10, r20))
            t0, t1, t2 = r01, r11, r21
            r01 = c * r01 + s * r02
            r11 = c * r11 + s * r12
            r21 = c * r21 + s * r22
            r02 = c * r02 - s * t0
            r12 = c * r12 - s * t1
            r22 = c * r22 - s * t2
    tx, ty, tz = chain._tip
    tip = (px + r00 * tx + r01 * ty + r02 * tz,
           py + r10 * tx + r11 * ty + r12 * tz,
           pz + r20 * tx + r21 * ty + r22 * tz)
    return tip, origins, zaxes


def fk(theta, chain: KinematicChain) -> np.ndarray:
    """Tool tip position for joint vector theta."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (chain.n_joints,):
        raise ConfigError("theta has wrong length")
    return np.array(_tip_scalar(theta.tolist(), chain))


def jacobian(theta, chain: KinematicChain) -> np.ndarray:
    """Positional geometric Jacobian, shape (3, n): column i is z_i x (tip - p_i)."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (chain.n_joints,):
        raise ConfigError("theta has wrong length")
    tip, origins, zaxes = _frames_scalar(theta.tolist(), chain)
    n = chain.n_joints
    j = np.empty((3, n))
    for i in range(n):
        zx, zy, zz = zaxes[i]
        dx = tip[0] - origins[i][0]
        dy = tip[1] - origins[i][1]
        dz = tip[2] - origins[i][2]
        j[0, i] = zy * dz - zz * dy
        j[1, i] = zz * dx - zx * dz
        j[2, i] = zx * dy - zy * dx
    return j


def _solve3(m00, m01, m02, m10, m11, m12, m20, m21, m22, b0, b1, b2):
    """Cramer solve for the damped normal matrix (SPD, never singular)."""
    c00 = m11 * m22 - m12 * m21
    c01 = m12 * m20 - m10 * m22
    c02 = m10 * m21 - m11 * m20
    det = m00 * c00 + m01 * c01 + m02 * c02
    x0 = (b0 * c00 + b1 * (m02 * m21 - m01 * m22) + b2 * (m01 * m12 - m02 * m11)) / det
    x1 = (b0 * c01 + b1 * (m00 * m22 - m02 * m20) + b2 * (m02 * m10 - m00 * m12)) / det
    x2 = (b0 * c02 + b1 * (m01 * m20 - m00 * m21) + b2 * (m00 * m11 - m01 * m10)) / det
    return x0, x1, x2


def _ik_attempt(tx, ty, tz, seed_list, chain, lam2, tol, max_iters):
    lo = chain._lo
    hi = chain._hi
    n = chain.n_joints
    theta = seed_list
    tip, origins, zaxes = _frames_scalar(theta, chain)
    ex = tx - tip[0]
    ey = ty - tip[1]
    ez = tz - tip[2]
    res = sqrt(ex * ex + ey * ey + ez * ez)
    for _ in range(max_iters):
        if res <= tol:
            return theta, res
        jx = [0.0] * n
        jy = [0.0] * n
        jz = [0.0] * n
        m00 = m01 = m02 = m11 = m12 = m22 = 0.0
        b0 = b1 = b2 = 0.0
        for i in range(n):
            zx, zy, zz = zaxes[i]
            ox, oy, oz = origins[i]
            dx = tip[0] - ox
            dy = tip[1] - oy
            dz = tip[2] - oz
            cx = zy * dz - zz * dy
            cy = zz * dx - zx * dz
            cz = zx * dy - zy * dx
            jx[i] = cx
            jy[i] = cy
            jz[i] = cz
            m00 += cx * cx
            m01 += cx * cy
            m02 += cx * cz
            m11 += cy * cy
            m12 += cy * cz
            m22 += cz * cz
        # Scale damping with the residual: stabilised far from the target,
        # near Gauss-Newton close to it so convergence does not plateau.
        lam2_eff = lam2 if lam2 < res * res else res * res
        y0, y1, y2 = _solve3(m00 + lam2_eff, m01, m02,
                             m01, m11 + lam2_eff, m12,
                             m02, m12, m22 + lam2_eff, ex, ey, ez)
        dtheta = [jx[i] * y0 + jy[i] * y1 + jz[i] * y2 for i in range(n)]
        scale = 1.0
        improved = False
        for _ in range(8):
            cand = [min(hi[i], max(lo[i], theta[i] + scale * dtheta[i])) for i in range(n)]
            tip_c, origins_c, zaxes_c = _frames_scalar(cand, chain)
            ex_c = tx - tip_c[0]
            ey_c = ty - tip_c[1]
            ez_c = tz - tip_c[2]
            res_c = sqrt(ex_c * ex_c + ey_c * ey_c + ez_c * ez_c)
            if res_c < res:
                theta, tip, origins, zaxes = cand, tip_c, origins_c, zaxes_c
                ex, ey, ez, res = ex_c, ey_c, ez_c, res_c
                improved = True
                break
            scale *= 0.5
        if not improved:
            break
    return theta, res


def _restart_seeds(tx, ty, seed, chain):
    """Yield deterministic fallback postures for stalled solves.

    For chains whose first joint yaws about z at the base, aligning that
    joint with the target azimuth escapes the usual wrong-side local
    minimum; elbow flips and a coarse shoulder/elbow grid cover the rest.
    Lazy so the common warm-start success pays for nothing but the seed.
    """
    yield seed
    home = chain.home.tolist()
    n = chain.n_joints

    def clamped(values):
        return [min(chain._hi[i], max(chain._lo[i], values[i])) for i in range(n)]

    yaws = [home[0]]
    if chain.axes[0] == "z":
        azim = atan2(ty, tx)
        yaws = [azim, azim + pi if azim < 0 else azim - pi]
    for yaw in yaws:
        cand = list(home)
        cand[0] = yaw
        yield clamped(cand)
        flipped = list(cand)
        for i in range(1, n):
            flipped[i] = -flipped[i]
        yield clamped(flipped)
        # Coarse posture grid: bent, stretched and folded arm variants.
        for shoulder in (-1.6, -0.6, 0.6, 1.6):
            for elbow in (-1.9, -0.9, 0.9, 1.9):
                grid = [0.0] * n
                grid[0] = yaw
                if n > 1:
                    grid[1] = shoulder
                if n > 2:
                    grid[2] = elbow
                if n > 4:
                    grid[4] = 0.5 * (shoulder + elbow) * -0.5
                yield clamped(grid)
    yield home
    yield [0.5 * (chain._lo[i] + chain._hi[i]) for i in range(n)]


def ik_dls(target, seed, chain: KinematicChain, damping: float = 0.05,
           tol: float = 1e-5, max_iters: int = 200) -> np.ndarray:
    """Damped least-squares IK for the tip position.

    Iterates dtheta = J^T (J J^T + damping^2 I)^(-1) e with joint-limit
    clamping and step backtracking, so the residual never increases across
    accepted iterations of one attempt. A stalled attempt falls back to a
    fixed set of deterministic restart postures. Raises IkError when the
    target is out of reach or every attempt stalls above tol.
    """
    target = np.asarray(target, dtype=float)
    seed = np.asarray(seed, dtype=float)
    if seed.shape != (chain.n_joints,):
        raise ConfigError("seed has wrong length")
    tx, ty, tz = float(target[0]), float(target[1]), float(target[2])
    if sqrt(tx * tx + ty * ty + tz * tz) > chain.reach:
        raise IkError(f"target outside reachable radius {chain.reach:.3f} m",
                      best_residual=float("inf"))
    lam2 = damping * damping
    best_res = float("inf")
    for attempt in _restart_seeds(tx, ty, seed.tolist(), chain):
        theta, res = _ik_attempt(tx, ty, tz, attempt, chain, lam2, tol, max_iters)
        if res <= tol:
            return np.array(theta)
        best_res = min(best_res, res)
    # Last resort: seeded multistart, deterministic in the target coordinates.
    key = np.array([tx, ty, tz]).round(9)
    rng = np.random.default_rng(np.frombuffer(key.tobytes(), dtype=np.uint64))
    lo = chain.lower
    span = chain.upper - chain.lower
    for _ in range(60):
        attempt = (lo + span * rng.random(chain.n_joints)).tolist()
        theta, res = _ik_attempt(tx, ty, tz, attempt, chain, lam2, tol, max_iters)
        if res <= tol:
            return np.array(theta)
        best_res = min(best_res, res)
    raise IkError(f"ik stalled at residual {best_res:.2e} m", best_residual=best_res)
