"""Autonomy arbitration: map distance estimates to a level of autonomy.

The level of autonomy (loa) weighs the machine reference against the human
reference. The uncertainty-aware policy treats the distance-to-surface
estimate as Gaussian with standard deviation sigma_e and sets
loa = 1 - P(reaching the surface early), which works out to a scaled erf.
A first-order low-pass on the raw loa suppresses chattering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ContractError

_SQRT2 = math.sqrt(2.0)


def failure_probability(d_e: float, sigma_e: float) -> float:
    """Probability that the true surface is already behind the estimated distance.

    Gaussian tail of the distance estimate d_e with spread sigma_e:
    P = 0.5 * (1 - erf(d_e / (sigma_e * sqrt(2)))).
    """
    if not (sigma_e > 0.0 and math.isfinite(sigma_e)):
        raise ConfigError("sigma_e must be positive and finite")
    return 0.5 * (1.0 - math.erf(d_e / (sigma_e * _SQRT2)))


def loa_erf(d_e: float, sigma_e: float) -> float:
    """Uncertainty-aware level of autonomy, 1 - failure_probability."""
    if not (sigma_e > 0.0 and math.isfinite(sigma_e)):
        raise ConfigError("sigma_e must be positive and finite")
    return 0.5 * (1.0 + math.erf(d_e / (sigma_e * _SQRT2)))


def loa_baseline(distance: float, threshold: float) -> float:
    """Distance-proportional baseline, loa = max(0, 1 - distance / threshold).

    Full autonomy when the tip sits on the goal, fading linearly to zero at
    or beyond the threshold distance.
    """
    if threshold <= 0.0:
        raise ConfigError("threshold must be positive")
    if distance < 0.0:
        raise ContractError("distance must be non-negative")
    return max(0.0, 1.0 - distance / threshold)


def loa_multi(failure_probs, complement_form: bool = False) -> float:
    """Combine several event failure probabilities into one level of autonomy.

    Default follows the additive-complement form loa = 1 - prod(p_i). The
    complement_form switch uses prod(1 - p_i) instead, which treats the
    events as independent; both agree for a single event.
    """
    probs = np.asarray(list(failure_probs), dtype=float)
    if probs.size == 0:
        raise ConfigError("need at least one failure probability")
    if np.any(probs < 0.0) or np.any(probs > 1.0) or not np.all(np.isfinite(probs)):
        raise ConfigError("failure probabilities must lie in [0, 1]")
    if complement_form:
        loa = float(np.prod(1.0 - probs))
    else:
        loa = 1.0 - float(np.prod(probs))
    return min(1.0, max(0.0, loa))


def blend(alpha: float, q_m: np.ndarray, q_h: np.ndarray) -> np.ndarray:
    """Shared-control reference: q_ref = alpha * q_m + (1 - alpha) * q_h.

    Written as q_h + alpha * (q_m - q_h) with endpoint shortcuts so that
    alpha = 1 returns q_m exactly, alpha = 0 returns q_h exactly, and equal
    inputs pass through unchanged for every alpha.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ContractError(f"alpha outside [0, 1]: {alpha}")
    if alpha == 1.0:
        return np.array(q_m, dtype=float)
    if alpha == 0.0:
        return np.array(q_h, dtype=float)
    return q_h + alpha * (q_m - q_h)


@dataclass
class LoaFilter:
    """First-order low-pass xi * dloa/dt + loa = loa_raw, discretized exactly.

    The exact exponential update keeps the per-tick change bounded by
    (1 - exp(-dt/xi)) regardless of the raw input sequence.
    """

    xi: float = 0.08
    alpha: float = 1.0

    def __post_init__(self):
        if self.xi <= 0.0:
            raise ConfigError("filter time constant xi must be positive")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError("initial alpha outside [0, 1]")

    def reset(self, alpha: float) -> None:
        if not 0.0 <= alpha <= 1.0:
            raise ContractError(f"alpha outside [0, 1]: {alpha}")
        self.alpha = alpha

    def step(self, alpha_raw: float, dt: float) -> float:
        if dt <= 0.0:
            raise ContractError("dt must be positive")
        if not 0.0 <= alpha_raw <= 1.0:
            raise ContractError(f"alpha_raw outside [0, 1]: {alpha_raw}")
        decay = math.exp(-dt / self.xi)
        self.alpha = alpha_raw + (self.alpha - alpha_raw) * decay
        return self.alpha

    def max_step(self, dt: float) -> float:
        """Tight per-tick bound on |delta alpha| for inputs confined to [0, 1]."""
        return 1.0 - math.exp(-dt / self.xi)
