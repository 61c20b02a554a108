"""arbisim: deterministic shared-control peg-in-hole simulation.

A virtual tabletop arm inserts a peg into a hole whose true pose is only
known up to Gaussian uncertainty. A sliding level of autonomy blends the
machine's trajectory with a human reference, driven by the estimated
distance to the surface, and haptic guidance closes the loop with the
operator.
"""

__version__ = "0.1.0"

from .arbitration import (LoaFilter, blend, failure_probability, loa_baseline,
                          loa_erf, loa_multi)
from .config import EpisodeConfig, config_from_dict, config_to_dict, load_config, save_config
from .engine import Episode, EpisodeResult, FailureReason, SimState, run_episode
from .errors import (ArbisimError, ConfigError, ContractError, IkError,
                     PlanningError)
from .experiments import (ChatterResult, SweepResult, SweepSpec,
                          chattering_demo, derive_seed, run_sweep)
from .geometry import (ContactStatus, Environment, classify_contact,
                       clamp_to_surface, sample_goal_error, signed_distance)
from .kinematics import KinematicChain, default_chain, fk, ik_dls, jacobian
from .trajectory import Trajectory, TrajectoryLimits, plan_trajectory

__all__ = [
    "ArbisimError", "ChatterResult", "ConfigError", "ContactStatus",
    "ContractError", "Environment", "Episode", "EpisodeConfig",
    "EpisodeResult", "FailureReason", "IkError", "KinematicChain",
    "LoaFilter", "PlanningError", "SimState", "SweepResult", "SweepSpec",
    "Trajectory", "TrajectoryLimits", "blend", "chattering_demo",
    "clamp_to_surface", "classify_contact", "config_from_dict",
    "config_to_dict", "default_chain", "derive_seed", "failure_probability",
    "fk", "ik_dls", "jacobian", "load_config", "loa_baseline", "loa_erf",
    "loa_multi", "plan_trajectory", "run_episode", "run_sweep",
    "sample_goal_error", "save_config", "signed_distance",
]
