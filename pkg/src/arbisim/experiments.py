"""Experiment harness: the centerline-error sweep and the chattering demo.

The sweep mirrors the study design: 7 in-plane error values from 0 to 3
sigma_e, a fixed number of runs per cell, Autonomous and Shared modes, with
per-cell seeds derived deterministically so any single episode can be
reproduced in isolation.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import EpisodeConfig, config_from_dict, config_to_dict
from .engine import EpisodeResult, run_episode
from .errors import ConfigError

DEFAULT_DX_VALUES = [0.0, 0.005, 0.010, 0.015, 0.020, 0.025, 0.030]
MODE_CODES = {"autonomous": 0, "shared": 1}

EPISODE_FIELDS = ["mode", "dx_mm", "run", "seed", "success", "completion_s"]
SUMMARY_FIELDS = ["mode", "dx_mm", "n", "success_rate", "mean_s", "std_s"]


def derive_seed(base_seed: int, mode: str, dx: float, run: int) -> int:
    """Deterministic per-episode seed from the cell coordinates."""
    if mode not in MODE_CODES:
        raise ConfigError(f"unknown mode {mode!r}")
    ss = np.random.SeedSequence([int(base_seed), MODE_CODES[mode],
                                 int(round(dx * 1e6)), int(run)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass
class SweepSpec:
    dx_values: list = field(default_factory=lambda: list(DEFAULT_DX_VALUES))
    runs: int = 10
    modes: tuple = ("autonomous", "shared")
    base_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if any(m not in MODE_CODES for m in self.modes):
            raise ConfigError("modes must be autonomous/shared")
        if any(dx < 0 for dx in self.dx_values):
            raise ConfigError("dx values must be non-negative")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")


def episode_config_for_cell(base: EpisodeConfig, mode: str, dx: float,
                            run: int, base_seed: int) -> EpisodeConfig:
    """Build the per-episode config: mode, in-plane error and derived seed.

    Autonomous cells run without an operator (passive hand), matching the
    study's fully-automatic condition.
    """
    data = config_to_dict(base)
    data.pop("schema_version")
    data["mode"] = mode
    data["rng_seed"] = derive_seed(base_seed, mode, dx, run)
    data["environment"] = dict(data["environment"], goal_offset_x=float(dx),
                               goal_offset_z=None)
    if mode == "autonomous":
        data["operator"] = dict(data["operator"], kind="passive")
    return config_from_dict(data)


@dataclass
class SweepRow:
    mode: str
    dx_mm: float
    run: int
    seed: int
    success: bool
    completion_s: Optional[float]


@dataclass
class SummaryRow:
    mode: str
    dx_mm: float
    n: int
    success_rate: float
    mean_s: float   # nan when no successes
    std_s: float    # nan when fewer than two successes


@dataclass
class SweepResult:
    episodes: list
    summary: list

    def cell(self, mode: str, dx_mm: float) -> SummaryRow:
        for row in self.summary:
            if row.mode == mode and math.isclose(row.dx_mm, dx_mm):
                return row
        raise KeyError(f"no summary cell for {mode} at {dx_mm} mm")


def _run_cell_episode(args) -> SweepRow:
    base_dict, mode, dx, run, base_seed = args
    base = config_from_dict(base_dict)
    cfg = episode_config_for_cell(base, mode, dx, run, base_seed)
    result = run_episode(cfg)
    return SweepRow(mode=mode, dx_mm=dx * 1000.0, run=run, seed=cfg.rng_seed,
                    success=result.success, completion_s=result.completion_time)


def summarize(episodes: list) -> list:
    """Aggregate per-episode rows into per-cell success rate and timing."""
    cells: dict[tuple, list[SweepRow]] = {}
    order = []
    for row in episodes:
        key = (row.mode, row.dx_mm)
        if key not in cells:
            cells[key] = []
            order.append(key)
        cells[key].append(row)
    out = []
    for key in order:
        rows = cells[key]
        times = [r.completion_s for r in rows if r.success]
        mean_s = float(np.mean(times)) if times else float("nan")
        std_s = float(np.std(times, ddof=1)) if len(times) > 1 else float("nan")
        out.append(SummaryRow(mode=key[0], dx_mm=key[1], n=len(rows),
                              success_rate=sum(r.success for r in rows) / len(rows),
                              mean_s=mean_s, std_s=std_s))
    return out


def run_sweep(base: EpisodeConfig, spec: SweepSpec | None = None,
              progress=None) -> SweepResult:
    spec = spec or SweepSpec()
    base_dict = config_to_dict(base)
    base_dict.pop("schema_version")
    tasks = [(base_dict, mode, dx, run, spec.base_seed)
             for mode in spec.modes
             for dx in spec.dx_values
             for run in range(spec.runs)]
    episodes: list[SweepRow] = []
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            for row in pool.map(_run_cell_episode, tasks, chunksize=4):
                episodes.append(row)
                if progress:
                    progress(row)
    else:
        for task in tasks:
            row = _run_cell_episode(task)
            episodes.append(row)
            if progress:
                progress(row)
    return SweepResult(episodes=episodes, summary=summarize(episodes))


# Chattering demonstration.

CHATTER_HOLD = [0.35, 0.05, 0.15]        # held hand position, well above the surface
CHATTER_DIVE = [[0.35, 0.05, 0.10],      # machine reference ends just past the plane
                [0.35, 0.05, -0.005]]


def chatter_config(base: EpisodeConfig | None = None, filter_enabled: bool = True,
                   duration: float = 12.0) -> EpisodeConfig:
    """Excitation scenario: hand held far from the machine reference while the
    commanded tip sits near the nominal plane (distance estimate ~ sigma_e)."""
    data = config_to_dict(base) if base is not None else config_to_dict(EpisodeConfig())
    data.pop("schema_version")
    data["mode"] = "shared"
    data["timeout"] = float(duration)
    data["stuck_exit_after"] = 0.0
    data["environment"] = dict(data["environment"], goal_offset_x=0.0, goal_offset_z=0.0)
    data["trajectory"] = dict(data["trajectory"], waypoints=[list(w) for w in CHATTER_DIVE])
    data["operator"] = dict(data["operator"], kind="passive",
                            initial_position=list(CHATTER_HOLD))
    data["arbitration"] = dict(data["arbitration"], policy="erf",
                               filter_enabled=bool(filter_enabled))
    return config_from_dict(data)


def zero_point_five_crossings(alpha: np.ndarray) -> int:
    """Count crossings of the alpha = 0.5 line."""
    side = alpha >= 0.5
    return int(np.count_nonzero(side[1:] != side[:-1]))


@dataclass
class ChatterResult:
    filtered: EpisodeResult
    unfiltered: EpisodeResult
    crossings_filtered: int
    crossings_unfiltered: int
    duration: float

    @property
    def crossing_ratio(self) -> float:
        if self.crossings_unfiltered == 0:
            return float("inf")
        return self.crossings_filtered / self.crossings_unfiltered


def chattering_demo(base: EpisodeConfig | None = None,
                    duration: float = 12.0) -> ChatterResult:
    """Run the excitation scenario with and without the autonomy low-pass."""
    filtered = run_episode(chatter_config(base, filter_enabled=True, duration=duration))
    unfiltered = run_episode(chatter_config(base, filter_enabled=False, duration=duration))
    return ChatterResult(
        filtered=filtered,
        unfiltered=unfiltered,
        crossings_filtered=zero_point_five_crossings(filtered.column("alpha")),
        crossings_unfiltered=zero_point_five_crossings(unfiltered.column("alpha")),
        duration=duration,
    )


# Delimited output for sweep results.

def sweep_episodes_rows(result: SweepResult) -> list[list]:
    rows = []
    for r in result.episodes:
        rows.append([r.mode, f"{r.dx_mm:g}", r.run, r.seed,
                     int(r.success),
                     "" if r.completion_s is None else repr(float(r.completion_s))])
    return rows


def sweep_summary_rows(result: SweepResult) -> list[list]:
    rows = []
    for r in result.summary:
        rows.append([r.mode, f"{r.dx_mm:g}", r.n, repr(float(r.success_rate)),
                     "nan" if math.isnan(r.mean_s) else repr(float(r.mean_s)),
                     "nan" if math.isnan(r.std_s) else repr(float(r.std_s))])
    return rows
