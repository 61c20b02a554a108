"""Figure rendering for the report paths: every CLI command that writes
delimited output also drops matplotlib figures next to it.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .engine import EpisodeResult
from .experiments import ChatterResult, SweepResult
from .geometry import CONTACT_CODES, ContactStatus

_MODE_COLORS = {"autonomous": "#c0392b", "shared": "#2471a3"}


def _save(fig, path) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def render_episode_figure(result: EpisodeResult, path) -> str:
    """Top-down and side views of the run plus the autonomy timeline."""
    floats = result.floats
    t = floats[:, 0]
    qm = floats[:, 4:7]
    qh = floats[:, 1:4]
    tip = floats[:, 22:25]
    alpha = floats[:, 26]
    env_cfg = result.cfg.environment
    nominal = np.asarray(env_cfg.nominal_hole, dtype=float)

    fig, axes = plt.subplots(1, 3, figsize=(12.5, 4.0))
    views = [("top-down", 0, 1, "x [m]", "y [m]"), ("side", 0, 2, "x [m]", "z [m]")]
    for ax, (title, i, j, xl, yl) in zip(axes[:2], views):
        ax.plot(qm[:, i], qm[:, j], color="0.55", lw=1.0, label="machine ref")
        ax.plot(qh[:, i], qh[:, j], color="#e67e22", lw=1.0, label="hand ref")
        ax.plot(tip[:, i], tip[:, j], color="#1a5276", lw=1.4, label="tip")
        ax.plot(nominal[i], nominal[j], "o", mfc="none", mec="k", ms=8, label="nominal hole")
        ax.set_title(title)
        ax.set_xlabel(xl)
        ax.set_ylabel(yl)
        ax.set_aspect("equal", adjustable="datalim")
    axes[0].legend(fontsize=7, loc="best")

    ax = axes[2]
    ax.plot(t, alpha, color="#117a65", lw=1.0)
    inserted = result.contact_codes == CONTACT_CODES[ContactStatus.INSERTED]
    if inserted.any():
        ax.axvline(t[np.argmax(inserted)], color="k", ls="--", lw=0.8)
    ax.set_xlabel("t [s]")
    ax.set_ylabel("level of autonomy")
    ax.set_ylim(-0.05, 1.05)
    ax.set_title("arbitration")
    return _save(fig, path)


def render_sweep_figure(result: SweepResult, path) -> str:
    """Success rate and completion time against the in-plane goal error."""
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(9.0, 3.8))
    modes = sorted({row.mode for row in result.summary})
    for mode in modes:
        rows = [r for r in result.summary if r.mode == mode]
        rows.sort(key=lambda r: r.dx_mm)
        dx = [r.dx_mm for r in rows]
        color = _MODE_COLORS.get(mode, None)
        ax0.plot(dx, [r.success_rate for r in rows], "o-", color=color, label=mode)
        mean = np.array([r.mean_s for r in rows])
        std = np.array([0.0 if np.isnan(r.std_s) else r.std_s for r in rows])
        ok = ~np.isnan(mean)
        ax1.errorbar(np.asarray(dx)[ok], mean[ok], yerr=std[ok], fmt="o-",
                     color=color, capsize=3, label=mode)
    ax0.set_xlabel("goal error dx [mm]")
    ax0.set_ylabel("success rate")
    ax0.set_ylim(-0.05, 1.05)
    ax0.legend(fontsize=8)
    ax1.set_xlabel("goal error dx [mm]")
    ax1.set_ylabel("completion time [s]")
    ax1.legend(fontsize=8)
    return _save(fig, path)


def render_chatter_figure(result: ChatterResult, path) -> str:
    """Autonomy traces with the low-pass on versus off."""
    fig, (ax0, ax1) = plt.subplots(2, 1, figsize=(8.0, 5.0), sharex=True)
    for ax, episode, label, count in (
            (ax0, result.unfiltered, "filter off", result.crossings_unfiltered),
            (ax1, result.filtered, "filter on", result.crossings_filtered)):
        t = episode.floats[:, 0]
        ax.plot(t, episode.column("alpha"), lw=0.7, color="#6c3483")
        ax.axhline(0.5, color="0.6", lw=0.8, ls=":")
        ax.set_ylabel("autonomy")
        ax.set_title(f"{label}: {count} crossings of 0.5 in {result.duration:g} s")
        ax.set_ylim(-0.05, 1.05)
    ax1.set_xlabel("t [s]")
    return _save(fig, path)
