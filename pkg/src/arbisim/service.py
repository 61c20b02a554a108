"""Teleoperation service: one websocket session drives one episode.

Protocol (JSON messages over /session):
  client -> server: {"type": "start", "mode"?, "seed"?, "pace"?, "config"?}
                    {"type": "input", "pos": [x, y, z]}
                    {"type": "stop"}
  server -> client: {"type": "scene", ...}    once, after a valid start
                    {"type": "state", ...}    at the configured stream rate
                    {"type": "warning", ...}  non-fatal (e.g. clamped input)
                    {"type": "result", ...}   once, then the socket closes
                    {"type": "error", ...}    malformed traffic

The engine always ticks at its own fixed rate; the stream decimates to
stream_hz and inputs land in a latest-value mailbox, so client send rate
never changes the integration step. "pace": "turbo" runs as fast as the
host allows (useful for tests), "realtime" (default) paces frames to the
wall clock.
"""

from __future__ import annotations

import asyncio
import math
import time
from typing import Optional

import numpy as np
from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from . import __version__
from .config import EpisodeConfig, config_from_dict, config_to_dict
from .engine import Episode
from .errors import ArbisimError

_SCENE_PATH_POINTS = 120


def _merge_dict(base: dict, override: dict) -> dict:
    out = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge_dict(out[key], value)
        else:
            out[key] = value
    return out


def session_config(base: EpisodeConfig, msg: dict) -> EpisodeConfig:
    """Resolve the per-session episode config from a start message."""
    data = config_to_dict(base)
    data.pop("schema_version")
    override = msg.get("config") or {}
    if not isinstance(override, dict):
        raise ArbisimError("config must be an object")
    data = _merge_dict(data, override)
    if "mode" in msg and msg["mode"] is not None:
        data["mode"] = msg["mode"]
    if "seed" in msg and msg["seed"] is not None:
        data["rng_seed"] = int(msg["seed"])
    # Interactive sessions always use the live-input operator.
    data["operator"] = dict(data["operator"], kind="live", initial_position=None)
    return config_from_dict(data)


def _vec(a) -> list:
    return [float(a[0]), float(a[1]), float(a[2])]


def scene_message(episode: Episode) -> dict:
    cfg = episode.cfg
    traj = episode.traj
    ts = np.linspace(0.0, traj.duration, _SCENE_PATH_POINTS)
    path = [_vec(traj.sample(float(t))) for t in ts]
    return {
        "type": "scene",
        "version": __version__,
        "mode": cfg.mode,
        "seed": cfg.rng_seed,
        "dt": cfg.dt,
        "stream_hz": cfg.stream_hz,
        "timeout": cfg.timeout,
        "surface_point": _vec(episode.env.surface_point),
        "surface_normal": _vec(episode.env.surface_normal),
        "nominal_hole": _vec(episode.env.nominal_hole),
        "hole_radius": episode.env.hole_radius,
        "peg_radius": episode.env.peg_radius,
        "insertion_depth": episode.env.insertion_depth,
        "sigma_e": episode.env.sigma_e,
        "fov_radius": cfg.operator.fov_radius,
        "workspace_min": [float(v) for v in cfg.workspace_min],
        "workspace_max": [float(v) for v in cfg.workspace_max],
        "machine_path": path,
    }


def state_message(episode: Episode) -> dict:
    state = episode.latest_state()
    env = episode.env
    rel = state.tip - env.actual_hole
    visible = float(np.dot(rel, rel)) <= episode.cfg.operator.fov_radius ** 2
    return {
        "type": "state",
        "tick": episode.ticks,
        "t": state.t,
        "tip": _vec(state.tip),
        "q_h": _vec(state.q_h),
        "q_m": _vec(state.q_m),
        "q_ref": _vec(state.q_ref),
        "alpha": state.alpha,
        "d_e": state.d_e,
        "f_total": _vec(state.f_total),
        "f_fixture": _vec(state.f_fixture),
        "f_field": _vec(state.f_field),
        "contact": state.contact.value,
        "actual_hole": _vec(env.actual_hole) if visible else None,
    }


def result_message(episode: Episode, aborted: bool) -> dict:
    return {
        "type": "result",
        "success": bool(episode.success),
        "completion_s": (None if episode.completion_time is None
                         else float(episode.completion_time)),
        "failure_reason": (None if episode.failure_reason is None
                           else episode.failure_reason.value),
        "n_ticks": episode.ticks,
        "aborted": bool(aborted),
    }


class _Session:
    def __init__(self, episode: Episode, lo: np.ndarray, hi: np.ndarray):
        self.episode = episode
        self.lo = lo
        self.hi = hi
        self.stop = False
        self.disconnected = False
        self.pending: list[dict] = []   # frames queued by the reader, sent by the writer

    def handle(self, msg) -> None:
        if not isinstance(msg, dict) or "type" not in msg:
            self.pending.append({"type": "error", "message": "malformed message"})
            return
        kind = msg["type"]
        if kind == "stop":
            self.stop = True
        elif kind == "input":
            pos = msg.get("pos")
            try:
                arr = np.asarray(pos, dtype=float).reshape(3)
            except (TypeError, ValueError):
                self.pending.append({"type": "error", "message": "input pos must be [x, y, z]"})
                return
            if not np.all(np.isfinite(arr)):
                self.pending.append({"type": "error", "message": "input pos must be finite"})
                return
            clamped = np.clip(arr, self.lo, self.hi)
            if not np.array_equal(clamped, arr):
                self.pending.append({"type": "warning",
                                     "message": "input outside workspace, clamped"})
            op = self.episode.live_operator
            if op is not None:
                op.set_target(clamped)
        elif kind == "start":
            self.pending.append({"type": "error", "message": "session already started"})
        else:
            self.pending.append({"type": "error", "message": f"unknown message type {kind!r}"})


def create_app(base_config: Optional[EpisodeConfig] = None) -> FastAPI:
    base = base_config or EpisodeConfig()
    app = FastAPI(title="arbisim teleop service", version=__version__)

    @app.get("/health")
    async def health():
        return {"status": "ok", "version": __version__}

    @app.websocket("/session")
    async def session(ws: WebSocket):
        await ws.accept()
        try:
            first = await ws.receive_json()
        except WebSocketDisconnect:
            return
        except Exception:
            await ws.send_json({"type": "error", "message": "expected JSON"})
            await ws.close()
            return
        if not isinstance(first, dict) or first.get("type") != "start":
            await ws.send_json({"type": "error", "message": "first message must be start"})
            await ws.close()
            return
        try:
            cfg = session_config(base, first)
            episode = Episode(cfg)
        except (ArbisimError, ValueError) as exc:
            await ws.send_json({"type": "error", "message": str(exc)})
            await ws.close()
            return

        turbo = first.get("pace", "realtime") == "turbo"
        sess = _Session(episode, np.asarray(cfg.workspace_min, dtype=float),
                        np.asarray(cfg.workspace_max, dtype=float))

        async def reader():
            while not (sess.stop or sess.disconnected or episode.done):
                try:
                    msg = await ws.receive_json()
                except WebSocketDisconnect:
                    sess.disconnected = True
                    return
                except Exception:
                    sess.pending.append({"type": "error", "message": "expected JSON"})
                    continue
                sess.handle(msg)

        reader_task = asyncio.create_task(reader())
        ticks_per_frame = max(1, int(round(1.0 / (cfg.stream_hz * cfg.dt))))
        frame_period = ticks_per_frame * cfg.dt
        try:
            await ws.send_json(scene_message(episode))
            next_deadline = time.monotonic() + frame_period
            while not episode.done and not sess.stop and not sess.disconnected:
                episode.step_n(ticks_per_frame)
                while sess.pending:
                    await ws.send_json(sess.pending.pop(0))
                await ws.send_json(state_message(episode))
                if turbo:
                    await asyncio.sleep(0)
                else:
                    delay = next_deadline - time.monotonic()
                    next_deadline += frame_period
                    if delay > 0:
                        await asyncio.sleep(delay)
                    else:
                        await asyncio.sleep(0)
            if not sess.disconnected:
                while sess.pending:
                    await ws.send_json(sess.pending.pop(0))
                await ws.send_json(result_message(episode, aborted=sess.stop and not episode.done))
        except WebSocketDisconnect:
            pass
        finally:
            sess.stop = True
            reader_task.cancel()
            try:
                await ws.close()
            except Exception:
                pass

    return app
