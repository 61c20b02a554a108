"""Command line entry points: run, sweep, chatter, serve.

Every reporting command writes delimited output (CSV/JSON) into --out and
renders the matching matplotlib figure alongside it.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from . import __version__
from .config import EpisodeConfig, load_config, merge_overrides, save_config
from .engine import run_episode
from .errors import ArbisimError
from .experiments import (EPISODE_FIELDS, SUMMARY_FIELDS, SweepSpec,
                          chattering_demo, run_sweep, sweep_episodes_rows,
                          sweep_summary_rows)
from .export import result_summary, trace_to_csv, trace_to_json

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _base_config(args) -> EpisodeConfig:
    cfg = load_config(args.config) if args.config else EpisodeConfig()
    overrides = {}
    if getattr(args, "mode", None):
        overrides["mode"] = args.mode
    if getattr(args, "seed", None) is not None:
        overrides["rng_seed"] = args.seed
    return merge_overrides(cfg, **overrides) if overrides else cfg


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def cmd_run(args) -> int:
    from .reporting import render_episode_figure

    cfg = _base_config(args)
    out = _out_dir(args)
    t0 = time.perf_counter()
    result = run_episode(cfg)
    elapsed = time.perf_counter() - t0

    trace_to_csv(result, out / "trace.csv")
    trace_to_json(result, out / "trace.json")
    save_config(cfg, out / "episode_config.json")
    summary = result_summary(result)
    summary["wall_s"] = round(elapsed, 3)
    with open(out / "result.json", "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    render_episode_figure(result, out / "episode.png")

    status = "success" if result.success else f"failure ({summary['failure_reason']})"
    when = "" if result.completion_time is None else f" at t={result.completion_time:.3f} s"
    print(f"episode {status}{when}; {result.n_ticks} ticks -> {out}")
    return EXIT_OK if result.success else EXIT_FAILURE


def cmd_sweep(args) -> int:
    from .reporting import render_sweep_figure

    cfg = _base_config(args)
    spec = SweepSpec(runs=args.runs, base_seed=args.seed if args.seed is not None else 0,
                     workers=args.workers)
    out = _out_dir(args)

    done = {"n": 0}
    total = len(spec.dx_values) * len(spec.modes) * spec.runs

    def progress(row):
        done["n"] += 1
        if args.verbose:
            state = "ok" if row.success else "fail"
            print(f"[{done['n']:3d}/{total}] {row.mode:10s} dx={row.dx_mm:4g} mm "
                  f"run={row.run} {state}", flush=True)

    t0 = time.perf_counter()
    result = run_sweep(cfg, spec, progress=progress)
    elapsed = time.perf_counter() - t0

    _write_csv(out / "episodes.csv", EPISODE_FIELDS, sweep_episodes_rows(result))
    _write_csv(out / "summary.csv", SUMMARY_FIELDS, sweep_summary_rows(result))
    save_config(cfg, out / "base_config.json")
    render_sweep_figure(result, out / "sweep.png")

    print(f"{total} episodes in {elapsed:.1f} s -> {out}")
    for row in result.summary:
        mean = "-" if row.mean_s != row.mean_s else f"{row.mean_s:.2f} s"
        print(f"  {row.mode:10s} dx={row.dx_mm:4g} mm  success={row.success_rate:.2f}  mean={mean}")
    return EXIT_OK


def cmd_chatter(args) -> int:
    from .reporting import render_chatter_figure

    cfg = _base_config(args)
    out = _out_dir(args)
    result = chattering_demo(cfg, duration=args.duration)

    trace_to_csv(result.filtered, out / "trace_filtered.csv")
    trace_to_csv(result.unfiltered, out / "trace_unfiltered.csv")
    metrics = {
        "duration_s": result.duration,
        "crossings_filtered": result.crossings_filtered,
        "crossings_unfiltered": result.crossings_unfiltered,
        "crossings_per_s_filtered": result.crossings_filtered / result.duration,
        "crossings_per_s_unfiltered": result.crossings_unfiltered / result.duration,
    }
    with open(out / "chatter.json", "w") as fh:
        json.dump(metrics, fh, indent=2)
        fh.write("\n")
    render_chatter_figure(result, out / "chatter.png")

    print(f"crossings of alpha=0.5 over {result.duration:g} s: "
          f"unfiltered={result.crossings_unfiltered} filtered={result.crossings_filtered} -> {out}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    cfg = _base_config(args)
    app = create_app(cfg)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arbisim",
                                     description="Shared-control peg-in-hole simulator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one episode, write trace CSV/JSON and figure")
    p_run.add_argument("--config", help="episode config JSON")
    p_run.add_argument("--mode", choices=["shared", "autonomous"])
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--out", default="out/run")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run the goal-error sweep, write episode and summary CSVs")
    p_sweep.add_argument("--config", help="base episode config JSON")
    p_sweep.add_argument("--seed", type=int, help="sweep base seed (default 0)")
    p_sweep.add_argument("--runs", type=int, default=10, help="episodes per cell")
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.add_argument("--out", default="out/sweep")
    p_sweep.add_argument("--verbose", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    p_chat = sub.add_parser("chatter", help="run the arbitration chattering demo")
    p_chat.add_argument("--config", help="base episode config JSON")
    p_chat.add_argument("--seed", type=int)
    p_chat.add_argument("--duration", type=float, default=12.0)
    p_chat.add_argument("--out", default="out/chatter")
    p_chat.set_defaults(func=cmd_chatter)

    p_serve = sub.add_parser("serve", help="serve the teleoperation websocket API")
    p_serve.add_argument("--config", help="base episode config JSON")
    p_serve.add_argument("--seed", type=int)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ArbisimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
