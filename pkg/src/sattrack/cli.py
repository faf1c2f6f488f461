"""Command-line entry point: ``sattrack {gen-pass,simulate,analyze}``.

Exit codes: 0 success, 2 usage error, 3 input validation, 4 runtime failure.
"""
import argparse
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .analysis import ecdf, summarize
from .config import ConfigError, RunConfig, load_antenna, load_config
from .io import atomic_write, format_key_values, write_csv
from .kinematics import MountConfig
from .link_budget import pointing_loss_series, roc
from .optimizer import aps_optimize
from .simulation import (VelocityProfile, load_trace, profile_A, profile_B,
                         simulate, write_trace)
from .trajectory import (TrajectoryError, generate_synthetic_pass, load_trajectory,
                         max_axis_rates, write_trajectory)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_RUNTIME = 0, 2, 3, 4
OUT_DIR_ENV = "SATTRACK_OUT_DIR"

log = logging.getLogger("sattrack")


class InputError(Exception):
    """Bad user input detected after argument parsing."""


def _out_dir(args) -> Path:
    out = args.out or os.environ.get(OUT_DIR_ENV)
    if not out:
        raise InputError(f"no output directory: pass --out or set {OUT_DIR_ENV}")
    return Path(out)


def cmd_gen_pass(args) -> int:
    traj = generate_synthetic_pass(args.peak_el, args.altitude_km, args.step_s, args.min_el)
    out = Path(args.out) if args.out else _out_dir(args) / f"{traj.name}.csv"
    write_trajectory(traj, out)
    v_az, v_el = max_axis_rates(traj)
    print(f"wrote {out}")
    print(f"duration_s = {traj.duration:.3f}")
    print(f"max_az_rate_deg_s = {v_az:.6f}")
    print(f"max_el_rate_deg_s = {v_el:.6f}")
    return EXIT_OK


def _parse_profile(text: str, traj, run: RunConfig):
    key = text.strip().upper()
    if key == "A":
        return profile_A(run.mount), None
    if key == "B":
        return profile_B(traj), None
    if key == "C":
        report = aps_optimize(traj, run.mount, run.aps)
        return report.best_profile, report
    try:
        v_az, v_el = (float(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"--profile must be A, B, C or 'v_az,v_el', got {text!r}") from None
    return VelocityProfile("custom", v_az, v_el), None


def cmd_simulate(args) -> int:
    run = load_config(args.config) if args.config else RunConfig(MountConfig())
    traj = load_trajectory(args.traj)
    out = _out_dir(args)
    profile, report = _parse_profile(args.profile, traj, run)
    trace = simulate(traj, run.mount, profile, elevation_first=run.elevation_first)
    write_trace(trace, out / "trace.csv")
    summary = summarize(trace).as_dict()
    summary = {"trajectory": traj.name, "profile": trace.profile.label,
               "v_az_deg_s": trace.profile.v_az, "v_el_deg_s": trace.profile.v_el,
               **summary}
    text = format_key_values(summary)
    atomic_write(out / "summary.txt", text)
    if report is not None:
        report.write(out / "aps_report.txt", out / "aps_history.csv")
    print(text, end="")
    return EXIT_OK


def cmd_analyze(args) -> int:
    trace = load_trace(args.trace)
    out = _out_dir(args)
    if args.ecdf:
        e = ecdf(trace.pointing_error)
        write_csv(out / "ecdf.csv", ("x", "F"), (e.x, e.F))
        print(f"wrote {out / 'ecdf.csv'}")
    if args.loss or args.roc:
        antenna = load_antenna(args.antenna)
        series = pointing_loss_series(trace, antenna)
        if series.invalid.any():
            log.warning("%d records with pointing error >= 90 deg (loss reported as inf)",
                        int(series.invalid.sum()))
        if args.loss:
            write_csv(out / "loss.csv", ("time_s", "lp_db"), (series.t, series.lp_db))
            print(f"wrote {out / 'loss.csv'}")
        if args.roc:
            t0, r = roc(series.t, series.lp_db, args.window_s, args.roc_step_s)
            write_csv(out / "roc.csv", ("time_s", "roc_db_per_s"), (t0, r))
            print(f"wrote {out / 'roc.csv'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sattrack",
        description="Open-loop LEO tracking simulator for alt-azimuth mounts.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-pass", help="write a synthetic pass trajectory CSV")
    p.add_argument("--peak-el", type=float, required=True, help="culmination elevation, deg")
    p.add_argument("--altitude-km", type=float, default=420.0)
    p.add_argument("--step-s", type=float, default=1.0, help="sample spacing, s")
    p.add_argument("--min-el", type=float, default=10.0, help="elevation mask, deg")
    p.add_argument("--out", help="output CSV path")
    p.set_defaults(func=cmd_gen_pass)

    p = sub.add_parser("simulate", help="simulate tracking of a pass")
    p.add_argument("--traj", required=True, help="trajectory CSV")
    p.add_argument("--config", help="run config file (defaults: 10 deg/s, 20 deg/s^2, "
                                    "0.1 s latency, 1 s interval, 5 ms step)")
    p.add_argument("--profile", default="A", help="A, B, C or 'v_az,v_el'")
    p.add_argument("--out", help=f"output directory (fallback: ${OUT_DIR_ENV})")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="ECDF, pointing loss and ROC from a trace")
    p.add_argument("--trace", required=True, help="trace CSV from 'simulate'")
    p.add_argument("--antenna", help="config file with an [antenna] section")
    p.add_argument("--ecdf", action="store_true", help="ECDF of the pointing error")
    p.add_argument("--loss", action="store_true", help="pointing loss series")
    p.add_argument("--roc", action="store_true", help="pointing loss rate of change")
    p.add_argument("--window-s", type=float, default=1.0)
    p.add_argument("--step-s", dest="roc_step_s", type=float, default=0.005)
    p.add_argument("--out", help=f"output directory (fallback: ${OUT_DIR_ENV})")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if args.command == "analyze":
        if (args.loss or args.roc) and not args.antenna:
            parser.error("--loss and --roc need --antenna")
        if not (args.ecdf or args.loss or args.roc):
            parser.error("nothing to do: pass --ecdf, --loss and/or --roc")
    try:
        return args.func(args)
    except (InputError, ConfigError, TrajectoryError, FileNotFoundError, ValueError) as exc:
        print(f"sattrack: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        print(f"sattrack: runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
