"""Command-line interface.

Subcommands ``run``, ``sweep``, ``calibrate`` and ``check``.  ``--config``,
``--out`` and ``--plot`` are accepted before or after the subcommand.

``EHD_SIM_SEED`` is read and ignored: every algorithm here is deterministic.
"""

import argparse
import csv
import math
import os
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .calibrate import calibrate_friction, calibrate_pump
from .checks import run_checks
from .config import load_config, save_config
from .errors import ConfigError, EHDError
from .harness import run_case, sweep_duty, linear_displacement
from .plotting import plot_sweep, plot_trajectory

TRAJECTORY_HEADER = ["t_s", "theta1_rad", "theta2_rad", "omega1_rads", "omega2_rads", "v_kv", "x_m"]
SWEEP_HEADER = ["duty", "omega_ss_rads", "settle_time_s", "regime", "static_model_omega_rads"]
FIT_HEADER = ["a", "b", "rms"]


def fmt(x):
    """Shortest round-trip text for a float (``inf``/``nan`` spelled out)."""
    return repr(float(x))


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_trajectory_csv(path, traj):
    x = linear_displacement(traj)
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(TRAJECTORY_HEADER)
        for row in zip(traj.t, traj.theta1, traj.theta2, traj.omega1, traj.omega2,
                       traj.voltage, x):
            w.writerow([fmt(v) for v in row])


def write_sweep_csv(path, result):
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(SWEEP_HEADER)
        for r in result.rows:
            w.writerow([fmt(r.duty), fmt(r.omega_ss), fmt(r.settle_time), r.regime,
                        fmt(r.static_omega)])


def duty_grid(lo, hi, steps):
    """Uniform grid with exact endpoints; interior points rounded to 12 decimals."""
    grid = np.round(np.linspace(lo, hi, steps), 12)
    grid[0], grid[-1] = lo, hi
    return grid


def _out_dir(args, cfg):
    path = args.out or cfg.out_dir
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {path}: {exc.strerror}",
                          key="out_dir") from None
    if not os.access(path, os.W_OK):
        raise ConfigError(f"output directory {path} is not writable", key="out_dir")
    return path


def cmd_run(cfg, args):
    out = _out_dir(args, cfg)
    try:
        traj, omega_ss, settle, regime = run_case(cfg.robot, cfg.pump, cfg.signal,
                                                  cfg.options, cfg.settings)
    except EHDError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    path = os.path.join(out, "trajectory.csv")
    write_trajectory_csv(path, traj)
    print(f"omega_ss_rads = {fmt(omega_ss)}")
    print(f"settle_time_s = {fmt(settle)}")
    print(f"regime = {regime}")
    print(f"wrote {path}")
    if args.plot:
        svg = os.path.join(out, "trajectory.svg")
        plot_trajectory(traj, linear_displacement(traj), svg)
        print(f"wrote {svg}")
    return 0


def cmd_sweep(cfg, args):
    lo, hi, steps = args.duty_min, args.duty_max, args.steps
    if not (0.0 <= lo < hi <= 1.0):
        print("error: need 0 <= --duty-min < --duty-max <= 1", file=sys.stderr)
        return 2
    if steps < 2:
        print("error: --steps must be >= 2", file=sys.stderr)
        return 2
    out = _out_dir(args, cfg)
    duties = duty_grid(lo, hi, steps)
    result = sweep_duty(cfg.robot, cfg.pump, cfg.signal, duties, cfg.options, cfg.settings,
                        workers=args.workers)
    path = os.path.join(out, "sweep.csv")
    write_sweep_csv(path, result)
    for r in result.rows:
        line = f"duty {r.duty:.4f}  omega_ss {r.omega_ss:+.4f} rad/s  {r.regime}"
        print(line + (f"  ({r.error})" if r.error else ""))
    print(f"wrote {path}")
    if args.plot:
        svg = os.path.join(out, "sweep.svg")
        plot_sweep(result, svg)
        print(f"wrote {svg}")
    return 0 if result.ok else 1


def cmd_calibrate(cfg, args):
    out = _out_dir(args, cfg)
    if args.mode == "pump":
        if not args.data:
            print("error: --mode pump needs at least one --data CSV", file=sys.stderr)
            return 2
        fits = calibrate_pump(args.data)
        path = os.path.join(out, "fit.csv")
        with open(path, "w", newline="") as fh:
            w = _writer(fh)
            w.writerow(FIT_HEADER)
            for f in fits:
                w.writerow([fmt(f.a), fmt(f.b), fmt(f.rms)])
        for f in fits:
            print(f"{f.source}: a = {fmt(f.a)}, b = {fmt(f.b)}, rms = {fmt(f.rms)}")
        print(f"wrote {path}")
        return 0

    if args.target_omega is None:
        print("error: --mode friction needs --target-omega", file=sys.stderr)
        return 2
    fit = calibrate_friction(cfg, args.target_omega)
    print(f"k1 = {fmt(fit.k1)}")
    print(f"xi_m1 = {fmt(fit.xi_m1)}")
    print(f"omega_ss_rads = {fmt(fit.omega_ss)} (target {fmt(args.target_omega)})")
    print(f"settle_time_s = {fmt(fit.settle_time)}")
    print(f"iterations = {fit.iterations}, simulations = {fit.evaluations}")
    calibrated = replace(cfg, robot=replace(cfg.robot, k1=fit.k1, xi_m1=fit.xi_m1))
    path = os.path.join(out, "calibrated.cfg")
    save_config(calibrated, path)
    print(f"wrote {path}")
    if not fit.converged:
        print(f"error: no convergence after {fit.iterations} iterations; "
              f"best residual {fmt(fit.residual)} rad/s", file=sys.stderr)
        return 1
    return 0


def cmd_check(cfg, args):
    results = run_checks(cfg)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def _global_flags(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", default=default, help="config file (key = value)")
    parser.add_argument("--out", default=default, help="output directory")
    parser.add_argument("--plot", action="store_true",
                        default=argparse.SUPPRESS if suppress else False,
                        help="also write SVG plots")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ehdring", description="EHD ring robot simulator and characterization tools")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="integrate one run and write the trajectory CSV")
    _global_flags(p, suppress=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="steady angular velocity over a duty grid")
    _global_flags(p, suppress=True)
    p.add_argument("--duty-min", type=float, default=0.1)
    p.add_argument("--duty-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--workers", type=int, default=None, help="process pool size for rows")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("calibrate", help="fit pump polynomials or friction coefficients")
    _global_flags(p, suppress=True)
    p.add_argument("--mode", choices=("pump", "friction"), required=True)
    p.add_argument("--data", action="append", help="voltage_kv,value CSV (repeatable)")
    p.add_argument("--target-omega", type=float, help="target steady angular velocity (rad/s)")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("check", help="run the model self-checks")
    _global_flags(p, suppress=True)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    os.environ.get("EHD_SIM_SEED")  # reserved; no algorithm here is random
    try:
        cfg = load_config(args.config)
        return args.func(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except EHDError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
