"""Compare the compiled and pure-Python RK4 kernels on the reference run.

Usage: python3 benchmarks/bench_kernels.py [--t-end 5.0] [--repeat 3]
"""

import argparse
import time

import numpy as np

from ehdring.config import load_config
from ehdring.dynamics import State, integrate
from ehdring.dynamics.backend import compiled


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t-end", type=float, default=5.0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cfg = load_config()
    opts = cfg.options

    def run(kernel):
        return integrate(State(), cfg.robot, cfg.pump, cfg.signal, args.t_end, opts.dt,
                         opts, kernel=kernel)

    steps = None
    rows = []
    for name in ("python", "cython"):
        if name == "cython" and compiled is None:
            print("compiled kernel not built; skipping")
            continue
        sec, traj = best_time(lambda: run(name), args.repeat)
        steps = len(traj) - 1
        rows.append((name, sec, traj))

    print(f"reference run: t_end={args.t_end} s, dt={opts.dt} s, {steps} steps")
    for name, sec, _ in rows:
        print(f"  {name:7s} {sec * 1e3:9.2f} ms  {steps / sec / 1e3:9.1f} ksteps/s")
    if len(rows) == 2:
        (_, t_py, a), (_, t_cy, b) = rows
        same = all(np.array_equal(getattr(a, f), getattr(b, f))
                   for f in ("theta1", "theta2", "omega1", "omega2"))
        print(f"  speedup x{t_py / t_cy:.1f}; trajectories bit-identical: {same}")


if __name__ == "__main__":
    main()
