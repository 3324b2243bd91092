"""Static SVG line charts."""

import math

import matplotlib

matplotlib.use("agg")
import matplotlib.pyplot as plt  # noqa: E402

# fixed ids and no timestamp so repeated runs write identical files
matplotlib.rcParams["svg.hashsalt"] = "ehdring"
_METADATA = {"Date": None, "Creator": None}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata=_METADATA)
    plt.close(fig)


def plot_trajectory(traj, x, path):
    """Ring rate and ground displacement against time."""
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.4, 5.6), sharex=True)
    ax1.plot(traj.t, traj.omega1, lw=1.0)
    ax1.set_ylabel("omega1 (rad/s)")
    ax1.grid(alpha=0.3)
    ax2.plot(traj.t, 1e3 * x, lw=1.0, color="tab:orange")
    ax2.set_ylabel("x (mm)")
    ax2.set_xlabel("time (s)")
    ax2.grid(alpha=0.3)
    _save(fig, path)


def plot_sweep(result, path):
    """Steady ring rate against duty with the static estimate overlaid."""
    rows = [r for r in result.rows if not math.isnan(r.omega_ss)]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot([r.duty for r in rows], [r.omega_ss for r in rows], "o-", label="dynamic model")
    ax.plot([r.duty for r in result.rows], [r.static_omega for r in result.rows], "s--",
            label="static estimate")
    ax.set_xlabel("duty")
    ax.set_ylabel("steady angular velocity (rad/s)")
    ax.grid(alpha=0.3)
    ax.legend()
    _save(fig, path)
