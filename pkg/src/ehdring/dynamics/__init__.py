"""Lagrangian ring/fluid dynamics and its integrator."""

from .backend import BACKEND
from .energy import energy_audit, pendulum_energy
from .integrate import check_step, integrate, step_grid
from .model import (
    EnergyBreakdown,
    SimOptions,
    State,
    SystemMatrices,
    derivatives,
    drive_force,
    dry_torque,
    energy_terms,
    mechanical_energy,
    solve_accel,
    system_matrices,
)

__all__ = [
    "BACKEND", "EnergyBreakdown", "SimOptions", "State", "SystemMatrices",
    "check_step", "derivatives", "drive_force", "dry_torque", "energy_audit",
    "energy_terms", "integrate", "mechanical_energy", "pendulum_energy",
    "solve_accel", "step_grid", "system_matrices",
]
