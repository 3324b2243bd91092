"""Simulation toolkit for a ring robot driven by an electrohydrodynamic pump.

Modules
-------
pump       empirical pressure/flow polynomials and their least-squares fit
drive      square-wave voltage command
statics    start-to-roll torque balance and the static speed estimate
dynamics   two-degree-of-freedom model, RK4 integrator, energy audit
harness    steady state, regime classification, duty sweeps
config     ``key = value`` run configuration
cli        command-line front end
"""

from .config import RunConfig, load_config, save_config
from .drive import DriveSignal, effective_voltage, voltage_at
from .dynamics import (
    BACKEND,
    SimOptions,
    State,
    derivatives,
    drive_force,
    energy_audit,
    integrate,
    solve_accel,
    system_matrices,
)
from .errors import (
    ConfigError,
    DegenerateDataError,
    DivergenceError,
    EHDError,
    InsufficientDataError,
    InvalidInputError,
    InvalidStepError,
    SingularMassMatrixError,
)
from .harness import classify_regime, detect_steady_state, linear_displacement, sweep_duty
from .pump import PumpModel, apply_empirical_scaling, fit_quadratic, pump_flow, pump_pressure
from .statics import (
    RobotParams,
    climb_angle,
    fluid_speed,
    friction_torque,
    max_drive_torque,
    sign_friction,
    start_to_roll,
    static_angular_velocity,
)
from .trajectory import Trajectory

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ConfigError", "DegenerateDataError", "DivergenceError", "DriveSignal",
    "EHDError", "InsufficientDataError", "InvalidInputError", "InvalidStepError",
    "PumpModel", "RobotParams", "RunConfig", "SimOptions", "SingularMassMatrixError", "State",
    "Trajectory", "apply_empirical_scaling", "classify_regime", "climb_angle",
    "derivatives", "detect_steady_state", "drive_force", "effective_voltage",
    "energy_audit", "fit_quadratic", "fluid_speed", "friction_torque", "integrate",
    "linear_displacement", "load_config", "max_drive_torque", "pump_flow", "pump_pressure",
    "save_config", "sign_friction", "solve_accel", "start_to_roll", "static_angular_velocity",
    "sweep_duty", "system_matrices", "voltage_at",
]
