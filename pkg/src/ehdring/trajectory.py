"""Time series produced by the integrator."""

from dataclasses import dataclass, field

import numpy as np

from .dynamics.model import State


@dataclass
class Trajectory:
    """Sampled solution with the inputs that produced it.

    Arrays share one length; ``voltage[i]`` is the drive command at ``t[i]``.
    """

    t: np.ndarray
    theta1: np.ndarray
    theta2: np.ndarray
    omega1: np.ndarray
    omega2: np.ndarray
    voltage: np.ndarray
    params: object = None
    signal: object = None
    pump: object = None
    dt: float = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.t)
        for name in ("theta1", "theta2", "omega1", "omega2", "voltage"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} length differs from t")

    def __len__(self):
        return len(self.t)

    def state(self, i):
        return State(float(self.t[i]), float(self.theta1[i]), float(self.theta2[i]),
                     float(self.omega1[i]), float(self.omega2[i]))

    @property
    def samples(self):
        """List of ``(State, voltage)`` pairs."""
        return [(self.state(i), float(self.voltage[i])) for i in range(len(self))]

    @property
    def final(self):
        return self.state(len(self) - 1)

    def shifted(self, dt0):
        """Copy with every sample time moved by ``dt0`` seconds."""
        return Trajectory(self.t + dt0, self.theta1.copy(), self.theta2.copy(),
                          self.omega1.copy(), self.omega2.copy(), self.voltage.copy(),
                          self.params, self.signal, self.pump, self.dt, dict(self.metadata))
