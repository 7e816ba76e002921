"""Position-based impedance (admittance) filter.

The filter turns a force-tracking error into a commanded position by
simulating a target mass-spring-damper between the commanded and reference
trajectories:

    m (xdd_c - xdd_r) + b (xd_c - xd_r) + k (x_c - x_r) = e

All quantities are per-axis scalars; passing numpy arrays runs independent
channels elementwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ImpedanceParams:
    """Target impedance: virtual mass, damping and stiffness per axis.

    Defaults give a critically damped free-space response at ~20 rad/s.
    The contact-scenario presets override damping with a heavier value; see
    ScenarioConfig.
    """

    mass: float = 1.0
    damping: float = 40.0
    stiffness: float = 400.0

    def __post_init__(self):
        if not (np.all(np.asarray(self.mass) > 0)
                and np.all(np.asarray(self.damping) > 0)
                and np.all(np.asarray(self.stiffness) > 0)):
            raise ValueError("impedance parameters must be strictly positive")


@dataclass(frozen=True)
class ImpedanceState:
    """Commanded position, velocity and acceleration of the filter."""

    position: float = 0.0
    velocity: float = 0.0
    acceleration: float = 0.0


@dataclass(frozen=True)
class ReferenceSignal:
    """Reference trajectory sample the filter tracks when the error is zero."""

    position: float = 0.0
    velocity: float = 0.0
    acceleration: float = 0.0


def force_error(f_desired: float, f_measured: float) -> float:
    """Force tracking error: desired minus measured contact force."""
    return f_desired - f_measured


def impedance_step(
    state: ImpedanceState,
    ref: ReferenceSignal,
    e: float,
    params: ImpedanceParams,
    dt: float,
) -> ImpedanceState:
    """Advance the filter one step with semi-implicit Euler.

    The acceleration is solved from the target dynamics, then velocity is
    updated before position (symplectic ordering), which keeps the stiff
    in-contact loop stable at millisecond rates.

    Raises RuntimeError("filter diverged") if the state leaves the finite
    range — the signature of an unstable (params, dt) combination.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    acc = ref.acceleration + (
        e
        - params.damping * (state.velocity - ref.velocity)
        - params.stiffness * (state.position - ref.position)
    ) / params.mass
    vel = state.velocity + dt * acc
    pos = state.position + dt * vel
    if not (np.all(np.isfinite(pos)) and np.all(np.isfinite(vel))):
        raise RuntimeError("filter diverged")
    return ImpedanceState(pos, vel, acc)


def steady_state_reference(f_desired: float, k_env: float, x_surface: float) -> float:
    """Position reference that yields zero steady-state force error when the
    environment stiffness and surface location are known exactly.

    At equilibrium the filter output settles on the reference, so the spring
    compression must supply the desired force: x_r = F_r / k_e + x_e.
    """
    if k_env <= 0:
        raise ValueError("environment stiffness must be positive")
    return f_desired / k_env + x_surface
