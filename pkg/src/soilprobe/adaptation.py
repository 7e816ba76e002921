"""Adaptive compliance law.

The position reference handed to the impedance filter is

    x_r = kappa * F_r + x_e

where kappa is an adaptive compliance parameter (m/N) and x_e the detected
surface.  kappa evolves through a third-order ODE that reuses the impedance
coefficients on its left-hand side,

    m kappa''' + b kappa'' + k kappa' = s1 * g1 * q  +  s2 * g1s * qd

with q = p1 * e + p2 * ed built from the force-tracking error.  When the
closed loop settles, e -> 0 and kappa -> 1/k_e: the estimate converges to
the true environment compliance without k_e ever being measured.

Sign conventions: with e defined as desired-minus-measured force, a
positive q must *raise* kappa (the probe is not pressing hard enough, so
the reference must move deeper).  The published form of the law carries a
minus sign on the q term, which with this error convention drives kappa
onto its lower clamp and never converges; both signs are therefore exposed
as config flags, defaulting to the convergent choice.  The sign of the
q-derivative term likewise appears both ways in the literature; +1 is the
stabilizing default (it adds damping proportional to the contact
stiffness).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .impedance import ImpedanceParams

COMPLIANCE_FLOOR = 1e-7  # m/N below which the contact is reported as rigid


@dataclass(frozen=True)
class AdaptationParams:
    """Gains of the compliance adaptation law.

    drive_gain weights the composite error q, drive_rate_gain its
    derivative; error_weight and error_rate_weight form q from the force
    error and its filtered derivative.  Defaults are tuned so one shared
    set converges on soft soil, dry soil, and rigid collisions alike.
    """

    drive_gain: float = 8.0
    drive_rate_gain: float = 0.05
    error_weight: float = 1.0
    error_rate_weight: float = 0.05
    deriv_filter_tau: float = 0.01
    drive_sign: int = 1
    rate_sign: int = 1

    def __post_init__(self):
        if self.drive_gain <= 0:
            raise ValueError("drive_gain must be positive")
        if self.drive_rate_gain < 0:
            raise ValueError("drive_rate_gain must be non-negative")
        if self.error_weight <= 0 or self.error_rate_weight <= 0:
            raise ValueError("error weights must be positive")
        if self.deriv_filter_tau < 0:
            raise ValueError("deriv_filter_tau must be non-negative")
        if self.drive_sign not in (1, -1) or self.rate_sign not in (1, -1):
            raise ValueError("sign flags must be +1 or -1")


@dataclass(frozen=True)
class AdaptationState:
    """Compliance estimate with its two derivatives plus the low-pass states
    of the error and composite-error differentiators."""

    kappa: float = 0.0
    kappa_rate: float = 0.0
    kappa_accel: float = 0.0
    error_lp: float = 0.0
    q_lp: float = 0.0

    @classmethod
    def initial(cls, e: float, params: AdaptationParams) -> "AdaptationState":
        """State at adaptation start: zero compliance (infinitely stiff
        prior), differentiators pre-loaded with the current error so the
        first step sees no artificial derivative kick."""
        return cls(0.0, 0.0, 0.0, float(e), params.error_weight * float(e))


def _dirty_derivative(value: float, lp_state: float, tau: float, dt: float) -> tuple[float, float]:
    """First-order low-pass differentiator; returns (derivative, new state).

    tau = 0 degenerates to a raw backward difference.
    """
    if tau == 0.0:
        return (value - lp_state) / dt, value
    lp_new = lp_state + dt / (tau + dt) * (value - lp_state)
    return (value - lp_new) / tau, lp_new


def adaptation_step(
    state: AdaptationState,
    e: float,
    params: AdaptationParams,
    imp: ImpedanceParams,
    dt: float,
) -> AdaptationState:
    """Advance the compliance law one step with semi-implicit Euler on the
    (kappa, kappa_rate, kappa_accel) chain; kappa is clamped at zero from
    below because negative compliance is unphysical.

    Raises RuntimeError("adaptation diverged") on non-finite state.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    e = float(e)
    e_rate, error_lp = _dirty_derivative(e, state.error_lp, params.deriv_filter_tau, dt)
    q = params.error_weight * e + params.error_rate_weight * e_rate
    q_rate, q_lp = _dirty_derivative(q, state.q_lp, params.deriv_filter_tau, dt)

    drive = params.drive_sign * params.drive_gain * q + params.rate_sign * params.drive_rate_gain * q_rate
    jerk = (drive - imp.stiffness * state.kappa_rate - imp.damping * state.kappa_accel) / imp.mass

    accel = state.kappa_accel + dt * jerk
    rate = state.kappa_rate + dt * accel
    kappa = state.kappa + dt * rate
    if kappa < 0.0:
        kappa = 0.0
    if not all(np.isfinite(v) for v in (kappa, rate, accel, error_lp, q_lp)):
        raise RuntimeError("adaptation diverged")
    return AdaptationState(kappa, rate, accel, error_lp, q_lp)


def position_reference(kappa: float, f_desired: float, x_surface: float) -> float:
    """Reference position for the impedance filter: the detected surface
    plus the compliance-scaled force setpoint."""
    return kappa * f_desired + x_surface


@dataclass(frozen=True)
class ComplianceEstimate:
    """Compliance (m/N) with its guarded reciprocal; stiffness is None when
    the contact is effectively rigid (compliance at or below the floor)."""

    compliance: float
    stiffness: float | None

    @property
    def is_rigid(self) -> bool:
        return self.stiffness is None


def compliance_estimate(state: AdaptationState, floor: float = COMPLIANCE_FLOOR) -> ComplianceEstimate:
    """Read the current compliance/stiffness estimate out of the adaptation
    state, flagging near-zero compliance as rigid instead of dividing."""
    kappa = float(state.kappa)
    if kappa > floor:
        return ComplianceEstimate(kappa, 1.0 / kappa)
    return ComplianceEstimate(kappa, None)
