"""First-order time-dependent perturbation of the two-level truncation.

A transient atom in its ground state absorbs one photon; the frozen field
value at that instant couples the ground and first excited oscillator levels
with dimensionless strength ``lam = q E0 <x>_{1,0} / (hbar omega0)``.  In the
dimensionless time ``tau = omega0 t`` the exact two-level system is

    da0/dtau = i lam a1 exp(-i tau)
    da1/dtau = i lam a0 exp(+i tau),        a0(0) = 1, a1(0) = 0.

Two first-order closed forms are carried side by side: the ``paper`` branch
``a1 = lam exp(i tau)`` (the steady particular solution, whose dipole is the
constant that feeds the permittivity) and the ``literal`` branch
``a1 = lam (exp(i tau) - 1)`` (the antiderivative that honors a1(0) = 0
exactly).  Their time-averaged dipoles agree over a period; neither is
"fixed" in favor of the other.  The adaptive ODE integration of the untruncated
system is the independent oracle for both; it keeps the back-reaction on a0
that the closed forms drop.

E0 is a frozen scalar (the field at the absorption instant), so nothing here
depends on the photon frequency: the model vacuum is dispersion-free by
construction.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .quantity import CHARGE, ELECTRIC_FIELD, Quantity, q_div, q_mul
from .species import OscillatorSpec
from .oscillator import matrix_element_x_analytic

__all__ = [
    "BRANCH_PAPER",
    "BRANCH_LITERAL",
    "BRANCHES",
    "CouplingStrengthWarning",
    "OdeIntegrationError",
    "CouplingLambda",
    "AmplitudePair",
    "coupling_lambda",
    "amplitudes_analytic",
    "amplitudes_ode",
    "scaling_exponent",
    "dipole_trajectory",
]

BRANCH_PAPER = "paper"
BRANCH_LITERAL = "literal"
BRANCHES = (BRANCH_PAPER, BRANCH_LITERAL)

# |lam| above this makes dropped second-order terms exceed ~1% of the kept ones.
_LAMBDA_WARN = 0.1

_ODE_TOL_DEFAULT = 1e-10
_ODE_TOL_RANGE = (1e-12, 1e-6)


class CouplingStrengthWarning(UserWarning):
    """First-order formulas are being used outside their comfort zone."""


class OdeIntegrationError(RuntimeError):
    """The adaptive integrator failed (step-size collapse or similar)."""


@dataclass(frozen=True)
class CouplingLambda:
    """Dimensionless coupling ``lam = q E0 <x>_{1,0} / (hbar omega0)``."""

    value: float

    def __post_init__(self) -> None:
        v = float(self.value)
        if not math.isfinite(v):
            raise ValueError(f"coupling must be finite, got {self.value!r}")
        object.__setattr__(self, "value", v)
        if abs(v) >= _LAMBDA_WARN:
            warnings.warn(
                f"coupling lam={v!r} is outside the first-order validity band "
                f"(|lam| < {_LAMBDA_WARN})",
                CouplingStrengthWarning,
                stacklevel=2,
            )


@dataclass(frozen=True)
class AmplitudePair:
    """State amplitudes at dimensionless time tau.

    First-order truncation is not exactly unitary: |a0|^2 + |a1|^2 may exceed
    1 by O(lam^2).  The exact (ODE) solution is unitary, which is what the
    integrator is validated against.
    """

    a0: complex
    a1: complex
    tau: float

    @property
    def norm_sq(self) -> float:
        return abs(self.a0) ** 2 + abs(self.a1) ** 2


def coupling_lambda(
    oscillator: OscillatorSpec,
    q: Quantity,
    field_e0: Quantity,
    hbar: Quantity,
) -> CouplingLambda:
    """Build the coupling from oscillator, charge and frozen field value."""
    q.require(CHARGE, "q")
    field_e0.require(ELECTRIC_FIELD, "field_e0")
    x10 = matrix_element_x_analytic(oscillator, hbar)
    numerator = q_mul(q_mul(q, field_e0), x10)
    denominator = q_mul(hbar, oscillator.omega0)
    return CouplingLambda(q_div(numerator, denominator).as_dimensionless())


def _check_branch(branch: str) -> None:
    if branch not in BRANCHES:
        raise ValueError(f"branch must be one of {BRANCHES}, got {branch!r}")


def amplitudes_analytic(tau: float, lam: CouplingLambda, branch: str) -> AmplitudePair:
    """First-order closed-form amplitudes; a0 stays 1 (corrections are O(lam^2))."""
    _check_branch(branch)
    phase = cmath.exp(1j * tau)
    if branch == BRANCH_PAPER:
        a1 = lam.value * phase
    else:
        a1 = lam.value * (phase - 1.0)
    return AmplitudePair(a0=1.0 + 0.0j, a1=a1, tau=float(tau))


def amplitudes_ode(
    tau_end: float,
    lam: CouplingLambda,
    tolerance: float = _ODE_TOL_DEFAULT,
) -> AmplitudePair:
    """Integrate the exact two-level system from (1, 0) at tau = 0 to tau_end.

    Adaptive high-order explicit Runge-Kutta (DOP853) with rtol = atol =
    ``tolerance``; this is the oracle the analytic branches are checked
    against, and it retains the O(lam^2) back-reaction on a0.
    """
    lo, hi = _ODE_TOL_RANGE
    if not (lo <= tolerance <= hi):
        raise ValueError(f"tolerance must lie in [{lo}, {hi}], got {tolerance!r}")
    if not math.isfinite(tau_end):
        raise ValueError(f"tau_end must be finite, got {tau_end!r}")
    if tau_end == 0.0:
        return AmplitudePair(a0=1.0 + 0.0j, a1=0.0 + 0.0j, tau=0.0)

    k = lam.value

    def rhs(tau: float, y: np.ndarray) -> list[complex]:
        a0, a1 = y
        return [1j * k * a1 * cmath.exp(-1j * tau), 1j * k * a0 * cmath.exp(1j * tau)]

    solution = solve_ivp(
        rhs,
        (0.0, float(tau_end)),
        np.array([1.0 + 0.0j, 0.0 + 0.0j]),
        method="DOP853",
        rtol=tolerance,
        atol=tolerance,
    )
    if not solution.success:
        raise OdeIntegrationError(
            f"amplitude integration to tau={tau_end!r} failed: {solution.message}"
        )
    a0, a1 = solution.y[:, -1]
    return AmplitudePair(a0=complex(a0), a1=complex(a1), tau=float(tau_end))


def scaling_exponent(lam_grid: Sequence[float], tau: float) -> float:
    """Log-log slope of the a0 correction |a0(tau) - 1| against lam.

    The dropped back-reaction is second order in the coupling, so the fitted
    exponent should sit at 2.  Requires at least four distinct lam values in
    [1e-4, 1e-2].
    """
    values = [float(v) for v in lam_grid]
    if len(values) < 4:
        raise ValueError(f"need at least 4 grid points, got {len(values)}")
    for v in values:
        if not (1e-4 <= v <= 1e-2):
            raise ValueError(f"grid value {v!r} outside [1e-4, 1e-2]")
    if len(set(values)) < 2:
        raise ValueError("degenerate grid: all lam values identical")

    logs_x = []
    logs_y = []
    for v in values:
        pair = amplitudes_ode(tau, CouplingLambda(v), tolerance=1e-12)
        correction = abs(pair.a0 - 1.0)
        if correction == 0.0:
            raise ValueError(f"a0 correction vanished at lam={v!r}; cannot take log")
        logs_x.append(math.log(v))
        logs_y.append(math.log(correction))
    slope = np.polyfit(logs_x, logs_y, 1)[0]
    return float(slope)


def dipole_trajectory(
    oscillator: OscillatorSpec,
    q: Quantity,
    field_e0: Quantity,
    branch: str,
    tau_samples: Sequence[float],
    hbar: Quantity,
) -> list[tuple[float, Quantity]]:
    """Dipole expectation ``<p>(tau) = 2 q <x>_{1,0} Re[a1(tau) exp(-i tau)]``.

    The paper branch gives the constant ``(q^2/mu) E0 / omega0^2``; the
    literal branch gives that constant times ``(1 - cos tau)``, which averages
    to the same value over a period.
    """
    _check_branch(branch)
    lam = coupling_lambda(oscillator, q, field_e0, hbar)
    x10 = matrix_element_x_analytic(oscillator, hbar)
    prefactor = q_mul(q, x10) * 2.0
    out: list[tuple[float, Quantity]] = []
    for tau in tau_samples:
        t = float(tau)
        if not math.isfinite(t):
            raise ValueError(f"tau sample must be finite, got {tau!r}")
        pair = amplitudes_analytic(t, lam, branch)
        response = (pair.a1 * cmath.exp(-1j * t)).real
        out.append((t, prefactor * response))
    return out
