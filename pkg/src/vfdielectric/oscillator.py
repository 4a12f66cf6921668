"""One-dimensional quantum-harmonic-oscillator numerics.

All integrals are evaluated in dimensionless natural units (lengths in
``sqrt(hbar/(mu omega0))``) and rescaled to SI at the boundary; at SI scales
the Gaussian weight ``exp(-mu omega0 x^2 / (2 hbar))`` underflows long before
any quadrature node is reached, so natural units are a correctness
requirement, not a nicety.

The position matrix element has two independent routes: the closed form
``<x>_{1,0} = sqrt(hbar/(2 mu omega0))`` and Gauss-Hermite quadrature of the
defining integral.  Their agreement is one of the package's standing
cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial.hermite import hermgauss
from scipy.optimize import minimize_scalar

from .quantity import (
    CHARGE,
    DIPOLE_MOMENT,
    ELECTRIC_FIELD,
    ENERGY,
    LENGTH,
    SPRING_CONSTANT,
    Quantity,
    q_div,
    q_mul,
    q_sqrt,
)
from .species import OscillatorSpec

__all__ = [
    "N_MAX",
    "QuadratureError",
    "PotentialFitError",
    "Potential1D",
    "HarmonicFit",
    "eigenfunction",
    "natural_length",
    "matrix_element_x_quadrature",
    "matrix_element_x_analytic",
    "overlap_quadrature",
    "harmonic_approximation",
    "dipole_expectation_static",
]

# The model only ever populates n = 0, 1; higher levels exist for the
# parity/orthogonality property checks.
N_MAX = 10

_DEFAULT_NODES = 64
_DEFAULT_QUAD_TOL = 1e-10


class QuadratureError(RuntimeError):
    """Quadrature failed to converge to the requested tolerance."""


class PotentialFitError(ValueError):
    """A potential has no usable interior harmonic minimum."""


def _hermite_series(n: int, x: np.ndarray, gaussian: bool) -> np.ndarray:
    """Orthonormal Hermite functions by upward recurrence.

    With ``gaussian`` the values are the eigenfunctions psi_n(x); without it
    the Gaussian ``exp(-x^2/2)`` is factored out, which is exactly the form
    Gauss-Hermite quadrature wants.  Phases keep every psi_n real with a
    positive leading coefficient.
    """
    if not (0 <= n <= N_MAX):
        raise ValueError(f"level n must be in [0, {N_MAX}], got {n}")
    p0 = np.full_like(x, math.pi ** -0.25, dtype=float)
    if gaussian:
        p0 = p0 * np.exp(-0.5 * x * x)
    if n == 0:
        return p0
    p1 = math.sqrt(2.0) * x * p0
    if n == 1:
        return p1
    prev, cur = p0, p1
    for k in range(1, n):
        prev, cur = cur, math.sqrt(2.0 / (k + 1)) * x * cur - math.sqrt(k / (k + 1)) * prev
    return cur


def eigenfunction(n: int, x: float | np.ndarray, oscillator: OscillatorSpec | None = None) -> float | np.ndarray:
    """Normalized eigenfunction psi_n at dimensionless x (natural units).

    The oscillator argument is accepted for interface symmetry; in natural
    units the eigenfunctions are universal and do not depend on it.
    """
    arr = np.asarray(x, dtype=float)
    out = _hermite_series(n, arr, gaussian=True)
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def natural_length(oscillator: OscillatorSpec, hbar: Quantity) -> Quantity:
    """The oscillator length scale ``sqrt(hbar/(mu omega0))`` in meters."""
    return q_sqrt(q_div(hbar, q_mul(oscillator.reduced_mass, oscillator.omega0)))


def _gauss_hermite_integral(n_prime: int, n: int, with_x: bool, nodes: int) -> float:
    x, w = hermgauss(nodes)
    values = _hermite_series(n_prime, x, gaussian=False) * _hermite_series(n, x, gaussian=False)
    if with_x:
        values = values * x
    return float(np.sum(w * values))


def _converged_integral(n_prime: int, n: int, with_x: bool, nodes: int, tol: float) -> float:
    """Integral with an error estimate from a coarser node count."""
    coarse = _gauss_hermite_integral(n_prime, n, with_x, max(nodes // 2, N_MAX + 2))
    fine = _gauss_hermite_integral(n_prime, n, with_x, nodes)
    if abs(fine - coarse) > tol * max(1.0, abs(fine)):
        raise QuadratureError(
            f"Gauss-Hermite integral for (n'={n_prime}, n={n}) did not converge: "
            f"|{fine!r} - {coarse!r}| exceeds tolerance {tol!r}"
        )
    return fine


def matrix_element_x_quadrature(
    n_prime: int,
    n: int,
    oscillator: OscillatorSpec,
    hbar: Quantity,
    nodes: int = _DEFAULT_NODES,
    tol: float = _DEFAULT_QUAD_TOL,
) -> Quantity:
    """Position matrix element ``<n'|x|n>`` by Gauss-Hermite quadrature (m).

    The integrand is a polynomial times ``exp(-x^2)``, so the default 64-node
    rule is exact for all allowed levels; convergence is still verified
    against a half-size rule and a :class:`QuadratureError` raised if the two
    disagree beyond ``tol``.
    """
    integral = _converged_integral(n_prime, n, with_x=True, nodes=nodes, tol=tol)
    return natural_length(oscillator, hbar) * integral


def matrix_element_x_analytic(oscillator: OscillatorSpec, hbar: Quantity) -> Quantity:
    """Closed form for the ground-to-first matrix element: sqrt(hbar/(2 mu omega0))."""
    return q_sqrt(
        q_div(hbar, q_mul(oscillator.reduced_mass, oscillator.omega0) * 2)
    ).require(LENGTH, "<x>_{1,0}")


def overlap_quadrature(
    n_prime: int,
    n: int,
    nodes: int = _DEFAULT_NODES,
    tol: float = _DEFAULT_QUAD_TOL,
) -> float:
    """Overlap ``<n'|n>`` by quadrature; delta_{n',n} up to quadrature error."""
    return _converged_integral(n_prime, n, with_x=False, nodes=nodes, tol=tol)


# --- harmonic approximation of an arbitrary 1-D potential ------------------


@dataclass(frozen=True)
class Potential1D:
    """A 1-D potential U(x): x in meters, U in joules, finite on the interval.

    The evaluator must be safe to call from concurrent threads; the fitting
    code assumes it is a pure function of x.
    """

    evaluator: Callable[[float], float]
    search_interval: tuple[float, float]

    def __post_init__(self) -> None:
        lo, hi = self.search_interval
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValueError(f"bad search interval {self.search_interval!r}")


@dataclass(frozen=True)
class HarmonicFit:
    """Local quadratic model ``U(x) ~ u0 + K (x - x_e)^2 / 2`` around a minimum."""

    x_e: Quantity
    k_spring: Quantity
    u0: Quantity

    def __post_init__(self) -> None:
        self.x_e.require(LENGTH, "x_e")
        self.k_spring.require(SPRING_CONSTANT, "k_spring")
        self.u0.require(ENERGY, "u0")
        if self.k_spring.value <= 0:
            raise ValueError("k_spring must be positive: not a minimum")


def _extrapolated_difference(
    stencil: Callable[[float], float], h0: float
) -> tuple[float, float]:
    """Ridders-style step extrapolation of a central-difference stencil.

    Returns (best estimate, error estimate).  Extrapolating in h is what lets
    a shallow quadratic (K ~ 1e-3) sitting on a large offset (|U| ~ 10) still
    come out at ~1e-12 relative accuracy; a single cube-root-of-epsilon step
    would lose it to cancellation noise ``eps |U| / h^2``.
    """
    con = 1.4
    con2 = con * con
    ntab = 12
    table = [[0.0] * ntab for _ in range(ntab)]

    h = h0
    table[0][0] = stencil(h)
    best = table[0][0]
    err = math.inf
    for i in range(1, ntab):
        h /= con
        table[0][i] = stencil(h)
        fac = con2
        for j in range(1, i + 1):
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0)
            fac *= con2
            errt = max(
                abs(table[j][i] - table[j - 1][i]),
                abs(table[j][i] - table[j - 1][i - 1]),
            )
            if errt <= err:
                err = errt
                best = table[j][i]
        if abs(table[i][i] - table[i - 1][i - 1]) >= 2.0 * err:
            break
    return best, err


def _second_derivative(f: Callable[[float], float], x0: float, h0: float) -> tuple[float, float]:
    return _extrapolated_difference(
        lambda h: (f(x0 + h) - 2.0 * f(x0) + f(x0 - h)) / (h * h), h0
    )


def _first_derivative(f: Callable[[float], float], x0: float, h0: float) -> tuple[float, float]:
    return _extrapolated_difference(
        lambda h: (f(x0 + h) - f(x0 - h)) / (2.0 * h), h0
    )


def harmonic_approximation(potential: Potential1D) -> HarmonicFit:
    """Locate the interior minimum of U and fit the local harmonic model.

    The minimum is bracketed to a relative interval width of 1e-10, then
    polished by Newton steps on the extrapolated first derivative: comparing
    bare function values cannot place a shallow minimum (K ~ 1e-3) on a large
    offset (|U| ~ 10) better than ``sqrt(2 eps |U|/K)`` ~ 1e-6, while the
    derivative route reaches ~1e-11.  The curvature is an extrapolated central
    second difference started at a quarter of the distance to the nearest
    interval edge.  Raises :class:`PotentialFitError` if the minimizer sticks
    to an interval edge or if the curvature is non-positive or
    indistinguishable from zero.
    """
    evaluator = potential.evaluator
    lo, hi = potential.search_interval
    width = hi - lo
    xatol = 1e-10 * width
    result = minimize_scalar(
        evaluator, bounds=(lo, hi), method="bounded", options={"xatol": xatol}
    )
    x_e = float(result.x)
    edge_margin = max(10.0 * xatol, 1e-8 * width)
    if min(x_e - lo, hi - x_e) <= edge_margin:
        raise PotentialFitError(
            f"no interior minimum: minimizer stopped at x={x_e!r} beside the "
            f"interval {potential.search_interval!r}"
        )

    def curvature_at(x: float) -> tuple[float, float]:
        h0 = 0.25 * min(x - lo, hi - x)
        return _second_derivative(evaluator, x, h0)

    k, k_err = curvature_at(x_e)
    if not math.isfinite(k) or k <= 0:
        raise PotentialFitError(f"curvature at x_e={x_e!r} is not positive (K={k!r})")
    if k_err >= abs(k):
        raise PotentialFitError(
            f"degenerate minimum at x_e={x_e!r}: curvature K={k!r} is "
            f"indistinguishable from zero (error estimate {k_err!r})"
        )

    for _ in range(5):
        h0 = 0.25 * min(x_e - lo, hi - x_e)
        slope, _ = _first_derivative(evaluator, x_e, h0)
        step = slope / k
        if abs(step) <= 1e-14 * max(abs(x_e), xatol):
            break
        x_e = min(max(x_e - step, lo + edge_margin), hi - edge_margin)
    k, k_err = curvature_at(x_e)
    if not math.isfinite(k) or k <= 0:
        raise PotentialFitError(f"curvature at x_e={x_e!r} is not positive (K={k!r})")

    return HarmonicFit(
        x_e=Quantity(x_e, LENGTH),
        k_spring=Quantity(k, SPRING_CONSTANT),
        u0=Quantity(float(evaluator(x_e)), ENERGY),
    )


def dipole_expectation_static(
    oscillator: OscillatorSpec,
    e_charge: Quantity,
    field_e0: Quantity,
) -> Quantity:
    """Static dipole expectation of the polarized ground state (C·m).

    ``<p> = (q^2/mu) E0 / omega0^2``, identically equal to
    ``2 q^2 E0 <x>_{1,0}^2 / (hbar omega0)``; linear in the frozen field E0.
    """
    e_charge.require(CHARGE, "e_charge")
    field_e0.require(ELECTRIC_FIELD, "field_e0")
    q2_over_mu = q_div(q_mul(e_charge, e_charge), oscillator.reduced_mass)
    omega_sq = q_mul(oscillator.omega0, oscillator.omega0)
    return q_div(q_mul(q2_over_mu, field_e0), omega_sq).require(DIPOLE_MOMENT, "<p>")
