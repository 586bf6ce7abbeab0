"""Exact dynamics of one excitonic qubit coupled to a Lorentzian phonon bath.

The qubit starts excited with the bath in its vacuum; the state at time t is
``u(t)|1>|0> + v(t)|0>|1_collective>``. For the Lorentzian spectral density

    J(w) = gamma0/(2 pi) (dw/2)^2 / ((w0 - delta - w)^2 + (dw/2)^2)

the memory kernel of the amplitude equation

    du/dt = -int_0^t f(t - s) u(s) ds

is a single exponential, ``f(tau) = (gamma0 dw / 4) exp(-(dw/2 - i delta) tau)``,
and ``u`` has a closed form. Two independent routes are provided: the closed
form and a direct time-stepping of the integro-differential equation.

All rates are in rad/ps and times in ps.
"""

from __future__ import annotations

import cmath
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import GridTooCoarse, NegativeTime
from .fmo import cm1_to_angular

# below this |xi| t the closed form switches to its xi -> 0 limit
XI_SERIES_THRESHOLD = 1e-6


@dataclass(frozen=True)
class BathSpec:
    """Lorentzian bath parameters (rad/ps).

    ``gamma0`` is the exciton relaxation rate (1/tau_R), ``delta_omega`` the
    spectral FWHM (2/tau_B), ``delta`` the detuning of the peak below
    ``omega0``.
    """

    gamma0: float
    delta_omega: float
    delta: float = 0.0
    omega0: float = 0.0

    def __post_init__(self):
        vals = (self.gamma0, self.delta_omega, self.delta, self.omega0)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError(f"bath parameters must be finite: {vals}")
        # gamma0 = 0 is admitted as the decoupled limit
        if self.gamma0 < 0:
            raise ValueError(f"gamma0 must be >= 0, got {self.gamma0}")
        if self.delta_omega <= 0:
            raise ValueError(f"delta_omega must be > 0, got {self.delta_omega}")
        if self.omega0 < 0:
            raise ValueError(f"omega0 must be >= 0, got {self.omega0}")

    @classmethod
    def from_cm1(cls, gamma0, delta_omega, delta=0.0, omega0=0.0) -> "BathSpec":
        """Build from wavenumbers, converting each parameter to rad/ps."""
        return cls(*(float(cm1_to_angular(x)) for x in (gamma0, delta_omega, delta, omega0)))

    @property
    def damping(self) -> complex:
        """``dw/2 - i delta``, the complex decay rate of the memory kernel."""
        return complex(self.delta_omega / 2, -self.delta)

    @property
    def kernel_strength(self) -> float:
        return self.gamma0 * self.delta_omega / 4

    @property
    def xi(self) -> complex:
        return cmath.sqrt(self.damping**2 - self.gamma0 * self.delta_omega)

    def regime(self) -> str:
        """'overdamped', 'critical' or 'underdamped' (meaningful at delta = 0)."""
        crit = self.delta_omega / 4
        if np.isclose(self.gamma0, crit, rtol=1e-12, atol=0):
            return "critical"
        return "overdamped" if self.gamma0 < crit else "underdamped"


@dataclass(frozen=True, eq=False)
class AmplitudeTrace:
    times_ps: np.ndarray
    u_values: np.ndarray
    source: str  # "closed_form" or "kernel_integration"

    @property
    def excited_population(self) -> np.ndarray:
        return excited_population(self.u_values)

    @property
    def population_difference(self) -> np.ndarray:
        return population_difference(self.u_values)


def spectral_density(bath: BathSpec, omega):
    half = bath.delta_omega / 2
    detune = bath.omega0 - bath.delta - np.asarray(omega, dtype=float)
    return bath.gamma0 * half**2 / (2 * np.pi * (detune**2 + half**2))


def memory_kernel(bath: BathSpec, tau):
    """``f(tau) = int J(w) exp(i (w0 - w) tau) dw`` for the Lorentzian bath."""
    return bath.kernel_strength * np.exp(-bath.damping * np.asarray(tau, dtype=float))


def amplitude_closed_form(bath: BathSpec, t_ps, xi_sign: int = 1):
    """Excited-state amplitude ``u(t)``.

    Accepts a scalar or an array of non-negative times. ``xi_sign`` selects
    the branch of the square root; the result does not depend on it.
    """
    t = np.asarray(t_ps, dtype=float)
    if np.any(t < 0):
        raise NegativeTime(f"times must be >= 0, got min {t.min()}")
    lam = bath.damping
    xi = xi_sign * bath.xi
    z = xi * t / 2
    abs_xt = np.abs(xi) * t
    with np.errstate(all="ignore"):
        # |xi| t < 1: cosh + (lam t/2) sinh(z)/z, no cancellation and no overflow
        sinhc = np.where(abs_xt < XI_SERIES_THRESHOLD, 1.0, np.sinh(z) / np.where(z == 0, 1, z))
        near = np.exp(-lam * t / 2) * (np.cosh(z) + lam * t / 2 * sinhc)
        # |xi| t >= 1: expanded into the two decaying modes, which never overflow
        r = lam / xi if xi != 0 else 0.0
        far = 0.5 * ((1 + r) * np.exp((xi - lam) * t / 2) + (1 - r) * np.exp(-(xi + lam) * t / 2))
    u = np.where(abs_xt < 1.0, near, far)
    u = np.where(t == 0, 1.0 + 0j, u)
    return complex(u) if u.ndim == 0 else u


def closed_form_trace(bath: BathSpec, t_grid) -> AmplitudeTrace:
    t = np.asarray(t_grid, dtype=float)
    return AmplitudeTrace(t, amplitude_closed_form(bath, t), "closed_form")


def recommended_step(bath: BathSpec) -> float:
    scales = [1 / bath.delta_omega]
    if bath.gamma0 > 0:
        scales.append(1 / bath.gamma0)
    return 1e-3 * max(scales)


def amplitude_kernel_integration(bath: BathSpec, t_grid) -> AmplitudeTrace:
    """Time-step the memory-kernel equation on ``t_grid`` (starting at 0).

    Writing the memory integral as ``K(t) = int_0^t f(t-s) u(s) ds``, the
    exponential kernel gives the exact recursion

        K(t+h) = e^{-lam h} K(t) + int_t^{t+h} f(t+h-s) u(s) ds,

    whose last term is taken by the trapezoidal rule; ``u`` is advanced by the
    trapezoidal rule as well. The scheme is implicit but linear, so each step
    is solved in closed form. Second order in the step, O(1) work per step.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("t_grid must be a nonempty 1-d grid")
    if t[0] != 0.0:
        raise ValueError("t_grid must start at t = 0")
    steps = np.diff(t)
    if np.any(steps <= 0):
        raise ValueError("t_grid must be strictly ascending")
    if steps.size and steps.max() > recommended_step(bath):
        warnings.warn(
            GridTooCoarse(f"step {steps.max():.3g} ps exceeds the recommended {recommended_step(bath):.3g} ps"),
            stacklevel=2,
        )
    lam = bath.damping
    c = bath.kernel_strength
    out = [1.0 + 0j]
    u, K = 1.0 + 0j, 0j
    uniform = steps.size > 0 and np.ptp(steps) <= 1e-9 * steps.max()
    if uniform:
        h = float(steps.mean())
        e = cmath.exp(-lam * h)
        a = 1 + h * h * c / 4
        for _ in range(steps.size):
            u_next = (u - h / 2 * ((1 + e) * K + h / 2 * c * e * u)) / a
            K = e * K + h / 2 * c * (e * u + u_next)
            u = u_next
            out.append(u)
    else:
        for h in steps:
            h = float(h)
            e = cmath.exp(-lam * h)
            u_next = (u - h / 2 * ((1 + e) * K + h / 2 * c * e * u)) / (1 + h * h * c / 4)
            K = e * K + h / 2 * c * (e * u + u_next)
            u = u_next
            out.append(u)
    return AmplitudeTrace(t, np.array(out), "kernel_integration")


def excited_population(u):
    """``|u|^2``; the bath-excited (ground-qubit) population is ``1 - |u|^2``."""
    return np.abs(u) ** 2


def population_difference(u):
    """Excited minus ground population, ``2|u|^2 - 1``."""
    return 2 * np.abs(u) ** 2 - 1
