"""Reduced qubit dynamics for the amplitude-damping and phase-damping channels.

Basis order is (|0>, |1>) = (ground, excited), so the amplitude-damping jump
operator moves weight from index 1 to index 0. Time is dimensionless: ``t`` is
measured in units of ``1/lam`` (amplitude damping) or ``1/omega_c``
(phase damping) when those parameters are 1.

Both channels act on a state by scaling its coherence with a real decoherence
function ``c(t)``; amplitude damping additionally moves excited population to
the ground state by the factor ``c(t)**2``.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import qmat
from .quadrature import adaptive_simpson

# relative width of the band around d = 0 treated as critical damping
CRITICAL_BAND = 1e-12


class ChannelConsistencyError(RuntimeError):
    """Evolved state violates the density-matrix invariants."""


@dataclass(frozen=True)
class KrausSet:
    k1: np.ndarray
    k2: np.ndarray

    def completeness_defect(self):
        total = qmat.dagger(self.k1) @ self.k1 + qmat.dagger(self.k2) @ self.k2
        return float(np.max(qmat.max_abs(total - qmat.IDENTITY)))


def _kraus_pair(c, amplitude, one_minus_c2=None):
    c = np.asarray(c, dtype=float)
    if one_minus_c2 is None:
        one_minus_c2 = 1.0 - c * c
    one_minus_c2 = np.asarray(one_minus_c2, dtype=float)
    if np.any(one_minus_c2 < 0.0):
        warnings.warn("decoherence function exceeds 1 in magnitude; clamping", RuntimeWarning)
    comp = np.sqrt(np.clip(one_minus_c2, 0.0, None))
    k1 = np.zeros(c.shape + (2, 2), dtype=complex)
    k2 = np.zeros_like(k1)
    k1[..., 0, 0] = 1.0
    k1[..., 1, 1] = c
    if amplitude:
        k2[..., 0, 1] = comp
    else:
        k2[..., 1, 1] = comp
    return KrausSet(k1, k2)


@dataclass(frozen=True)
class AmplitudeDamping:
    """Damped Jaynes-Cummings qubit with a Lorentzian reservoir at zero detuning.

    ``gamma0 < lam / 2`` gives Markovian decay, ``gamma0 > lam / 2`` gives
    oscillating (non-Markovian) decoherence. ``omega0`` only enters the spectral
    density; the reduced dynamics do not depend on it.
    """

    gamma0: float
    lam: float = 1.0
    omega0: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        if not (self.gamma0 > 0 and self.lam > 0):
            raise ValueError("gamma0 and lam must be positive")
        if self.delta != 0.0:
            raise ValueError("only zero detuning is supported")

    @property
    def d_squared(self):
        return self.lam * self.lam - 2.0 * self.gamma0 * self.lam

    @property
    def regime(self):
        if abs(self.d_squared) < CRITICAL_BAND * self.lam**2:
            return "critical"
        return "markovian" if self.d_squared > 0 else "non-markovian"

    def spectral_density(self, omega):
        x = self.omega0 + self.delta - np.asarray(omega, dtype=float)
        return self.gamma0 * self.lam**2 / (2.0 * np.pi * (x * x + self.lam**2))

    def decoherence(self, t):
        t = np.asarray(t, dtype=float)
        lam = self.lam
        if self.regime == "critical":
            return np.exp(-lam * t / 2) * (1.0 + lam * t / 2)
        if self.regime == "markovian":
            d = math.sqrt(self.d_squared)
            # cosh/sinh expanded into decaying exponentials so large t cannot overflow
            return 0.5 * (1.0 + lam / d) * np.exp((d - lam) * t / 2) + 0.5 * (
                1.0 - lam / d
            ) * np.exp(-(d + lam) * t / 2)
        w = math.sqrt(-self.d_squared)
        return np.exp(-lam * t / 2) * (np.cos(w * t / 2) + lam / w * np.sin(w * t / 2))

    def decoherence_derivative(self, t):
        t = np.asarray(t, dtype=float)
        lam, g0 = self.lam, self.gamma0
        if self.regime == "critical":
            return -g0 * lam * (t / 2) * np.exp(-lam * t / 2)
        if self.regime == "markovian":
            d = math.sqrt(self.d_squared)
            # -(g0 lam / d) e^{-lam t/2} sinh(d t/2), via expm1 to keep relative precision at small t
            near = np.exp(-(d + lam) * t / 2) * np.expm1(np.minimum(d * t, 1.0))
            far = np.exp((d - lam) * t / 2) - np.exp(-(d + lam) * t / 2)
            return -(g0 * lam / (2 * d)) * np.where(d * t < 1.0, near, far)
        w = math.sqrt(-self.d_squared)
        return -(g0 * lam / w) * np.exp(-lam * t / 2) * np.sin(w * t / 2)

    def _complement_series(self, t, terms=40):
        # G solves G'' + lam G' + (g0 lam / 2) G = 0, G(0) = 1, G'(0) = 0
        lam, g0 = self.lam, self.gamma0
        c = [1.0, 0.0]
        for n in range(terms - 2):
            c.append(-(lam * (n + 1) * c[n + 1] + 0.5 * g0 * lam * c[n]) / ((n + 1) * (n + 2)))
        return -np.polynomial.polynomial.polyval(t, [0.0, 0.0] + c[2:])

    def decoherence_complement(self, t):
        """``1 - G(t)`` without the cancellation of forming it from ``G`` near t = 0."""
        t = np.asarray(t, dtype=float)
        lam, g0 = self.lam, self.gamma0
        small = (lam * t <= 1.0) & (g0 * lam * t * t <= 1.0)
        ts = np.where(small, t, 0.0)
        series = self._complement_series(ts)
        if self.regime == "critical":
            x = lam * t / 2
            closed = -np.expm1(-x) - x * np.exp(-x)
        else:
            # 1 - G = integral of -dG/dt = (g0 lam / 2d) [(1 - e^{-a t})/a - (1 - e^{-b t})/b]
            d = np.sqrt(complex(self.d_squared))
            a, b = (lam - d) / 2, (lam + d) / 2
            tc = np.where(small, 1.0, t).astype(complex)
            closed = ((g0 * lam / (2 * d)) * (-np.expm1(-a * tc) / a + np.expm1(-b * tc) / b)).real
        return np.where(small, series, closed)

    def kraus(self, t):
        c = self.decoherence(t)
        return _kraus_pair(c, amplitude=True, one_minus_c2=self.decoherence_complement(t) * (1.0 + c))

    def state_determinant(self, rho0, t):
        """``det rho(t)``, accurate to full relative precision near pure states."""
        c = self.decoherence(t)
        one_minus_c2 = self.decoherence_complement(t) * (1.0 + c)
        p1 = rho0[1, 1].real
        det0 = (rho0[0, 0] * rho0[1, 1] - rho0[0, 1] * rho0[1, 0]).real
        return c * c * (det0 + one_minus_c2 * p1 * p1)

    def state_derivative(self, rho0, t):
        c = self.decoherence(t)
        dc = self.decoherence_derivative(t)
        out = np.zeros(np.shape(c) + (2, 2), dtype=complex)
        p1 = rho0[1, 1].real
        out[..., 0, 0] = -2.0 * c * dc * p1
        out[..., 1, 1] = 2.0 * c * dc * p1
        out[..., 0, 1] = dc * rho0[0, 1]
        out[..., 1, 0] = dc * rho0[1, 0]
        return out

    def stationary_state(self, rho0):
        return qmat.GROUND.copy()


@dataclass(frozen=True)
class PhaseDamping:
    """Pure dephasing by an Ohmic-family bosonic reservoir.

    ``s < 1`` sub-Ohmic, ``s == 1`` Ohmic, ``s > 1`` super-Ohmic. The coherence
    decays as ``r(t) = exp(-integral of dephasing_rate)``, the integral being
    evaluated by adaptive Simpson quadrature.
    """

    s: float = 1.0
    omega_c: float = 1.0
    quad_atol: float = 1e-13

    def __post_init__(self):
        if not (self.s > 0 and self.omega_c > 0):
            raise ValueError("s and omega_c must be positive")

    def spectral_density(self, omega):
        omega = np.asarray(omega, dtype=float)
        return omega**self.s / self.omega_c ** (self.s - 1) * np.exp(-omega / self.omega_c)

    def dephasing_rate(self, t):
        x = self.omega_c * np.asarray(t, dtype=float)
        return (
            self.omega_c
            * (1.0 + x * x) ** (-self.s / 2)
            * math.gamma(self.s)
            * np.sin(self.s * np.arctan(x))
        )

    def dephasing_integral(self, t):
        """Integral of the dephasing rate from 0 to each ``t``.

        Requested times are sorted and the gaps between consecutive ones are
        integrated independently, so the cost is linear in the number of
        points however far out they reach.
        """
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise ValueError("time must be non-negative")
        flat = t.ravel()
        if flat.size == 0:
            return np.zeros(t.shape)
        knots, inverse = np.unique(flat, return_inverse=True)
        # log-spaced breakpoints so a lone far-out time is not one giant panel
        scale = 1.0 / self.omega_c
        top = knots[-1]
        extra = np.empty(0)
        if top > 0.01 * scale:
            extra = scale * np.logspace(-2, np.log10(top / scale), 64)
        merged = np.unique(np.concatenate([knots, extra[extra < top]]))
        starts = np.concatenate([[0.0], merged[:-1]])
        gaps = adaptive_simpson(
            self.dephasing_rate, starts, merged, atol=self.quad_atol, error_budget=1e-10
        )
        totals = np.cumsum(gaps)
        return totals[np.searchsorted(merged, knots)][inverse].reshape(t.shape)

    def decoherence(self, t):
        return np.exp(-self.dephasing_integral(t))

    def decoherence_complement(self, t):
        return -np.expm1(-self.dephasing_integral(t))

    def decoherence_derivative(self, t):
        return -self.dephasing_rate(t) * self.decoherence(t)

    def kraus(self, t):
        lam = self.dephasing_integral(t)
        return _kraus_pair(np.exp(-lam), amplitude=False, one_minus_c2=-np.expm1(-2.0 * lam))

    def state_determinant(self, rho0, t):
        lam = self.dephasing_integral(t)
        one_minus_c2 = -np.expm1(-2.0 * lam)
        det0 = (rho0[0, 0] * rho0[1, 1] - rho0[0, 1] * rho0[1, 0]).real
        return det0 + one_minus_c2 * abs(rho0[0, 1]) ** 2

    def state_derivative(self, rho0, t):
        dc = self.decoherence_derivative(t)
        out = np.zeros(np.shape(dc) + (2, 2), dtype=complex)
        out[..., 0, 1] = dc * rho0[0, 1]
        out[..., 1, 0] = dc * rho0[1, 0]
        return out

    def stationary_state(self, rho0):
        return np.diag(np.diag(rho0)).astype(complex)


def kraus_at(t, model):
    if np.any(np.asarray(t) < 0):
        raise ValueError("time must be non-negative")
    return model.kraus(t)


def apply_kraus(rho0, kraus):
    """Kraus sum ``K1 rho K1^dag + K2 rho K2^dag`` (broadcast over leading axes)."""
    k1, k2 = kraus.k1, kraus.k2
    return k1 @ rho0 @ qmat.dagger(k1) + k2 @ rho0 @ qmat.dagger(k2)


def evolve(rho0, t, model, check=True):
    """State at time(s) ``t`` from the channel's Kraus representation."""
    rho0 = qmat.check_density_matrix(rho0)
    if np.any(np.asarray(t) < 0):
        raise ValueError("time must be non-negative")
    rho = apply_kraus(rho0, model.kraus(t))
    if check:
        try:
            qmat.check_density_matrix(rho, atol=1e-10)
        except qmat.InvalidDensityMatrixError as exc:
            raise ChannelConsistencyError(str(exc)) from exc
    return rho


def state_derivative(t, rho0, model):
    """Time derivative of the evolved state, by the chain rule through c(t)."""
    rho0 = qmat.check_density_matrix(rho0)
    return model.state_derivative(rho0, t)


def stationary_state(rho0, model):
    rho0 = qmat.check_density_matrix(rho0)
    return model.stationary_state(rho0)
