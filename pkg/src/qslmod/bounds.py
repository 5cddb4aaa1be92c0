"""Quantum speed limit bounds along a channel trajectory, with resolution freezing.

Each bound has the form ``tau(t) = numerator(rho0, rho_t) / (I(t) / t)`` where
``I(t)`` is the accumulated speed up to ``t``:

- ``AV``: Bures angle ``B`` over the average of ``sqrt(QFI) / 2``.
- ``OP``, ``HS``, ``TR``: ``sin(B)**2`` over the average operator,
  Hilbert-Schmidt or trace norm of ``rho_dot``.
- ``UNIFIED_MIN``: ``sin(B)**2`` over the smallest of those three averages.
- ``QUANT``: ``||[rho0, rho_t]||_hs`` over the average of ``||[rho0, rho_dot]||_hs``.

A finite-precision simulation cannot tell the state apart from its stationary
limit once a witness (trace distance to the stationary state, or the
decoherence function) has fallen below the resolution ``epsilon`` for good.
The modified bound freezes at the value it has at that time ``tau_cri``.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import channels, metrics, qmat
from .quadrature import adaptive_gauss, cumulative

ZERO_ATOL = 1e-14
BISECTION_TOL = 1e-9


class BoundKind(enum.Enum):
    AV = "av"
    OP = "op"
    HS = "hs"
    TR = "tr"
    UNIFIED_MIN = "min"
    QUANT = "quant"


class DegenerateBoundError(ArithmeticError):
    """Nonzero distance covered with zero accumulated speed."""


class NoTauCriError(RuntimeError):
    """The resolution witness never settles below epsilon within the horizon."""


class Witness(enum.Enum):
    TRACE_DISTANCE = "trace-distance"
    DECOHERENCE = "decoherence"


@dataclass(frozen=True)
class ResolutionConfig:
    t_max: float
    dt: float
    epsilon: float = 1e-6
    witness: Witness = Witness.TRACE_DISTANCE

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.t_max > self.dt:
            raise ValueError("t_max must exceed dt")
        object.__setattr__(self, "witness", Witness(self.witness))

    @property
    def grid(self):
        n = math.floor(self.t_max / self.dt + 1e-9)
        return np.arange(n + 1) * self.dt


@dataclass
class BoundSeries:
    kind: BoundKind
    times: np.ndarray
    tau_qsl: np.ndarray
    tau_cri: float | None = None
    frozen_value: float | None = None
    modified: bool = False
    tightness: np.ndarray = field(init=False)

    def __post_init__(self):
        self.tightness = tightness(self)


def _rho(rho0):
    return qmat.check_density_matrix(rho0)


def speed_integrand(kind, rho0, model):
    """Vectorized instantaneous speed for ``kind`` as a function of time."""
    kind = BoundKind(kind)
    rho0 = _rho(rho0)

    def velocity(t):
        return model.state_derivative(rho0, t)

    if kind is BoundKind.AV:
        def f(t):
            rho_t = channels.evolve(rho0, t, model, check=False)
            rho_dot = velocity(t)
            det = model.state_determinant(rho0, t)
            q = metrics.qfi_qubit(rho_dot, det, metrics.det_derivative(rho_t, rho_dot))
            return 0.5 * np.sqrt(q)
    elif kind in (BoundKind.OP, BoundKind.HS, BoundKind.TR):
        slot = {BoundKind.OP: 0, BoundKind.HS: 1, BoundKind.TR: 2}[kind]

        def f(t):
            return qmat.norms(velocity(t))[slot]
    elif kind is BoundKind.QUANT:
        def f(t):
            return qmat.hs_norm(qmat.commutator(rho0, velocity(t)))
    else:
        raise ValueError(f"{kind} has no single speed integrand")
    return f


def cumulative_speed_integral(kind, rho0, model, grid):
    """Accumulated speed from ``grid[0] = 0`` up to every grid time.

    Each grid interval is integrated by adaptive Gauss-Legendre panels, so the
    accuracy does not depend on the grid spacing.
    """
    kind = BoundKind(kind)
    grid = np.asarray(grid, dtype=float)
    if grid.size and grid[0] != 0.0:
        raise ValueError("grid must start at t = 0")
    if kind is BoundKind.UNIFIED_MIN:
        parts = [cumulative_speed_integral(k, rho0, model, grid) for k in (BoundKind.OP, BoundKind.HS, BoundKind.TR)]
        return np.minimum.reduce(parts)
    return cumulative(speed_integrand(kind, rho0, model), grid)


def numerator(kind, rho0, rho_t):
    kind = BoundKind(kind)
    if kind is BoundKind.AV:
        return metrics.bures_angle(rho0, rho_t)
    if kind is BoundKind.QUANT:
        return qmat.hs_norm(qmat.commutator(qmat.as_matrix(rho0), qmat.as_matrix(rho_t)))
    return metrics.bures_sin2(rho0, rho_t)


def _ratio(num, integral, t):
    num = np.asarray(num, dtype=float)
    integral = np.asarray(integral, dtype=float)
    t = np.asarray(t, dtype=float)
    empty = integral <= 0.0
    if np.any(empty & (num > ZERO_ATOL)):
        raise DegenerateBoundError("distance covered without accumulated speed")
    safe = np.where(empty, 1.0, integral)
    return np.where(empty, 0.0, num * t / safe)


def qsl_time(kind, t, rho0, model, cumulative_integral):
    """Bound value at ``t`` given the accumulated speed ``cumulative_integral`` at ``t``."""
    if np.any(np.asarray(t) < 0):
        raise ValueError("time must be non-negative")
    rho0 = _rho(rho0)
    rho_t = channels.evolve(rho0, t, model)
    return _ratio(numerator(kind, rho0, rho_t), cumulative_integral, t)


def witness_values(rho0, model, t, witness=Witness.TRACE_DISTANCE):
    witness = Witness(witness)
    if witness is Witness.DECOHERENCE:
        return np.abs(model.decoherence(t))
    rho0 = _rho(rho0)
    return metrics.trace_distance(channels.evolve(rho0, t, model), model.stationary_state(rho0))


def find_tau_cri(rho0, model, cfg):
    """First time after which the witness stays below ``cfg.epsilon`` up to ``cfg.t_max``.

    Returns ``None`` when the witness is still at or above epsilon at the end of
    the scanned grid. The crossing is refined by bisection between the
    bracketing grid points.
    """
    grid = cfg.grid
    w = witness_values(rho0, model, grid, cfg.witness)
    above = np.flatnonzero(w >= cfg.epsilon)
    if above.size == 0:
        return 0.0
    k = above[-1]
    if k == grid.size - 1:
        return None
    lo, hi = grid[k], grid[k + 1]
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if witness_values(rho0, model, mid, cfg.witness) >= cfg.epsilon:
            lo = mid
        else:
            hi = mid
    return float(hi)


def integral_up_to(kind, rho0, model, grid, integral, t_stop):
    """Accumulated speed at an off-grid time, extending the grid integral."""
    kind = BoundKind(kind)
    k = int(np.searchsorted(grid, t_stop, side="right")) - 1
    if grid[k] == t_stop:
        return float(integral[k])
    if kind is BoundKind.UNIFIED_MIN:
        return min(
            integral_up_to(sub, rho0, model, grid, cumulative_speed_integral(sub, rho0, model, grid), t_stop)
            for sub in (BoundKind.OP, BoundKind.HS, BoundKind.TR)
        )
    extra = adaptive_gauss(speed_integrand(kind, rho0, model), [grid[k]], [t_stop])[0]
    return float(integral[k] + extra)


def frozen_bound(kind, rho0, model, tau_cri, integral_at_cri):
    """Bound value carried for every ``t >= tau_cri`` by the modified series."""
    rho0 = _rho(rho0)
    rho_cri = channels.evolve(rho0, tau_cri, model)
    return float(_ratio(numerator(kind, rho0, rho_cri), integral_at_cri, tau_cri))


def qsl_series(kind, rho0, model, cfg, modified=False, grid=None):
    """Bound as a function of the actual evolution time over ``grid`` (default ``cfg.grid``).

    With ``modified=True`` every grid time at or beyond ``tau_cri`` carries the
    frozen value; earlier times are identical to the unmodified series.
    """
    kind = BoundKind(kind)
    rho0 = _rho(rho0)
    times = cfg.grid if grid is None else np.asarray(grid, dtype=float)
    integral = cumulative_speed_integral(kind, rho0, model, times)
    tau = qsl_time(kind, times, rho0, model, integral)
    tau_cri = find_tau_cri(rho0, model, cfg)
    frozen = None
    if modified:
        if tau_cri is None:
            raise NoTauCriError(
                f"witness stays above epsilon={cfg.epsilon:g} up to t_max={cfg.t_max:g}"
            )
        at_cri = integral_up_to(kind, rho0, model, times, integral, tau_cri)
        frozen = frozen_bound(kind, rho0, model, tau_cri, at_cri)
        tau = np.where(times >= tau_cri, frozen, tau)
    return BoundSeries(kind, times, tau, tau_cri=tau_cri, frozen_value=frozen, modified=modified)


def tightness(series):
    """Ratio ``tau_qsl / t``; undefined (NaN) at ``t = 0``.

    Round-off overshoot of at most 1e-12 above a saturated bound is clamped to 1.
    """
    t = np.asarray(series.times, dtype=float)
    tau = np.asarray(series.tau_qsl, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(t > 0, tau / np.where(t > 0, t, 1.0), np.nan)
    return np.where((ratio > 1.0) & (ratio <= 1.0 + 1e-12), 1.0, ratio)
