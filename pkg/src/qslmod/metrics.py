"""Distances, quantum Fisher information and quantumness for qubit states.

All functions broadcast over leading axes of stacked ``(..., 2, 2)`` inputs.
"""

from dataclasses import dataclass

import numpy as np

from . import channels, qmat

QFI_REG = 1e-12
# sqrt(QFI_REG): on a valid trajectory |dp/dt| <~ sqrt(p) as p -> 0
QFI_DIVERGENCE_ATOL = 1e-6


class DivergentQFIError(ValueError):
    """The state derivative has weight outside the support of the state."""


def bures_fidelity(rho0, rho1):
    """Root fidelity ``Tr sqrt(sqrt(rho0) rho1 sqrt(rho0))``, clamped to [0, 1]."""
    root = qmat.psd_sqrt(rho0)
    inner = root @ qmat.as_matrix(rho1) @ root
    inner = 0.5 * (inner + qmat.dagger(inner))
    vals = qmat.hermitian_eigvalsh(inner)
    f = np.sum(np.sqrt(np.clip(vals, 0.0, None)), axis=-1)
    return np.clip(f, 0.0, 1.0)


def _det(m):
    return (m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]).real


def bures_sin2(rho0, rho1):
    """``sin(B)**2 = 1 - F**2`` without forming it as a difference from 1.

    For qubits ``1 - F**2 = Tr((rho0 - rho1)**2) / 2 + (sqrt(det rho0) - sqrt(det rho1))**2``,
    a sum of squares that stays accurate when the two states nearly coincide.
    """
    rho0 = qmat.as_matrix(rho0)
    rho1 = qmat.as_matrix(rho1)
    diff = rho0 - rho1
    sq = 0.5 * np.einsum("...ij,...ji->...", diff, diff).real
    gap = np.sqrt(np.clip(_det(rho0), 0.0, None)) - np.sqrt(np.clip(_det(rho1), 0.0, None))
    return np.clip(sq + gap * gap, 0.0, 1.0)


def bures_cos2(rho0, rho1):
    """``F**2 = Tr(rho0 rho1) + 2 sqrt(det rho0 det rho1)`` for qubits.

    Same value as squaring :func:`bures_fidelity`, without the square-root
    noise of its small eigenvalue near pure states.
    """
    rho0 = qmat.as_matrix(rho0)
    rho1 = qmat.as_matrix(rho1)
    overlap = np.einsum("...ij,...ji->...", rho0, rho1).real
    dets = np.clip(_det(rho0), 0.0, None) * np.clip(_det(rho1), 0.0, None)
    return np.clip(overlap + 2.0 * np.sqrt(dets), 0.0, 1.0)


def bures_angle(rho0, rho1):
    """``arccos`` of the root fidelity, evaluated as ``atan2(sin B, cos B)``."""
    return np.arctan2(np.sqrt(bures_sin2(rho0, rho1)), np.sqrt(bures_cos2(rho0, rho1)))


def trace_distance(rho0, rho1):
    diff = qmat.as_matrix(rho0) - qmat.as_matrix(rho1)
    return 0.5 * qmat.norms(diff)[2]


def _qfi_terms(rho, rho_dot):
    vals, vecs = qmat.hermitian_eigendecomposition(rho)
    proj = qmat.dagger(vecs) @ qmat.as_matrix(rho_dot) @ vecs
    denom = vals[..., :, None] + vals[..., None, :]
    support = denom > QFI_REG
    if np.any(~support & (np.abs(proj) > QFI_DIVERGENCE_ATOL)):
        raise DivergentQFIError("state derivative leaves the support of the state")
    safe = np.where(support, denom, 1.0)
    return vals, vecs, proj, support, safe


def qfi(rho, rho_dot):
    """Quantum Fisher information of the curve through ``rho`` with velocity ``rho_dot``.

    Evaluated in the eigenbasis of ``rho`` as ``sum 2 |<i|rho_dot|j>|^2 / (p_i + p_j)``,
    skipping pairs with ``p_i + p_j <= 1e-12``.
    """
    _, _, proj, support, safe = _qfi_terms(rho, rho_dot)
    terms = np.where(support, 2.0 * np.abs(proj) ** 2 / safe, 0.0)
    return np.sum(terms, axis=(-2, -1))


def sld(rho, rho_dot):
    """Symmetric logarithmic derivative ``L`` with ``rho_dot = (rho L + L rho) / 2``."""
    _, vecs, proj, support, safe = _qfi_terms(rho, rho_dot)
    in_eigenbasis = np.where(support, 2.0 * proj / safe, 0.0)
    return vecs @ in_eigenbasis @ qmat.dagger(vecs)


def qfi_from_sld(rho, rho_dot):
    lo = sld(rho, rho_dot)
    return np.trace(qmat.as_matrix(rho) @ lo @ lo, axis1=-2, axis2=-1).real


def qfi_qubit(rho_dot, det, det_dot):
    """Qubit QFI from ``2 Tr(rho_dot^2) + (d det/dt)^2 / det``.

    Equivalent to the Bloch-vector form ``|r'|^2 + (r.r')^2 / (1 - |r|^2)``.
    Taking ``det`` from a closed form instead of from the matrix entries keeps
    the classical term accurate as the state approaches purity.
    """
    rho_dot = qmat.as_matrix(rho_dot)
    det = np.asarray(det, dtype=float)
    quantum = 2.0 * np.einsum("...ij,...ji->...", rho_dot, rho_dot).real
    positive = det > 0
    classical = np.where(positive, np.asarray(det_dot) ** 2 / np.where(positive, det, 1.0), 0.0)
    return quantum + classical


def det_derivative(rho, rho_dot):
    """Time derivative of ``det rho`` given ``rho`` and ``rho_dot``."""
    rho = qmat.as_matrix(rho)
    rho_dot = qmat.as_matrix(rho_dot)
    return (
        rho_dot[..., 0, 0] * rho[..., 1, 1]
        + rho[..., 0, 0] * rho_dot[..., 1, 1]
        - rho_dot[..., 0, 1] * rho[..., 1, 0]
        - rho[..., 0, 1] * rho_dot[..., 1, 0]
    ).real


def quantumness(rho0, rho1):
    """``2 ||[rho0, rho1]||_hs^2``; zero exactly when the states commute."""
    return 2.0 * qmat.hs_norm(qmat.commutator(qmat.as_matrix(rho0), qmat.as_matrix(rho1))) ** 2


@dataclass(frozen=True)
class MetricSample:
    t: np.ndarray
    bures_angle: np.ndarray
    trace_distance: np.ndarray
    qfi: np.ndarray
    quantumness: np.ndarray
    speed_op: np.ndarray
    speed_hs: np.ndarray
    speed_tr: np.ndarray
    speed_quant: np.ndarray


def metric_sample(t, rho0, model):
    """Every instantaneous quantity along the trajectory at time(s) ``t``."""
    rho0 = qmat.check_density_matrix(rho0)
    t = np.asarray(t, dtype=float)
    rho_t = channels.evolve(rho0, t, model)
    rho_dot = model.state_derivative(rho0, t)
    op, hs, tr = qmat.norms(rho_dot)
    return MetricSample(
        t=t,
        bures_angle=bures_angle(rho0, rho_t),
        trace_distance=trace_distance(rho_t, model.stationary_state(rho0)),
        qfi=qfi(rho_t, rho_dot),
        quantumness=quantumness(rho0, rho_t),
        speed_op=op,
        speed_hs=hs,
        speed_tr=tr,
        speed_quant=qmat.hs_norm(qmat.commutator(rho0, rho_dot)),
    )
