"""Closed-form 2x2 complex matrix algebra.

Every function accepts a single ``(2, 2)`` array or a stack of shape
``(..., 2, 2)`` and works elementwise over the leading axes, so whole time
grids of states can be processed in one call.
"""

import numpy as np

HERMITIAN_ATOL = 1e-10
PSD_ATOL = 1e-12
DENSITY_ATOL = 1e-12

IDENTITY = np.eye(2, dtype=complex)
ZERO = np.zeros((2, 2), dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class PreconditionError(ValueError):
    """Input matrix does not satisfy the structural precondition of an operation."""


class NotPSDError(PreconditionError):
    pass


class InvalidDensityMatrixError(PreconditionError):
    pass


def as_matrix(m):
    m = np.asarray(m, dtype=complex)
    if m.shape[-2:] != (2, 2):
        raise PreconditionError(f"expected trailing shape (2, 2), got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise PreconditionError("matrix has non-finite entries")
    return m


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def max_abs(m):
    """Max-entry norm, reduced over the trailing 2x2 axes."""
    return np.max(np.abs(m), axis=(-2, -1))


def is_hermitian(m, atol=HERMITIAN_ATOL):
    return np.all(max_abs(m - dagger(m)) <= atol)


def _hermitian_parts(m):
    a = m[..., 0, 0].real
    d = m[..., 1, 1].real
    b = 0.5 * (m[..., 0, 1] + np.conj(m[..., 1, 0]))
    return a, b, d


def hermitian_eigvalsh(m):
    """Eigenvalues of a Hermitian 2x2 matrix, descending along the last axis.

    The eigenvalue of smaller magnitude is recovered from the determinant, which
    keeps it accurate to full relative precision when the matrix is close to
    rank one (near-pure density matrices).
    """
    m = as_matrix(m)
    if not is_hermitian(m):
        raise PreconditionError("matrix is not Hermitian within tolerance")
    a, b, d = _hermitian_parts(m)
    return _eigvals(a, b, d)


def _rescale(a, b, d):
    # exact power-of-two scaling to unit size, so tiny or subnormal entries keep their precision
    scale = np.maximum(np.maximum(np.abs(a), np.abs(d)), np.abs(b))
    _, exp = np.frexp(np.where(scale > 0, scale, 1.0))
    return np.ldexp(a, -exp), np.ldexp(b.real, -exp) + 1j * np.ldexp(b.imag, -exp), np.ldexp(d, -exp), exp


def _eigvals(a, b, d):
    a, b, d, exp = _rescale(a, b, d)
    return np.ldexp(_eigvals_unit(a, b, d), exp[..., None])


def _eigvals_unit(a, b, d):
    mean = 0.5 * (a + d)
    radius = np.hypot(0.5 * (a - d), np.abs(b))
    det = a * d - (b * np.conj(b)).real
    big = mean + np.where(mean >= 0, radius, -radius)
    safe = np.where(big == 0, 1.0, big)
    small = np.where(big == 0, 0.0, det / safe)
    hi = np.maximum(big, small)
    lo = np.minimum(big, small)
    return np.stack([hi, lo], axis=-1)


def hermitian_eigendecomposition(m):
    """Return ``(eigenvalues, eigenvectors)`` of a Hermitian 2x2 matrix.

    Eigenvalues are real and sorted in descending order. ``eigenvectors[..., :, k]``
    is the unit eigenvector for ``eigenvalues[..., k]``. A degenerate spectrum
    yields the standard basis.
    """
    m = as_matrix(m)
    if not is_hermitian(m):
        raise PreconditionError("matrix is not Hermitian within tolerance")
    a, b, d = _hermitian_parts(m)
    vals = _eigvals(a, b, d)
    a, b, d, _ = _rescale(a, b, d)
    half_diff = 0.5 * (a - d)
    radius = np.hypot(half_diff, np.abs(b))

    # (top - d, conj(b)) solves the second row, (b, top - a) the first; take the
    # one whose nonzero component cannot cancel.
    use_second_row = a >= d
    x = np.where(use_second_row, half_diff + radius, b)
    y = np.where(use_second_row, np.conj(b), radius - half_diff)
    # rescale the unnormalized vector too: its entries can be subnormal when |b| << |a|
    big = np.maximum(np.abs(x), np.abs(y))
    _, exp = np.frexp(np.where(big > 0, big, 1.0))
    x = np.ldexp(x.real, -exp) + 1j * np.ldexp(np.imag(x), -exp)
    y = np.ldexp(y.real, -exp) + 1j * np.ldexp(np.imag(y), -exp)
    norm = np.hypot(np.abs(x), np.abs(y))
    degenerate = norm == 0
    norm = np.where(degenerate, 1.0, norm)
    x = np.where(degenerate, 1.0, x / norm)
    y = np.where(degenerate, 0.0, y / norm)

    vecs = np.empty(m.shape, dtype=complex)
    vecs[..., 0, 0] = x
    vecs[..., 1, 0] = y
    vecs[..., 0, 1] = -np.conj(y)
    vecs[..., 1, 1] = np.conj(x)
    return vals, vecs


def from_eigensystem(vals, vecs):
    return (vecs * vals[..., None, :]) @ dagger(vecs)


def psd_sqrt(m):
    """Principal square root of a Hermitian positive semidefinite matrix."""
    vals, vecs = hermitian_eigendecomposition(m)
    if np.any(vals < -PSD_ATOL):
        raise NotPSDError(f"eigenvalue {vals.min():.3e} below -{PSD_ATOL}")
    return from_eigensystem(np.sqrt(np.clip(vals, 0.0, None)), vecs)


def singular_values(m):
    """Singular values (descending) via the eigenvalues of m^dagger m."""
    m = as_matrix(m)
    gram = dagger(m) @ m
    a, b, d = _hermitian_parts(gram)
    mean = 0.5 * (a + d)
    radius = np.hypot(0.5 * (a - d), np.abs(b))
    s_max = np.sqrt(np.clip(mean + radius, 0.0, None))
    det = np.abs(m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0])
    s_min = np.where(s_max > 0, det / np.where(s_max > 0, s_max, 1.0), 0.0)
    return np.stack([s_max, np.minimum(s_min, s_max)], axis=-1)


def norms(m):
    """Operator, Hilbert-Schmidt and trace norm of a 2x2 matrix.

    Returns a tuple ``(op, hs, tr)``; each is a float or an array over the
    leading axes.
    """
    m = as_matrix(m)
    sv = singular_values(m)
    op = sv[..., 0]
    hs = np.sqrt(np.sum(np.abs(m) ** 2, axis=(-2, -1)))
    tr = sv[..., 0] + sv[..., 1]
    return op, hs, tr


def hs_norm(m):
    return np.sqrt(np.sum(np.abs(m) ** 2, axis=(-2, -1)))


def commutator(a, b):
    return a @ b - b @ a


def check_density_matrix(rho, atol=DENSITY_ATOL):
    """Validate Hermiticity, unit trace and positivity; return ``rho`` as an array."""
    rho = as_matrix(rho)
    if not np.all(max_abs(rho - dagger(rho)) <= atol):
        raise InvalidDensityMatrixError("density matrix is not Hermitian")
    tr = np.trace(rho, axis1=-2, axis2=-1)
    if not np.all(np.abs(tr - 1.0) <= atol):
        raise InvalidDensityMatrixError("density matrix trace differs from 1")
    if np.any(hermitian_eigvalsh(rho)[..., 1] < -atol):
        raise InvalidDensityMatrixError("density matrix has a negative eigenvalue")
    return rho


def density_matrix(m):
    return check_density_matrix(m)


def pure_state(psi):
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, np.conj(psi))


def bloch_state(x, y, z):
    """Density matrix for a Bloch vector, basis order (|0>, |1>) with |0> at z = +1."""
    if x * x + y * y + z * z > 1.0 + 1e-12:
        raise InvalidDensityMatrixError("Bloch vector longer than 1")
    return 0.5 * (IDENTITY + x * SIGMA_X + y * SIGMA_Y + z * SIGMA_Z)


GROUND = pure_state([1, 0])
EXCITED = pure_state([0, 1])
PLUS = pure_state([1, 1])
