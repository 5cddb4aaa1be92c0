import numpy as np
import pytest
from hypothesis import given, settings
from numpy.testing import assert_allclose

from qslmod import qmat
from qslmod.qmat import SIGMA_X, SIGMA_Y, SIGMA_Z

from .conftest import hermitian, psd_matrices, traceless_hermitian


def test_eigendecomposition_identity():
    vals, vecs = qmat.hermitian_eigendecomposition(np.eye(2))
    assert_allclose(vals, [1, 1])
    assert_allclose(vecs, np.eye(2))


def test_eigendecomposition_diagonal():
    vals, vecs = qmat.hermitian_eigendecomposition(np.diag([0.7, 0.3]))
    assert_allclose(vals, [0.7, 0.3])
    assert_allclose(np.abs(vecs), np.eye(2))


def test_eigendecomposition_projector():
    # characteristic polynomial x^2 - x = 0
    vals, vecs = qmat.hermitian_eigendecomposition(0.5 * np.ones((2, 2)))
    assert_allclose(vals, [1.0, 0.0], atol=1e-15)
    v = vecs[:, 0]
    assert_allclose(np.abs(v), [2**-0.5, 2**-0.5])
    assert abs(v[0] - v[1]) < 1e-15


def test_eigendecomposition_rejects_non_hermitian():
    with pytest.raises(qmat.PreconditionError):
        qmat.hermitian_eigendecomposition(np.array([[0, 1], [0, 0]]))


@settings(max_examples=1000)
@given(hermitian(scale=3.0))
def test_eigendecomposition_reconstructs(m):
    vals, vecs = qmat.hermitian_eigendecomposition(m)
    assert vals[0] >= vals[1]
    assert np.max(np.abs(qmat.from_eigensystem(vals, vecs) - m)) < 1e-12
    assert np.max(np.abs(qmat.dagger(vecs) @ vecs - np.eye(2))) < 1e-12


def test_eigendecomposition_is_batched(rng):
    ms = rng.normal(size=(50, 2, 2)) + 1j * rng.normal(size=(50, 2, 2))
    ms = ms + qmat.dagger(ms)
    vals, vecs = qmat.hermitian_eigendecomposition(ms)
    assert_allclose(vals, np.linalg.eigvalsh(ms)[:, ::-1], atol=1e-13)


def test_small_eigenvalue_keeps_relative_precision():
    g = 1e-7
    rho = np.array([[1 - g * g / 2, g / 2], [g / 2, g * g / 2]])
    small = qmat.hermitian_eigvalsh(rho)[1]
    exact = g * g * (1 - g * g) / 4 / (1 - g * g / 4)  # det / larger eigenvalue to O(g^4)
    assert abs(small - exact) / exact < 1e-8


@pytest.mark.parametrize(
    "m, root",
    [
        (np.diag([4.0, 9.0]), np.diag([2.0, 3.0])),
        (np.eye(2), np.eye(2)),
        (0.5 * np.ones((2, 2)), 0.5 * np.ones((2, 2))),
    ],
)
def test_psd_sqrt_examples(m, root):
    assert_allclose(qmat.psd_sqrt(m), root, atol=1e-15)


def test_psd_sqrt_clamps_roundoff_and_rejects_negative():
    assert_allclose(qmat.psd_sqrt(np.diag([1.0, -1e-14])), np.diag([1.0, 0.0]))
    with pytest.raises(qmat.NotPSDError):
        qmat.psd_sqrt(np.diag([1.0, -1e-6]))


@settings(max_examples=1000)
@given(psd_matrices())
def test_psd_sqrt_squares_back(m):
    root = qmat.psd_sqrt(m)
    assert np.max(np.abs(root @ root - m)) < 1e-10
    assert qmat.hermitian_eigvalsh(root)[1] >= -1e-15


def test_psd_sqrt_matches_two_by_two_closed_form(rng):
    # sqrt(M) = (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M))
    for _ in range(100):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        m = a @ qmat.dagger(a)
        s = np.sqrt(np.linalg.det(m).real)
        closed = (m + s * np.eye(2)) / np.sqrt(np.trace(m).real + 2 * s)
        assert_allclose(qmat.psd_sqrt(m), closed, atol=1e-12)


def test_norms_of_scaled_sigma_x():
    op, hs, tr = qmat.norms(0.5 * SIGMA_X)
    # m^dag m = 0.25 I, singular values (0.5, 0.5)
    assert_allclose([op, hs, tr], [0.5, 0.5 * np.sqrt(2), 1.0])


def test_norms_trivial():
    assert_allclose(qmat.norms(np.zeros((2, 2))), [0, 0, 0])
    assert_allclose(qmat.norms(np.eye(2)), [1, np.sqrt(2), 2])


def test_norms_match_numpy_svd(rng):
    m = rng.normal(size=(200, 2, 2)) + 1j * rng.normal(size=(200, 2, 2))
    sv = np.linalg.svd(m, compute_uv=False)
    op, hs, tr = qmat.norms(m)
    assert_allclose(op, sv[:, 0], rtol=1e-12)
    assert_allclose(tr, sv.sum(axis=1), rtol=1e-12)
    assert_allclose(hs, np.linalg.norm(m, axis=(1, 2)), rtol=1e-12)


@given(hermitian(scale=5.0))
def test_norm_ordering(m):
    op, hs, tr = qmat.norms(m)
    assert op <= hs * (1 + 1e-12) + 1e-15
    assert hs <= tr * (1 + 1e-12) + 1e-15


@settings(max_examples=500)
@given(traceless_hermitian())
def test_traceless_hermitian_norm_ratios(m):
    op, hs, tr = qmat.norms(m)
    assert abs(tr - 2 * op) <= 1e-12
    assert abs(hs - np.sqrt(2) * op) <= 1e-12


def test_commutator_examples():
    assert_allclose(qmat.commutator(np.diag([1, 2]), np.diag([3, 4])), 0)
    assert_allclose(qmat.commutator(SIGMA_X, SIGMA_Y), 2j * SIGMA_Z)
    p = 0.5 * np.ones((2, 2))
    assert_allclose(qmat.commutator(p, p), 0)


@given(hermitian(), hermitian())
def test_commutator_of_hermitians_is_anti_hermitian(a, b):
    c = qmat.commutator(a, b)
    assert np.max(np.abs(c + qmat.dagger(c))) < 1e-14


def test_density_matrix_validation():
    qmat.check_density_matrix(qmat.PLUS)
    with pytest.raises(qmat.InvalidDensityMatrixError):
        qmat.check_density_matrix(np.diag([0.6, 0.6]))
    with pytest.raises(qmat.InvalidDensityMatrixError):
        qmat.check_density_matrix(np.diag([1.2, -0.2]))
    with pytest.raises(qmat.InvalidDensityMatrixError):
        qmat.bloch_state(1.0, 0.1, 0.0)
    with pytest.raises(qmat.PreconditionError):
        qmat.as_matrix([[np.nan, 0], [0, 1]])
