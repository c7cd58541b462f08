import math

import numpy as np
import pytest

from mlti import (
    DecompositionUnavailableError,
    DenseTensor,
    PairedTensor,
    cayley_hamilton_residual,
    characteristic_polynomial,
    einstein_apply,
    einstein_product,
    frobenius_norm,
    is_u_orthogonal,
    phi,
    phi_inverse,
    polynomial_of,
    spectral_radius,
    tevd,
    u_det,
    u_diagonal,
    u_eigen,
    u_identity,
    u_inverse,
)
from mlti.spectral import cayley_hamilton_bound

from oracles import A1, A2, random_paired_array

# eig(A1) x eig(A2): products of the roots of lambda^3 - 0.8 lambda^2 - 0.5 lambda - 0.2
# and lambda^2 - 0.5, found with mpmath.polyroots at 30 digits and frozen
FACTOR_PRODUCTS = [
    0.9206551743689212 + 0j,
    -0.9206551743689212 + 0j,
    0.17748487470984156 + 0.21284702440227457j,
    0.17748487470984156 - 0.21284702440227457j,
    -0.17748487470984156 + 0.21284702440227457j,
    -0.17748487470984156 - 0.21284702440227457j,
]


def _square(rng, J):
    return PairedTensor(random_paired_array(rng, [(j, j) for j in J]))


def test_factor_products_frozen_values():
    products = np.multiply.outer(np.linalg.eigvals(A1), np.linalg.eigvals(A2)).ravel()
    for lam in FACTOR_PRODUCTS:
        assert np.min(np.abs(products - lam)) < 1e-13


def test_diagonal_spectrum():
    v = np.array([[0.5, -2.0], [3.0, 1.0], [0.1, -0.2]])
    spec = u_eigen(u_diagonal(v))
    np.testing.assert_allclose(spec.eigenvalues, [3.0, -2.0, 1.0, 0.5, -0.2, 0.1])
    for lam, X in zip(spec.eigenvalues, spec.eigentensors):
        (pos,) = np.flatnonzero(np.abs(X.data) > 0.5)
        assert v.ravel(order="F")[pos] == lam.real
        assert frobenius_norm(X) == pytest.approx(1.0)
        assert np.count_nonzero(np.abs(X.data) > 1e-14) == 1


def test_example_spectrum(siso):
    spec = u_eigen(siso.A)
    np.testing.assert_allclose(spec.eigenvalues, FACTOR_PRODUCTS, atol=1e-12)
    printed = [0.9207, -0.9207, 0.1775 + 0.2128j, 0.1775 - 0.2128j, -0.1775 + 0.2128j, -0.1775 - 0.2128j]
    np.testing.assert_allclose(spec.eigenvalues, printed, atol=2e-3)
    assert spectral_radius(siso.A) == pytest.approx(0.9206551743689212, abs=1e-12)


def test_eigenpair_residuals_and_phase(rng):
    for J in [(2,), (3, 2), (2, 2, 2)]:
        A = _square(rng, J)
        spec = u_eigen(A)
        assert len(spec) == math.prod(J)
        normA = frobenius_norm(A)
        for lam, X in zip(spec.eigenvalues, spec.eigentensors):
            assert X.shape == J
            res = einstein_apply(A, X) - X * lam
            assert frobenius_norm(res) <= 1e-8 * normA * frobenius_norm(X)
            assert frobenius_norm(X) == pytest.approx(1.0, abs=1e-12)
            first = X.data[np.flatnonzero(np.abs(X.data) > 1e-12)[0]]
            assert first.real >= 0 and abs(first.imag) < 1e-12


def test_ordering_is_descending(rng):
    A = _square(rng, (3, 3))
    eigs = u_eigen(A).eigenvalues
    mags = np.abs(eigs)
    assert np.all(np.diff(mags) <= 1e-9)


def test_trace_and_determinant_identities(rng):
    for J in [(3,), (2, 3), (2, 2, 2)]:
        A = _square(rng, J)
        eigs = u_eigen(A).eigenvalues
        trace = np.trace(phi(A))
        assert abs(eigs.sum() - trace) <= 1e-8 * max(1.0, abs(trace))
        det = u_det(A)
        assert abs(np.prod(eigs) - det) <= 1e-8 * max(1.0, abs(det))


def test_similarity_invariance(rng):
    A = _square(rng, (2, 3))
    P = phi_inverse(rng.standard_normal((6, 6)) + 4 * np.eye(6), [(2, 2), (3, 3)])
    similar = einstein_product(einstein_product(P, A), u_inverse(P))
    a = np.sort_complex(u_eigen(A).eigenvalues)
    b = np.sort_complex(u_eigen(similar).eigenvalues)
    np.testing.assert_allclose(a, b, atol=1e-8)


# -- TEVD ---------------------------------------------------------------------------


def test_tevd_identity():
    eye = u_identity((3, 2))
    dec = tevd(eye)
    np.testing.assert_allclose(dec.D.array, eye.array)
    assert is_u_orthogonal(dec.V)
    recon = einstein_product(einstein_product(dec.V, dec.D), dec.V_inv)
    np.testing.assert_allclose(recon.array, eye.array, atol=1e-15)
    assert dec.real_representable


def test_tevd_diagonal_recovers_diagonal():
    v = np.array([[4.0, 1.0], [-3.0, 2.0]])
    dec = tevd(u_diagonal(v))
    diag = np.diag(phi(dec.D))
    np.testing.assert_allclose(sorted(diag.real), sorted(v.ravel()))


def test_tevd_example_reconstruction(siso):
    dec = tevd(siso.A)
    recon = einstein_product(einstein_product(dec.V, dec.D), dec.V_inv)
    assert frobenius_norm(recon - siso.A) <= 1e-10
    assert not dec.real_representable
    # eigentensors are the contiguous column blocks of V
    spec = u_eigen(siso.A)
    for k, X in enumerate(spec.eigentensors):
        np.testing.assert_allclose(phi(dec.V)[:, k], X.data)


def test_tevd_defective_raises():
    jordan = np.array([[1.0, 1.0], [0.0, 1.0]])
    with pytest.raises(DecompositionUnavailableError) as err:
        tevd(PairedTensor.from_factors([jordan, np.eye(2)]))
    (lam, alg, geo), = err.value.clusters
    assert alg == 4 and geo == 2
    assert lam == pytest.approx(1.0)


# -- characteristic polynomial --------------------------------------------------------


def test_char_poly_identity():
    np.testing.assert_allclose(characteristic_polynomial(u_identity((2,))), [1, -2, 1])
    np.testing.assert_allclose(characteristic_polynomial(u_identity((2, 1))), [1, -2, 1])


def test_char_poly_companion():
    coeffs = [1.0, -0.3, 2.0, 0.5, -1.25]
    companion = np.zeros((4, 4))
    companion[0, :] = -np.array(coeffs[1:])
    companion[1:, :-1] = np.eye(3)
    np.testing.assert_allclose(characteristic_polynomial(PairedTensor(companion)), coeffs, atol=1e-12)


def test_char_poly_first_factor():
    # det(lambda I - A1) expanded by hand: lambda^3 - 0.8 lambda^2 - 0.5 lambda - 0.2
    np.testing.assert_allclose(characteristic_polynomial(PairedTensor(A1)), [1, -0.8, -0.5, -0.2], atol=1e-13)


def test_cayley_hamilton(rng, siso):
    for J in [(2,), (2, 2), (2, 2, 2), (3, 2)]:
        A = _square(rng, J)
        assert cayley_hamilton_residual(A) <= cayley_hamilton_bound(A)
    assert cayley_hamilton_residual(siso.A) <= 1e-12
    p = polynomial_of(u_identity((2,)), [1.0, -2.0, 1.0])
    assert frobenius_norm(p) == 0.0


def test_spectral_radius_scaling():
    eye = u_identity((2, 3))
    assert spectral_radius(eye) == pytest.approx(1.0)
    assert spectral_radius(eye * -2.5) == pytest.approx(2.5)


def test_complex_apply():
    X = DenseTensor(np.array([1 + 1j, 2.0]))
    Y = einstein_apply(PairedTensor(np.eye(2) * 2), X)
    assert Y.is_complex
    np.testing.assert_allclose(Y.array, [2 + 2j, 4.0])
