import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fidelion import linalg
from fidelion.errors import (
    DimensionMismatchError,
    NonHermitianError,
    SizeOverflowError,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def random_hermitian(n, rng):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (m + m.conj().T) / 2


class TestHermitianEig:
    def test_identity(self):
        spec = linalg.hermitian_eig(np.eye(4))
        assert np.allclose(spec.eigenvalues, [1, 1, 1, 1])

    def test_diagonal(self):
        spec = linalg.hermitian_eig(np.diag([1.0, 2.0, 3.0]))
        assert np.allclose(spec.eigenvalues, [1, 2, 3])
        assert np.allclose(np.abs(spec.eigenvectors), np.eye(3))

    def test_pauli_x(self):
        spec = linalg.hermitian_eig(SX)
        assert np.allclose(spec.eigenvalues, [-1, 1])

    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitianError):
            linalg.hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_reconstruction_and_trace_100_seeds(self):
        for seed in range(100):
            rng = np.random.default_rng(seed)
            n = int(rng.integers(2, 10))
            m = random_hermitian(n, rng)
            w, v = linalg.hermitian_eig(m)
            assert np.all(np.diff(w) >= 0)
            assert np.abs((v * w) @ v.conj().T - m).max() <= 1e-10
            assert abs(w.sum() - np.trace(m).real) <= 1e-10
            gram = v.conj().T @ v
            assert np.abs(gram - np.eye(n)).max() <= 1e-10


class TestSingularValues:
    def test_zero_matrix(self):
        assert np.allclose(linalg.singular_values(np.zeros((3, 3))), 0)

    def test_sign_invariance(self):
        assert np.allclose(linalg.singular_values(np.diag([-1.0, -1.0, 1.0])), [1, 1, 1])

    def test_diagonal(self):
        s = linalg.singular_values(np.diag([0.8, 0.5, 0.1]))
        assert np.allclose(s, [0.8, 0.5, 0.1])

    def test_descending_on_random(self):
        rng = np.random.default_rng(3)
        m = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        s = linalg.singular_values(m)
        assert np.all(np.diff(s) <= 0)
        assert np.allclose(s, np.linalg.svd(m, compute_uv=False), atol=1e-10)


class TestNorms:
    def test_trace_norm_identity(self):
        assert np.isclose(linalg.trace_norm(np.eye(3)), 3.0)

    def test_trace_norm_diagonal(self):
        assert np.isclose(linalg.trace_norm(np.diag([0.8, 0.5, 0.1])), 1.4)

    def test_trace_norm_of_bell_correlation_matrix(self):
        # oracle: build |phi+><phi+|, extract T entrywise by trace formulas,
        # and sum its SVD singular values with numpy directly
        ket = np.zeros(4, dtype=complex)
        ket[0] = ket[3] = 1 / np.sqrt(2)
        rho = np.outer(ket, ket.conj())
        t = np.zeros((3, 3))
        for i, si in enumerate((SX, SY, SZ)):
            for j, sj in enumerate((SX, SY, SZ)):
                t[i, j] = np.trace(rho @ np.kron(si, sj)).real
        assert np.allclose(t, np.diag([1.0, -1.0, 1.0]), atol=1e-12)
        assert np.isclose(np.linalg.svd(t, compute_uv=False).sum(), 3.0)
        assert np.isclose(linalg.trace_norm(t), 3.0, atol=1e-10)

    def test_frobenius(self):
        assert np.isclose(linalg.frobenius_norm(np.eye(3)), np.sqrt(3))
        assert np.isclose(linalg.frobenius_norm(np.diag([0.8, 0.5, 0.1])), np.sqrt(0.9))
        assert linalg.frobenius_norm(np.zeros((4, 4))) == 0.0

    def test_norm_ordering_on_random_hermitian(self):
        for seed in range(25):
            m = random_hermitian(5, np.random.default_rng(seed))
            tn = linalg.trace_norm(m)
            fn = linalg.frobenius_norm(m)
            on = linalg.operator_norm(m)
            assert tn >= fn - 1e-12
            assert fn >= on - 1e-12
            assert np.isclose(on, np.abs(np.linalg.eigvalsh(m)).max(), atol=1e-10)


@given(
    a=st.lists(st.floats(-5, 5), min_size=4, max_size=4),
    b=st.lists(st.floats(-5, 5), min_size=9, max_size=9),
)
@settings(max_examples=50, deadline=None)
def test_tensor_product_trace_multiplicativity(a, b):
    ma = np.array(a, dtype=complex).reshape(2, 2)
    mb = np.array(b, dtype=complex).reshape(3, 3)
    prod = linalg.tensor_product(ma, mb)
    assert prod.shape == (6, 6)
    assert abs(np.trace(prod) - np.trace(ma) * np.trace(mb)) <= 1e-12 * max(
        1.0, abs(np.trace(ma) * np.trace(mb))
    )


class TestTensorProduct:
    def test_identities(self):
        assert np.allclose(linalg.tensor_product(np.eye(2), np.eye(2)), np.eye(4))

    def test_pauli_zz(self):
        assert np.allclose(linalg.tensor_product(SZ, SZ), np.diag([1, -1, -1, 1]))

    def test_projector(self):
        p0 = np.diag([1.0, 0.0])
        p1 = np.diag([0.0, 1.0])
        out = linalg.tensor_product(p0, p1)
        expected = np.zeros((4, 4))
        expected[1, 1] = 1.0
        assert np.allclose(out, expected)

    def test_overflow(self):
        with pytest.raises(SizeOverflowError):
            linalg.tensor_product(np.eye(9), np.eye(8))


class TestPartialTrace:
    def test_product_state(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        a = a @ a.conj().T
        a /= np.trace(a)
        b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        b = b @ b.conj().T
        b /= np.trace(b)
        m = np.kron(a, b)
        assert np.abs(linalg.partial_trace(m, (2, 3), "A") - a).max() <= 1e-12
        assert np.abs(linalg.partial_trace(m, (2, 3), "B") - b).max() <= 1e-12

    def test_bell_marginal_maximally_mixed(self):
        ket = np.zeros(4, dtype=complex)
        ket[0] = ket[3] = 1 / np.sqrt(2)
        rho = np.outer(ket, ket.conj())
        assert np.abs(linalg.partial_trace(rho, (2, 2), "B") - np.eye(2) / 2).max() <= 1e-12

    def test_trace_over_both_gives_total_trace(self):
        rng = np.random.default_rng(1)
        m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        m = m @ m.conj().T
        m /= np.trace(m)
        reduced = linalg.partial_trace(m, (2, 3), "A")
        total = linalg.partial_trace(reduced, (1, 2), "B").trace()
        assert abs(total - 1.0) <= 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            linalg.partial_trace(np.eye(4), (2, 3), "A")


class TestMatrixLog:
    def test_maximally_mixed(self):
        log_m, deficient = linalg.matrix_log_on_support(np.eye(4) / 4)
        assert not deficient
        assert np.abs(log_m + 2 * np.eye(4)).max() <= 1e-12

    def test_rank_deficient_diagonal(self):
        log_m, deficient = linalg.matrix_log_on_support(np.diag([0.5, 0.5, 0.0, 0.0]))
        assert deficient
        assert np.allclose(log_m, np.diag([-1.0, -1.0, 0.0, 0.0]), atol=1e-12)

    def test_pure_projector(self):
        ket = np.zeros(4, dtype=complex)
        ket[0] = ket[3] = 1 / np.sqrt(2)
        log_m, deficient = linalg.matrix_log_on_support(np.outer(ket, ket.conj()))
        assert deficient
        assert np.abs(log_m).max() <= 1e-10
