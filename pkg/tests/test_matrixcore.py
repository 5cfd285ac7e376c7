import numpy as np
import pytest

from opintlab.matrixcore import (
    SPECTRUM_BOUND,
    derive_seed,
    matrix_from_json,
    matrix_to_json,
    random_hermitian,
    require_hermitian,
    random_hermitian as rh,
    schatten_norm,
    spectral_decompose,
)


def test_spectral_decompose_diagonal():
    D = spectral_decompose(np.diag([1.0, 2.0, 3.0]).astype(complex), cluster_tol=0.0)
    assert np.allclose(D.eigenvalues, [1.0, 2.0, 3.0])
    for j in range(3):
        e = np.zeros(3)
        e[j] = 1.0
        assert np.allclose(D.projections[j], np.outer(e, e))


def test_spectral_decompose_identity_collapses():
    D = spectral_decompose(np.eye(4, dtype=complex), cluster_tol=1e-8)
    assert D.size == 1
    assert np.isclose(D.eigenvalues[0], 1.0)
    assert np.allclose(D.projections[0], np.eye(4))


def test_spectral_decompose_pauli_x():
    # hand 2x2 eigendecomposition of [[0,1],[1,0]]
    D = spectral_decompose(np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex), cluster_tol=0.0)
    assert np.allclose(D.eigenvalues, [-1.0, 1.0])
    assert np.allclose(D.projections[0], 0.5 * np.array([[1, -1], [-1, 1]]))
    assert np.allclose(D.projections[1], 0.5 * np.array([[1, 1], [1, 1]]))


def test_spectral_decompose_rejects_non_hermitian():
    with pytest.raises(ValueError):
        spectral_decompose(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_projection_invariants_random():
    for seed in range(20):
        A = random_hermitian(2 + seed % 9, seed)
        D = spectral_decompose(A)
        n = D.source_dim
        total = np.zeros((n, n), dtype=complex)
        for j, P in enumerate(D.projections):
            assert np.max(np.abs(P @ P - P)) <= 1e-10
            for k in range(j + 1, D.size):
                assert np.max(np.abs(P @ D.projections[k])) <= 1e-10
            total += P
        assert np.max(np.abs(total - np.eye(n))) <= 1e-10


def test_reconstruction_over_random_ensemble():
    for seed in range(100):
        dim = 1 + seed % 16
        A = random_hermitian(dim, derive_seed("recon", seed))
        D = spectral_decompose(A)
        err = np.max(np.abs(D.reconstruct() - A))
        assert err <= 1e-9 * (1.0 + np.max(np.abs(A)))


def test_schatten_identity_and_rank_one():
    for p in (1.0, 2.0, 3.0):
        assert np.isclose(schatten_norm(np.eye(5), p), 5.0 ** (1.0 / p))
    assert np.isclose(schatten_norm(np.eye(5), np.inf), 1.0)
    rng = np.random.default_rng(3)
    u = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    M = np.outer(u, v.conj())
    for p in (1.0, 1.7, 2.0, np.inf):
        assert np.isclose(schatten_norm(M, p), np.linalg.norm(u) * np.linalg.norm(v))


def test_trace_norm_against_independent_svd():
    # oracle: singular values from eigenvalues of T*T
    rng = np.random.default_rng(11)
    T = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    sv = np.sqrt(np.maximum(np.linalg.eigvalsh(T.conj().T @ T), 0.0))
    assert np.isclose(schatten_norm(T, 1.0), np.sum(sv), rtol=1e-12)


def test_schatten_p2_equals_frobenius():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        T = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        assert np.isclose(schatten_norm(T, 2.0), np.linalg.norm(T), rtol=1e-12)


def test_schatten_monotone_in_p():
    rng = np.random.default_rng(4)
    for _ in range(20):
        T = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        ps = [1.0, 1.5, 2.0, 3.0, 7.0, np.inf]
        norms = [schatten_norm(T, p) for p in ps]
        for a, b in zip(norms, norms[1:]):
            assert a >= b - 1e-12 * a


def test_schatten_unitary_invariance():
    rng = np.random.default_rng(8)
    for seed in range(10):
        T = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        DU = spectral_decompose(random_hermitian(5, derive_seed("u", seed)))
        DV = spectral_decompose(random_hermitian(5, derive_seed("v", seed)))
        U = sum(np.exp(1j * lam) * P for lam, P in zip(DU.eigenvalues, DU.projections))
        V = sum(np.exp(1j * lam) * P for lam, P in zip(DV.eigenvalues, DV.projections))
        for p in (1.0, 2.0, 3.5, np.inf):
            assert np.isclose(schatten_norm(U @ T @ V, p), schatten_norm(T, p), rtol=1e-10)


def test_schatten_triangle_inequality():
    rng = np.random.default_rng(9)
    for _ in range(20):
        S = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        T = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        for p in (1.0, 1.5, 2.0, 4.0, np.inf):
            lhs = schatten_norm(S + T, p)
            rhs = schatten_norm(S, p) + schatten_norm(T, p)
            assert lhs <= rhs * (1 + 1e-12)


def test_schatten_rejects_small_p():
    with pytest.raises(ValueError):
        schatten_norm(np.eye(2), 0.5)


def test_random_hermitian_deterministic_and_bounded():
    A = random_hermitian(8, 42)
    B = random_hermitian(8, 42)
    assert np.array_equal(A, B)
    w = spectral_decompose(A).eigenvalues
    assert np.all(np.abs(w) < SPECTRUM_BOUND)
    # 1x1 case is a bounded real scalar
    a = rh(1, 5)
    assert a.shape == (1, 1)
    assert abs(a[0, 0].imag) == 0.0
    assert abs(a[0, 0]) < SPECTRUM_BOUND


def test_random_hermitian_rejects_zero_dim():
    with pytest.raises(ValueError):
        random_hermitian(0, 1)


def test_matrix_json_roundtrip():
    A = random_hermitian(5, 77)
    obj = matrix_to_json(A)
    assert obj["dim"] == 5 and len(obj["re"]) == 25
    assert np.array_equal(matrix_from_json(obj), A)


def test_require_hermitian_tolerance():
    A = np.eye(3, dtype=complex)
    A[0, 1] = 1e-11
    with pytest.raises(ValueError):
        require_hermitian(A)


def test_derive_seed_stable():
    assert derive_seed(1, "x", 2.0) == derive_seed(1, "x", 2.0)
    assert derive_seed(1, "x") != derive_seed(1, "y")
