import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kwitness.errors import BadDimensions, BadRank, NotHermitian, ShapeMismatch
from kwitness.linalg import (BipartiteShape, hermitian_eig, is_hermitian, kron, ky_fan_norm,
                             matrix_from_dict, matrix_from_json, matrix_to_json,
                             partial_trace, partial_transpose, schmidt_coefficients,
                             singular_values)
from kwitness.maps import make_isometries

from conftest import random_complex, random_hermitian


def sample_model_matrix(z0, z1):
    # the 4x4 (zeta0 V0 + zeta1 V1)(...)^dagger typed out by hand
    c = z0 * np.conj(z1)
    return np.array([
        [abs(z0) ** 2, c, 0, 0],
        [np.conj(c), 1, c, 0],
        [0, np.conj(c), 1, c],
        [0, 0, np.conj(c), abs(z1) ** 2],
    ], dtype=complex)


def test_kron_identity():
    assert np.array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))


def test_kron_matrix_units():
    e11 = np.zeros((2, 2)); e11[0, 0] = 1
    e22 = np.zeros((2, 2)); e22[1, 1] = 1
    out = kron(e11, e22)
    expected = np.zeros((4, 4)); expected[1, 1] = 1
    assert np.array_equal(out, expected)


def test_kron_against_index_enumeration():
    E = np.zeros((3, 3)); E[0, 1] = 1
    F = np.zeros((4, 4)); F[1, 2] = 1
    out = kron(E, F)
    for row in range(12):
        for col in range(12):
            i, k = divmod(row, 4)
            j, l = divmod(col, 4)
            assert out[row, col] == E[i, j] * F[k, l]


def test_kron_rectangular_matches_formula(rng):
    A = random_complex(rng, 2, 3)
    B = random_complex(rng, 4, 1)
    out = kron(A, B)
    assert out.shape == (8, 3)
    for i in range(2):
        for j in range(3):
            for k in range(4):
                assert abs(out[i * 4 + k, j] - A[i, j] * B[k, 0]) < 1e-14


def test_hermitian_eig_diagonal():
    res = hermitian_eig(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(res.eigenvalues, [3, 2, 1], atol=0)


def test_hermitian_eig_model_matrix():
    s = 1 / math.sqrt(2)
    res = hermitian_eig(sample_model_matrix(s, s))
    assert abs(res.eigenvalues[0] - (1 + math.sqrt(2) / 2)) < 1e-12


def test_hermitian_eig_reconstruction(rng):
    A = random_hermitian(rng, 9)
    lam, V = hermitian_eig(A)
    recon = sum(lam[i] * np.outer(V[:, i], V[:, i].conj()) for i in range(9))
    assert np.abs(recon - A).max() < 1e-9


@pytest.mark.parametrize("d", [1, 2, 3, 7, 12, 20])
def test_hermitian_eig_invariants(rng, d):
    A = random_hermitian(rng, d)
    lam, V = hermitian_eig(A)
    norm = np.linalg.norm(A, 2)
    assert np.all(np.diff(lam) <= 0)
    assert np.abs(A @ V - V * lam).max() <= 1e-10 * norm
    assert np.abs(V.conj().T @ V - np.eye(d)).max() <= 1e-10
    assert abs(lam.sum() - np.trace(A).real) <= 1e-10 * norm


def test_hermitian_eig_matches_lapack(rng):
    for _ in range(20):
        A = random_hermitian(rng, 8)
        assert np.abs(np.sort(hermitian_eig(A).eigenvalues) - np.linalg.eigvalsh(A)).max() < 1e-12


def test_hermitian_eig_degenerate_orthonormal():
    U = np.linalg.qr(np.random.default_rng(3).standard_normal((6, 6)))[0]
    A = U @ np.diag([2, 2, 2, -1, -1, 0.5]) @ U.T
    lam, V = hermitian_eig(A)
    assert np.allclose(lam, [2, 2, 2, 0.5, -1, -1], atol=1e-12)
    assert np.abs(V.conj().T @ V - np.eye(6)).max() < 1e-12


def test_hermitian_eig_square_of_psd(rng):
    G = random_complex(rng, 6, 6)
    A = G @ G.conj().T
    lam = hermitian_eig(A).eigenvalues
    lam2 = hermitian_eig(A @ A).eigenvalues
    assert np.abs(lam ** 2 - lam2).max() <= 1e-10 * lam2.max()


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[1, 2], [0, 1]]))


def test_is_hermitian():
    assert is_hermitian(np.eye(3))
    assert not is_hermitian(np.array([[0, 1j], [1j, 0]]))


def test_singular_values_sign_stripping():
    assert np.allclose(singular_values(np.diag([-2.0, 1.0])), [2, 1], atol=0)


def test_singular_values_isometries():
    for V in make_isometries(3, 6):
        assert np.allclose(singular_values(V), 1, atol=1e-15)


def test_singular_values_vs_eigen_oracle(rng):
    A = random_complex(rng, 5, 3)
    oracle = np.sqrt(np.clip(hermitian_eig(A.conj().T @ A).eigenvalues, 0, None))
    assert np.abs(singular_values(A) - oracle).max() < 1e-9


def test_ky_fan_identity():
    assert ky_fan_norm(np.eye(4), 2) == 2


def test_ky_fan_model_matrix():
    s = 1 / math.sqrt(2)
    assert abs(ky_fan_norm(sample_model_matrix(s, s), 1) - 1.7071067812) < 1e-10


def test_ky_fan_full_rank_is_trace_norm(rng):
    A = random_complex(rng, 4, 6)
    assert abs(ky_fan_norm(A, 4) - singular_values(A).sum()) < 1e-12
    lam = hermitian_eig(A @ A.conj().T).eigenvalues
    assert abs(ky_fan_norm(A, 4) - np.sqrt(np.clip(lam, 0, None)).sum()) < 1e-9


def test_ky_fan_psd_equals_eigen_sum(rng):
    G = random_complex(rng, 5, 5)
    A = G @ G.conj().T
    assert abs(ky_fan_norm(A, 3) - hermitian_eig(A).eigenvalues[:3].sum()) < 1e-10


def test_ky_fan_bad_rank():
    with pytest.raises(BadRank):
        ky_fan_norm(np.eye(3), 0)
    with pytest.raises(BadRank):
        ky_fan_norm(np.eye(3), 4)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2 ** 32 - 1))
def test_ky_fan_monotone(d, seed):
    A = random_hermitian(np.random.default_rng(seed), d)
    norms = [ky_fan_norm(A, k) for k in range(1, d + 1)]
    assert all(b >= a for a, b in zip(norms, norms[1:]))


def test_bipartite_shape_validation():
    with pytest.raises(BadDimensions):
        BipartiteShape(1, 3)
    with pytest.raises(BadDimensions):
        BipartiteShape(3, 2)


def test_partial_transpose_product(rng):
    A = random_complex(rng, 2, 2)
    B = random_complex(rng, 3, 3)
    shape = BipartiteShape(2, 3)
    assert np.abs(partial_transpose(kron(A, B), shape) - kron(A.T, B)).max() < 1e-15
    assert np.abs(partial_transpose(kron(A, B), shape, "B") - kron(A, B.T)).max() < 1e-15


def test_partial_transpose_block_rule(rng):
    shape = BipartiteShape(3, 4)
    X = random_complex(rng, 12, 12)
    Y = partial_transpose(X, shape)
    for i in range(3):
        for j in range(3):
            assert np.array_equal(Y[4 * i:4 * i + 4, 4 * j:4 * j + 4], X[4 * j:4 * j + 4, 4 * i:4 * i + 4])


def test_partial_transpose_involution(rng):
    shape = BipartiteShape(2, 3)
    for _ in range(50):
        X = random_complex(rng, 6, 6)
        assert np.array_equal(partial_transpose(partial_transpose(X, shape), shape), X)


def test_partial_transpose_preserves_trace_and_hermiticity(rng):
    shape = BipartiteShape(3, 3)
    H = random_hermitian(rng, 9)
    Y = partial_transpose(H, shape)
    assert is_hermitian(Y)
    assert abs(np.trace(Y) - np.trace(H)) < 1e-12


def test_partial_transpose_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        partial_transpose(np.eye(5), BipartiteShape(2, 3))


def test_partial_trace_product(rng):
    shape = BipartiteShape(2, 3)
    GA, GB = random_complex(rng, 2, 2), random_complex(rng, 3, 3)
    rA, rB = GA @ GA.conj().T, GB @ GB.conj().T
    out = partial_trace(kron(rA, rB), shape, keep="A")
    assert np.abs(out - rA * np.trace(rB)).max() < 1e-12
    out = partial_trace(kron(rA, rB), shape, keep="B")
    assert np.abs(out - rB * np.trace(rA)).max() < 1e-12


def test_partial_trace_maximally_entangled():
    psi = np.zeros(9); psi[[0, 4, 8]] = 1 / math.sqrt(3)
    rho = np.outer(psi, psi)
    assert np.abs(partial_trace(rho, BipartiteShape(3, 3)) - np.eye(3) / 3).max() < 1e-15


def test_partial_trace_conserves_trace(rng):
    shape = BipartiteShape(3, 4)
    for _ in range(10):
        X = random_complex(rng, 12, 12)
        for keep in "AB":
            out = partial_trace(X, shape, keep)
            assert out.shape == ((3, 3) if keep == "A" else (4, 4))
            assert abs(np.trace(out) - np.trace(X)) < 1e-12


def test_schmidt_product_vector():
    v = np.kron([1, 0, 0], [0, 1, 0, 0])
    c = schmidt_coefficients(v, BipartiteShape(3, 4))
    assert np.allclose(c, [1, 0, 0], atol=1e-15)


def test_schmidt_unnormalized_max_entangled():
    v = sum(np.kron(np.eye(3)[i], np.eye(4)[i]) for i in range(3))
    assert np.allclose(schmidt_coefficients(v, BipartiteShape(3, 4)), [1, 1, 1], atol=1e-14)


def test_schmidt_norm_conservation(rng):
    shape = BipartiteShape(3, 5)
    for _ in range(20):
        v = rng.standard_normal(15) + 1j * rng.standard_normal(15)
        c = schmidt_coefficients(v, shape)
        assert abs((c ** 2).sum() - np.vdot(v, v).real) < 1e-10 * np.vdot(v, v).real
        u = v / np.linalg.norm(v)
        assert abs((schmidt_coefficients(u, shape) ** 2).sum() - 1) < 1e-10


def test_schmidt_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        schmidt_coefficients(np.ones(5), BipartiteShape(2, 3))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_kron_mixed_product_and_associativity(seed):
    r = np.random.default_rng(seed)
    A, C = random_complex(r, 2, 3), random_complex(r, 3, 2)
    B, D = random_complex(r, 2, 2), random_complex(r, 2, 3)
    E = random_complex(r, 2, 1)
    assert np.abs(kron(A, B) @ kron(C, D) - kron(A @ C, B @ D)).max() < 1e-12
    assert np.abs(kron(kron(A, B), E) - kron(A, kron(B, E))).max() < 1e-12


def test_matrix_json_round_trip(rng):
    A = random_complex(rng, 3, 5)
    assert np.array_equal(matrix_from_json(matrix_to_json(A)), A)


def test_matrix_json_rejects_length_mismatch():
    with pytest.raises(ShapeMismatch):
        matrix_from_dict({"rows": 2, "cols": 2, "data": [[1, 0]] * 3})
    with pytest.raises(ShapeMismatch):
        matrix_from_dict({"rows": 1, "cols": 1, "data": [[1, 0, 0]]})
    with pytest.raises(ShapeMismatch):
        matrix_from_dict({"cols": 1, "data": []})
