import itertools

import numpy as np
import pytest

from kwitness.errors import BadAlpha, BadDimensions, ShapeMismatch
from kwitness.linalg import BipartiteShape, hermitian_eig, is_hermitian
from kwitness.maps import (ChoiConvention, ChoiMatrix, MapSpec, choi_from_map, choi_matrix,
                           entangled_vector, make_isometries, phi_apply, projection_p0,
                           projection_p_alpha)

from conftest import random_complex, random_hermitian

SMALL_DIMS = [(m, n) for m in range(2, 7) for n in range(m, 19) if m * n <= 36]


def test_mapspec_derived():
    s = MapSpec(3, 4, 2.0)
    assert s.r == 1
    assert s.mu * s.m == s.a
    assert MapSpec.from_dict(s.to_dict()) == s


@pytest.mark.parametrize("m,n,a", [(1, 3, 1.0), (4, 3, 1.0), (3, 4, -0.5), (3, 4, float("nan"))])
def test_mapspec_rejects(m, n, a):
    with pytest.raises(BadDimensions):
        MapSpec(m, n, a)


def test_isometries_square():
    (V0,) = make_isometries(3, 3)
    assert np.array_equal(V0, np.eye(3))


def test_isometries_3_4():
    V0, V1 = make_isometries(3, 4)
    E0 = np.zeros((4, 3)); E0[[0, 1, 2], [0, 1, 2]] = 1
    E1 = np.zeros((4, 3)); E1[[1, 2, 3], [0, 1, 2]] = 1
    assert np.array_equal(V0, E0)
    assert np.array_equal(V1, E1)


def test_isometry_overlaps_2_5():
    m, n = 2, 5
    Vs = make_isometries(m, n)
    assert len(Vs) == 4
    for alpha, beta in itertools.product(range(4), repeat=2):
        G = Vs[alpha].conj().T @ Vs[beta]
        # brute force: count p, q with p + alpha == q + beta
        overlaps = sum(1 for p in range(m) for q in range(m) if p + alpha == q + beta)
        assert G.sum() == overlaps == max(0, m - abs(alpha - beta))
        assert np.trace(G) == (m if alpha == beta else 0)


def test_isometry_invariants():
    for m, n in SMALL_DIMS:
        for alpha, V in enumerate(make_isometries(m, n)):
            assert np.array_equal(V.conj().T @ V, np.eye(m))
            for p in range(m):
                assert np.flatnonzero(V[:, p]).tolist() == [p + alpha]


def test_isometries_bad_dims():
    with pytest.raises(BadDimensions):
        make_isometries(1, 3)
    with pytest.raises(BadDimensions):
        make_isometries(4, 3)


def test_phi_identity_input():
    a = 1.3
    out = phi_apply(MapSpec(3, 4, a), np.eye(3))
    assert np.abs(out - np.diag([3 * a - 1, 3 * a - 2, 3 * a - 2, 3 * a - 1])).max() < 1e-15


def test_phi_zero():
    assert np.array_equal(phi_apply(MapSpec(3, 4, 2.0), np.zeros((3, 3))), np.zeros((4, 4)))


def test_phi_first_matrix_unit():
    a = 2.5
    E = np.zeros((3, 3)); E[0, 0] = 1
    assert np.abs(phi_apply(MapSpec(3, 4, a), E) - np.diag([a - 1, a - 1, a, a])).max() < 1e-15


def test_phi_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        phi_apply(MapSpec(3, 4, 1.0), np.eye(4))


def test_phi_linear_hermitian_trace_scaling(rng):
    for m, n in [(2, 3), (3, 4), (2, 6), (4, 4)]:
        spec = MapSpec(m, n, rng.uniform(0, 5))
        X, Y = random_complex(rng, m, m), random_complex(rng, m, m)
        c = complex(rng.standard_normal(), rng.standard_normal())
        lhs = phi_apply(spec, X + c * Y)
        assert np.abs(lhs - phi_apply(spec, X) - c * phi_apply(spec, Y)).max() < 1e-12
        H = random_hermitian(rng, m)
        assert is_hermitian(phi_apply(spec, H))
        factor = spec.a * n - (spec.r + 1)
        assert abs(np.trace(phi_apply(spec, X)) - factor * np.trace(X)) < 1e-12 * max(1, abs(np.trace(X)))


def test_p_alpha_square_is_max_entangled_projector():
    m = 3
    psi = entangled_vector(m, m)
    assert np.abs(projection_p_alpha(m, m, 0) - np.outer(psi, psi.conj())).max() < 1e-15
    assert np.allclose(psi[[0, 4, 8]], 1 / np.sqrt(3))


def test_p_alpha_orthogonal_3_4():
    assert np.abs(projection_p_alpha(3, 4, 0) @ projection_p_alpha(3, 4, 1)).max() < 1e-15


def test_p_alpha_idempotent_2_4_2():
    p = projection_p_alpha(2, 4, 2)
    assert np.abs(p @ p - p).max() < 1e-12
    assert abs(np.trace(p) - 1) < 1e-12
    assert is_hermitian(p)


def test_p_alpha_bad_alpha():
    with pytest.raises(BadAlpha):
        projection_p_alpha(3, 4, 2)
    with pytest.raises(BadAlpha):
        projection_p_alpha(3, 4, -1)


def test_projection_algebra_all_small_dims():
    for m, n in SMALL_DIMS:
        ps = [projection_p_alpha(m, n, alpha) for alpha in range(n - m + 1)]
        for alpha, beta in itertools.product(range(len(ps)), repeat=2):
            target = ps[alpha] if alpha == beta else 0
            assert np.abs(ps[alpha] @ ps[beta] - target).max() < 1e-12


@pytest.mark.parametrize("m,n", [(3, 3), (3, 4), (2, 6)])
def test_p0_projection_trace_spectrum(m, n):
    p0 = projection_p0(m, n)
    assert np.abs(p0 @ p0 - p0).max() < 1e-12
    assert abs(np.trace(p0) - (n - m + 1)) < 1e-12
    lam = hermitian_eig(p0).eigenvalues
    assert np.all((np.abs(lam) < 1e-10) | (np.abs(lam - 1) < 1e-10))
    assert np.sum(np.abs(lam - 1) < 1e-10) == n - m + 1


def test_p0_bad_dims():
    with pytest.raises(BadDimensions):
        projection_p0(3, 2)


def test_choi_3_4_pattern():
    a = 2.0
    C = choi_matrix(MapSpec(3, 4, a)).matrix
    assert np.allclose(np.diag(C), [a - 1, a - 1, a, a, a, a - 1, a - 1, a, a, a, a - 1, a - 1], atol=0)
    minus_one = {(0, 5), (0, 10), (5, 10), (1, 6), (1, 11), (6, 11)}
    for r in range(12):
        for c in range(12):
            if r == c:
                continue
            expected = -1 if (min(r, c), max(r, c)) in minus_one else 0
            assert C[r, c] == expected


def test_choi_square_at_cp_boundary():
    m = 3
    C = choi_matrix(MapSpec(m, m, float(m))).matrix
    assert np.abs(C - m * (np.eye(m * m) - projection_p0(m, m))).max() < 1e-15
    assert abs(hermitian_eig(C).eigenvalues[-1]) < 1e-12


def test_choi_dual_construction_2_3():
    spec = MapSpec(2, 3, 1.5)
    assert np.abs(choi_matrix(spec).matrix - choi_from_map(spec)).max() < 1e-12


def test_choi_dual_construction_random(rng):
    for _ in range(30):
        m = int(rng.integers(2, 5))
        n = int(rng.integers(m, 7))
        spec = MapSpec(m, n, rng.uniform(0, 6))
        assert np.abs(choi_matrix(spec).matrix - choi_from_map(spec)).max() < 1e-12


def test_choi_min_eigenvalue_is_a_minus_m(rng):
    for _ in range(20):
        m = int(rng.integers(2, 4))
        n = int(rng.integers(m, 6))
        spec = MapSpec(m, n, rng.uniform(0, 6))
        assert abs(hermitian_eig(choi_matrix(spec).matrix).eigenvalues[-1] - (spec.a - m)) < 1e-10


def test_choi_normalized_convention():
    spec = MapSpec(2, 4, 1.0)
    un = choi_matrix(spec)
    nz = choi_matrix(spec, ChoiConvention.NORMALIZED)
    assert nz.convention is ChoiConvention.NORMALIZED
    assert np.abs(nz.matrix - un.matrix / 2).max() < 1e-15
    assert is_hermitian(un.matrix)


def test_choi_json_round_trip():
    choi = choi_matrix(MapSpec(2, 4, 1.0), ChoiConvention.NORMALIZED)
    back = ChoiMatrix.from_dict(choi.to_dict())
    assert np.array_equal(back.matrix, choi.matrix)
    assert back.shape == BipartiteShape(2, 4)
    assert back.convention is ChoiConvention.NORMALIZED
