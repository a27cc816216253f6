"""Dense complex linear algebra on small matrices.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Indices are
0-based everywhere; a basis vector written ``e_1`` in 1-based notation is
``e[0]`` here. In a bipartite operator on C^m (x) C^n the first factor is the
slow index, so entry ``(i*n + s, j*n + t)`` belongs to block ``(i, j)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BadDimensions, BadRank, NotHermitian, ShapeMismatch

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class BipartiteShape:
    dim_a: int
    dim_b: int

    def __post_init__(self):
        if self.dim_a < 2 or self.dim_b < self.dim_a:
            raise BadDimensions(
                f"need 2 <= dim_a <= dim_b, got ({self.dim_a}, {self.dim_b})")

    @property
    def total(self) -> int:
        return self.dim_a * self.dim_b


class EigenResult(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise ShapeMismatch(f"expected a 2-d array, got shape {A.shape}")
    return A


def is_hermitian(A, tol: float = 1e-12) -> bool:
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        return False
    return bool(np.abs(A - A.conj().T).max(initial=0.0) <= tol)


def kron(A, B) -> np.ndarray:
    """Kronecker product, ``result[i*rB + k, j*cB + l] = A[i, j] * B[k, l]``."""
    A = as_matrix(A)
    B = as_matrix(B)
    rA, cA = A.shape
    rB, cB = B.shape
    out = A[:, None, :, None] * B[None, :, None, :]
    return out.reshape(rA * rB, cA * cB)


def _jacobi_pair(A, V, p, q):
    apq = A[p, q]
    mag = abs(apq)
    if mag < 1e-300:
        A[p, q] = A[q, p] = 0.0
        return
    phase = apq / mag
    app = A[p, p].real
    aqq = A[q, q].real
    theta = (aqq - app) / (2.0 * mag)
    if theta == 0.0:
        t = 1.0
    elif abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # phase fix on column q makes the pivot real, then a real plane rotation
    U = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
    idx = [p, q]
    A[:, idx] = A[:, idx] @ U
    A[idx, :] = U.conj().T @ A[idx, :]
    A[p, q] = A[q, p] = 0.0
    A[p, p] = A[p, p].real
    A[q, q] = A[q, q].real
    V[:, idx] = V[:, idx] @ U


def hermitian_eig(A) -> EigenResult:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Sweeps over all off-diagonal pivots until the off-diagonal Frobenius mass
    falls below ``1e-14 * ||A||_F``. Eigenvalues are returned in descending
    order (stable for ties) with eigenvectors as matching columns.

    Raises
    ------
    NotHermitian
        If ``max |A - A^dagger| > 1e-10``.
    """
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"matrix must be square, got {A.shape}")
    if np.abs(A - A.conj().T).max(initial=0.0) > HERMITIAN_TOL:
        raise NotHermitian("input deviates from its adjoint by more than 1e-10")
    d = A.shape[0]
    W = 0.5 * (A + A.conj().T)
    V = np.eye(d, dtype=complex)
    scale = np.linalg.norm(W)
    if d > 1 and scale > 0.0:
        for _ in range(JACOBI_MAX_SWEEPS):
            off = np.linalg.norm(W - np.diag(np.diag(W)))
            if off < JACOBI_TOL * scale:
                break
            for p in range(d - 1):
                for q in range(p + 1, d):
                    _jacobi_pair(W, V, p, q)
    evals = np.diag(W).real.copy()
    order = np.argsort(-evals, kind="stable")
    return EigenResult(evals[order], V[:, order])


def eigvalsh_desc(A) -> np.ndarray:
    return hermitian_eig(A).eigenvalues


def min_eigenvalue(A) -> float:
    return float(hermitian_eig(A).eigenvalues[-1])


def max_eigenvalue(A) -> float:
    return float(hermitian_eig(A).eigenvalues[0])


def singular_values(A) -> np.ndarray:
    """Singular values in descending order."""
    A = as_matrix(A)
    if A.size == 0:
        return np.zeros(0)
    return np.linalg.svd(A, compute_uv=False)


def ky_fan_norm(A, k: int) -> float:
    """Sum of the ``k`` largest singular values of ``A``."""
    A = as_matrix(A)
    if not 1 <= k <= min(A.shape):
        raise BadRank(f"k={k} outside [1, {min(A.shape)}]")
    return float(np.sum(singular_values(A)[:k]))


def _check_bipartite(X, shape: BipartiteShape) -> np.ndarray:
    X = as_matrix(X)
    if X.shape != (shape.total, shape.total):
        raise ShapeMismatch(
            f"matrix of shape {X.shape} does not act on C^{shape.dim_a} x C^{shape.dim_b}")
    return X


def partial_transpose(X, shape: BipartiteShape, sys: str = "A") -> np.ndarray:
    """Transpose one tensor factor of a bipartite operator.

    With ``sys="A"`` block ``(i, j)`` of the result is block ``(j, i)`` of
    ``X``; with ``sys="B"`` every block is transposed in place.
    """
    X = _check_bipartite(X, shape)
    m, n = shape.dim_a, shape.dim_b
    T = X.reshape(m, n, m, n)
    if sys == "A":
        T = T.transpose(2, 1, 0, 3)
    elif sys == "B":
        T = T.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"sys must be 'A' or 'B', got {sys!r}")
    return np.ascontiguousarray(T).reshape(m * n, m * n)


def partial_trace(X, shape: BipartiteShape, keep: str = "A") -> np.ndarray:
    X = _check_bipartite(X, shape)
    m, n = shape.dim_a, shape.dim_b
    T = X.reshape(m, n, m, n)
    if keep == "A":
        return np.einsum("isjs->ij", T)
    if keep == "B":
        return np.einsum("isit->st", T)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def schmidt_coefficients(v, shape: BipartiteShape) -> np.ndarray:
    """Singular values of ``v`` reshaped to an ``dim_a x dim_b`` matrix."""
    v = np.asarray(v, dtype=complex).ravel()
    if v.size != shape.total:
        raise ShapeMismatch(f"vector of length {v.size}, expected {shape.total}")
    return singular_values(v.reshape(shape.dim_a, shape.dim_b))


# -- matrix JSON: {"rows": R, "cols": C, "data": [[re, im], ...]} row-major --

def matrix_to_dict(A) -> dict:
    A = as_matrix(A)
    flat = A.ravel()
    return {
        "rows": int(A.shape[0]),
        "cols": int(A.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_dict(obj: dict) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError) as exc:
        raise ShapeMismatch(f"malformed matrix record: {exc}") from exc
    if rows < 0 or cols < 0 or len(data) != rows * cols:
        raise ShapeMismatch(
            f"data has {len(data)} entries, expected {rows}x{cols}={rows * cols}")
    if any(len(pair) != 2 for pair in data):
        raise ShapeMismatch("each entry must be a [re, im] pair")
    arr = np.array([complex(re, im) for re, im in data], dtype=complex)
    return arr.reshape(rows, cols)


def matrix_to_json(A) -> str:
    return json.dumps(matrix_to_dict(A))


def matrix_from_json(text: str) -> np.ndarray:
    return matrix_from_dict(json.loads(text))
