"""The map family phi_a(X) = a Tr(X) 1_n - sum_alpha V_alpha X V_alpha^dagger.

``V_alpha : C^m -> C^n`` is the shift isometry ``e_p -> f_{p+alpha}`` for
``alpha = 0..r`` with ``r = n - m``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import BadAlpha, BadDimensions, ShapeMismatch
from .linalg import BipartiteShape, as_matrix, kron, matrix_from_dict, matrix_to_dict


def _check_dims(m: int, n: int) -> None:
    if m < 2 or n < m:
        raise BadDimensions(f"need 2 <= m <= n, got m={m}, n={n}")


@dataclass(frozen=True)
class MapSpec:
    m: int
    n: int
    a: float

    def __post_init__(self):
        _check_dims(self.m, self.n)
        if not np.isfinite(self.a) or self.a < 0:
            raise BadDimensions(f"a must be a finite nonnegative real, got {self.a}")

    @property
    def r(self) -> int:
        return self.n - self.m

    @property
    def mu(self) -> float:
        return self.a / self.m

    @property
    def shape(self) -> BipartiteShape:
        return BipartiteShape(self.m, self.n)

    def to_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "a": float(self.a)}

    @classmethod
    def from_dict(cls, obj: dict) -> "MapSpec":
        return cls(int(obj["m"]), int(obj["n"]), float(obj["a"]))


class ChoiConvention(enum.Enum):
    UNNORMALIZED = "unnormalized"
    NORMALIZED = "normalized"


@dataclass(frozen=True)
class ChoiMatrix:
    """Choi matrix ``sum_ij e_ij (x) phi(e_ij)``, optionally divided by ``m``."""

    matrix: np.ndarray = field(repr=False)
    shape: BipartiteShape
    convention: ChoiConvention = ChoiConvention.UNNORMALIZED

    def to_dict(self) -> dict:
        out = matrix_to_dict(self.matrix)
        out["shape"] = [self.shape.dim_a, self.shape.dim_b]
        out["convention"] = self.convention.value
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "ChoiMatrix":
        shape = BipartiteShape(*obj["shape"])
        mat = matrix_from_dict(obj)
        if mat.shape != (shape.total, shape.total):
            raise ShapeMismatch(f"matrix {mat.shape} inconsistent with shape {obj['shape']}")
        return cls(mat, shape, ChoiConvention(obj.get("convention", "unnormalized")))


def make_isometries(m: int, n: int) -> list[np.ndarray]:
    """Return ``[V_0, ..., V_r]``; column ``p`` of ``V_alpha`` is ``f_{p+alpha}``."""
    _check_dims(m, n)
    out = []
    for alpha in range(n - m + 1):
        V = np.zeros((n, m), dtype=complex)
        V[np.arange(m) + alpha, np.arange(m)] = 1.0
        out.append(V)
    return out


def phi_apply(spec: MapSpec, X) -> np.ndarray:
    X = as_matrix(X)
    if X.shape != (spec.m, spec.m):
        raise ShapeMismatch(f"X must be {spec.m}x{spec.m}, got {X.shape}")
    out = spec.a * np.trace(X) * np.eye(spec.n, dtype=complex)
    for V in make_isometries(spec.m, spec.n):
        out -= V @ X @ V.conj().T
    return out


def matrix_unit(d: int, i: int, j: int) -> np.ndarray:
    E = np.zeros((d, d), dtype=complex)
    E[i, j] = 1.0
    return E


def entangled_vector(m: int, n: int, alpha: int = 0) -> np.ndarray:
    """Unit vector ``m^{-1/2} sum_i e_i (x) f_{i+alpha}``."""
    v = np.zeros(m * n, dtype=complex)
    v[np.arange(m) * n + np.arange(m) + alpha] = 1.0 / np.sqrt(m)
    return v


def projection_p_alpha(m: int, n: int, alpha: int) -> np.ndarray:
    """``(1/m) sum_ij e_ij (x) V_alpha e_ij V_alpha^dagger``, a rank-one projection."""
    _check_dims(m, n)
    if not 0 <= alpha <= n - m:
        raise BadAlpha(f"alpha={alpha} outside [0, {n - m}]")
    V = make_isometries(m, n)[alpha]
    P = np.zeros((m * n, m * n), dtype=complex)
    for i in range(m):
        for j in range(m):
            Eij = matrix_unit(m, i, j)
            P += kron(Eij, V @ Eij @ V.conj().T)
    return P / m


def projection_p0(m: int, n: int) -> np.ndarray:
    """Sum of all ``r + 1`` shift projections; itself a projection of trace ``r + 1``."""
    _check_dims(m, n)
    return sum(projection_p_alpha(m, n, alpha) for alpha in range(n - m + 1))


def choi_from_map(spec: MapSpec) -> np.ndarray:
    """Unnormalized Choi matrix assembled block by block from ``phi_apply``."""
    m = spec.m
    C = np.zeros((m * spec.n, m * spec.n), dtype=complex)
    for i in range(m):
        for j in range(m):
            Eij = matrix_unit(m, i, j)
            C += kron(Eij, phi_apply(spec, Eij))
    return C


def choi_matrix(spec: MapSpec,
                convention: ChoiConvention = ChoiConvention.UNNORMALIZED) -> ChoiMatrix:
    """Choi matrix via the closed form ``a 1 - m p_0``.

    The block-wise construction in :func:`choi_from_map` is an independent
    route to the same matrix.
    """
    d = spec.m * spec.n
    C = spec.a * np.eye(d, dtype=complex) - spec.m * projection_p0(spec.m, spec.n)
    if convention is ChoiConvention.NORMALIZED:
        C = C / spec.m
    return ChoiMatrix(C, spec.shape, convention)
