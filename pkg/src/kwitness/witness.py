"""Entanglement-witness utilities: pairing with states, PPT checks, product-vector probes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._parallel import batch_sizes, random_unit_vectors, run_tasks, task_rng
from .errors import KWitnessError, NotHermitian, ShapeMismatch
from .linalg import (BipartiteShape, as_matrix, hermitian_eig, is_hermitian,
                     matrix_to_dict, min_eigenvalue, partial_transpose,
                     schmidt_coefficients)
from .maps import MapSpec

STATE_TOL = 1e-10


@dataclass(frozen=True)
class BipartiteState:
    matrix: np.ndarray = field(repr=False)
    shape: BipartiteShape
    trace_normalized: bool = True

    def __post_init__(self):
        mat = as_matrix(self.matrix)
        if mat.shape != (self.shape.total, self.shape.total):
            raise ShapeMismatch(f"state of shape {mat.shape} does not fit {self.shape}")
        if not is_hermitian(mat, 1e-12):
            raise NotHermitian("state is not Hermitian within 1e-12")
        lam = np.linalg.eigvalsh(mat)
        if lam[0] < -STATE_TOL * max(1.0, np.abs(lam).max()):
            raise KWitnessError(f"state is not positive semidefinite (min eigenvalue {lam[0]:.3e})")
        if self.trace_normalized and abs(np.trace(mat) - 1) > 1e-12:
            raise KWitnessError("trace-normalized state must have unit trace")
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_vector(cls, v, shape: BipartiteShape) -> "BipartiteState":
        v = np.asarray(v, dtype=complex).ravel()
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()), shape)

    def to_dict(self) -> dict:
        out = matrix_to_dict(self.matrix)
        out["shape"] = [self.shape.dim_a, self.shape.dim_b]
        return out


@dataclass(frozen=True)
class Witness:
    matrix: np.ndarray = field(repr=False)
    shape: BipartiteShape
    provenance: Optional[MapSpec] = None

    def __post_init__(self):
        mat = as_matrix(self.matrix)
        if mat.shape != (self.shape.total, self.shape.total):
            raise ShapeMismatch(f"witness of shape {mat.shape} does not fit {self.shape}")
        if not is_hermitian(mat, 1e-12):
            raise NotHermitian("witness is not Hermitian within 1e-12")
        object.__setattr__(self, "matrix", mat)

    def to_dict(self) -> dict:
        out = matrix_to_dict(self.matrix)
        out["shape"] = [self.shape.dim_a, self.shape.dim_b]
        if self.provenance is not None:
            out["provenance"] = self.provenance.to_dict()
        return out


def evaluate(W: Witness, rho: BipartiteState) -> float:
    """Return ``Tr(W rho)``; a negative value detects entanglement of ``rho``."""
    if W.shape != rho.shape:
        raise ShapeMismatch(f"witness {W.shape} and state {rho.shape} differ")
    value = np.trace(W.matrix @ rho.matrix)
    if abs(value.imag) > 1e-10 * max(1.0, abs(value.real)):
        raise KWitnessError(f"pairing has imaginary part {value.imag:.3e}")
    return float(value.real)


def is_ppt(rho: BipartiteState, tolerance: float = 1e-10, sys: str = "A") -> bool:
    return min_eigenvalue(partial_transpose(rho.matrix, rho.shape, sys)) >= -tolerance


def schmidt_rank(v, shape: BipartiteShape, tolerance: float = 1e-10) -> int:
    v = np.asarray(v, dtype=complex).ravel()
    coeffs = schmidt_coefficients(v, shape)
    return int(np.sum(coeffs > tolerance * np.linalg.norm(v)))


@dataclass
class ProbeResult:
    min_found: float
    psi: np.ndarray
    phi: np.ndarray
    samples: int
    seed: int

    @property
    def product_vector(self) -> np.ndarray:
        return np.kron(self.psi, self.phi)

    def to_dict(self) -> dict:
        return {
            "min_found": self.min_found,
            "samples": self.samples,
            "seed": self.seed,
            "psi": [[float(z.real), float(z.imag)] for z in self.psi],
            "phi": [[float(z.real), float(z.imag)] for z in self.phi],
        }


def _min_eigvecs(H):
    lam, vec = np.linalg.eigh(H)
    return lam[:, 0], vec[:, :, 0]


def block_positivity_probe(W: Witness, samples: int = 10_000, seed: int = 42,
                           polish_iterations: int = 5) -> ProbeResult:
    """Search for the minimum of ``<psi (x) phi| W |psi (x) phi>`` over unit vectors.

    For each sampled ``psi`` the best ``phi`` is the lowest eigenvector of the
    contraction of ``W`` with ``psi``; the pair is then refined by alternating
    the two exact inner minimizations ``polish_iterations`` times.
    """
    m, n = W.shape.dim_a, W.shape.dim_b
    T = W.matrix.reshape(m, n, m, n)
    sizes = batch_sizes(samples)

    def task(idx):
        rng = task_rng(seed, idx)
        psi = random_unit_vectors(rng, sizes[idx], m)
        K = np.einsum("bi,isjt,bj->bst", psi.conj(), T, psi)
        val, phi = _min_eigvecs(K)
        for _ in range(polish_iterations):
            L = np.einsum("bs,isjt,bt->bij", phi.conj(), T, phi)
            val, psi = _min_eigvecs(L)
            K = np.einsum("bi,isjt,bj->bst", psi.conj(), T, psi)
            val, phi = _min_eigvecs(K)
        best = int(np.argmin(val))
        return float(val[best]), psi[best], phi[best]

    results = run_tasks(task, len(sizes))
    val, psi, phi = min(results, key=lambda t: t[0])
    return ProbeResult(val, psi, phi, int(samples), int(seed))


@dataclass
class PPTCertificate:
    rho: BipartiteState
    value: float
    min_eig_state: float
    min_eig_pt: float

    def to_dict(self) -> dict:
        return {
            "state": self.rho.to_dict(),
            "value": self.value,
            "min_eig_state": self.min_eig_state,
            "min_eig_pt": self.min_eig_pt,
        }


def random_states(rng: np.random.Generator, count: int, dim: int, rank: int) -> np.ndarray:
    """Wishart-style density matrices ``G G^dagger / Tr``."""
    G = rng.standard_normal((count, dim, rank)) + 1j * rng.standard_normal((count, dim, rank))
    rho = G @ np.conj(np.swapaxes(G, 1, 2))
    return rho / np.trace(rho, axis1=1, axis2=2).real[:, None, None]


def verify_certificate(W: Witness, rho: BipartiteState, tol: float = 1e-10) -> Optional[PPTCertificate]:
    """Independently re-check PSD, PPT and negative pairing; ``None`` if any fails."""
    lam = hermitian_eig(rho.matrix).eigenvalues[-1]
    lam_pt = hermitian_eig(partial_transpose(rho.matrix, rho.shape)).eigenvalues[-1]
    value = evaluate(W, rho)
    if lam < -tol or lam_pt < -tol or value >= -tol:
        return None
    return PPTCertificate(rho, value, float(lam), float(lam_pt))


def ppt_violation_search(W: Witness, samples: int = 10_000, seed: int = 42,
                         rank: Optional[int] = None) -> Optional[PPTCertificate]:
    """Rejection-sample PPT states and look for one with ``Tr(W rho) < 0``.

    A returned certificate shows ``W`` is not decomposable. ``None`` means the
    search was inconclusive; it says nothing about decomposability. The
    default Wishart rank ``3 * m * n`` keeps most draws PPT at desk sizes.
    """
    shape = W.shape
    d = shape.total
    rank = 3 * d if rank is None else rank
    sizes = batch_sizes(samples)

    def task(idx):
        rng = task_rng(seed, idx)
        rho = random_states(rng, sizes[idx], d, rank)
        T = rho.reshape(-1, shape.dim_a, shape.dim_b, shape.dim_a, shape.dim_b)
        pt = T.transpose(0, 3, 2, 1, 4).reshape(-1, d, d)
        ppt = np.linalg.eigvalsh(pt)[:, 0] >= -1e-10
        vals = np.einsum("ij,bji->b", W.matrix, rho).real
        hits = np.flatnonzero(ppt & (vals < -1e-10))
        return [rho[i] for i in hits[:1]]

    for found in run_tasks(task, len(sizes)):
        for mat in found:
            mat = 0.5 * (mat + mat.conj().T)
            cert = verify_certificate(W, BipartiteState(mat / np.trace(mat).real, shape))
            if cert is not None:
                return cert
    return None
