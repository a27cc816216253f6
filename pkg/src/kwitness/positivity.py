"""k-positivity thresholds and CP / co-CP classification of ``phi_a``.

Three routes to the k-positivity threshold are provided:

* :func:`threshold_analytic_r1`, the closed form ``k + sum_{j<=k} cos(j pi / n)``
  valid when ``n = m + 1``;
* :func:`kyfan_threshold_bound`, a numerical maximization of the Ky Fan
  k-norm of ``W W^dagger`` with ``W = sum_alpha zeta_alpha V_alpha`` over unit
  ``zeta``;
* :func:`mu_k_oracle`, an alternating ascent on the rank-k projection problem
  ``sup_p ||(1 (x) p) p_0 (1 (x) p)||`` working on the ``mn x mn`` operators.

``phi_a`` is k-positive whenever ``a`` is at least the Ky Fan bound.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from ._parallel import batch_sizes, random_isometries, run_tasks, task_rng
from .errors import BadRange, BadRank, DegenerateZ, NotNormalized, TooLarge
from .linalg import (BipartiteShape, kron, max_eigenvalue, min_eigenvalue,
                     partial_trace, partial_transpose)
from .maps import MapSpec, choi_matrix, entangled_vector, make_isometries, projection_p0
from .witness import Witness, block_positivity_probe

DESK_LIMIT = 64


# -- the r = 1 closed form --------------------------------------------------

def threshold_analytic_r1(k: int, n: int) -> float:
    if n < 3 or not 1 <= k <= n - 1:
        raise BadRank(f"need n >= 3 and 1 <= k <= n-1, got k={k}, n={n}")
    return k + sum(math.cos(j * math.pi / n) for j in range(1, k + 1))


@dataclass(frozen=True)
class ModelMatrixR1:
    """Parameters of ``(zeta0 V0 + zeta1 V1)(zeta0 V0 + zeta1 V1)^dagger`` on C^n."""

    n: int
    zeta0: complex
    zeta1: complex

    def __post_init__(self):
        if abs(abs(self.zeta0) ** 2 + abs(self.zeta1) ** 2 - 1) > 1e-12:
            raise NotNormalized("|zeta0|^2 + |zeta1|^2 must equal 1")
        if self.n < 2:
            raise BadRange(f"n must be at least 2, got {self.n}")

    @property
    def z(self) -> complex:
        return np.conj(self.zeta0) * self.zeta1


def model_matrix_r1(params: ModelMatrixR1) -> np.ndarray:
    """Tridiagonal ``n x n`` matrix: diagonal ``(|z0|^2, 1, ..., 1, |z1|^2)``,
    superdiagonal ``conj(z)``, subdiagonal ``z``."""
    n = params.n
    M = np.diag(np.ones(n, dtype=complex))
    M[0, 0] = abs(params.zeta0) ** 2
    M[-1, -1] = abs(params.zeta1) ** 2
    idx = np.arange(n - 1)
    M[idx, idx + 1] = np.conj(params.z)
    M[idx + 1, idx] = params.z
    return M


def eigenvalues_r1(z_abs: float, n: int) -> np.ndarray:
    """Spectrum ``{0} u {1 - 2|z| cos(j pi / n) : j = 1..n-1}``, descending."""
    if not -1e-12 <= z_abs <= 0.5 + 1e-12:
        raise BadRange(f"|z| = {z_abs} outside [0, 1/2]")
    j = np.arange(1, n)
    lam = np.concatenate([[0.0], 1.0 - 2.0 * z_abs * np.cos(j * np.pi / n)])
    return np.sort(lam)[::-1]


def chebyshev_u(j: int, x: float) -> float:
    """Chebyshev polynomial of the second kind by three-term recurrence."""
    if j < 0:
        raise BadRange(f"degree must be nonnegative, got {j}")
    prev, cur = 1.0, 2.0 * x
    if j == 0:
        return prev
    for _ in range(j - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur


def _real_zetas(z_abs: float) -> tuple[float, float]:
    theta = 0.5 * math.asin(min(1.0, 2.0 * z_abs))
    return math.cos(theta), math.sin(theta)


def determinant_identity_check(z_abs: float, lam: float, n: int) -> float:
    """Residual ``|det(M - lam) + lam |z|^{n-1} U_{n-1}((1 - lam) / 2|z|)|``."""
    if z_abs < 1e-8:
        raise DegenerateZ(f"|z| = {z_abs} too small for the Chebyshev form")
    if z_abs > 0.5 + 1e-12:
        raise BadRange(f"|z| = {z_abs} exceeds 1/2")
    z0, z1 = _real_zetas(z_abs)
    M = model_matrix_r1(ModelMatrixR1(n, z0, z1))
    lhs = np.linalg.det(M - lam * np.eye(n)).real
    rhs = -lam * z_abs ** (n - 1) * chebyshev_u(n - 1, (1.0 - lam) / (2.0 * z_abs))
    return abs(lhs - rhs)


# -- Ky Fan bound over unit zeta -------------------------------------------

def _zeta_from_params(x: np.ndarray) -> np.ndarray:
    # x = (re z0, re z1, im z1, re z2, im z2, ...); z0 real fixes the global phase
    x = np.atleast_2d(x)
    z = np.empty((x.shape[0], (x.shape[1] + 1) // 2), dtype=complex)
    z[:, 0] = x[:, 0]
    z[:, 1:] = x[:, 1::2] + 1j * x[:, 2::2]
    return z / np.linalg.norm(x, axis=1, keepdims=True)


def _kyfan_values(x: np.ndarray, stack: np.ndarray, k: int) -> np.ndarray:
    zeta = _zeta_from_params(x)
    W = np.einsum("ba,ans->bns", zeta, stack)
    M = W @ np.conj(np.swapaxes(W, 1, 2))
    lam = np.linalg.eigvalsh(M)
    return lam[:, ::-1][:, :k].sum(axis=1)


def _ascend(x, objective, fd_step=1e-7, max_iter=5000):
    """Projected finite-difference gradient ascent on the unit sphere with step halving."""
    x = x / np.linalg.norm(x)
    f = objective(x[None])[0]
    dim = x.size
    if dim == 1:
        return f, x
    eye = np.eye(dim)
    step = 0.1
    for _ in range(max_iter):
        probes = np.concatenate([x + fd_step * eye, x - fd_step * eye])
        vals = objective(probes)
        g = (vals[:dim] - vals[dim:]) / (2 * fd_step)
        g -= g.dot(x) * x
        gnorm = np.linalg.norm(g)
        if gnorm < 1e-13:
            break
        d = g / gnorm
        improved = False
        while step > 1e-13:
            y = x + step * d
            y /= np.linalg.norm(y)
            fy = objective(y[None])[0]
            if fy > f:
                x, f = y, fy
                improved = True
                step = min(2.0 * step, 0.5)
                break
            step *= 0.5
        if not improved:
            break
    return f, x


def kyfan_threshold_bound(m: int, n: int, k: int, restarts: int = 32, seed: int = 42) -> float:
    """Best value of ``sup_zeta ||W W^dagger||_(k)`` found by seeded restarts.

    Each restart draws a random unit ``zeta`` on the phase-reduced sphere
    ``R^{2r+1}`` and climbs by finite-difference gradient ascent.
    """
    if not 1 <= k <= m:
        raise BadRank(f"k={k} outside [1, {m}]")
    stack = np.stack(make_isometries(m, n))
    dim = 2 * (n - m) + 1

    def objective(x):
        return _kyfan_values(x, stack, k)

    def task(idx):
        rng = task_rng(seed, idx)
        x0 = rng.standard_normal(dim)
        x0[0] = abs(x0[0])
        return _ascend(x0, objective)[0]

    return float(max(run_tasks(task, max(1, restarts))))


# -- the rank-k projection problem ----------------------------------------

def mu_k_oracle(m: int, n: int, k: int, restarts: int = 32, seed: int = 42,
                max_iter: int = 1000) -> float:
    """Estimate ``sup_p ||(1 (x) p) p_0 (1 (x) p)||`` over rank-k projections ``p``.

    Alternates two exact steps: the top eigenvector ``xi`` of the compressed
    operator for the current ``p``, then ``p`` onto the ``k`` leading
    eigenvectors of the B-marginal of ``p_0 xi``.
    """
    if not 1 <= k <= n:
        raise BadRank(f"k={k} outside [1, {n}]")
    if m * n > DESK_LIMIT:
        raise TooLarge(f"m*n = {m * n} exceeds {DESK_LIMIT}")
    shape = BipartiteShape(m, n)
    p0 = projection_p0(m, n)
    eye_m = np.eye(m)

    def task(idx):
        rng = task_rng(seed, idx)
        Q = random_isometries(rng, 1, n, k)[0]
        best = -np.inf
        for _ in range(max_iter):
            Pbig = kron(eye_m, Q @ Q.conj().T)
            lam, vec = np.linalg.eigh(Pbig @ p0 @ Pbig)
            value, xi = lam[-1], vec[:, -1]
            if value <= best + 1e-12:
                best = max(best, value)
                break
            best = value
            psi = p0 @ xi
            norm = np.linalg.norm(psi)
            if norm < 1e-14:
                break
            psi /= norm
            rho_b = partial_trace(np.outer(psi, psi.conj()), shape, keep="B")
            _, u = np.linalg.eigh(rho_b)
            Q = u[:, ::-1][:, :k]
        return float(best)

    return float(max(run_tasks(task, max(1, restarts))))


@dataclass
class SamplingVerdict:
    violated: bool
    min_value: float
    samples: int
    seed: int
    projection: Optional[np.ndarray] = field(default=None, repr=False)
    vector: Optional[np.ndarray] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        out = {"violated": self.violated, "min_value": self.min_value,
               "samples": self.samples, "seed": self.seed}
        if self.violated:
            out["vector"] = [[float(z.real), float(z.imag)] for z in self.vector]
        return out


def is_k_positive_sampled(spec: MapSpec, k: int, samples: int = 10_000, seed: int = 42,
                          tol: float = 1e-10) -> SamplingVerdict:
    """Look for a rank-k projection ``p`` with ``(1 (x) p) C (1 (x) p)`` not PSD.

    No violation is evidence of k-positivity, not a proof.
    """
    if not 1 <= k <= spec.m:
        raise BadRank(f"k={k} outside [1, {spec.m}]")
    m, n = spec.m, spec.n
    T = choi_matrix(spec).matrix.reshape(m, n, m, n)
    sizes = batch_sizes(samples)

    def task(idx):
        rng = task_rng(seed, idx)
        Q = random_isometries(rng, sizes[idx], n, k)
        H = np.einsum("bsa,isjt,btc->biajc", Q.conj(), T, Q).reshape(-1, m * k, m * k)
        lam, vec = np.linalg.eigh(H)
        best = int(np.argmin(lam[:, 0]))
        return float(lam[best, 0]), Q[best], vec[best, :, 0]

    val, Q, y = min(run_tasks(task, len(sizes)), key=lambda t: t[0])
    if val >= -tol:
        return SamplingVerdict(False, val, int(samples), int(seed))
    xi = np.einsum("sa,ia->is", Q, y.reshape(m, k)).ravel()
    return SamplingVerdict(True, val, int(samples), int(seed), Q @ Q.conj().T, xi)


# -- complete (co)positivity --------------------------------------------

def cp_threshold(m: int, n: int) -> float:
    """Smallest ``a`` with ``phi_a`` completely positive: min eig of ``C`` is ``a - m``."""
    return float(m)


def ccp_threshold(m: int, n: int) -> float:
    """Smallest ``a`` with ``phi_a`` completely copositive, ``m * lambda_max(p_0^Gamma)``."""
    if m * n > DESK_LIMIT:
        raise TooLarge(f"m*n = {m * n} exceeds {DESK_LIMIT}")
    return m * max_eigenvalue(partial_transpose(projection_p0(m, n), BipartiteShape(m, n)))


def bisect_root(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    flo = f(lo)
    if flo * f(hi) > 0:
        raise BadRange(f"no sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def gamma_cubic(x: float) -> float:
    return x ** 3 - x ** 2 - 2 * x + 1


def gamma_by_bisection(tol: float = 1e-12) -> float:
    """Largest root of ``x^3 - x^2 - 2x + 1`` (the only root in ``[1, 2]``)."""
    return bisect_root(gamma_cubic, 1.0, 2.0, tol)


def pt_projections() -> tuple[np.ndarray, np.ndarray]:
    """``P`` and ``Q`` with ``C = a 1 - 3(P + Q)`` for the M_3 -> M_4 map."""
    P = np.zeros((12, 12), dtype=complex)
    Q = np.zeros((12, 12), dtype=complex)
    for i in range(3):
        for j in range(3):
            E = np.zeros((3, 3)); E[i, j] = 1
            F = np.zeros((4, 4)); F[i, j] = 1
            G = np.zeros((4, 4)); G[i + 1, j + 1] = 1
            P += kron(E, F)
            Q += kron(E, G)
    return P / 3, Q / 3


def pt_block_indices(m: int, n: int) -> list[list[int]]:
    """Invariant coordinate blocks of ``C^Gamma``: basis vectors ``e_i (x) f_s`` grouped by ``i + s``."""
    groups: dict[int, list[int]] = {}
    for i in range(m):
        for s in range(n):
            groups.setdefault(i + s, []).append(i * n + s)
    return [groups[c] for c in sorted(groups)]


def pt_blocks(a: float) -> list[np.ndarray]:
    """The six mutually orthogonal pieces ``X_1..X_6`` of ``C^Gamma`` for (3, 4)."""
    spec = MapSpec(3, 4, a)
    CG = partial_transpose(choi_matrix(spec).matrix, spec.shape)
    blocks = []
    for idx in pt_block_indices(3, 4):
        X = np.zeros_like(CG)
        X[np.ix_(idx, idx)] = CG[np.ix_(idx, idx)]
        blocks.append(X)
    return blocks


def block_orthogonality_check(a: float, tol: float = 1e-12) -> bool:
    """Check ``sum X_i = C^Gamma``, ``X_i X_j = delta_ij X_i^2`` and ``C = a 1 - 3(P+Q)``."""
    spec = MapSpec(3, 4, a)
    C = choi_matrix(spec).matrix
    CG = partial_transpose(C, spec.shape)
    X = pt_blocks(a)
    ok = np.abs(sum(X) - CG).max() <= tol
    for i, Xi in enumerate(X):
        for j, Xj in enumerate(X):
            target = Xi @ Xi if i == j else 0.0
            ok &= np.abs(Xi @ Xj - target).max() <= tol
    P, Q = pt_projections()
    ok &= np.abs(C - (a * np.eye(12) - 3 * (P + Q))).max() <= tol
    return bool(ok)


# -- classification --------------------------------------------------------

@dataclass
class Classification:
    spec: MapSpec
    positive_at_k1: str
    cp: bool
    ccp: bool
    min_eig_choi: float
    min_eig_choi_pt: float
    witness_candidate: bool
    threshold_k1: float
    probe_min_found: float
    tolerance: float
    seed: int
    samples: int
    restarts: int
    violation: Optional[dict] = None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["spec"] = self.spec.to_dict()
        return out


def positivity_threshold_k1(m: int, n: int, restarts: int = 32, seed: int = 42) -> float:
    if n - m == 1:
        return threshold_analytic_r1(1, n)
    return kyfan_threshold_bound(m, n, 1, restarts, seed)


def classify(spec: MapSpec, tolerance: float = 1e-9, seed: int = 42,
             samples: int = 100_000, restarts: int = 32) -> Classification:
    """Positivity, complete positivity and complete copositivity of ``phi_a``.

    For ``k = 1`` the threshold comparison decides both directions: the
    minimum of the Choi form over product vectors is ``a`` minus the
    threshold. A violation found by the product-vector probe always wins.
    """
    C = choi_matrix(spec).matrix
    min_c = min_eigenvalue(C)
    min_pt = min_eigenvalue(partial_transpose(C, spec.shape))
    threshold = positivity_threshold_k1(spec.m, spec.n, restarts, seed)
    probe = block_positivity_probe(Witness(C, spec.shape, spec), samples, seed)

    violation = None
    if probe.min_found < -tolerance:
        positive = "no"
        violation = probe.to_dict()
    elif abs(spec.a - threshold) <= tolerance:
        positive = "boundary"
    elif spec.a > threshold:
        positive = "yes"
    else:
        positive = "no"
    cp = min_c >= -tolerance
    ccp = min_pt >= -tolerance
    return Classification(
        spec=spec, positive_at_k1=positive, cp=bool(cp), ccp=bool(ccp),
        min_eig_choi=min_c, min_eig_choi_pt=min_pt,
        witness_candidate=bool(positive == "yes" and not cp and not ccp),
        threshold_k1=threshold, probe_min_found=probe.min_found,
        tolerance=tolerance, seed=seed, samples=samples, restarts=restarts,
        violation=violation)


# -- threshold tables ------------------------------------------------------

@dataclass
class ThresholdRow:
    k: int
    analytic: Optional[float]
    kyfan_bound: float
    oracle_mu_k: Optional[float]
    oracle_samples: int


@dataclass
class ThresholdReport:
    m: int
    n: int
    seed: int
    restarts: int
    per_k: list[ThresholdRow]

    def to_dict(self) -> dict:
        return asdict(self)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "analytic", "kyfan_bound", "oracle_mu_k"])
        for row in self.per_k:
            writer.writerow([row.k, _fmt(row.analytic), _fmt(row.kyfan_bound), _fmt(row.oracle_mu_k)])
        return buf.getvalue()


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else f"{x:.12g}"


def threshold_report(m: int, n: int, ks=None, restarts: int = 32, seed: int = 42,
                     oracle: bool = False) -> ThresholdReport:
    MapSpec(m, n, 0.0)
    ks = list(range(1, m + 1)) if ks is None else sorted(ks)
    for k in ks:
        if not 1 <= k <= m:
            raise BadRank(f"k={k} outside [1, {m}]")
    rows = []
    for k in ks:
        analytic = threshold_analytic_r1(k, n) if n - m == 1 else None
        bound = kyfan_threshold_bound(m, n, k, restarts, seed)
        mu = mu_k_oracle(m, n, k, restarts, seed) if oracle else None
        rows.append(ThresholdRow(k, analytic, bound, mu, restarts if oracle else 0))
    return ThresholdReport(m, n, seed, restarts, rows)
