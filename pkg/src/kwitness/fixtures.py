"""Golden 12x12 fixtures for the M_3 -> M_4 map and the self-check suite run by
``kwitness verify-fixtures``."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Optional

import numpy as np

from .linalg import eigvalsh_desc, min_eigenvalue, partial_transpose
from .maps import MapSpec, choi_from_map, choi_matrix, projection_p_alpha, projection_p0
from . import positivity as pos


def load_fixture(path: Optional[str] = None) -> dict:
    if path is None:
        text = resources.files("kwitness").joinpath("data/fixture_3x4.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text)


def evaluate_pattern(pattern: dict, a: float) -> np.ndarray:
    coef = np.asarray(pattern["a_coefficient"], dtype=float)
    const = np.asarray(pattern["constant"], dtype=float)
    return coef * a + const


def first_mismatch(expected: np.ndarray, actual: np.ndarray, tol: float = 1e-12):
    """``(row, col, expected, actual)`` of the first differing entry, or ``None``."""
    if expected.shape != actual.shape:
        return (-1, -1, expected.shape, actual.shape)
    bad = np.argwhere(np.abs(expected - actual) > tol)
    if bad.size == 0:
        return None
    r, c = map(int, bad[0])
    return (r, c, complex(expected[r, c]), complex(actual[r, c]))


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        return f"{tag}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


def _fixture_checks(fixture: dict, gamma: float) -> list[CheckResult]:
    out = []
    for a in (1.75, 2.0, 3.0, gamma):
        spec = MapSpec(3, 4, a)
        C = choi_matrix(spec).matrix
        for key, actual in (("choi", C), ("choi_partial_transpose", partial_transpose(C, spec.shape))):
            miss = first_mismatch(evaluate_pattern(fixture[key], a), actual)
            detail = "" if miss is None else (
                f"first differing entry ({miss[0]}, {miss[1]}): fixture {miss[2]}, computed {miss[3]}")
            out.append(CheckResult(f"fixture {key} a={a:.10g}", miss is None, detail))
        out.append(CheckResult(f"X_i block decomposition a={a:.10g}", pos.block_orthogonality_check(a)))
    return out


def _invariant_checks(gamma: float, seed: int) -> list[tuple[str, Callable[[], tuple[bool, str]]]]:
    def cp_threshold():
        errs = [abs(min_eigenvalue(choi_matrix(MapSpec(3, 4, a)).matrix) - (a - 3)) for a in (2.9, 3.0, 3.1)]
        return max(errs) <= 1e-10, f"max error {max(errs):.2e}"

    def ccp_routes():
        diff = abs(pos.ccp_threshold(3, 4) - gamma)
        return diff <= 1e-9, f"|m lambda_max(p0^G) - gamma| = {diff:.2e}"

    def ccp_crossing():
        spec = MapSpec(3, 4, gamma)
        v = min_eigenvalue(partial_transpose(choi_matrix(spec).matrix, spec.shape))
        return abs(v) <= 1e-9, f"min eig at gamma {v:.2e}"

    def positivity_threshold():
        t = pos.threshold_analytic_r1(1, 4)
        kb = pos.kyfan_threshold_bound(3, 4, 1, seed=seed)
        ok = abs(t - (1 + math.sqrt(2) / 2)) <= 1e-12 and abs(kb - t) <= 1e-6
        return ok, f"analytic {t:.12f}, kyfan {kb:.12f}"

    def projection_algebra():
        worst = 0.0
        for alpha in range(2):
            for beta in range(2):
                pa, pb = projection_p_alpha(3, 4, alpha), projection_p_alpha(3, 4, beta)
                worst = max(worst, np.abs(pa @ pb - (pa if alpha == beta else 0)).max())
        p0 = projection_p0(3, 4)
        worst = max(worst, np.abs(p0 @ p0 - p0).max(), abs(np.trace(p0) - 2))
        return worst <= 1e-12, f"max deviation {worst:.2e}"

    def dual_construction():
        worst = max(np.abs(choi_from_map(MapSpec(3, 4, a)) - choi_matrix(MapSpec(3, 4, a)).matrix).max()
                    for a in (0.0, 1.75, 2.0, 3.0))
        return worst <= 1e-12, f"max deviation {worst:.2e}"

    def chebyshev_spectrum():
        worst = 0.0
        for n in (4, 5, 6, 8):
            for z0 in (0.3, 0.6, math.sqrt(0.5)):
                z1 = math.sqrt(1 - z0 ** 2)
                M = pos.model_matrix_r1(pos.ModelMatrixR1(n, z0, z1))
                worst = max(worst, np.abs(eigvalsh_desc(M) - pos.eigenvalues_r1(z0 * z1, n)).max())
        return worst <= 1e-10, f"max deviation {worst:.2e}"

    return [
        ("CP threshold a - 3 at a in {2.9, 3.0, 3.1}", cp_threshold),
        ("co-CP threshold: eigen route vs cubic bisection", ccp_routes),
        ("co-CP crossing: min eig of C^Gamma at gamma", ccp_crossing),
        ("positivity threshold 1 + sqrt(2)/2, analytic vs Ky Fan", positivity_threshold),
        ("projection algebra (3, 4)", projection_algebra),
        ("Choi dual construction", dual_construction),
        ("r=1 Chebyshev spectrum", chebyshev_spectrum),
    ]


def run_checks(fixture_path: Optional[str] = None, seed: int = 42) -> list[CheckResult]:
    gamma = pos.gamma_by_bisection()
    try:
        fixture = load_fixture(fixture_path)
        results = _fixture_checks(fixture, gamma)
    except (OSError, KeyError, ValueError) as exc:
        results = [CheckResult("load fixture", False, str(exc))]
    for name, check in _invariant_checks(gamma, seed):
        ok, detail = check()
        results.append(CheckResult(name, bool(ok), detail))
    return results
