"""Positive maps ``phi_a(X) = a Tr(X) 1 - sum V_alpha X V_alpha^dagger`` between
matrix algebras: Choi matrices, k-positivity thresholds, CP / co-CP
classification and entanglement-witness tools."""

from .errors import (BadAlpha, BadDimensions, BadRange, BadRank, DegenerateZ,
                     KWitnessError, NotHermitian, NotNormalized, ShapeMismatch, TooLarge)
from .linalg import (BipartiteShape, EigenResult, hermitian_eig, kron, ky_fan_norm,
                     partial_trace, partial_transpose, schmidt_coefficients, singular_values)
from .maps import (ChoiConvention, ChoiMatrix, MapSpec, choi_from_map, choi_matrix,
                   entangled_vector, make_isometries, phi_apply, projection_p0,
                   projection_p_alpha)
from .positivity import (Classification, ModelMatrixR1, ThresholdReport, block_orthogonality_check,
                         ccp_threshold, chebyshev_u, classify, cp_threshold,
                         determinant_identity_check, eigenvalues_r1, gamma_by_bisection,
                         is_k_positive_sampled, kyfan_threshold_bound, model_matrix_r1,
                         mu_k_oracle, threshold_analytic_r1, threshold_report)
from .witness import (BipartiteState, Witness, block_positivity_probe, evaluate, is_ppt,
                      ppt_violation_search, schmidt_rank)

__version__ = "0.1.0"
