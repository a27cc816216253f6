# %% [markdown]
# # Building phi_a and its Choi matrix
#
# The map sends an m x m matrix to an n x n one:
# phi_a(X) = a Tr(X) I_n - sum_alpha V_alpha X V_alpha^dagger, where the
# V_alpha are the n - m + 1 shift isometries. We build it two ways and compare.

# %%
import numpy as np

from kwitness import MapSpec, choi_from_map, choi_matrix, phi_apply, projection_p0
from kwitness.linalg import eigvalsh_desc, partial_transpose

spec = MapSpec(3, 4, 2.0)
print(spec, "r =", spec.r)

# %% [markdown]
# Applying the map to a matrix unit shows the shape of the output.

# %%
E00 = np.zeros((3, 3)); E00[0, 0] = 1
print(phi_apply(spec, E00).real)

# %% [markdown]
# The block-wise Choi construction and the closed form a I - m p0 agree exactly.

# %%
C_blocks = choi_from_map(spec)
C = choi_matrix(spec).matrix
print("max deviation:", np.abs(C_blocks - C).max())
print("closed form check:", np.abs(C - (spec.a * np.eye(12) - 3 * projection_p0(3, 4))).max())

# %% [markdown]
# The spectrum of C is {a - m, a}: complete positivity needs a >= m.

# %%
print(np.round(eigvalsh_desc(C), 12))
print("partial transpose, smallest eigenvalue:",
      eigvalsh_desc(partial_transpose(C, spec.shape))[-1])
