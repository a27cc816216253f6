# %% [markdown]
# # Probing a witness with states
#
# A Bell-like state gives a negative pairing with the Choi operator inside
# the window, and that sign certifies entanglement. A PPT search tries to
# do the same with PPT states. At this size it comes back empty, and that
# only means the search was inconclusive.

# %%
import numpy as np

from kwitness import MapSpec, choi_matrix, entangled_vector
from kwitness.witness import (BipartiteState, Witness, block_positivity_probe,
                              evaluate, is_ppt, ppt_violation_search)

spec = MapSpec(3, 4, 1.75)
W = Witness(choi_matrix(spec).matrix, spec.shape, spec)
rho = BipartiteState.from_vector(entangled_vector(3, 4, 0), spec.shape)
print("Tr(W rho) =", evaluate(W, rho), " PPT:", is_ppt(rho))

# %% [markdown]
# Over product vectors the minimum is a minus the threshold, so it is positive here.

# %%
probe = block_positivity_probe(W, samples=20_000)
print("min over product vectors:", probe.min_found, "expected", 1.75 - (1 + np.sqrt(2) / 2))

# %%
print("PPT search at a=1.75:", ppt_violation_search(W, samples=20_000))
low = MapSpec(3, 4, 0.2)
cert = ppt_violation_search(Witness(choi_matrix(low).matrix, low.shape, low), samples=4096)
print("PPT search at a=0.2: pairing", cert.value, "min eig of rho^Gamma", cert.min_eig_pt)
