# %% [markdown]
# # The witness window for (m, n) = (3, 4)
#
# phi_a is positive above 1 + sqrt(2)/2, completely copositive above
# gamma = 2 cos(pi/7) and completely positive from 3 on. Between the first two
# its Choi matrix is an entanglement witness.

# %%
import math

from kwitness import MapSpec
from kwitness.positivity import ccp_threshold, classify, cp_threshold, gamma_by_bisection

print("positivity:", 1 + math.sqrt(2) / 2)
print("co-CP (eigen):", ccp_threshold(3, 4), "co-CP (cubic):", gamma_by_bisection())
print("CP:", cp_threshold(3, 4))

# %%
for a in (1.65, 1.72, 1.75, 1.80, 1.85, 3.2):
    c = classify(MapSpec(3, 4, a), samples=20_000)
    print(f"a={a:<5} positive={c.positive_at_k1:<8} cp={c.cp!s:<5} ccp={c.ccp!s:<5} "
          f"witness={c.witness_candidate}  probe min={c.probe_min_found:+.4f}")
