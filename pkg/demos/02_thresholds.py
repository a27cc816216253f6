# %% [markdown]
# # Per-k positivity thresholds
#
# For r = 1 there is a cosine sum in closed form. The general bound is a
# supremum of Ky Fan norms over unit vectors, found by multi-start ascent.
# An independent alternating oracle gives m * mu_k, which should never exceed it.

# %%
from kwitness.positivity import (kyfan_threshold_bound, mu_k_oracle,
                                 threshold_analytic_r1, threshold_report)

for k in (1, 2, 3):
    print(k, threshold_analytic_r1(k, 4), kyfan_threshold_bound(3, 4, k))

# %% [markdown]
# Square case: every shift collapses to the identity and the threshold is k.

# %%
print([round(kyfan_threshold_bound(3, 3, k), 12) for k in (1, 2, 3)])

# %% [markdown]
# The oracle route lands on the same numbers at these sizes.

# %%
for m, n in [(2, 4), (2, 5), (3, 5)]:
    print((m, n), [round(m * mu_k_oracle(m, n, k), 10) for k in range(1, m + 1)],
          [round(kyfan_threshold_bound(m, n, k), 10) for k in range(1, m + 1)])

# %%
print(threshold_report(2, 6, oracle=True).to_csv())
