# coding: utf-8
# # Searching with an unknown number of marked items
#
# `bbht_search` grows its iteration window by 6/5 after each miss. Every
# round charges j + 1 queries to a shared ledger.

# %%
import numpy as np

from qmclaw import QueryLedger, SearchSpace
from qmclaw.grover import bbht_expected_bound, bbht_search_indices

rng = np.random.default_rng(1)
n, t = 4096, 16
marked = rng.choice(n, size=t, replace=False)

# %%
costs = [bbht_search_indices(n, marked, QueryLedger(10**9), rng).queries_charged for _ in range(2000)]
print("mean queries:", np.mean(costs))
print("bound       :", bbht_expected_bound(SearchSpace(n, t)))

# %% [markdown]
# A ledger with a small limit aborts the search. `found` is then None.

# %%
ledger = QueryLedger(5)
out = bbht_search_indices(n, marked, ledger, rng)
print(out, ledger)
