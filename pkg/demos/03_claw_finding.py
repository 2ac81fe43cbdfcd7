# coding: utf-8
# # Finding an l-claw
#
# Draw l random functions over the same range, build the parameters, and
# let `mclaw` chain its image lists level by level.

# %%
from qmclaw import build_params, make_rng, mclaw, sample_random_function, verify_claw

l, N = 3, 2**14
params = build_params(l, N, c_N=1.0, k=4)
print("capacities:", params.capacities)
print("query limit:", round(params.qlimit))

fs = [sample_random_function(N, N, seed=100 + i) for i in range(l)]

# %% [markdown]
# `on_step` lets us watch the lists grow.

# %%
sizes = []
res = mclaw(fs, params, params.ledger(), make_rng(7), on_step=lambda i, prev, cur: sizes.append((i, len(cur))))
print("last list sizes:", sizes[-3:])
print("claw:", res.solution)
print("queries:", res.total_queries, "per level:", res.per_level_queries)
print("verified:", verify_claw(res.solution, fs))

# %% [markdown]
# A collision of multiplicity l is a claw between l cells of one domain.

# %%
from qmclaw import collision_from_claw, hsx_collision, sample_values, verify_collision

values = sample_values(l * N, N, seed=5)
a = collision_from_claw(values, l, params, params.ledger(), make_rng(1), N)
b = hsx_collision(values, l, params.ledger(), make_rng(1), N)
print("chained lists:", a.solution, a.total_queries)
print("recursive    :", b.solution, b.total_queries)
print(verify_collision(a.solution, values), verify_collision(b.solution, values))
