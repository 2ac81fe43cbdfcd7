# coding: utf-8
# # Checking the probabilistic ingredients
#
# Image size of a random function, hypergeometric tails and the level
# condition that keeps list searches cheap.

# %%
import numpy as np

from qmclaw.stats import HypergeomParams, good_event_rate, hypergeom_tail_check, image_size_check

rep = image_size_check(4096, 4096, seeds=1000, base_seed=1)
print(rep.name, "violation rate", rep.empirical_rate, "bound", rep.theoretical_bound)

# %%
p = HypergeomParams(n1=3333, n=10_000, m=400, lam=4.0)
print("alpha", p.alpha, "tail bound", p.tail_bound, "exact", p.exact_tail())
print(hypergeom_tail_check(p, 10_000, np.random.default_rng(0)))

# %%
g = good_event_rate(2, 2**14, 1.0, 4, 2, trials=200, seed=3)
print(g.name, g.violations, "/", g.trials, "passed:", g.passed)
