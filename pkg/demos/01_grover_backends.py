# coding: utf-8
# # Grover search, two ways
#
# The success probability after j iterations has a closed form. For small
# spaces we can also push an explicit amplitude vector through the
# oracle and diffusion steps and read off the marked mass.

# %%
import numpy as np

from qmclaw import SearchSpace, grover_success_prob, statevector_grover

space = SearchSpace(size=64, marked_count=3)
marked = [5, 17, 40]

# %% [markdown]
# Sweep j and compare. The two columns agree to rounding error.

# %%
for j in range(8):
    a = grover_success_prob(space, j)
    b = statevector_grover(space, marked, j)
    print(f"j={j}  closed form {a:.6f}  state vector {b:.6f}")

# %% [markdown]
# Probability peaks near j = pi/(4 theta) and then falls again, which is
# why a fixed iteration count is a bad idea when t is unknown.

# %%
theta = np.arcsin(np.sqrt(space.fraction))
print("best j ~", np.pi / (4 * theta) - 0.5)
